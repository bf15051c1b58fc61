import pytest

from helpers import col, leaf, row
from resizelens.geometry import Widget, WidgetSnapshot
from resizelens.oracles import builtin_oracle
from resizelens.orcspec import render
from resizelens.patterns import (ALTERNATIVE_NODE, ALTERNATIVE_ORDER,
                                 ALTERNATIVE_POSITION, HORIZONTAL_FLOW,
                                 OPTIONAL_WIDGET, OR_FALLBACK, PIVOT,
                                 VERTICAL_FLOW, ChangeContext, infer,
                                 iteration_order, match_change_set)
from resizelens.reconstruct import reconstruct_simplified
from resizelens.sampler import (EQUIVALENT, Edge, SampleGrid, sample_grid)
from resizelens.tree import isomorphic


def _dummy_grid(sizes, edges):
    snap = WidgetSnapshot(window_width=10, window_height=10,
                          widgets=(Widget("A", 0, 0, 5, 5),))
    tree = reconstruct_simplified(snap)
    grid = SampleGrid(min_size=min(sizes), max_size=max(sizes))
    for s in sizes:
        grid.samples[s] = (snap, tree)
    for frm, to in edges:
        grid.edges.append(Edge(frm, to, EQUIVALENT))
    return grid


def test_iteration_order_matches_the_inward_example_shape():
    # An adaptive grid shaped like the paper's example: width chains first,
    # then height chains from each visited sample.
    MAX, S4, S1 = (400, 160), (350, 160), (300, 160)
    S5, S3, S6 = (400, 130), (350, 130), (300, 130)
    S8 = (350, 115)
    S2, S7, MIN = (400, 100), (350, 100), (300, 100)
    edges = [(MAX, S4), (S4, S1), (MAX, S5), (S5, S3), (S3, S6), (S3, S8),
             (S5, S2), (S2, S7), (S7, MIN)]
    grid = _dummy_grid([MAX, S4, S1, S5, S3, S6, S8, S2, S7, MIN], edges)
    order = [(e.from_size, e.to_size) for e in iteration_order(grid)]
    assert order == edges


def test_iteration_order_is_deterministic_and_total():
    grid = sample_grid(builtin_oracle("ribbon_composite"), (230, 140), (420, 170))
    order1 = [(e.from_size, e.to_size) for e in iteration_order(grid)]
    order2 = [(e.from_size, e.to_size) for e in iteration_order(grid)]
    assert order1 == order2
    assert len(order1) == len(grid.edges)
    assert order1[0][0] == (420, 170)


def test_single_column_grid_is_one_decreasing_chain():
    grid = sample_grid(builtin_oracle("pivot"), (360, 100), (360, 160))
    order = iteration_order(grid)
    heights = [e.from_size[1] for e in order]
    assert heights == sorted(heights, reverse=True)


def _ctx(t1, t2, larger=(300, 100), smaller=(296, 100)):
    edge = Edge(larger, smaller, "transition")
    return ChangeContext(edge=edge, larger_tree=t1, smaller_tree=t2,
                         larger_size=larger, smaller_size=smaller,
                         transition_position={})


def test_empty_change_set_matches_nothing():
    t = row(leaf("A"), leaf("B"))
    assert match_change_set(_ctx(t, t)) == []


def test_leaf_removal_is_optional_widget_with_window_area_penalty():
    t1 = row(leaf("A"), leaf("B"), leaf("X"))
    t2 = row(leaf("A"), leaf("B"))
    (inst,) = match_change_set(_ctx(t1, t2, (200, 100), (180, 100)))
    assert inst.kind == OPTIONAL_WIDGET
    assert inst.anchor_leaves == ("X",)
    assert inst.penalty == 180 * 100


def test_wrap_move_is_a_flow():
    t1 = col(row(leaf("A"), leaf("B"), leaf("C")), leaf("D"))
    t2 = col(row(leaf("A"), leaf("B")), leaf("C"), leaf("D"))
    (inst,) = match_change_set(_ctx(t1, t2))
    assert inst.kind == HORIZONTAL_FLOW
    assert set(inst.anchor_leaves) == {"A", "B", "C"}


def test_root_wrap_bundle_is_a_flow_not_a_pivot():
    t1 = row(leaf("A"), leaf("B"), leaf("C"))
    t2 = col(row(leaf("A"), leaf("B")), leaf("C"))
    (inst,) = match_change_set(_ctx(t1, t2))
    assert inst.kind == HORIZONTAL_FLOW


def test_column_wrap_is_a_vertical_flow():
    t1 = col(leaf("A"), leaf("B"), leaf("C"))
    t2 = row(col(leaf("A"), leaf("B")), leaf("C"))
    (inst,) = match_change_set(_ctx(t1, t2))
    assert inst.kind == VERTICAL_FLOW


def test_replace_is_alternative_node():
    t1 = row(leaf("A"), leaf("B"), leaf("X"))
    t2 = row(leaf("A"), leaf("B"), leaf("Y"))
    (inst,) = match_change_set(_ctx(t1, t2))
    assert inst.kind == ALTERNATIVE_NODE


def test_retype_is_pivot():
    t1 = row(leaf("A"), leaf("B"))
    t2 = col(leaf("A"), leaf("B"))
    (inst,) = match_change_set(_ctx(t1, t2))
    assert inst.kind == PIVOT


def test_pure_reorder_is_alternative_order():
    t1 = row(leaf("A"), leaf("B"), leaf("C"))
    t2 = row(leaf("C"), leaf("A"), leaf("B"))
    (inst,) = match_change_set(_ctx(t1, t2))
    assert inst.kind == ALTERNATIVE_ORDER


def test_single_stray_move_is_alternative_position():
    t1 = col(row(leaf("A"), leaf("B"), leaf("C")), row(leaf("D"), leaf("E")))
    t2 = col(row(leaf("A"), leaf("C")), row(leaf("D"), leaf("B"), leaf("E")))
    instances = match_change_set(_ctx(t1, t2))
    assert [i.kind for i in instances] == [ALTERNATIVE_POSITION]


def test_reorder_plus_restructure_escalates_to_or_fallback():
    t1 = row(leaf("C"), leaf("A"), leaf("B"))
    t2 = col(row(leaf("B"), leaf("C")), leaf("A"))
    instances = match_change_set(_ctx(t1, t2))
    assert [i.kind for i in instances] == [OR_FALLBACK]


def test_rule_totality_on_oracle_transitions():
    for name, window in (("hflow", ((200, 140), (400, 140))),
                         ("ribbon_composite", ((230, 140), (420, 170))),
                         ("reorder_pathological", ((140, 100), (340, 100)))):
        grid = sample_grid(builtin_oracle(name), *window)
        for edge in grid.transition_edges():
            ctx = ChangeContext(edge=edge, larger_tree=grid.tree(edge.from_size),
                                smaller_tree=grid.tree(edge.to_size),
                                larger_size=edge.from_size, smaller_size=edge.to_size,
                                transition_position={})
            assert match_change_set(ctx), f"{name}: unmatched change set on {edge}"


def test_infer_constant_oracle_is_plain_tree():
    from test_sampler import constant_oracle
    grid = sample_grid(constant_oracle(), (100, 80), (400, 300))
    spec = infer(grid)
    assert spec.patterns == []
    assert len(spec.variants) == 1


def test_infer_hflow_guard_thresholds_are_exact():
    grid = sample_grid(builtin_oracle("hflow"), (200, 140), (400, 140))
    spec = infer(grid)
    assert [p["kind"] for p in spec.patterns] == [HORIZONTAL_FLOW]
    guards = spec.guards
    single_row = spec.variant_at(300, 140)
    wrapped = spec.variant_at(299, 140)
    assert single_row.vid != wrapped.vid
    assert all(r[0] >= 300 for r in guards[single_row.vid])
    assert all(r[2] <= 299 for r in guards[wrapped.vid])


def test_infer_optional_penalty_is_the_absence_sample_area():
    grid = sample_grid(builtin_oracle("optional_set"), (120, 100), (360, 100))
    spec = infer(grid)
    optionals = [p for p in spec.patterns if p["kind"] == OPTIONAL_WIDGET]
    assert len(optionals) == 1
    assert optionals[0]["penalty"] == 180 * 100
    assert optionals[0]["anchor"] == ["X"]


def test_infer_idempotence_on_rendered_samples():
    from resizelens.geometry import SampleSet
    from resizelens.sampler import grid_from_sample_set
    grid = sample_grid(builtin_oracle("hflow"), (200, 140), (400, 140))
    spec = infer(grid)
    rendered = {s: render(spec, *s) for s in grid.sorted_sizes()}
    regrid = grid_from_sample_set(SampleSet(samples=rendered))
    respec = infer(regrid)
    assert [(p["kind"], sorted(p["anchor"])) for p in respec.patterns] == \
        [(p["kind"], sorted(p["anchor"])) for p in spec.patterns]


def test_penalty_monotonicity_across_one_axis():
    # Two widgets vanish at different widths: smaller threshold, smaller penalty.
    def fn(w, h):
        widgets = [Widget("A", 0, 0, 60, 40), Widget("B", 60, 0, 50, 40)]
        if w >= 200:
            widgets.append(Widget("X", w - 50, 0, 50, 40))
        if w >= 300:
            widgets.append(Widget("Y", w - 120, 0, 50, 40))
        return WidgetSnapshot(window_width=w, window_height=h, widgets=tuple(widgets))

    from resizelens.oracles import Oracle, OracleConfig
    oracle = Oracle(OracleConfig("two_optionals"), (120, 100), (400, 100), fn)
    grid = sample_grid(oracle, (120, 100), (400, 100))
    spec = infer(grid)
    penalties = {p["anchor"][0]: p["penalty"] for p in spec.patterns
                 if p["kind"] == OPTIONAL_WIDGET}
    assert set(penalties) == {"X", "Y"}
    assert penalties["X"] < penalties["Y"]
