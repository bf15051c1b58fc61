import pytest

from helpers import scan_thresholds
from resizelens.geometry import SampleSet, Widget, WidgetSnapshot
from resizelens.oracles import Oracle, OracleConfig, builtin_oracle, recorded_oracle
from resizelens.patterns import infer
from resizelens.sampler import (EQUIVALENT, TRANSITION, BudgetExceeded,
                                DegeneratePair, grid_from_files,
                                grid_from_sample_set, needs_subdivision,
                                sample_grid, subdivide)
from resizelens.tree import isomorphic


def constant_oracle():
    def fn(w, h):
        return WidgetSnapshot(window_width=w, window_height=h,
                              widgets=(Widget("A", 0, 0, 50, 30),))
    return Oracle(OracleConfig("constant"), (100, 80), (400, 300), fn)


def test_subdivide_same_width():
    assert subdivide((300, 100), (300, 50)) == [(300, 75)]


def test_subdivide_same_height():
    assert subdivide((100, 100), (300, 100)) == [(200, 100)]


def test_subdivide_diagonal_gives_midpoint_and_corners():
    assert subdivide((100, 50), (300, 100)) == [(200, 75), (100, 100), (300, 50)]


def test_subdivide_degenerate_pair():
    with pytest.raises(DegeneratePair):
        subdivide((100, 100), (100, 100))


def test_constant_oracle_yields_only_initial_samples():
    grid = sample_grid(constant_oracle(), (100, 80), (400, 300), delta=4)
    assert sorted(grid.samples) == sorted([(100, 80), (400, 300), (100, 300),
                                           (400, 80), (250, 190)])
    assert all(e.status == EQUIVALENT for e in grid.edges)
    assert len(grid.edges) == 6


def test_hflow_transition_localized_and_refined():
    o = builtin_oracle("hflow")
    grid = sample_grid(o, (200, 140), (400, 140), delta=4)
    transitions = grid.transition_edges()
    assert len(transitions) == 1
    edge = transitions[0]
    # ground truth: single row at w >= 300
    truth = scan_thresholds(o, "w", 140, 200, 400)
    assert truth == [300]
    assert edge.from_size[0] == 300 and edge.to_size[0] == 299
    assert edge.change_set is not None and len(edge.change_set) > 0


def test_localization_without_refinement_is_within_delta():
    o = builtin_oracle("hflow")
    grid = sample_grid(o, (200, 140), (400, 140), delta=4, refine_transitions=False)
    (edge,) = grid.transition_edges()
    assert edge.to_size[0] < 300 <= edge.from_size[0]
    assert edge.from_size[0] - edge.to_size[0] <= 4


def test_needs_subdivision_rules():
    o = builtin_oracle("hflow")
    grid = sample_grid(o, (200, 140), (400, 140), delta=4)
    t300 = grid.tree((300, 140))
    t400 = grid.tree((400, 140))
    t200 = grid.tree((200, 140))
    assert not needs_subdivision((300, 140), t300, (400, 140), t400, delta=4)
    assert needs_subdivision((200, 140), t200, (400, 140), t400, delta=4)
    assert not needs_subdivision((296, 140), t200, (300, 140), t300, delta=4)
    # a predictor that explains both endpoints stops the subdivision
    spec = infer(grid)
    assert not needs_subdivision((200, 140), t200, (400, 140), t400,
                                 delta=4, predictor=spec)


def test_soundness_of_equivalent_edges():
    o = builtin_oracle("ribbon_composite")
    grid = sample_grid(o, (230, 140), (420, 170), delta=4)
    for e in grid.edges:
        if e.status == EQUIVALENT:
            assert isomorphic(grid.tree(e.from_size), grid.tree(e.to_size))


def test_every_transition_brackets_a_true_threshold():
    o = builtin_oracle("ribbon_composite")
    grid = sample_grid(o, (230, 140), (420, 170), delta=4)
    truth = set(scan_thresholds(o, "w", 150, 230, 420))
    assert truth == {260, 300, 380}
    for e in grid.transition_edges():
        assert e.axis == "w"
        assert any(e.to_size[0] < t <= e.from_size[0] for t in truth)
    # every true threshold is inside some transition edge interval
    for t in truth:
        assert any(e.to_size[0] < t <= e.from_size[0] for e in grid.transition_edges())


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        sample_grid(builtin_oracle("ribbon_composite"), (230, 140), (420, 170),
                    delta=4, max_samples=5)


def test_edge_invariants():
    grid = sample_grid(builtin_oracle("optional_set"), (120, 100), (360, 100), delta=4)
    for e in grid.edges:
        assert (e.status == TRANSITION) == (e.change_set is not None and len(e.change_set) > 0)
        assert e.from_size >= e.to_size


def test_grid_persistence_roundtrip(tmp_path):
    grid = sample_grid(builtin_oracle("pivot"), (120, 100), (360, 160), delta=4)
    from resizelens.sampler import grid_to_files
    grid_to_files(grid, tmp_path / "samples.json", tmp_path / "edges.json")
    again = grid_from_files(tmp_path / "samples.json", tmp_path / "edges.json")
    assert sorted(again.samples) == sorted(grid.samples)
    assert len(again.edges) == len(grid.edges)
    for a, b in zip(sorted(grid.edges, key=lambda e: (e.from_size, e.to_size)),
                    sorted(again.edges, key=lambda e: (e.from_size, e.to_size))):
        assert (a.from_size, a.to_size, a.status) == (b.from_size, b.to_size, b.status)


def test_grid_from_sample_set_wires_neighbors():
    o = builtin_oracle("hflow")
    samples = {}
    for w in (200, 250, 300, 350):
        snap = o.query(w, 140)
        samples[snap.size] = snap
    grid = grid_from_sample_set(SampleSet(samples=samples))
    assert len(grid.transition_edges()) == 1
    (edge,) = grid.transition_edges()
    assert (edge.from_size, edge.to_size) == ((300, 140), (250, 140))
