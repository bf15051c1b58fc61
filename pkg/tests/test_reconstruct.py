import random

from helpers import random_snapshot
from resizelens.geometry import Widget, WidgetSnapshot
from resizelens.reconstruct import reconstruct, reconstruct_simplified, simplify
from resizelens.tree import COLUMN, ROW, isomorphic, iter_nodes, node_count


def snap(widgets, w=300, h=100):
    return WidgetSnapshot(window_width=w, window_height=h, widgets=tuple(widgets))


def shape(node):
    if node.kind == "widget":
        return node.widget_id
    if node.kind == "region":
        return ("region", tuple(sorted(node.region_ids)))
    return (node.kind, tuple(shape(c) for c in node.children))


def test_single_widget_is_leaf():
    t = reconstruct(snap([Widget("A", 10, 10, 50, 30)]))
    assert shape(t) == "A"
    assert t.geometry == (10, 10, 60, 40)


def test_three_widget_row():
    widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 100, 0, 100, 40),
               Widget("C", 200, 0, 100, 40)]
    t = reconstruct(snap(widgets))
    assert shape(t) == ("row", ("A", "B", "C"))


def test_wrapped_flow_is_column_of_row():
    # Unequal widths keep the wrap from accidentally aligning full-height.
    widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 100, 0, 80, 40),
               Widget("C", 0, 40, 120, 40)]
    t = reconstruct(snap(widgets, w=200))
    assert shape(t) == ("column", (("row", ("A", "B")), "C"))


def test_accidental_full_height_alignment_splits_vertically_first():
    # With equal widths, the wrap leaves a clean full-height cut at x=100,
    # so the divider-faithful reconstruction splits into a Row first.
    widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 100, 0, 100, 40),
               Widget("C", 0, 40, 100, 40)]
    t = reconstruct(snap(widgets, w=200))
    assert shape(t) == ("row", (("column", ("A", "C")), "B"))


def test_pinwheel_falls_back_to_tabstop_region():
    widgets = [Widget("A", 0, 0, 60, 40), Widget("B", 60, 0, 40, 60),
               Widget("C", 40, 60, 60, 40), Widget("D", 0, 40, 40, 60)]
    t = reconstruct(snap(widgets, w=100, h=100))
    assert t.kind == "region"
    assert sorted(t.region_ids) == ["A", "B", "C", "D"]


def test_empty_dividers_merge_across_gaps():
    widgets = [Widget("A", 0, 0, 50, 40), Widget("B", 150, 0, 50, 40)]
    t = reconstruct(snap(widgets, w=300))
    assert shape(t) == ("row", ("A", "B"))


def test_partition_and_reading_order_properties():
    rng = random.Random(21)
    for _ in range(60):
        s = random_snapshot(rng)
        t = reconstruct_simplified(s)
        assert sorted(t.leaves) == sorted(w.id for w in s.widgets)
        by_id = {w.id: w for w in s.widgets}
        for _, node in iter_nodes(t):
            if node.kind == ROW:
                lefts = [min(by_id[l].left for l in c.leaves) for c in node.children]
                assert lefts == sorted(lefts)
            if node.kind == COLUMN:
                tops = [min(by_id[l].top for l in c.leaves) for c in node.children]
                assert tops == sorted(tops)


def test_alternation_property():
    rng = random.Random(22)
    for _ in range(60):
        t = reconstruct_simplified(random_snapshot(rng))
        for _, node in iter_nodes(t):
            for child in node.children:
                assert not (node.kind == child.kind and node.kind in (ROW, COLUMN))


def test_re_reconstruction_stability():
    rng = random.Random(23)
    for _ in range(30):
        s = random_snapshot(rng)
        t = reconstruct_simplified(s)
        leaves = {}
        for _, node in iter_nodes(t):
            if node.kind == "widget":
                leaves[node.widget_id] = node.geometry
        widgets = tuple(Widget(wid, g[0], g[1], g[2] - g[0], g[3] - g[1])
                        for wid, g in sorted(leaves.items()))
        if len(widgets) != len(s.widgets):
            continue  # tabstop regions do not carry per-widget geometry
        s2 = WidgetSnapshot(window_width=s.window_width,
                            window_height=s.window_height, widgets=widgets)
        assert isomorphic(reconstruct_simplified(s2), t)


# --- regroup simplification ----------------------------------------------------

def _accidental_alignment_snapshot():
    # Two column pairs with staggered internal splits, accidentally aligned at
    # y=40 so the full-width cut chops them into two Rows; the wide widget
    # below blocks the global x cut.
    widgets = [
        Widget("A", 0, 0, 50, 24), Widget("B", 0, 24, 50, 16),
        Widget("C", 50, 0, 50, 16), Widget("D", 50, 16, 50, 24),
        Widget("E", 0, 40, 50, 24), Widget("F", 0, 64, 50, 16),
        Widget("G", 50, 40, 50, 16), Widget("H", 50, 56, 50, 24),
        Widget("W", 0, 80, 100, 20),
    ]
    return snap(widgets, w=100, h=100)


def test_simplify_merges_accidentally_split_columns():
    s = _accidental_alignment_snapshot()
    raw = reconstruct(s)
    assert shape(raw) == ("column", (("row", (("column", ("A", "B")), ("column", ("C", "D")))),
                                     ("row", (("column", ("E", "F")), ("column", ("G", "H")))),
                                     "W"))
    simplified = simplify(raw, s)
    assert shape(simplified) == ("column", (("row", (("column", ("A", "B", "E", "F")),
                                                     ("column", ("C", "D", "G", "H")))),
                                            "W"))
    assert node_count(simplified) < node_count(raw)


def test_simplify_keeps_trees_without_accidental_alignments():
    widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 100, 0, 80, 40),
               Widget("C", 0, 40, 120, 40)]
    s = snap(widgets, w=200)
    raw = reconstruct(s)
    assert isomorphic(simplify(raw, s), raw)


def test_simplify_is_idempotent():
    rng = random.Random(29)
    for _ in range(20):
        s = random_snapshot(rng)
        once = reconstruct_simplified(s)
        assert isomorphic(simplify(once, s), once)
    s = _accidental_alignment_snapshot()
    once = reconstruct_simplified(s)
    assert isomorphic(simplify(once, s), once)


def test_simplify_never_grows_the_tree():
    rng = random.Random(31)
    for _ in range(30):
        s = random_snapshot(rng)
        raw = reconstruct(s)
        assert node_count(simplify(raw, s)) <= node_count(raw)
