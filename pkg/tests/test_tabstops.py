import random

from resizelens.geometry import Widget, WidgetSnapshot
from resizelens.tabstops import create_tabstops, layout_dividers

ROW3 = [Widget("A", 0, 0, 100, 40), Widget("B", 100, 0, 100, 40),
        Widget("C", 200, 0, 100, 40)]


def snap(widgets, w=300, h=100):
    return WidgetSnapshot(window_width=w, window_height=h, widgets=tuple(widgets))


def test_empty_snapshot_has_boundary_tabstops_only():
    tabs = create_tabstops(snap([]))
    assert sorted(tabs.xtabs) == [0, 300]
    assert sorted(tabs.ytabs) == [0, 100]


def test_three_widget_row_tabstops():
    tabs = create_tabstops(snap(ROW3))
    assert sorted(tabs.xtabs) == [0, 100, 200, 300]
    assert sorted(tabs.ytabs) == [0, 40, 100]
    assert all((w.id, side) in tabs.boundary_refs
               for w in ROW3 for side in ("left", "right", "top", "bottom"))


def test_near_coordinates_merge_within_epsilon():
    widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 101, 0, 99, 40)]
    tabs = create_tabstops(snap(widgets), epsilon=2)
    # A.right at 100 and B.left at 101 share one tabstop at the cluster minimum
    assert 100 in tabs.xtabs and 101 not in tabs.xtabs
    assert tabs.boundary_refs[("A", "right")] is tabs.boundary_refs[("B", "left")]
    assert tabs.boundary_refs[("A", "right")].position == 100


def test_cluster_separation_property():
    rng = random.Random(7)
    for _ in range(50):
        widgets = []
        for i in range(rng.randint(1, 6)):
            left = rng.randint(0, 280)
            top = rng.randint(0, 80)
            widgets.append(Widget(f"w{i}", left, top, rng.randint(1, 300 - left),
                                  rng.randint(1, 100 - top)))
        eps = rng.randint(0, 3)
        tabs = create_tabstops(snap(widgets), epsilon=eps)
        for axis_map in (tabs.xtabs, tabs.ytabs):
            positions = sorted(axis_map)
            assert all(b - a > eps for a, b in zip(positions, positions[1:]))


def test_row_dividers():
    tabs = create_tabstops(snap(ROW3))
    assert layout_dividers(tabs, ROW3, "x") == [100, 200]
    assert layout_dividers(tabs, ROW3, "y") == [40]


def test_full_window_widget_has_no_dividers():
    widgets = [Widget("A", 0, 0, 300, 100)]
    tabs = create_tabstops(snap(widgets))
    assert layout_dividers(tabs, widgets, "x") == []
    assert layout_dividers(tabs, widgets, "y") == []


def test_crossing_widget_removes_divider():
    widgets = ROW3 + [Widget("D", 50, 50, 100, 30)]  # spans 50..150, crosses x=100
    tabs = create_tabstops(snap(widgets))
    assert 100 not in layout_dividers(tabs, widgets, "x")
    assert 200 in layout_dividers(tabs, widgets, "x")


def test_divider_soundness():
    rng = random.Random(11)
    for _ in range(50):
        widgets = []
        for i in range(rng.randint(1, 6)):
            left = rng.randint(0, 250)
            top = rng.randint(0, 60)
            widgets.append(Widget(f"w{i}", left, top, rng.randint(1, 300 - left),
                                  rng.randint(1, 100 - top)))
        tabs = create_tabstops(snap(widgets))
        for axis in ("x", "y"):
            for d in layout_dividers(tabs, widgets, axis):
                for w in widgets:
                    lo, hi = (w.left, w.right) if axis == "x" else (w.top, w.bottom)
                    assert not (lo < d - tabs.epsilon and hi > d + tabs.epsilon)


def test_permutation_determinism():
    rng = random.Random(3)
    widgets = ROW3 + [Widget("D", 0, 40, 300, 30)]
    base_tabs = create_tabstops(snap(widgets))
    base_x = layout_dividers(base_tabs, widgets, "x")
    base_y = layout_dividers(base_tabs, widgets, "y")
    for _ in range(10):
        shuffled = widgets[:]
        rng.shuffle(shuffled)
        tabs = create_tabstops(snap(shuffled))
        assert sorted(tabs.xtabs) == sorted(base_tabs.xtabs)
        assert sorted(tabs.ytabs) == sorted(base_tabs.ytabs)
        assert layout_dividers(tabs, shuffled, "x") == base_x
        assert layout_dividers(tabs, shuffled, "y") == base_y
