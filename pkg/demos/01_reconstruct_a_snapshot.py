"""Reconstructing the layout tree of a single snapshot.

A snapshot is just the window size plus widget rectangles.  Tabstops cluster
the boundary coordinates per axis; a divider is an interior tabstop that cuts
the layout into two widget-disjoint parts; the tree falls out of recursively
splitting on dividers (vertical cuts make a Row, horizontal cuts a Column).
"""

from resizelens import Widget, WidgetSnapshot, create_tabstops, layout_dividers
from resizelens.reconstruct import reconstruct_simplified
from resizelens.tree import format_tree

snapshot = WidgetSnapshot(
    window_width=300, window_height=140,
    widgets=(
        Widget("open", 0, 0, 60, 40),
        Widget("save", 60, 0, 60, 40),
        Widget("find", 120, 0, 60, 40),
        Widget("canvas", 0, 40, 240, 100),
        Widget("panel", 240, 0, 60, 140),
    ),
)

tabs = create_tabstops(snapshot)
print("x tabstops:", sorted(tabs.xtabs))
print("y tabstops:", sorted(tabs.ytabs))
print("x dividers:", layout_dividers(tabs, list(snapshot.widgets), "x"))
print("y dividers:", layout_dividers(tabs, list(snapshot.widgets), "y"))

print("\nreconstructed tree:")
print(format_tree(reconstruct_simplified(snapshot)))

# The only full-height cut is at x=240 (the side panel); inside the left
# region the y=40 cut separates the toolbar from the canvas, and the toolbar
# splits again into its three buttons.
