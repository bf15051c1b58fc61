"""Recursive Row/Column reconstruction of a snapshot (XY-cut over dividers).

A region is cut by its clean dividers, vertical dividers first (making a Row
of side-by-side parts, in reading order), then horizontal dividers (a Column
of stacked parts).  Adjacent dividers with nothing between them merge into
one cut.  A multi-widget region that neither axis can cut becomes an opaque
TabstopRegion leaf.

`simplify` removes structure caused by accidental alignments: every
contiguous run of siblings is tentatively merged and re-reconstructed, and
the merge is kept only when it strictly reduces the total node count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Widget, WidgetSnapshot
from .tabstops import DEFAULT_EPSILON, create_tabstops, layout_dividers
from .tree import (COLUMN, ROW, LayoutNode, container, node_count,
                   region_leaf, widget_leaf)

# Regroup runs longer than this are not searched; Alg-style regrouping is
# exponential if unbounded.
MAX_REGROUP_RUN = 8

Rect = tuple[int, int, int, int]


@dataclass(frozen=True)
class RawRegion:
    """Recursion frame: the widgets of a sub-layout and its bounding frame."""

    widgets: tuple[Widget, ...]
    bounds: Rect


def _split_groups(widgets: tuple[Widget, ...], dividers: list[int], axis: str,
                  bounds: Rect, eps: int) -> list[tuple[tuple[Widget, ...], Rect]]:
    """Partition widgets between consecutive dividers, skipping empty slices."""
    left, top, right, bottom = bounds
    lo_edge = left if axis == "x" else top
    hi_edge = right if axis == "x" else bottom

    def hi_of(w: Widget) -> int:
        return w.right if axis == "x" else w.bottom

    groups: list[tuple[tuple[Widget, ...], Rect]] = []
    remaining = list(widgets)
    start = lo_edge
    for d in dividers:
        part = tuple(w for w in remaining if hi_of(w) <= d + eps)
        if not part:
            continue
        span = (start, top, d, bottom) if axis == "x" else (left, start, right, d)
        groups.append((part, span))
        remaining = [w for w in remaining if hi_of(w) > d + eps]
        start = d
    if remaining:
        span = (start, top, hi_edge, bottom) if axis == "x" else (left, start, right, hi_edge)
        groups.append((tuple(remaining), span))
    return groups


def _reading_order(widgets: tuple[Widget, ...], axis: str) -> tuple[Widget, ...]:
    key = (lambda w: (w.left, w.top, w.id)) if axis == "x" else (lambda w: (w.top, w.left, w.id))
    return tuple(sorted(widgets, key=key))


def _reconstruct_region(region: RawRegion, window: WidgetSnapshot, eps: int) -> LayoutNode:
    widgets = region.widgets
    if len(widgets) == 1:
        w = widgets[0]
        return widget_leaf(w.id, w.rect())

    frame = WidgetSnapshot(window_width=window.window_width,
                           window_height=window.window_height, widgets=widgets)
    tabmap = create_tabstops(frame, eps, bounds=region.bounds)

    for axis, kind in (("x", ROW), ("y", COLUMN)):
        dividers = layout_dividers(tabmap, list(widgets), axis)
        if not dividers:
            continue
        ordered = _reading_order(widgets, axis)
        groups = _split_groups(ordered, dividers, axis, region.bounds, eps)
        if len(groups) < 2:
            continue
        children = [_reconstruct_region(RawRegion(part, span), window, eps)
                    for part, span in groups]
        return container(kind, children, region.bounds)

    # Pinwheel and friends: no clean cut on either axis.
    ids = tuple(w.id for w in sorted(widgets, key=lambda w: (w.top, w.left, w.id)))
    return region_leaf(ids, region.bounds)


def reconstruct(snapshot: WidgetSnapshot, epsilon: int = DEFAULT_EPSILON) -> LayoutNode:
    """Build the raw layout tree of a snapshot (no regroup simplification).

    Leaves are exactly the snapshot's widget ids, each once.  Children of a
    Row are ordered by increasing left, of a Column by increasing top.
    """
    bounds = (0, 0, snapshot.window_width, snapshot.window_height)
    if not snapshot.widgets:
        return region_leaf((), bounds)
    return _reconstruct_region(RawRegion(tuple(snapshot.widgets), bounds), snapshot, epsilon)


def _leaf_widgets(node: LayoutNode, by_id: dict[str, Widget]) -> tuple[Widget, ...]:
    return tuple(by_id[wid] for wid in node.leaves)


def _merged_span(kids: tuple[LayoutNode, ...], parent_kind: str, parent_bounds: Rect) -> Rect:
    spans = [k.geometry for k in kids if k.geometry is not None]
    if not spans:
        return parent_bounds
    if parent_kind == ROW:
        return (min(s[0] for s in spans), parent_bounds[1], max(s[2] for s in spans), parent_bounds[3])
    return (parent_bounds[0], min(s[1] for s in spans), parent_bounds[2], max(s[3] for s in spans))


def _rebuild(node: LayoutNode, path: tuple[int, ...], i: int, j: int,
             replacement: list[LayoutNode]) -> LayoutNode:
    if path:
        idx = path[0]
        new_child = _rebuild(node.children[idx], path[1:], i, j, replacement)
        kids = list(node.children)
        kids[idx] = new_child
        return container(node.kind, kids, node.geometry)
    kids = list(node.children[:i]) + replacement + list(node.children[j + 1:])
    return container(node.kind, kids, node.geometry)


def simplify(tree: LayoutNode, snapshot: WidgetSnapshot,
             epsilon: int = DEFAULT_EPSILON) -> LayoutNode:
    """Regroup consecutive siblings whenever that strictly shrinks the tree.

    Repeats until no contiguous run (length 2..MAX_REGROUP_RUN) of any
    internal node's children can be merged into fewer nodes; the result is a
    fixed point, so simplify is idempotent.
    """
    by_id = {w.id: w for w in snapshot.widgets}

    current = tree
    while True:
        best: tuple[int, tuple[int, ...], int, int, list[LayoutNode]] | None = None
        stack: list[tuple[tuple[int, ...], LayoutNode]] = [((), current)]
        while stack:
            path, node = stack.pop()
            for ci, child in enumerate(node.children):
                if not child.is_leaf:
                    stack.append((path + (ci,), child))
            n = len(node.children)
            if n < 2 or node.kind not in (ROW, COLUMN):
                continue
            bounds = node.geometry or (0, 0, snapshot.window_width, snapshot.window_height)
            for i in range(n - 1):
                for j in range(i + 1, min(n, i + MAX_REGROUP_RUN)):
                    run = node.children[i:j + 1]
                    widgets = tuple(w for k in run for w in _leaf_widgets(k, by_id))
                    span = _merged_span(tuple(run), node.kind, bounds)
                    candidate = _reconstruct_region(RawRegion(widgets, span), snapshot, epsilon)
                    if candidate.kind == node.kind:
                        replacement = list(candidate.children)
                        new_count = node_count(candidate) - 1
                    else:
                        replacement = [candidate]
                        new_count = node_count(candidate)
                    gain = sum(node_count(k) for k in run) - new_count
                    if gain > 0 and (best is None or gain > best[0]
                                     or (gain == best[0] and (path, i, j) < (best[1], best[2], best[3]))):
                        best = (gain, path, i, j, replacement)
        if best is None:
            return current
        _, path, i, j, replacement = best
        current = _rebuild(current, path, i, j, replacement)


def reconstruct_simplified(snapshot: WidgetSnapshot, epsilon: int = DEFAULT_EPSILON) -> LayoutNode:
    """Convenience: reconstruct then simplify; the pipeline's standard path."""
    return simplify(reconstruct(snapshot, epsilon), snapshot, epsilon)
