"""Tabstop maps and layout dividers.

A tabstop is a symbolic alignment position shared by widget boundaries on one
axis.  Boundary coordinates closer than `epsilon` are merged into a single
tabstop so that one-pixel rounding jitter does not multiply alignment
variables.  A *layout divider* is an interior tabstop whose grid line cuts the
layout into two widget-disjoint parts; dividers drive the recursive Row/Column
reconstruction.

Clustering is order-independent by construction: all boundary coordinates on
an axis are sorted and greedily grouped left-to-right, starting a new cluster
when the gap to the current cluster's minimum exceeds epsilon.  The cluster
minimum is the representative coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Widget, WidgetSnapshot

DEFAULT_EPSILON = 1


@dataclass(frozen=True)
class Tabstop:
    axis: str  # "x" | "y"
    id: int
    position: int


@dataclass(frozen=True)
class TabstopMap:
    """Per-axis coordinate -> tabstop maps plus widget-side references.

    `xtabs`/`ytabs` are keyed by the representative coordinate.  The layout
    boundaries are always present: 0 and the window extent on each axis.
    `boundary_refs` maps (widget id, side) to the widget's tabstop, with side
    one of "left", "right", "top", "bottom".
    """

    xtabs: dict[int, Tabstop]
    ytabs: dict[int, Tabstop]
    boundary_refs: dict[tuple[str, str], Tabstop]
    epsilon: int

    def tabs(self, axis: str) -> dict[int, Tabstop]:
        return self.xtabs if axis == "x" else self.ytabs


def _cluster(coords: list[int], epsilon: int) -> dict[int, int]:
    """Map every coordinate to its cluster representative (the cluster min)."""
    mapping: dict[int, int] = {}
    current: int | None = None
    for c in sorted(set(coords)):
        if current is None or c - current > epsilon:
            current = c
        mapping[c] = current
    return mapping


def create_tabstops(
    snapshot: WidgetSnapshot,
    epsilon: int = DEFAULT_EPSILON,
    bounds: tuple[int, int, int, int] | None = None,
) -> TabstopMap:
    """Build the tabstop map of a snapshot (or of a sub-region of it).

    `bounds` (left, top, right, bottom) defaults to the full window; the
    reconstructor passes sub-region frames during recursion.  Coordinates
    within epsilon of each other share one tabstop; every widget side gets
    exactly one entry in boundary_refs.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    left, top, right, bottom = bounds if bounds is not None else (
        0, 0, snapshot.window_width, snapshot.window_height)

    xcoords = [left, right]
    ycoords = [top, bottom]
    for w in snapshot.widgets:
        xcoords += [w.left, w.right]
        ycoords += [w.top, w.bottom]

    xrep = _cluster(xcoords, epsilon)
    yrep = _cluster(ycoords, epsilon)

    next_id = 0
    xtabs: dict[int, Tabstop] = {}
    for pos in sorted(set(xrep.values())):
        xtabs[pos] = Tabstop("x", next_id, pos)
        next_id += 1
    ytabs: dict[int, Tabstop] = {}
    for pos in sorted(set(yrep.values())):
        ytabs[pos] = Tabstop("y", next_id, pos)
        next_id += 1

    boundary_refs: dict[tuple[str, str], Tabstop] = {}
    for w in snapshot.widgets:
        boundary_refs[(w.id, "left")] = xtabs[xrep[w.left]]
        boundary_refs[(w.id, "right")] = xtabs[xrep[w.right]]
        boundary_refs[(w.id, "top")] = ytabs[yrep[w.top]]
        boundary_refs[(w.id, "bottom")] = ytabs[yrep[w.bottom]]
    return TabstopMap(xtabs=xtabs, ytabs=ytabs, boundary_refs=boundary_refs, epsilon=epsilon)


def layout_dividers(tabmap: TabstopMap, widgets: list[Widget] | tuple[Widget, ...], axis: str) -> list[int]:
    """Interior tabstop positions that no widget straddles, sorted ascending.

    A divider d is clean when every widget satisfies max-boundary <= d or
    min-boundary >= d on the axis, with epsilon slack on the comparison.
    The two layout edges are excluded.
    """
    positions = sorted(tabmap.tabs(axis))
    interior = positions[1:-1]
    eps = tabmap.epsilon
    out = []
    for d in interior:
        clean = True
        for w in widgets:
            lo, hi = (w.left, w.right) if axis == "x" else (w.top, w.bottom)
            if lo < d - eps and hi > d + eps:
                clean = False
                break
        if clean:
            out.append(d)
    return out
