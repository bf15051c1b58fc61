"""Adaptive 2-D grid search over window sizes.

Starting from the extreme sizes (whose diagonal is always subdivided once
into the two mixed corners and the midpoint), every neighboring pair is
compared structurally and subdivided until the trees are isomorphic, a
predictor explains both endpoints, or the size gap reaches the stop
resolution `delta`.  Same-width pairs split at the middle height, same-height
pairs at the middle width; diagonal pairs produce the two mixed corners plus
the midpoint, and the diagonal itself is subdivided further only when both
axis projections show structural change.

When the oracle is queryable, transition edges are refined by bisection down
to a 1 px gap so the inferred guard boundaries land on the true thresholds;
recorded sources keep their coarse sample-gap resolution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .diff import diff
from .geometry import (SampleSet, Size, WidgetSnapshot, sample_set_from_dict,
                       sample_set_to_dict)
from .oracles import Oracle
from .reconstruct import reconstruct_simplified
from .tabstops import DEFAULT_EPSILON
from .tree import EditScript, LayoutNode, isomorphic

DEFAULT_DELTA = 4
DEFAULT_MAX_SAMPLES = 10_000

EQUIVALENT = "equivalent"
TRANSITION = "transition"
UNRESOLVED = "unresolved"


class BudgetExceeded(RuntimeError):
    pass


class DegeneratePair(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    from_size: Size  # the larger endpoint (componentwise on the varying axes)
    to_size: Size
    status: str
    change_set: EditScript | None = None

    @property
    def axis(self) -> str | None:
        if self.from_size[1] == self.to_size[1]:
            return "w"
        if self.from_size[0] == self.to_size[0]:
            return "h"
        return None  # diagonal


@dataclass
class SampleGrid:
    samples: dict[Size, tuple[WidgetSnapshot, LayoutNode]] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    min_size: Size = (1, 1)
    max_size: Size = (1, 1)
    delta: int = DEFAULT_DELTA
    epsilon: int = DEFAULT_EPSILON

    def tree(self, size: Size) -> LayoutNode:
        return self.samples[size][1]

    def snapshot(self, size: Size) -> WidgetSnapshot:
        return self.samples[size][0]

    def transition_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.status == TRANSITION]

    def sorted_sizes(self) -> list[Size]:
        return sorted(self.samples)


def subdivide(a: Size, b: Size) -> list[Size]:
    """The paper's three subdivision rules; duplicates of a/b are dropped."""
    if a == b:
        raise DegeneratePair(f"cannot subdivide identical sizes {a}")
    if a[0] == b[0]:
        candidates = [(a[0], (a[1] + b[1]) // 2)]
    elif a[1] == b[1]:
        candidates = [((a[0] + b[0]) // 2, a[1])]
    else:
        candidates = [((a[0] + b[0]) // 2, (a[1] + b[1]) // 2),
                      (a[0], b[1]), (b[0], a[1])]
    return [c for c in candidates if c != a and c != b]


def needs_subdivision(a_size: Size, a_tree: LayoutNode, b_size: Size, b_tree: LayoutNode,
                      delta: int, predictor=None, epsilon: int = DEFAULT_EPSILON) -> bool:
    """False when the pair is equivalent, predicted, or at stop resolution."""
    if isomorphic(a_tree, b_tree):
        return False
    if predictor is not None and _predictor_explains(predictor, a_size, a_tree, epsilon) \
            and _predictor_explains(predictor, b_size, b_tree, epsilon):
        return False
    if abs(a_size[0] - b_size[0]) <= delta and abs(a_size[1] - b_size[1]) <= delta:
        return False
    return True


def _predictor_explains(predictor, size: Size, tree: LayoutNode, epsilon: int) -> bool:
    from .geometry import SizeOutOfRange
    from .orcspec import render
    try:
        rendered = render(predictor, size[0], size[1])
    except SizeOutOfRange:
        return False
    return isomorphic(reconstruct_simplified(rendered, epsilon), tree)


def _ordered(a: Size, b: Size) -> tuple[Size, Size]:
    """from/to with `from` the larger endpoint."""
    if (a[0], a[1]) >= (b[0], b[1]):
        return a, b
    return b, a


class _GridBuilder:
    def __init__(self, oracle: Oracle, min_size: Size, max_size: Size, delta: int,
                 epsilon: int, max_samples: int, predictor, refine: bool):
        self.oracle = oracle
        self.delta = delta
        self.epsilon = epsilon
        self.max_samples = max_samples
        self.predictor = predictor
        self.refine = refine
        self.grid = SampleGrid(min_size=min_size, max_size=max_size,
                               delta=delta, epsilon=epsilon)
        self.processed: set[tuple[Size, Size]] = set()

    def sample(self, size: Size) -> LayoutNode:
        if size not in self.grid.samples:
            if len(self.grid.samples) >= self.max_samples:
                raise BudgetExceeded(f"sample budget of {self.max_samples} exhausted")
            snap = self.oracle.query(*size)
            self.grid.samples[size] = (snap, reconstruct_simplified(snap, self.epsilon))
        return self.grid.samples[size][1]

    def _edge(self, a: Size, b: Size, status: str, change_set: EditScript | None = None) -> None:
        frm, to = _ordered(a, b)
        if change_set is not None and status == TRANSITION:
            self.grid.edges.append(Edge(frm, to, TRANSITION, change_set))
        else:
            self.grid.edges.append(Edge(frm, to, status))

    def _transition(self, a: Size, b: Size) -> None:
        frm, to = _ordered(a, b)
        script = diff(self.grid.tree(frm), self.grid.tree(to))
        if len(script) == 0:
            self.grid.edges.append(Edge(frm, to, UNRESOLVED))
        else:
            self.grid.edges.append(Edge(frm, to, TRANSITION, script))

    def process(self, a: Size, b: Size) -> None:
        key = _ordered(a, b)
        if key in self.processed or a == b:
            return
        self.processed.add(key)
        ta, tb = self.sample(a), self.sample(b)
        if isomorphic(ta, tb):
            self._edge(a, b, EQUIVALENT)
            return
        if self.predictor is not None \
                and _predictor_explains(self.predictor, a, ta, self.epsilon) \
                and _predictor_explains(self.predictor, b, tb, self.epsilon):
            self._edge(a, b, EQUIVALENT)
            return
        dw, dh = abs(a[0] - b[0]), abs(a[1] - b[1])
        axis_aligned = dw == 0 or dh == 0
        if dw <= self.delta and dh <= self.delta:
            if axis_aligned and self.refine and max(dw, dh) > 1:
                self.refine_pair(a, b)
            else:
                self._transition(a, b)
            return
        if axis_aligned:
            (mid,) = subdivide(a, b)
            self.sample(mid)
            self.process(a, mid)
            self.process(mid, b)
            return
        frm, to = _ordered(a, b)
        p = (frm[0], to[1])   # width of frm, height of to
        q = (to[0], frm[1])   # width of to, height of frm
        mid = ((frm[0] + to[0]) // 2, (frm[1] + to[1]) // 2)
        for corner in (p, q):
            self.sample(corner)
            self.process(frm, corner)
            self.process(corner, to)
        width_changes = not isomorphic(self.grid.tree(frm), self.grid.tree(q))
        height_changes = not isomorphic(self.grid.tree(frm), self.grid.tree(p))
        if width_changes and height_changes and mid not in (frm, to):
            self.sample(mid)
            self.process(frm, mid)
            self.process(mid, to)

    def refine_pair(self, a: Size, b: Size) -> None:
        """Bisect an axis-aligned transition down to a 1 px gap."""
        ta, tb = self.sample(a), self.sample(b)
        if isomorphic(ta, tb):
            self._edge(a, b, EQUIVALENT)
            return
        if abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1:
            self._transition(a, b)
            return
        (mid,) = subdivide(a, b)
        self.sample(mid)
        self.refine_pair(a, mid)
        self.refine_pair(mid, b)


def sample_grid(oracle: Oracle, min_size: Size, max_size: Size,
                delta: int = DEFAULT_DELTA, epsilon: int = DEFAULT_EPSILON,
                max_samples: int = DEFAULT_MAX_SAMPLES, predictor=None,
                refine_transitions: bool | None = None) -> SampleGrid:
    """Sample an oracle over [min_size, max_size] and localize its transitions.

    Every transition edge carries the edit script from the larger-size tree to
    the smaller-size tree.  `refine_transitions` defaults to the oracle's
    queryability.
    """
    if not (min_size[0] <= max_size[0] and min_size[1] <= max_size[1]):
        raise ValueError("min_size must be componentwise <= max_size")
    if delta < 1:
        raise ValueError("delta must be >= 1")
    refine = oracle.queryable if refine_transitions is None else refine_transitions
    builder = _GridBuilder(oracle, min_size, max_size, delta, epsilon,
                           max_samples, predictor, refine)
    builder.sample(min_size)
    builder.sample(max_size)
    if min_size == max_size:
        return builder.grid
    if min_size[0] == max_size[0] or min_size[1] == max_size[1]:
        builder.process(min_size, max_size)
        return builder.grid
    # The extreme diagonal is always subdivided once (corners + midpoint).
    p = (min_size[0], max_size[1])
    q = (max_size[0], min_size[1])
    mid = ((min_size[0] + max_size[0]) // 2, (min_size[1] + max_size[1]) // 2)
    for corner in (p, q):
        builder.sample(corner)
        builder.process(min_size, corner)
        builder.process(corner, max_size)
    if mid not in (min_size, max_size, p, q):
        builder.sample(mid)
        builder.process(min_size, mid)
        builder.process(mid, max_size)
    return builder.grid


def grid_from_sample_set(sample_set: SampleSet, epsilon: int = DEFAULT_EPSILON,
                         delta: int = DEFAULT_DELTA) -> SampleGrid:
    """Wire a recorded sample set into a grid: axis-aligned neighbor edges,
    plus a chain over the (w, h) sort order to keep the mesh connected."""
    grid = SampleGrid(min_size=sample_set.min_size, max_size=sample_set.max_size,
                      delta=delta, epsilon=epsilon)
    for size, snap in sorted(sample_set.samples.items()):
        grid.samples[size] = (snap, reconstruct_simplified(snap, epsilon))

    pairs: set[tuple[Size, Size]] = set()
    sizes = grid.sorted_sizes()
    by_h: dict[int, list[Size]] = {}
    by_w: dict[int, list[Size]] = {}
    for s in sizes:
        by_w.setdefault(s[0], []).append(s)
        by_h.setdefault(s[1], []).append(s)
    for group in list(by_h.values()) + list(by_w.values()):
        group.sort()
        for a, b in zip(group, group[1:]):
            pairs.add(_ordered(a, b))
    linked = {s for pair in pairs for s in pair}
    for a, b in zip(sizes, sizes[1:]):
        if a not in linked or b not in linked:
            pairs.add(_ordered(a, b))
            linked.update((a, b))

    for frm, to in sorted(pairs):
        if isomorphic(grid.tree(frm), grid.tree(to)):
            grid.edges.append(Edge(frm, to, EQUIVALENT))
        else:
            script = diff(grid.tree(frm), grid.tree(to))
            grid.edges.append(Edge(frm, to, TRANSITION, script))
    return grid


# --- persistence ---------------------------------------------------------------

def grid_to_files(grid: SampleGrid, samples_path: Path, edges_path: Path) -> None:
    sample_set = SampleSet(samples={s: snap for s, (snap, _) in grid.samples.items()},
                           provenance="oracle")
    samples_path.write_bytes(json.dumps(sample_set_to_dict(sample_set),
                                        sort_keys=True, indent=1).encode())
    doc = {
        "min_size": list(grid.min_size), "max_size": list(grid.max_size),
        "delta": grid.delta, "epsilon": grid.epsilon,
        "edges": [{
            "from": list(e.from_size), "to": list(e.to_size), "status": e.status,
            **({"change_set": e.change_set.to_dict()} if e.change_set is not None else {}),
        } for e in grid.edges],
    }
    edges_path.write_bytes(json.dumps(doc, sort_keys=True, indent=1).encode())


def grid_from_files(samples_path: Path, edges_path: Path) -> SampleGrid:
    sample_set = sample_set_from_dict(json.loads(samples_path.read_text("utf-8")))
    doc = json.loads(edges_path.read_text("utf-8"))
    grid = SampleGrid(min_size=tuple(doc["min_size"]), max_size=tuple(doc["max_size"]),
                      delta=doc["delta"], epsilon=doc["epsilon"])
    for size, snap in sorted(sample_set.samples.items()):
        grid.samples[size] = (snap, reconstruct_simplified(snap, grid.epsilon))
    for edoc in doc["edges"]:
        grid.edges.append(Edge(
            from_size=tuple(edoc["from"]), to_size=tuple(edoc["to"]), status=edoc["status"],
            change_set=EditScript.from_dict(edoc["change_set"]) if "change_set" in edoc else None))
    return grid
