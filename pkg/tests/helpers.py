"""Shared test fixtures: tree builders, random trees/edits, threshold scans."""

from __future__ import annotations

import random

from resizelens.oracles import Oracle
from resizelens.reconstruct import reconstruct_simplified
from resizelens.tree import (COLUMN, ROW, LayoutNode, container, isomorphic,
                             region_leaf, widget_leaf)


def row(*kids: LayoutNode) -> LayoutNode:
    return container(ROW, list(kids))


def col(*kids: LayoutNode) -> LayoutNode:
    return container(COLUMN, list(kids))


def leaf(wid: str) -> LayoutNode:
    return widget_leaf(wid)


def balanced_tree(n_leaves: int, branching: int = 5) -> LayoutNode:
    """Alternating Row/Column tree with exactly n_leaves widget leaves."""
    ids = iter(f"w{k}" for k in range(n_leaves))

    def build(count: int, kind: str) -> LayoutNode:
        if count == 1:
            return widget_leaf(next(ids))
        per = max(1, count // branching)
        kids = []
        remaining = count
        other = COLUMN if kind == ROW else ROW
        while remaining > 0:
            take = min(per, remaining) if remaining > per else remaining
            kids.append(build(take, other))
            remaining -= take
        if len(kids) == 1:
            return kids[0]
        return container(kind, kids)

    return build(n_leaves, ROW)


def drop_leaf(tree: LayoutNode, target: str) -> LayoutNode:
    """Rebuild the tree without one leaf (collapsing singleton containers)."""

    def rebuild(node: LayoutNode) -> LayoutNode | None:
        if node.kind == "widget":
            return None if node.widget_id == target else widget_leaf(node.widget_id)
        if node.kind == "region":
            ids = tuple(i for i in node.region_ids if i != target)
            return region_leaf(ids) if ids else None
        kids = [k for k in (rebuild(c) for c in node.children) if k is not None]
        if not kids:
            return None
        if len(kids) == 1:
            return kids[0]
        return container(node.kind, kids)

    out = rebuild(tree)
    assert out is not None
    return out


# --- random trees and edits (mirrors the documented edit semantics) ------------


def random_tree(rng: random.Random, max_nodes: int = 50, prefix: str = "w") -> LayoutNode:
    import itertools
    ids = (f"{prefix}{k}" for k in itertools.count())

    def build(budget: int, depth: int, kind: str) -> tuple[LayoutNode, int]:
        if budget > 1 and depth <= 4 and rng.random() < 0.05:
            n = rng.randint(2, 3)
            return region_leaf(tuple(next(ids) for _ in range(n))), 1
        if budget <= 1 or depth > 4 or rng.random() < 0.35:
            return widget_leaf(next(ids)), 1
        n = rng.randint(2, 4)
        kids: list[LayoutNode] = []
        used = 1
        other = COLUMN if kind == ROW else ROW
        for _ in range(n):
            if used >= budget:
                break
            child, c = build(budget - used, depth + 1, other)
            kids.append(child)
            used += c
        if len(kids) < 2:
            return widget_leaf(next(ids)), 1
        return container(kind, kids), used

    tree, _ = build(max_nodes, 0, rng.choice([ROW, COLUMN]))
    if tree.is_leaf:
        tree = container(ROW, [tree, widget_leaf(next(ids))])
    return tree


class _Mut:
    def __init__(self, kind, wid=None, rids=(), kids=None):
        self.kind, self.wid, self.rids = kind, wid, rids
        self.kids = kids or []


def _thaw(n: LayoutNode) -> _Mut:
    return _Mut(n.kind, n.widget_id, n.region_ids, [_thaw(c) for c in n.children])


def _freeze(m: _Mut) -> LayoutNode:
    if m.kind == "widget":
        return widget_leaf(m.wid)
    if m.kind == "region":
        return region_leaf(m.rids)
    if not m.kids:
        return widget_leaf(m.wid or "empty")
    return container(m.kind, [_freeze(c) for c in m.kids])


def _all(m: _Mut, path=()):
    yield path, m
    for i, c in enumerate(m.kids):
        yield from _all(c, path + (i,))


def _at(m: _Mut, path):
    for i in path:
        m = m.kids[i]
    return m


def mutate(tree: LayoutNode, rng: random.Random, edits: int, fresh_prefix: str) -> LayoutNode:
    """Apply `edits` random structural edits and return the result."""
    root = _thaw(tree)
    fresh = iter(f"{fresh_prefix}{k}" for k in range(100))
    for _ in range(edits):
        nodes = list(_all(root))
        kind = rng.choice(["remove", "add", "move", "replace", "retype", "reorder"])
        if kind == "remove":
            cands = [p for p, n in nodes if p]
            if cands:
                p = rng.choice(cands)
                del _at(root, p[:-1]).kids[p[-1]]
        elif kind == "add":
            internals = [n for _, n in nodes if n.kind in (ROW, COLUMN)]
            if internals:
                n = rng.choice(internals)
                n.kids.insert(rng.randint(0, len(n.kids)), _Mut("widget", next(fresh)))
        elif kind == "move":
            cands = [p for p, n in nodes if p]
            if cands:
                sp = rng.choice(cands)
                parent = _at(root, sp[:-1])
                sub = parent.kids.pop(sp[-1])
                internals = [n for _, n in _all(root) if n.kind in (ROW, COLUMN)]
                if internals:
                    t = rng.choice(internals)
                    t.kids.insert(rng.randint(0, len(t.kids)), sub)
                else:
                    parent.kids.insert(sp[-1], sub)
        elif kind == "replace":
            cands = [p for p, n in nodes if p]
            if cands:
                p = rng.choice(cands)
                _at(root, p[:-1]).kids[p[-1]] = _Mut("widget", next(fresh))
        elif kind == "retype":
            internals = [n for _, n in nodes if n.kind in (ROW, COLUMN)]
            if internals:
                n = rng.choice(internals)
                n.kind = COLUMN if n.kind == ROW else ROW
        else:
            internals = [n for _, n in nodes if len(n.kids) >= 2]
            if internals:
                rng.shuffle(rng.choice(internals).kids)

    def prune(m: _Mut) -> None:
        for c in m.kids:
            prune(c)
        m.kids = [c for c in m.kids if not (c.kind in (ROW, COLUMN) and not c.kids)]

    prune(root)
    return _freeze(root)


def random_snapshot(rng: random.Random, w: int = 320, h: int = 200,
                    max_widgets: int = 9):
    """Non-overlapping random snapshot via recursive guillotine splits."""
    from resizelens.geometry import Widget, WidgetSnapshot

    cells: list[tuple[int, int, int, int]] = []

    def split(left, top, right, bottom, depth):
        if len(cells) >= max_widgets or depth > 3 or rng.random() < 0.3:
            cells.append((left, top, right, bottom))
            return
        if rng.random() < 0.5 and right - left >= 40:
            cut = rng.randint(left + 10, right - 10)
            split(left, top, cut, bottom, depth + 1)
            split(cut, top, right, bottom, depth + 1)
        elif bottom - top >= 40:
            cut = rng.randint(top + 10, bottom - 10)
            split(left, top, right, cut, depth + 1)
            split(left, cut, right, bottom, depth + 1)
        else:
            cells.append((left, top, right, bottom))

    split(0, 0, w, h, 0)
    widgets = []
    for i, (left, top, right, bottom) in enumerate(cells):
        # occasionally inset, so boundaries do not always align
        dx = rng.randint(0, min(4, (right - left - 1) // 2))
        dy = rng.randint(0, min(4, (bottom - top - 1) // 2))
        widgets.append(Widget(f"w{i}", left + dx, top + dy,
                              right - left - 2 * dx, bottom - top - 2 * dy))
    return WidgetSnapshot(window_width=w, window_height=h, widgets=tuple(widgets))


def scan_thresholds(oracle: Oracle, axis: str, fixed: int, lo: int, hi: int,
                    epsilon: int = 1) -> list[int]:
    """Ground-truth transition positions: t such that the structure differs
    between t-1 and t along the axis (1 px scan of the oracle)."""
    out = []
    prev = None
    for v in range(lo, hi + 1):
        size = (v, fixed) if axis == "w" else (fixed, v)
        tree = reconstruct_simplified(oracle.query(*size), epsilon)
        if prev is not None and not isomorphic(prev, tree):
            out.append(v)
        prev = tree
    return out
