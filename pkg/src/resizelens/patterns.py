"""Mapping grid transitions to OR-constraint layout patterns.

Each transition edge's change set is matched rule-by-rule:

* a leaf removal/addition marks the widget optional, with the window area of
  the sample where it is absent as penalty;
* an internal removal/addition whose children all moved away is bookkeeping
  for a flow and is ignored; otherwise it marks an optional sublayout;
* moves of a trailing run of a Row/Column's children to a position right
  after it merge the rows into a horizontal/vertical flow (a root-level wrap
  shows up as retype + leading container + prefix moves and is folded into
  the same flow); any other single move is an alternative position;
* a replacement is an alternative node, a retype a pivot, a child-order
  change an alternative order;
* a child-order change combined with other structural ops, or two or more
  moves no flow explains, escalate to a raw OR of the two subtrees
  (``OrFallback``), the signal behind error-map fault lines.

`infer` folds the matched instances over the grid in the inward iteration
order, starting from the maximum-size tree, and assembles the OrcSpec with
per-variant guards and templates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diff import DiffPlan, MovePlan, diff_with_plan
from .orcspec import (GuardRect, OrcNode, OrcSpec, Variant, W_ALT, W_ALTORDER,
                      W_HFLOW, W_OPTIONAL, W_OR, W_PIVOT, W_VFLOW,
                      orc_from_layout, orc_widget)
from .sampler import Edge, SampleGrid, TRANSITION
from .tree import COLUMN, ROW, LayoutNode, TreeIndex, isomorphic

OPTIONAL_WIDGET = "OptionalWidget"
OPTIONAL_SUBLAYOUT = "OptionalSublayout"
HORIZONTAL_FLOW = "HorizontalFlow"
VERTICAL_FLOW = "VerticalFlow"
ALTERNATIVE_POSITION = "AlternativePosition"
ALTERNATIVE_NODE = "AlternativeNode"
PIVOT = "Pivot"
ALTERNATIVE_ORDER = "AlternativeOrder"
OR_FALLBACK = "OrFallback"

_FLOW_KIND = {ROW: HORIZONTAL_FLOW, COLUMN: VERTICAL_FLOW}


class ConflictingPatterns(RuntimeError):
    """Two instances claim the same anchor with incompatible content."""


@dataclass
class PatternInstance:
    kind: str
    anchor_leaves: tuple[str, ...]
    anchor_path: tuple[int, ...] = ()
    penalty: int | None = None
    guard: list[GuardRect] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    edge: tuple = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "anchor": list(self.anchor_leaves),
            "anchor_path": list(self.anchor_path),
            "penalty": self.penalty,
            "guard": [list(r) for r in self.guard],
            "details": self.details,
            "edge": {"from": list(self.edge[0]), "to": list(self.edge[1])} if self.edge else None,
        }


@dataclass
class ChangeContext:
    edge: Edge
    larger_tree: LayoutNode
    smaller_tree: LayoutNode
    larger_size: tuple
    smaller_size: tuple
    transition_position: dict


# --- iteration order -------------------------------------------------------------


def iteration_order(grid: SampleGrid) -> list[Edge]:
    """Depth-first walk from the maximum size: constant-height decreasing-width
    chains first, then constant-width decreasing-height chains from each
    visited sample.  Unreached edges are appended deterministically."""
    by_key: dict[tuple, Edge] = {}
    w_next: dict[tuple, list[tuple]] = {}
    h_next: dict[tuple, list[tuple]] = {}
    for e in grid.edges:
        by_key[(e.from_size, e.to_size)] = e
        if e.axis == "w":
            w_next.setdefault(e.from_size, []).append(e.to_size)
        elif e.axis == "h":
            h_next.setdefault(e.from_size, []).append(e.to_size)
    for m in (w_next, h_next):
        for k in m:
            m[k].sort(reverse=True)

    order: list[Edge] = []
    emitted: set[tuple] = set()
    visited: set[tuple] = set()

    def emit(frm, to):
        key = (frm, to)
        if key in by_key and key not in emitted:
            emitted.add(key)
            order.append(by_key[key])

    def visit(size):
        if size in visited:
            return
        visited.add(size)
        for to in w_next.get(size, []):
            emit(size, to)
            visit(to)
        for to in h_next.get(size, []):
            emit(size, to)
            visit(to)

    start = grid.max_size if grid.max_size in grid.samples else max(grid.samples)
    visit(start)
    for e in sorted(grid.edges, key=lambda e: (e.from_size, e.to_size), reverse=True):
        if (e.from_size, e.to_size) not in emitted:
            emitted.add((e.from_size, e.to_size))
            order.append(e)
    return order


# --- flow detection ---------------------------------------------------------------


@dataclass
class _FlowHit:
    kind: str
    anchor: LayoutNode          # node in the larger tree holding the flowing rows
    items: tuple[str, ...]
    consumed_moves: list[MovePlan]
    consumed_retypes: list[tuple]
    consumed_adds: list[LayoutNode]
    consumed_removals: list[LayoutNode]


def _t2_sibling_anchor(idx2: TreeIndex, n2: LayoutNode, parent2: LayoutNode) -> tuple[LayoutNode, int] | None:
    """Deepest ancestor of n2 (or n2) whose parent is parent2, with its index."""
    node = n2
    while True:
        p = idx2.parent(node)
        if p is None:
            return None
        if p is parent2:
            return node, idx2.path(node)[-1]
        node = p


def _detect_flows(plan: DiffPlan, idx1: TreeIndex, idx2: TreeIndex,
                  t1: LayoutNode) -> list[_FlowHit]:
    hits: list[_FlowHit] = []
    by_source: dict[int, list[MovePlan]] = {}
    source_nodes: dict[int, LayoutNode] = {}
    for mv in plan.moves:
        if mv.src_parent is None or mv.src_parent.kind not in (ROW, COLUMN):
            continue
        by_source.setdefault(id(mv.src_parent), []).append(mv)
        source_nodes[id(mv.src_parent)] = mv.src_parent

    retypes_by_n1 = {id(n1): (n1, n2) for n1, n2 in plan.retypes}
    adds_by_id = {id(n2): n2 for n2 in plan.adds_container}
    removals_by_id = {id(n1): n1 for n1 in plan.removals_container}

    for key in sorted(by_source, key=lambda k: idx1.path(source_nodes[k])):
        src = source_nodes[key]
        moves = sorted(by_source[key], key=lambda mv: mv.src_index)
        indices = [mv.src_index for mv in moves]
        n = len(src.children)
        suffix = indices == list(range(n - len(moves), n))
        prefix = indices == list(range(len(moves)))

        if suffix:
            hit = _match_suffix_flow(src, moves, plan, idx1, idx2, adds_by_id, removals_by_id)
            if hit:
                hits.append(hit)
                continue
        if prefix and id(src) in retypes_by_n1:
            hit = _match_wrap_bundle(src, moves, retypes_by_n1[id(src)], idx2, adds_by_id)
            if hit:
                hits.append(hit)
    return hits


def _match_suffix_flow(src: LayoutNode, moves: list[MovePlan], plan: DiffPlan,
                       idx1: TreeIndex, idx2: TreeIndex,
                       adds_by_id: dict, removals_by_id: dict) -> _FlowHit | None:
    src2 = plan.pair2_of(src)
    dissolved = id(src) in removals_by_id
    if src2 is None and not dissolved:
        return None
    if src2 is not None:
        parent2 = idx2.parent(src2)
        base_index = idx2.path(src2)[-1] if idx2.path(src2) else -1
    else:
        src_path = idx1.path(src)
        if not src_path:
            return None
        parent1 = idx1.parent(src)
        parent2 = plan.pair2_of(parent1) if parent1 is not None else None
        base_index = src_path[-1] - 1
    if parent2 is None:
        return None

    consumed_adds: list[LayoutNode] = []
    last_pos: tuple | None = None
    for mv in moves:
        anchor = _t2_sibling_anchor(idx2, mv.n2, parent2)
        if anchor is None:
            return None
        sib, sib_index = anchor
        if sib_index <= base_index:
            return None
        pos = idx2.path(mv.n2)
        if last_pos is not None and pos <= last_pos:
            return None
        last_pos = pos
        node = mv.n2
        while node is not sib:
            node = idx2.parent(node)
            if id(node) in adds_by_id and node not in consumed_adds:
                consumed_adds.append(node)
        if id(sib) in adds_by_id and sib not in consumed_adds:
            consumed_adds.append(sib)

    parent1 = idx1.parent(src)
    anchor1 = parent1 if parent1 is not None else src
    return _FlowHit(
        kind=_FLOW_KIND[src.kind], anchor=anchor1,
        items=tuple(src.leaves),
        consumed_moves=moves, consumed_retypes=[],
        consumed_adds=consumed_adds,
        consumed_removals=[src] if dissolved else [])


def _match_wrap_bundle(src: LayoutNode, moves: list[MovePlan], retype: tuple,
                       idx2: TreeIndex, adds_by_id: dict) -> _FlowHit | None:
    n1, n2 = retype
    container2 = None
    for mv in moves:
        parent2 = idx2.parent(mv.n2)
        if parent2 is None or id(parent2) not in adds_by_id:
            return None
        if container2 is None:
            container2 = parent2
        elif container2 is not parent2:
            return None
    if container2 is None or container2.kind != src.kind:
        return None
    cpath = idx2.path(container2)
    if not cpath or cpath[-1] != 0 or idx2.parent(container2) is not n2:
        return None
    return _FlowHit(
        kind=_FLOW_KIND[src.kind], anchor=src, items=tuple(src.leaves),
        consumed_moves=moves, consumed_retypes=[retype],
        consumed_adds=[container2], consumed_removals=[])


# --- change-set matching -------------------------------------------------------------


def match_change_set(ctx: ChangeContext, spec: OrcSpec | None = None) -> list[PatternInstance]:
    """Map one transition's change set to pattern instances (rule totality:
    every planned op is consumed by exactly one instance or the fallback)."""
    _, plan = diff_with_plan(ctx.larger_tree, ctx.smaller_tree)
    if plan.op_count() == 0:
        return []
    idx1 = TreeIndex(ctx.larger_tree)
    idx2 = TreeIndex(ctx.smaller_tree)
    edge_key = (ctx.larger_size, ctx.smaller_size)
    instances: list[PatternInstance] = []

    consumed_moves: set[int] = set()
    consumed_retypes: set[int] = set()
    consumed_adds: set[int] = set()
    consumed_removals: set[int] = set()

    for hit in _detect_flows(plan, idx1, idx2, ctx.larger_tree):
        instances.append(PatternInstance(
            kind=hit.kind, anchor_leaves=hit.items,
            anchor_path=idx1.path(hit.anchor), edge=edge_key,
            details={"flow_items": list(hit.items)}))
        consumed_moves.update(id(mv) for mv in hit.consumed_moves)
        consumed_retypes.update(id(r[0]) for r in hit.consumed_retypes)
        consumed_adds.update(id(a) for a in hit.consumed_adds)
        consumed_removals.update(id(r) for r in hit.consumed_removals)

    # Knock-on containers: every child arrived via (or left with) consumed moves.
    move_targets = {id(mv.n2) for mv in plan.moves if id(mv) in consumed_moves}
    for n2 in plan.adds_container:
        if id(n2) in consumed_adds:
            continue
        if n2.children and all(id(c) in move_targets or id(c) in consumed_adds
                               for c in n2.children):
            consumed_adds.add(id(n2))
    move_sources = {id(mv.n1) for mv in plan.moves if id(mv) in consumed_moves}
    for n1 in plan.removals_container:
        if id(n1) in consumed_removals:
            continue
        if n1.children and all(id(c) in move_sources or id(c) in consumed_removals
                               for c in n1.children):
            consumed_removals.add(id(n1))

    rest_moves = [mv for mv in plan.moves if id(mv) not in consumed_moves]
    rest_retypes = [r for r in plan.retypes if id(r[0]) not in consumed_retypes]
    rest_adds_c = [a for a in plan.adds_container if id(a) not in consumed_adds]
    rest_removals_c = [r for r in plan.removals_container if id(r) not in consumed_removals]
    rest_reorders = list(plan.reorders)
    rest_removals = list(plan.removals_full)
    rest_adds = list(plan.adds_payload)
    rest_replaces = list(plan.replaces)

    structural_rest = (len(rest_moves) + len(rest_adds_c) + len(rest_removals_c)
                       + len(rest_removals) + len(rest_adds) + len(rest_replaces))
    escalate = (rest_reorders and structural_rest > 0) or len(rest_moves) >= 2
    if escalate:
        instances.append(_or_fallback(ctx, idx1, rest_moves, rest_retypes, rest_reorders,
                                      rest_removals + rest_removals_c, edge_key))
        return instances

    area_smaller = ctx.smaller_size[0] * ctx.smaller_size[1]
    area_larger = ctx.larger_size[0] * ctx.larger_size[1]

    for n1 in rest_removals:
        instances.append(PatternInstance(
            kind=OPTIONAL_WIDGET if n1.is_leaf else OPTIONAL_SUBLAYOUT,
            anchor_leaves=tuple(n1.leaves), anchor_path=idx1.path(n1),
            penalty=area_smaller, edge=edge_key,
            details={"absent_at": list(ctx.smaller_size)}))
    for n1 in rest_removals_c:
        instances.append(PatternInstance(
            kind=OPTIONAL_SUBLAYOUT, anchor_leaves=tuple(n1.leaves),
            anchor_path=idx1.path(n1), penalty=area_smaller, edge=edge_key,
            details={"absent_at": list(ctx.smaller_size), "container_only": True}))
    for n2 in rest_adds:
        instances.append(PatternInstance(
            kind=OPTIONAL_WIDGET if n2.is_leaf else OPTIONAL_SUBLAYOUT,
            anchor_leaves=tuple(n2.leaves), anchor_path=idx2.path(n2),
            penalty=area_larger, edge=edge_key,
            details={"absent_at": list(ctx.larger_size), "appears_when_smaller": True,
                     "insert_parent": _parent_leaves(idx2, n2),
                     "insert_index": idx2.path(n2)[-1] if idx2.path(n2) else 0}))
    for n2 in rest_adds_c:
        instances.append(PatternInstance(
            kind=OPTIONAL_SUBLAYOUT, anchor_leaves=tuple(n2.leaves),
            anchor_path=idx2.path(n2), penalty=area_larger, edge=edge_key,
            details={"absent_at": list(ctx.larger_size), "appears_when_smaller": True,
                     "container_only": True}))
    for mv in rest_moves:
        instances.append(PatternInstance(
            kind=ALTERNATIVE_POSITION, anchor_leaves=tuple(mv.n1.leaves),
            anchor_path=idx1.path(mv.n1), edge=edge_key,
            details={"to_parent": _parent_leaves(idx2, mv.n2),
                     "to_index": mv.dst_index}))
    for n1, n2 in rest_replaces:
        from .tree import tree_to_dict
        instances.append(PatternInstance(
            kind=ALTERNATIVE_NODE, anchor_leaves=tuple(n1.leaves),
            anchor_path=idx1.path(n1), edge=edge_key,
            details={"from": tree_to_dict(n1), "to": tree_to_dict(n2)}))
    for n1, n2 in rest_retypes:
        instances.append(PatternInstance(
            kind=PIVOT, anchor_leaves=tuple(n1.leaves), anchor_path=idx1.path(n1),
            edge=edge_key, details={"from_type": n1.kind, "to_type": n2.kind}))
    for ro in rest_reorders:
        instances.append(PatternInstance(
            kind=ALTERNATIVE_ORDER, anchor_leaves=tuple(ro.n1.leaves),
            anchor_path=idx1.path(ro.n1), edge=edge_key,
            details={"from_order": ro.from_leaves, "to_order": ro.to_leaves}))
    return instances


def _parent_leaves(idx2: TreeIndex, n2: LayoutNode) -> list[str]:
    parent = idx2.parent(n2)
    return list(parent.leaves) if parent is not None else []


def _or_fallback(ctx: ChangeContext, idx1: TreeIndex, moves, retypes, reorders,
                 removals, edge_key) -> PatternInstance:
    from .tree import tree_to_dict
    involved: set[str] = set()
    for mv in moves:
        involved.update(mv.n1.leaves)
    for n1, _ in retypes:
        involved.update(n1.leaves)
    for ro in reorders:
        involved.update(ro.n1.leaves)
    for n1 in removals:
        involved.update(n1.leaves)
    anchor = _smallest_containing(ctx.larger_tree, involved)
    anchor2 = _smallest_containing(ctx.smaller_tree, involved & frozenset(ctx.smaller_tree.leaves))
    return PatternInstance(
        kind=OR_FALLBACK, anchor_leaves=tuple(anchor.leaves),
        anchor_path=idx1.path(anchor), edge=edge_key,
        details={"from": tree_to_dict(anchor), "to": tree_to_dict(anchor2)})


def _smallest_containing(root: LayoutNode, leaves: set[str] | frozenset[str]) -> LayoutNode:
    if not leaves:
        return root
    best = root
    changed = True
    while changed:
        changed = False
        for child in best.children:
            if leaves <= frozenset(child.leaves):
                best = child
                changed = True
                break
    return best


# --- variants, guards, templates ------------------------------------------------------


def _cell_ranges(coords: list[int], lo_bound: int, hi_bound: int) -> list[tuple[int, int]]:
    """Integer intervals tiling [lo_bound, hi_bound], one per sampled coordinate,
    split halfway between neighbors."""
    ranges = []
    for i, c in enumerate(coords):
        lo = lo_bound if i == 0 else (coords[i - 1] + c) // 2 + 1
        hi = hi_bound if i == len(coords) - 1 else (c + coords[i + 1]) // 2
        ranges.append((lo, hi))
    return ranges


def variants_from_grid(grid: SampleGrid) -> list[Variant]:
    """Group samples into isomorphism classes and carve the size plane into
    per-class guard regions (each sample owns the cell around it; unsampled
    lattice cells go to the nearest sample by L-infinity distance)."""
    order = sorted(grid.samples, key=lambda s: (-s[0], -s[1]))
    variants: list[Variant] = []
    variant_of: dict[tuple, Variant] = {}
    for size in order:
        tree = grid.tree(size)
        hit = None
        for v in variants:
            if isomorphic(v.tree, tree):
                hit = v
                break
        if hit is None:
            hit = Variant(vid=f"S{len(variants)}", tree=tree)
            variants.append(hit)
        variant_of[size] = hit
        snap = grid.snapshot(size)
        hit.templates[size] = {w.id: w.rect() for w in snap.widgets}

    ws = sorted({s[0] for s in grid.samples})
    hs = sorted({s[1] for s in grid.samples})
    w_ranges = _cell_ranges(ws, grid.min_size[0], grid.max_size[0])
    h_ranges = _cell_ranges(hs, grid.min_size[1], grid.max_size[1])
    sizes = list(grid.samples)

    owner: dict[tuple[int, int], Variant] = {}
    for i, w in enumerate(ws):
        for j, h in enumerate(hs):
            if (w, h) in variant_of:
                owner[(i, j)] = variant_of[(w, h)]
            else:
                nearest = min(sizes, key=lambda s: (max(abs(s[0] - w), abs(s[1] - h)), s))
                owner[(i, j)] = variant_of[nearest]

    for v in variants:
        rects: list[GuardRect] = []
        for j, (hlo, hhi) in enumerate(h_ranges):
            i = 0
            while i < len(ws):
                if owner[(i, j)] is not v:
                    i += 1
                    continue
                k = i
                while k + 1 < len(ws) and owner[(k + 1, j)] is v:
                    k += 1
                rects.append((w_ranges[i][0], hlo, w_ranges[k][1], hhi))
                i = k + 1
        v.guard = _merge_rows(rects)
    return variants


def _merge_rows(rects: list[GuardRect]) -> list[GuardRect]:
    """Merge vertically adjacent rectangles with identical width spans."""
    out: list[GuardRect] = []
    for r in sorted(rects, key=lambda r: (r[0], r[2], r[1])):
        if out:
            last = out[-1]
            if last[0] == r[0] and last[2] == r[2] and last[3] + 1 == r[1]:
                out[-1] = (last[0], last[1], last[2], r[3])
                continue
        out.append(r)
    return sorted(out)


# --- instance folding into the spec -----------------------------------------------------


def _dedupe_key(inst: PatternInstance) -> tuple:
    if inst.kind in (OPTIONAL_WIDGET, OPTIONAL_SUBLAYOUT):
        return (inst.kind, tuple(sorted(inst.anchor_leaves)))
    if inst.kind == ALTERNATIVE_NODE:
        return (inst.kind, tuple(sorted(inst.anchor_leaves)))
    if inst.kind in (HORIZONTAL_FLOW, VERTICAL_FLOW):
        return (inst.kind, tuple(sorted(inst.anchor_leaves)))
    if inst.kind == PIVOT:
        return (inst.kind, tuple(sorted(inst.anchor_leaves)))
    if inst.kind == ALTERNATIVE_ORDER:
        return (inst.kind, tuple(sorted(inst.anchor_leaves)),
                str(inst.details.get("to_order")))
    return (inst.kind, tuple(sorted(inst.anchor_leaves)), str(sorted(inst.details)))


def _merge_instances(instances: list[PatternInstance]) -> list[PatternInstance]:
    merged: list[PatternInstance] = []
    for inst in instances:
        if inst.kind in (HORIZONTAL_FLOW, VERTICAL_FLOW):
            absorbed = False
            for other in merged:
                if other.kind == inst.kind and (
                        set(inst.anchor_leaves) <= set(other.anchor_leaves)
                        or set(other.anchor_leaves) <= set(inst.anchor_leaves)):
                    if set(other.anchor_leaves) < set(inst.anchor_leaves):
                        other.anchor_leaves = inst.anchor_leaves
                        other.details = inst.details
                    absorbed = True
                    break
            if absorbed:
                continue
        key = _dedupe_key(inst)
        clash = next((o for o in merged if _dedupe_key(o) == key), None)
        if clash is not None:
            if inst.kind == ALTERNATIVE_NODE and clash.details.get("to") != inst.details.get("to"):
                raise ConflictingPatterns(
                    f"two different replacements claim anchor {inst.anchor_leaves}")
            continue  # first observation wins (penalties, orders)
        merged.append(inst)
    return merged


# --- decoration of the max-size tree -----------------------------------------------------


def _find_anchor(node: OrcNode, leaves: frozenset[str]) -> OrcNode:
    best = node
    changed = True
    while changed:
        changed = False
        for child in best.children:
            if leaves <= child.leaf_ids():
                best = child
                changed = True
                break
    return best


def _replace_node(root: OrcNode, target: OrcNode, replacement: OrcNode) -> OrcNode:
    if root is target:
        return replacement
    if not root.children:
        return root
    kids = tuple(_replace_node(c, target, replacement) for c in root.children)
    if kids == root.children:
        return root
    return OrcNode(root.kind, widget_id=root.widget_id, children=kids,
                   penalty=root.penalty, orders=root.orders, region_ids=root.region_ids)


def _layout_to_orc(doc: dict) -> OrcNode:
    from .tree import tree_from_dict
    return orc_from_layout(tree_from_dict(doc))


def _decorate(root: OrcNode, inst: PatternInstance) -> OrcNode:
    leaves = frozenset(inst.anchor_leaves)
    if inst.kind == OPTIONAL_WIDGET and inst.details.get("appears_when_smaller") \
            and not leaves <= root.leaf_ids():
        parent_leaves = frozenset(inst.details.get("insert_parent", []))
        parent = _find_anchor(root, parent_leaves & root.leaf_ids())
        wid = inst.anchor_leaves[0]
        new_child = OrcNode(W_OPTIONAL, children=(orc_widget(wid),), penalty=inst.penalty)
        idx = min(inst.details.get("insert_index", 0), len(parent.children))
        kids = parent.children[:idx] + (new_child,) + parent.children[idx:]
        return _replace_node(root, parent, OrcNode(
            parent.kind, widget_id=parent.widget_id, children=kids,
            penalty=parent.penalty, orders=parent.orders, region_ids=parent.region_ids))
    if not leaves or not leaves <= root.leaf_ids():
        return root
    anchor = _find_anchor(root, leaves)
    if inst.kind in (OPTIONAL_WIDGET, OPTIONAL_SUBLAYOUT):
        if anchor.kind == W_OPTIONAL:
            return root
        return _replace_node(root, anchor,
                             OrcNode(W_OPTIONAL, children=(anchor,), penalty=inst.penalty))
    if inst.kind in (HORIZONTAL_FLOW, VERTICAL_FLOW):
        flow_kind = W_HFLOW if inst.kind == HORIZONTAL_FLOW else W_VFLOW
        if anchor.kind == flow_kind:
            return root
        children = anchor.children if anchor.children else (anchor,)
        if frozenset(anchor.leaf_ids()) == leaves:
            return _replace_node(root, anchor, OrcNode(flow_kind, children=children))
        return root
    if inst.kind == ALTERNATIVE_NODE:
        alt = OrcNode(W_ALT, children=(anchor, _layout_to_orc(inst.details["to"])))
        return _replace_node(root, anchor, alt)
    if inst.kind == PIVOT:
        if anchor.kind == W_PIVOT:
            return root
        return _replace_node(root, anchor, OrcNode(W_PIVOT, children=(anchor,)))
    if inst.kind == ALTERNATIVE_ORDER:
        orders = (tuple(tuple(o) for o in inst.details.get("from_order", [])),
                  tuple(tuple(o) for o in inst.details.get("to_order", [])))
        flat = tuple(tuple(x for grp in order for x in grp) for order in orders)
        return _replace_node(root, anchor, OrcNode(W_ALTORDER, children=(anchor,), orders=flat))
    if inst.kind == OR_FALLBACK:
        branch_b = _layout_to_orc(inst.details["to"])
        return _replace_node(root, anchor, OrcNode(W_OR, children=(anchor, branch_b)))
    if inst.kind == ALTERNATIVE_POSITION:
        return root  # recorded in the pattern list; no structural decoration
    return root


# --- pattern guards ------------------------------------------------------------------


def _variant_guard_union(variants: list[Variant], predicate) -> list[GuardRect]:
    rects: list[GuardRect] = []
    for v in variants:
        if predicate(v):
            rects.extend(v.guard)
    return sorted(rects)


def _instance_guard(inst: PatternInstance, variants: list[Variant]) -> list[GuardRect]:
    leaves = frozenset(inst.anchor_leaves)
    if inst.kind in (OPTIONAL_WIDGET, OPTIONAL_SUBLAYOUT):
        return _variant_guard_union(
            variants, lambda v: not leaves <= frozenset(v.tree.leaves))
    if inst.kind == ALTERNATIVE_NODE:
        to_leaves = frozenset(_collect_leaves(inst.details.get("to", {})))
        return _variant_guard_union(
            variants, lambda v: to_leaves <= frozenset(v.tree.leaves))
    if inst.kind == PIVOT:
        to_kind = inst.details.get("to_type")
        def flipped(v: Variant) -> bool:
            if not leaves <= frozenset(v.tree.leaves):
                return False
            node = _smallest_containing(v.tree, leaves)
            return node.kind == to_kind
        return _variant_guard_union(variants, flipped)
    base = variants[0]
    def differs(v: Variant) -> bool:
        if v is base:
            return False
        in_v = _smallest_containing(v.tree, leaves & frozenset(v.tree.leaves))
        in_base = _smallest_containing(base.tree, leaves & frozenset(base.tree.leaves))
        return not isomorphic(in_v, in_base)
    return _variant_guard_union(variants, differs)


def _collect_leaves(doc: dict) -> list[str]:
    if not doc:
        return []
    if doc.get("kind") == "Widget":
        return [doc["id"]]
    if doc.get("kind") == "TabstopRegion":
        return list(doc.get("ids", []))
    out: list[str] = []
    for c in doc.get("children", []):
        out.extend(_collect_leaves(c))
    return out


# --- the fold -----------------------------------------------------------------------


def infer(grid: SampleGrid) -> OrcSpec:
    """Assemble the OrcSpec: variants with guards and templates, pattern
    instances folded in iteration order, and the decorated max-size tree."""
    variants = variants_from_grid(grid)
    instances: list[PatternInstance] = []
    for edge in iteration_order(grid):
        if edge.status != TRANSITION:
            continue
        frm, to = edge.from_size, edge.to_size
        ctx = ChangeContext(
            edge=edge, larger_tree=grid.tree(frm), smaller_tree=grid.tree(to),
            larger_size=frm, smaller_size=to,
            transition_position=_edge_position(edge))
        instances.extend(match_change_set(ctx))
    merged = _merge_instances(instances)
    for inst in merged:
        inst.guard = _instance_guard(inst, variants)

    root = orc_from_layout(grid.tree(grid.max_size)) if grid.max_size in grid.samples \
        else orc_from_layout(grid.tree(max(grid.samples)))
    for inst in merged:
        root = _decorate(root, inst)

    return OrcSpec(root=root, variants=variants,
                   patterns=[inst.to_dict() for inst in merged],
                   min_size=grid.min_size, max_size=grid.max_size)


def _edge_position(edge: Edge) -> dict:
    pos = {}
    if edge.from_size[0] != edge.to_size[0]:
        pos["w"] = (edge.to_size[0], edge.from_size[0])
    if edge.from_size[1] != edge.to_size[1]:
        pos["h"] = (edge.to_size[1], edge.from_size[1])
    return pos
