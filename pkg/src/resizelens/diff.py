"""Edit-script generation between two layout trees.

Matching runs over corresponding sibling lists, recursively:

1. identical nodes: whole-subtree hash lookup against the other tree; a hit
   outside the current sibling list means the node moved;
2. similar nodes: child-hash lookup finds internal nodes whose child multiset
   is unchanged, so only their type or child order differs;
3. greedy similarity pairing of the remaining internal nodes by largest
   number of common leaves, recursing into the paired children;
4. unwrap: an unpaired internal node on the new side whose leaves all exist in
   the old tree is materialized as an empty container that moves populate
   (symmetrically, a dissolved container is removed only after its children
   moved away);
5. unpaired nodes with the same number of paired siblings before them pair as
   replacements;
6. whatever is left is removed/added wholesale.

The script is emitted by replaying the plan on a working copy, so every path
is valid at its step and application is verified against the target tree.
Scripts are correct by application, not minimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tree import (ADD_NODE, CHANGE_CHILDREN_ORDER, CHANGE_TYPE, COLUMN,
                   MOVE_NODE, REMOVE_NODE, REPLACE_NODE, ROW, EditOp,
                   EditScript, LayoutNode, Path, TreeIndex, apply_edits,
                   isomorphic, tree_to_dict)

_TYPE_LABEL = {ROW: "Row", COLUMN: "Column"}


class DiffError(RuntimeError):
    """Internal consistency failure: the generated script did not reach t2."""


def common_leaves(a: LayoutNode, b: LayoutNode) -> int:
    return len(frozenset(a.leaves) & frozenset(b.leaves))


@dataclass
class MovePlan:
    n1: LayoutNode
    n2: LayoutNode
    src_parent: LayoutNode | None
    src_index: int
    dst_parent: LayoutNode | None
    dst_index: int


@dataclass
class ReorderPlan:
    n1: LayoutNode
    n2: LayoutNode
    from_leaves: list[list[str]]
    to_leaves: list[list[str]]


@dataclass
class DiffPlan:
    """Semantic view of a diff, used by pattern matching.

    Node references are into the two input trees (t1 for removals/retypes,
    t2 for additions); `*_container` entries are bookkeeping-only ops whose
    contents are covered by moves.
    """

    moves: list[MovePlan] = field(default_factory=list)
    removals_full: list[LayoutNode] = field(default_factory=list)
    removals_container: list[LayoutNode] = field(default_factory=list)
    adds_payload: list[LayoutNode] = field(default_factory=list)
    adds_container: list[LayoutNode] = field(default_factory=list)
    replaces: list[tuple[LayoutNode, LayoutNode]] = field(default_factory=list)
    retypes: list[tuple[LayoutNode, LayoutNode]] = field(default_factory=list)
    reorders: list[ReorderPlan] = field(default_factory=list)
    pairs: list[tuple[LayoutNode, LayoutNode]] = field(default_factory=list)

    def pair2_of(self, n1_or_n2: LayoutNode) -> LayoutNode | None:
        for n1, n2 in self.pairs:
            if n1 is n1_or_n2:
                return n2
        return None

    def op_count(self) -> int:
        return (len(self.moves) + len(self.removals_full) + len(self.removals_container)
                + len(self.adds_payload) + len(self.adds_container)
                + len(self.replaces) + len(self.retypes) + len(self.reorders))


class _Matcher:
    def __init__(self, t1: LayoutNode, t2: LayoutNode):
        self.t1 = t1
        self.t2 = t2
        self.idx1 = TreeIndex(t1)
        self.idx2 = TreeIndex(t2)
        self.claimed1: set[int] = set()
        self.claimed2: set[int] = set()
        self.pair_of2: dict[int, LayoutNode] = {}  # id(n2) -> n1
        self.plan = DiffPlan()
        self.t1_leaf_ids = frozenset(t1.leaves)
        self.t2_leaf_ids = frozenset(t2.leaves)
        # t1 leftovers whose twin still exists unclaimed in t2: removal is
        # deferred so a later sibling list can claim them as moves instead.
        self.deferred1: list[LayoutNode] = []

    # -- claiming ------------------------------------------------------------

    def _claim_subtree(self, node: LayoutNode, claimed: set[int]) -> None:
        stack = [node]
        while stack:
            n = stack.pop()
            claimed.add(id(n))
            stack.extend(n.children)

    def _subtree_unclaimed(self, node: LayoutNode, claimed: set[int]) -> bool:
        stack = [node]
        while stack:
            n = stack.pop()
            if id(n) in claimed:
                return False
            stack.extend(n.children)
        return True

    # -- pairing helpers -------------------------------------------------------

    def _register_pair(self, s1: LayoutNode, s2: LayoutNode, stable: bool) -> None:
        self.pair_of2[id(s2)] = s1
        self.plan.pairs.append((s1, s2))
        if not stable:
            parent1 = self.idx1.parent(s1)
            parent2 = self.idx2.parent(s2)
            p1 = self.idx1.path(s1)
            p2 = self.idx2.path(s2)
            self.plan.moves.append(MovePlan(
                n1=s1, n2=s2,
                src_parent=parent1, src_index=p1[-1] if p1 else 0,
                dst_parent=parent2, dst_index=p2[-1] if p2 else 0))

    def _match_children_of_similar(self, s1: LayoutNode, s2: LayoutNode) -> None:
        # Same child multiset; align children order-preservingly by hash so the
        # emission phase knows each child's final rank.
        remaining = list(s2.children)
        for c1 in s1.children:
            for k, c2 in enumerate(remaining):
                if c1.hash_code == c2.hash_code and isomorphic(c1, c2):
                    self.pair_of2[id(c2)] = c1
                    self.plan.pairs.append((c1, c2))
                    del remaining[k]
                    break

    def _children_multiset_equal(self, a: LayoutNode, b: LayoutNode) -> bool:
        if len(a.children) != len(b.children):
            return False
        remaining = list(b.children)
        for c1 in a.children:
            for k, c2 in enumerate(remaining):
                if c1.hash_code == c2.hash_code and isomorphic(c1, c2):
                    del remaining[k]
                    break
            else:
                return False
        return True

    # -- the sibling-list recursion ---------------------------------------------

    def match_lists(self, S1: list[LayoutNode], S2: list[LayoutNode]) -> None:
        s1_orig = {id(n) for n in S1}
        s2_orig = {id(n) for n in S2}
        S1Curr = [n for n in S1 if id(n) not in self.claimed1]
        S2Curr = [n for n in S2 if id(n) not in self.claimed2]

        progress = True
        while progress:
            progress = False
            progress |= self._step_identical(S1Curr, S2Curr, s1_orig, s2_orig)
            progress |= self._step_similar(S1Curr, S2Curr, s1_orig, s2_orig)
            progress |= self._step_similarity_pairing(S1Curr, S2Curr, s1_orig, s2_orig)
            progress |= self._step_unwrap_add(S2Curr)
            progress |= self._step_unwrap_remove(S1Curr)

        self._step_positional_replace(S1, S2, S1Curr, S2Curr, s1_orig, s2_orig)
        for s1 in list(S1Curr):
            if id(s1) in self.claimed1:
                continue
            twins = [n for n in self.idx2.hash_map.get(s1.hash_code, [])
                     if id(n) not in self.claimed2 and isomorphic(n, s1)]
            if twins:
                self.deferred1.append(s1)
            else:
                self._schedule_removal(s1)
        for s2 in list(S2Curr):
            if id(s2) not in self.claimed2:
                self._schedule_addition(s2)

    def finish(self) -> None:
        """Remove deferred nodes that no later list claimed as a move."""
        for s1 in self.deferred1:
            if id(s1) not in self.claimed1:
                self._schedule_removal(s1)

    def _step_identical(self, S1Curr, S2Curr, s1_orig, s2_orig) -> bool:
        progress = False
        for s2 in list(S2Curr):
            cands = [n for n in self.idx1.hash_map.get(s2.hash_code, [])
                     if id(n) not in self.claimed1 and isomorphic(n, s2)]
            if not cands:
                continue
            in_list = [n for n in S1Curr if any(n is c for c in cands)]
            if not in_list and s2 is self.t2:
                continue  # a move into the root position is inexpressible
            s1 = in_list[0] if in_list else cands[0]
            stable = id(s1) in s1_orig and id(s2) in s2_orig and bool(in_list)
            self._claim_subtree(s1, self.claimed1)
            self._claim_subtree(s2, self.claimed2)
            if any(n is s1 for n in S1Curr):
                S1Curr.remove(s1)
            S2Curr.remove(s2)
            self._register_pair(s1, s2, stable)
            progress = True
        return progress

    def _step_similar(self, S1Curr, S2Curr, s1_orig, s2_orig) -> bool:
        progress = False
        for s2 in list(S2Curr):
            if s2.is_leaf:
                continue
            cands = [n for n in self.idx1.child_hash_map.get(s2.child_hash_code, [])
                     if id(n) not in self.claimed1 and not n.is_leaf
                     and self._children_multiset_equal(n, s2)]
            if not cands:
                continue
            in_list = [n for n in S1Curr if any(n is c for c in cands)]
            if not in_list and s2 is self.t2:
                continue
            s1 = in_list[0] if in_list else cands[0]
            stable = id(s1) in s1_orig and id(s2) in s2_orig and bool(in_list)
            self._claim_subtree(s1, self.claimed1)
            self._claim_subtree(s2, self.claimed2)
            if any(n is s1 for n in S1Curr):
                S1Curr.remove(s1)
            S2Curr.remove(s2)
            self._register_pair(s1, s2, stable)
            if s1.kind != s2.kind:
                self.plan.retypes.append((s1, s2))
            self._match_children_of_similar(s1, s2)
            progress = True
        return progress

    def _step_similarity_pairing(self, S1Curr, S2Curr, s1_orig, s2_orig) -> bool:
        progress = False
        while True:
            best: tuple[int, int, int] | None = None
            best_pair: tuple[LayoutNode, LayoutNode] | None = None
            for pos2, s2 in enumerate(S2Curr):
                if s2.is_leaf:
                    continue
                for pos1, s1 in enumerate(S1Curr):
                    if s1.is_leaf:
                        continue
                    c = common_leaves(s1, s2)
                    if c == 0:
                        continue
                    key = (-c, pos2, pos1)
                    if best is None or key < best:
                        best = key
                        best_pair = (s1, s2)
            if best_pair is None:
                return progress
            s1, s2 = best_pair
            stable = id(s1) in s1_orig and id(s2) in s2_orig
            self.claimed1.add(id(s1))
            self.claimed2.add(id(s2))
            S1Curr.remove(s1)
            S2Curr.remove(s2)
            self._register_pair(s1, s2, stable)
            if s1.kind != s2.kind:
                self.plan.retypes.append((s1, s2))
            self.match_lists(list(s1.children), list(s2.children))
            progress = True

    def _step_unwrap_add(self, S2Curr) -> bool:
        for k, s2 in enumerate(S2Curr):
            if s2.is_leaf or id(s2) in self.claimed2:
                continue
            if not frozenset(s2.leaves) <= self.t1_leaf_ids:
                continue
            self.plan.adds_container.append(s2)
            self.claimed2.add(id(s2))
            S2Curr[k:k + 1] = [c for c in s2.children if id(c) not in self.claimed2]
            return True
        return False

    def _step_unwrap_remove(self, S1Curr) -> bool:
        for k, s1 in enumerate(S1Curr):
            if s1.is_leaf or id(s1) in self.claimed1:
                continue
            if not frozenset(s1.leaves) <= self.t2_leaf_ids:
                continue
            self.plan.removals_container.append(s1)
            self.claimed1.add(id(s1))
            S1Curr[k:k + 1] = [c for c in s1.children if id(c) not in self.claimed1]
            return True
        return False

    def _step_positional_replace(self, S1, S2, S1Curr, S2Curr, s1_orig, s2_orig) -> None:
        def paired_before(nodes, claimed, target):
            count = 0
            for n in nodes:
                if n is target:
                    return count
                if id(n) in claimed:
                    count += 1
            return count

        leftovers2 = [n for n in S2Curr if id(n) in s2_orig]
        for s1 in [n for n in S1Curr if id(n) in s1_orig]:
            if not self._subtree_unclaimed(s1, self.claimed1):
                continue
            b1 = paired_before(S1, self.claimed1, s1)
            for s2 in leftovers2:
                if id(s2) in self.claimed2 or not self._subtree_unclaimed(s2, self.claimed2):
                    continue
                if paired_before(S2, self.claimed2, s2) == b1:
                    self._claim_subtree(s1, self.claimed1)
                    self._claim_subtree(s2, self.claimed2)
                    S1Curr.remove(s1)
                    S2Curr.remove(s2)
                    self.plan.replaces.append((s1, s2))
                    self.pair_of2[id(s2)] = s1
                    break

    def _schedule_removal(self, n1: LayoutNode) -> None:
        if self._subtree_unclaimed(n1, self.claimed1):
            self.plan.removals_full.append(n1)
            self._claim_subtree(n1, self.claimed1)
            return
        self.claimed1.add(id(n1))
        self.plan.removals_container.append(n1)
        for child in n1.children:
            if id(child) not in self.claimed1:
                self._schedule_removal(child)

    def _schedule_addition(self, n2: LayoutNode) -> None:
        if self._subtree_unclaimed(n2, self.claimed2):
            self.plan.adds_payload.append(n2)
            self._claim_subtree(n2, self.claimed2)
            return
        self.claimed2.add(id(n2))
        self.plan.adds_container.append(n2)
        for child in n2.children:
            if id(child) not in self.claimed2:
                self._schedule_addition(child)


# --- script emission -----------------------------------------------------------


class _WNode:
    __slots__ = ("kind", "widget_id", "region_ids", "children", "corr2")

    def __init__(self, kind, widget_id=None, region_ids=(), corr2=None):
        self.kind = kind
        self.widget_id = widget_id
        self.region_ids = region_ids
        self.children: list[_WNode] = []
        self.corr2 = corr2  # id of the corresponding t2 node, when known


class _Emitter:
    def __init__(self, matcher: _Matcher):
        self.m = matcher
        self.plan = matcher.plan
        self.ops: list[EditOp] = []
        self.w_of1: dict[int, _WNode] = {}
        self.w_of2: dict[int, _WNode] = {}
        self.rank2: dict[int, int] = {}
        stack = [matcher.t2]
        while stack:
            node = stack.pop()
            for i, c in enumerate(node.children):
                self.rank2[id(c)] = i
                stack.append(c)
        self.root = self._mirror(matcher.t1)
        for n2_id, n1 in matcher.pair_of2.items():
            w = self.w_of1.get(id(n1))
            if w is not None:
                w.corr2 = n2_id
                self.w_of2[n2_id] = w

    def _mirror(self, node: LayoutNode) -> _WNode:
        w = _WNode(node.kind, node.widget_id, node.region_ids)
        self.w_of1[id(node)] = w
        for c in node.children:
            w.children.append(self._mirror(c))
        return w

    def _path(self, target: _WNode) -> Path:
        out: Path | None = self._find(self.root, target, ())
        if out is None:
            raise DiffError("node vanished from working tree")
        return out

    def _find(self, node: _WNode, target: _WNode, path: Path) -> Path | None:
        if node is target:
            return path
        for i, c in enumerate(node.children):
            hit = self._find(c, target, path + (i,))
            if hit is not None:
                return hit
        return None

    def _rank_of(self, w: _WNode, parent2_id: int) -> int | None:
        if w.corr2 is None:
            return None
        n2 = _node_by_id(self.m.idx2, w.corr2)
        parent2 = self.m.idx2.parent(n2)
        if parent2 is None or id(parent2) != parent2_id:
            return None
        return self.rank2[w.corr2]

    def _insert_index(self, parent_w: _WNode, parent2_id: int, rank: int) -> int:
        idx = 0
        for k, child in enumerate(parent_w.children):
            r = self._rank_of(child, parent2_id)
            if r is not None and r < rank:
                idx = k + 1
        return idx

    def emit(self) -> EditScript:
        m = self.m
        # (a) whole-subtree removals, deepest first
        for n1 in sorted(self.plan.removals_full, key=lambda n: m.idx1.path(n), reverse=True):
            w = self.w_of1[id(n1)]
            path = self._path(w)
            self.ops.append(EditOp(REMOVE_NODE, source_path=path))
            self._detach(w)
        # (b) type changes on paired nodes
        for n1, n2 in self.plan.retypes:
            w = self.w_of1[id(n1)]
            self.ops.append(EditOp(CHANGE_TYPE, source_path=self._path(w),
                                   to_type=_TYPE_LABEL[n2.kind]))
            w.kind = n2.kind
        # (c) empty containers, outermost first
        for n2 in sorted(self.plan.adds_container, key=lambda n: m.idx2.path(n)):
            parent2 = m.idx2.parent(n2)
            if parent2 is None:
                raise DiffError("cannot add a new root container")
            parent_w = self.w_of2[id(parent2)]
            idx = self._insert_index(parent_w, id(parent2), self.rank2[id(n2)])
            w = _WNode(n2.kind, n2.widget_id, n2.region_ids, corr2=id(n2))
            parent_w.children.insert(idx, w)
            self.w_of2[id(n2)] = w
            self.ops.append(EditOp(
                ADD_NODE, target_path=self._path(w),
                payload=tree_to_dict(LayoutNode(kind=n2.kind, widget_id=n2.widget_id,
                                                region_ids=n2.region_ids))))
        # (d) moves, by target position
        for mv in sorted(self.plan.moves, key=lambda mv: m.idx2.path(mv.n2)):
            w = self.w_of1[id(mv.n1)]
            src = self._path(w)
            self._detach(w)
            parent2 = m.idx2.parent(mv.n2)
            if parent2 is None:
                raise DiffError("cannot move a node to the root position")
            parent_w = self.w_of2[id(parent2)]
            idx = self._insert_index(parent_w, id(parent2), self.rank2[id(mv.n2)])
            parent_w.children.insert(idx, w)
            self.ops.append(EditOp(MOVE_NODE, source_path=src, target_path=self._path(w)))
        # (e) dissolved containers, now empty, deepest first
        for n1 in sorted(self.plan.removals_container, key=lambda n: m.idx1.path(n), reverse=True):
            w = self.w_of1[id(n1)]
            self.ops.append(EditOp(REMOVE_NODE, source_path=self._path(w)))
            self._detach(w)
        # (f) child order repair
        self._repair_order(self.root)
        # (g) fresh subtrees
        for n2 in sorted(self.plan.adds_payload, key=lambda n: m.idx2.path(n)):
            parent2 = m.idx2.parent(n2)
            if parent2 is None:
                raise DiffError("cannot add a new root")
            parent_w = self.w_of2[id(parent2)]
            idx = self._insert_index(parent_w, id(parent2), self.rank2[id(n2)])
            w = self._graft(n2)
            parent_w.children.insert(idx, w)
            self.ops.append(EditOp(ADD_NODE, target_path=self._path(w),
                                   payload=tree_to_dict(n2)))
        # (h) replacements in place
        for n1, n2 in self.plan.replaces:
            w = self.w_of1[id(n1)]
            path = self._path(w)
            new = self._graft(n2)
            if path:
                parent = self._wnode_at(path[:-1])
                parent.children[path[-1]] = new
            else:
                self.root = new
            self.ops.append(EditOp(REPLACE_NODE, source_path=path, payload=tree_to_dict(n2)))
        return EditScript(ops=tuple(self.ops))

    def _graft(self, n2: LayoutNode) -> _WNode:
        w = _WNode(n2.kind, n2.widget_id, n2.region_ids, corr2=id(n2))
        self.w_of2[id(n2)] = w
        for c in n2.children:
            w.children.append(self._graft(c))
        return w

    def _wnode_at(self, path: Path) -> _WNode:
        node = self.root
        for i in path:
            node = node.children[i]
        return node

    def _detach(self, w: _WNode) -> None:
        parent = self._parent_of(self.root, w)
        if parent is None:
            raise DiffError("cannot detach the working root")
        parent.children.remove(w)

    def _parent_of(self, node: _WNode, target: _WNode) -> _WNode | None:
        for c in node.children:
            if c is target:
                return node
            hit = self._parent_of(c, target)
            if hit is not None:
                return hit
        return None

    def _repair_order(self, w: _WNode) -> None:
        if len(w.children) >= 2 and w.corr2 is not None:
            ranks = [self._rank_of(c, w.corr2) for c in w.children]
            if all(r is not None for r in ranks) and ranks != sorted(ranks):
                order = tuple(i for _, i in sorted((r, i) for i, r in enumerate(ranks)))
                self.ops.append(EditOp(CHANGE_CHILDREN_ORDER, source_path=self._path(w),
                                       to_order=order))
                before = [sorted(_wleaves(c)) for c in w.children]
                w.children = [w.children[i] for i in order]
                n1 = self.m.pair_of2.get(w.corr2)
                if n1 is not None:
                    n2 = _node_by_id(self.m.idx2, w.corr2)
                    self.plan.reorders.append(ReorderPlan(
                        n1=n1, n2=n2, from_leaves=before,
                        to_leaves=[sorted(_wleaves(c)) for c in w.children]))
        for c in list(w.children):
            self._repair_order(c)


def _wleaves(w: _WNode) -> list[str]:
    if w.kind == "widget":
        return [w.widget_id or ""]
    if w.kind == "region":
        return list(w.region_ids)
    out: list[str] = []
    for c in w.children:
        out.extend(_wleaves(c))
    return out


def _preorder(root: LayoutNode):
    stack = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((path + (i,), node.children[i]))


def _node_by_id(idx: TreeIndex, node_id: int) -> LayoutNode:
    return idx.node_of[node_id]


def _w_equals(w: _WNode, node: LayoutNode) -> bool:
    """Structural equality of the working tree against a hashed tree."""
    if w.kind != node.kind or len(w.children) != len(node.children):
        return False
    if w.kind == "widget":
        return w.widget_id == node.widget_id
    if w.kind == "region":
        return sorted(w.region_ids) == sorted(node.region_ids)
    return all(_w_equals(c, n) for c, n in zip(w.children, node.children))


def diff_with_plan(t1: LayoutNode, t2: LayoutNode) -> tuple[EditScript, DiffPlan]:
    """Diff two trees and return the script plus its semantic plan."""
    if isomorphic(t1, t2):
        return EditScript(), DiffPlan()
    matcher = _Matcher(t1, t2)
    matcher.match_lists([t1], [t2])
    matcher.finish()
    emitter = _Emitter(matcher)
    script = emitter.emit()
    if not _w_equals(emitter.root, t2):
        raise DiffError("diff produced a script that does not transform t1 into t2")
    return script, matcher.plan


def diff(t1: LayoutNode, t2: LayoutNode) -> EditScript:
    """Edit script turning t1 into t2; apply_edits(t1, diff(t1, t2)) ~ t2."""
    script, _ = diff_with_plan(t1, t2)
    return script


def verify_script(t1: LayoutNode, t2: LayoutNode, script: EditScript) -> bool:
    return isomorphic(apply_edits(t1, script), t2)
