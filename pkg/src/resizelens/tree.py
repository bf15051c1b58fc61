"""Layout trees: hashed Row/Column hierarchies plus edit-script application.

Node kinds:

* ``widget`` -- leaf carrying a widget id,
* ``row`` / ``column`` -- internal containers (children side by side / stacked),
* ``region`` -- opaque leaf group for layouts that no divider can cut
  (pinwheels); it carries its widget ids and behaves as a leaf.

Hash codes follow a weighted-sum scheme over a 64-bit FNV-1a base hash:
``hash_code`` of a leaf is ``H(id)``; of an internal node it is
``H(kind) + 1*c1.hash + 2*c2.hash + ...`` with wrapping arithmetic, so it is
sensitive to child order and node kind.  ``child_hash_code`` is the XOR of the
children's hash codes, so it survives reordering and Row<->Column retyping.
Hash equality is only ever a pre-filter; structural checks decide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator

MASK64 = (1 << 64) - 1

WIDGET = "widget"
ROW = "row"
COLUMN = "column"
REGION = "region"

_KIND_LABEL = {ROW: "Row", COLUMN: "Column", WIDGET: "Widget", REGION: "TabstopRegion"}
_LABEL_KIND = {v: k for k, v in _KIND_LABEL.items()}

Rect = tuple[int, int, int, int]
Path = tuple[int, ...]


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & MASK64
    return h


def _hash_str(s: str) -> int:
    return fnv1a64(s.encode("utf-8"))


class InvalidPath(ValueError):
    """An edit step addressed a nonexistent node; reported with step index."""


@dataclass(frozen=True)
class LayoutNode:
    kind: str
    widget_id: str | None = None
    children: tuple["LayoutNode", ...] = ()
    region_ids: tuple[str, ...] = ()
    geometry: Rect | None = None
    hash_code: int = 0
    child_hash_code: int = 0
    leaves: tuple[str, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.kind in (WIDGET, REGION)

    def label(self) -> str:
        if self.kind == WIDGET:
            return self.widget_id or ""
        return _KIND_LABEL[self.kind]


def widget_leaf(widget_id: str, geometry: Rect | None = None) -> LayoutNode:
    h = _hash_str(widget_id)
    return LayoutNode(kind=WIDGET, widget_id=widget_id, geometry=geometry,
                      hash_code=h, child_hash_code=h, leaves=(widget_id,))


def region_leaf(widget_ids: tuple[str, ...], geometry: Rect | None = None) -> LayoutNode:
    ids = tuple(widget_ids)
    h = _hash_str(_KIND_LABEL[REGION] + ":" + ",".join(sorted(ids)))
    return LayoutNode(kind=REGION, region_ids=ids, geometry=geometry,
                      hash_code=h, child_hash_code=h, leaves=ids)


def container(kind: str, children: list[LayoutNode] | tuple[LayoutNode, ...],
              geometry: Rect | None = None) -> LayoutNode:
    if kind not in (ROW, COLUMN):
        raise ValueError(f"container kind must be row/column, got {kind!r}")
    kids = tuple(children)
    h = _hash_str(_KIND_LABEL[kind])
    child_xor = 0
    leaves: list[str] = []
    for i, c in enumerate(kids, start=1):
        h = (h + i * c.hash_code) & MASK64
        child_xor ^= c.hash_code
        leaves.extend(c.leaves)
    return LayoutNode(kind=kind, children=kids, geometry=geometry,
                      hash_code=h, child_hash_code=child_xor, leaves=tuple(leaves))


def compute_hashes(node: LayoutNode) -> LayoutNode:
    """Rebuild a node bottom-up so all hash/leaf caches satisfy the formulas."""
    if node.kind == WIDGET:
        return widget_leaf(node.widget_id or "", node.geometry)
    if node.kind == REGION:
        return region_leaf(node.region_ids, node.geometry)
    return container(node.kind, [compute_hashes(c) for c in node.children], node.geometry)


def iter_nodes(root: LayoutNode) -> Iterator[tuple[Path, LayoutNode]]:
    """Preorder traversal yielding (path, node)."""
    stack: list[tuple[Path, LayoutNode]] = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((path + (i,), node.children[i]))


def node_at(root: LayoutNode, path: Path) -> LayoutNode:
    node = root
    for idx in path:
        if idx < 0 or idx >= len(node.children):
            raise InvalidPath(f"no child {idx} under {node.label()!r}")
        node = node.children[idx]
    return node


def node_count(root: LayoutNode) -> int:
    return sum(1 for _ in iter_nodes(root))


def isomorphic(a: LayoutNode, b: LayoutNode) -> bool:
    """Structural equality ignoring geometry; hashes are only a pre-filter."""
    if a.hash_code != b.hash_code:
        return False
    if a.kind != b.kind or len(a.children) != len(b.children):
        return False
    if a.kind == WIDGET:
        return a.widget_id == b.widget_id
    if a.kind == REGION:
        return sorted(a.region_ids) == sorted(b.region_ids)
    return all(isomorphic(x, y) for x, y in zip(a.children, b.children))


class TreeIndex:
    """hash_code -> nodes and child_hash_code -> nodes multimaps for one tree.

    Candidate lists are in preorder, so "first candidate" is the leftmost
    occurrence.  Paths are derived on demand from the parent links.
    """

    def __init__(self, root: LayoutNode):
        self.root = root
        self.hash_map: dict[int, list[LayoutNode]] = {}
        self.child_hash_map: dict[int, list[LayoutNode]] = {}
        self.parent_of: dict[int, LayoutNode | None] = {id(root): None}
        self.node_of: dict[int, LayoutNode] = {id(root): root}
        stack = [root]
        while stack:
            node = stack.pop()
            self.hash_map.setdefault(node.hash_code, []).append(node)
            self.child_hash_map.setdefault(node.child_hash_code, []).append(node)
            for i in range(len(node.children) - 1, -1, -1):
                child = node.children[i]
                self.parent_of[id(child)] = node
                self.node_of[id(child)] = child
                stack.append(child)

    def path(self, node: LayoutNode) -> Path:
        out: list[int] = []
        current = node
        while True:
            parent = self.parent_of[id(current)]
            if parent is None:
                break
            for i, child in enumerate(parent.children):
                if child is current:
                    out.append(i)
                    break
            current = parent
        return tuple(reversed(out))

    def parent(self, node: LayoutNode) -> LayoutNode | None:
        return self.parent_of[id(node)]


# --- serialization -----------------------------------------------------------

def tree_to_dict(node: LayoutNode) -> dict:
    if node.kind == WIDGET:
        return {"kind": "Widget", "id": node.widget_id}
    if node.kind == REGION:
        return {"kind": "TabstopRegion", "ids": list(node.region_ids)}
    return {"kind": _KIND_LABEL[node.kind], "children": [tree_to_dict(c) for c in node.children]}


def tree_from_dict(doc: dict) -> LayoutNode:
    kind = _LABEL_KIND.get(doc.get("kind", ""))
    if kind is None:
        raise ValueError(f"unknown node kind {doc.get('kind')!r}")
    if kind == WIDGET:
        return widget_leaf(doc["id"])
    if kind == REGION:
        return region_leaf(tuple(doc["ids"]))
    return container(kind, [tree_from_dict(c) for c in doc.get("children", [])])


def dump_tree(node: LayoutNode) -> bytes:
    return json.dumps(tree_to_dict(node), sort_keys=True, indent=1).encode("utf-8")


def load_tree(raw: bytes | str) -> LayoutNode:
    return tree_from_dict(json.loads(raw))


def format_tree(node: LayoutNode, indent: int = 0) -> str:
    pad = "  " * indent
    if node.kind == WIDGET:
        return f"{pad}{node.widget_id}"
    if node.kind == REGION:
        return f"{pad}TabstopRegion[{', '.join(node.region_ids)}]"
    lines = [f"{pad}{_KIND_LABEL[node.kind]}"]
    lines += [format_tree(c, indent + 1) for c in node.children]
    return "\n".join(lines)


# --- edit operations ----------------------------------------------------------

ADD_NODE = "addNode"
REMOVE_NODE = "removeNode"
MOVE_NODE = "moveNode"
REPLACE_NODE = "replaceNode"
CHANGE_TYPE = "changeType"
CHANGE_CHILDREN_ORDER = "changeChildrenOrder"

_CONTAINER_KINDS = {"Row": ROW, "Column": COLUMN}


@dataclass(frozen=True)
class EditOp:
    """One edit step.  Field presence depends on kind:

    * addNode: target_path + payload (payload may be a childless container),
    * removeNode: source_path,
    * moveNode: source_path + target_path (target evaluated after detach),
    * replaceNode: source_path + payload,
    * changeType: source_path + to_type ("Row"/"Column"),
    * changeChildrenOrder: source_path + to_order (permutation of child
      indices: new child k is old child to_order[k]).
    """

    kind: str
    source_path: Path | None = None
    target_path: Path | None = None
    to_type: str | None = None
    to_order: tuple[int, ...] | None = None
    payload: dict | None = None

    def to_dict(self) -> dict:
        doc: dict = {"op": self.kind}
        if self.source_path is not None:
            doc["source_path"] = list(self.source_path)
        if self.target_path is not None:
            doc["target_path"] = list(self.target_path)
        if self.to_type is not None:
            doc["to_type"] = self.to_type
        if self.to_order is not None:
            doc["to_order"] = list(self.to_order)
        if self.payload is not None:
            doc["payload"] = self.payload
        return doc

    @staticmethod
    def from_dict(doc: dict) -> "EditOp":
        return EditOp(
            kind=doc["op"],
            source_path=tuple(doc["source_path"]) if "source_path" in doc else None,
            target_path=tuple(doc["target_path"]) if "target_path" in doc else None,
            to_type=doc.get("to_type"),
            to_order=tuple(doc["to_order"]) if "to_order" in doc else None,
            payload=doc.get("payload"),
        )


@dataclass(frozen=True)
class EditScript:
    ops: tuple[EditOp, ...] = ()

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def to_dict(self) -> dict:
        return {"ops": [op.to_dict() for op in self.ops]}

    @staticmethod
    def from_dict(doc: dict) -> "EditScript":
        return EditScript(ops=tuple(EditOp.from_dict(d) for d in doc.get("ops", [])))

    def dump(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1).encode("utf-8")

    @staticmethod
    def load(raw: bytes | str) -> "EditScript":
        return EditScript.from_dict(json.loads(raw))


class _MutNode:
    __slots__ = ("kind", "widget_id", "region_ids", "children")

    def __init__(self, kind: str, widget_id: str | None = None,
                 region_ids: tuple[str, ...] = (), children: list["_MutNode"] | None = None):
        self.kind = kind
        self.widget_id = widget_id
        self.region_ids = region_ids
        self.children = children if children is not None else []


def _thaw(node: LayoutNode) -> _MutNode:
    return _MutNode(node.kind, node.widget_id, node.region_ids,
                    [_thaw(c) for c in node.children])


def _freeze(node: _MutNode) -> LayoutNode:
    if node.kind == WIDGET:
        return widget_leaf(node.widget_id or "")
    if node.kind == REGION:
        return region_leaf(node.region_ids)
    return container(node.kind, [_freeze(c) for c in node.children])


def _mut_at(root: _MutNode, path: Path, step: int) -> _MutNode:
    node = root
    for idx in path:
        if idx < 0 or idx >= len(node.children):
            raise InvalidPath(f"step {step}: path {list(path)} does not exist")
        node = node.children[idx]
    return node


def apply_edits(root: LayoutNode, script: EditScript) -> LayoutNode:
    """Apply a script strictly in order and return the transformed tree.

    Each step addresses the tree as left by the previous step.  addNode may
    create an empty container that later moveNode steps populate.  Raises
    InvalidPath with the offending step index.
    """
    work = _thaw(root)
    for step, op in enumerate(script):
        if op.kind == REMOVE_NODE:
            if not op.source_path:
                raise InvalidPath(f"step {step}: cannot remove the root")
            parent = _mut_at(work, op.source_path[:-1], step)
            idx = op.source_path[-1]
            if idx >= len(parent.children):
                raise InvalidPath(f"step {step}: path {list(op.source_path)} does not exist")
            del parent.children[idx]
        elif op.kind == ADD_NODE:
            if op.target_path is None or op.payload is None:
                raise InvalidPath(f"step {step}: addNode needs target_path and payload")
            new = _thaw(tree_from_dict(op.payload))
            if not op.target_path:
                raise InvalidPath(f"step {step}: addNode cannot replace the root")
            parent = _mut_at(work, op.target_path[:-1], step)
            idx = op.target_path[-1]
            if idx > len(parent.children):
                raise InvalidPath(f"step {step}: insert index {idx} out of range")
            parent.children.insert(idx, new)
        elif op.kind == MOVE_NODE:
            if not op.source_path or op.target_path is None or not op.target_path:
                raise InvalidPath(f"step {step}: moveNode needs source_path and target_path")
            src_parent = _mut_at(work, op.source_path[:-1], step)
            sidx = op.source_path[-1]
            if sidx >= len(src_parent.children):
                raise InvalidPath(f"step {step}: path {list(op.source_path)} does not exist")
            moved = src_parent.children.pop(sidx)
            tgt_parent = _mut_at(work, op.target_path[:-1], step)
            tidx = op.target_path[-1]
            if tidx > len(tgt_parent.children):
                raise InvalidPath(f"step {step}: insert index {tidx} out of range")
            tgt_parent.children.insert(tidx, moved)
        elif op.kind == REPLACE_NODE:
            if op.source_path is None or op.payload is None:
                raise InvalidPath(f"step {step}: replaceNode needs source_path and payload")
            new = _thaw(tree_from_dict(op.payload))
            if not op.source_path:
                work = new
            else:
                parent = _mut_at(work, op.source_path[:-1], step)
                idx = op.source_path[-1]
                if idx >= len(parent.children):
                    raise InvalidPath(f"step {step}: path {list(op.source_path)} does not exist")
                parent.children[idx] = new
        elif op.kind == CHANGE_TYPE:
            if op.source_path is None or op.to_type not in _CONTAINER_KINDS:
                raise InvalidPath(f"step {step}: changeType needs source_path and Row/Column to_type")
            node = _mut_at(work, op.source_path, step)
            if node.kind not in (ROW, COLUMN):
                raise InvalidPath(f"step {step}: changeType target is not a container")
            node.kind = _CONTAINER_KINDS[op.to_type]
        elif op.kind == CHANGE_CHILDREN_ORDER:
            if op.source_path is None or op.to_order is None:
                raise InvalidPath(f"step {step}: changeChildrenOrder needs source_path and to_order")
            node = _mut_at(work, op.source_path, step)
            if sorted(op.to_order) != list(range(len(node.children))):
                raise InvalidPath(f"step {step}: to_order is not a permutation of child indices")
            node.children = [node.children[i] for i in op.to_order]
        else:
            raise InvalidPath(f"step {step}: unknown op kind {op.kind!r}")
    return _freeze(work)
