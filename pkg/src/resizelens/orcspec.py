"""The OR-constraint layout specification: AST, file format, exporter, renderer.

An OrcSpec couples three things:

* ``root`` -- the pattern-annotated layout AST (Row/Column structure decorated
  with flow, optional, alternative, pivot, order and raw-OR nodes);
* ``variants`` -- every observed structure class, each with a guard region
  (the set of sizes where it governs, a union of integer rectangles in size
  space) and per-sampled-size templates of widget rectangles;
* ``patterns`` -- the inferred pattern instances, kept as plain dicts (the
  file format is the source of truth).

Rendering is deterministic: pick the variant whose guard contains the query
size (falling back to the nearest guard by L-infinity distance, ties to the
first variant), then bilinearly interpolate every widget boundary between the
variant's sampled corner sizes.  At a sampled size this reproduces the stored
template exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .geometry import ParseError, Size, SizeOutOfRange, Widget, WidgetSnapshot
from .tree import COLUMN, ROW, LayoutNode, tree_from_dict, tree_to_dict

Rect = tuple[int, int, int, int]           # widget rect: left, top, right, bottom
GuardRect = tuple[int, int, int, int]      # size-space rect: w_lo, h_lo, w_hi, h_hi (inclusive)

W_WIDGET = "Widget"
W_ROW = "Row"
W_COLUMN = "Column"
W_HFLOW = "HFlow"
W_VFLOW = "VFlow"
W_OPTIONAL = "Optional"
W_ALT = "Alt"
W_PIVOT = "Pivot"
W_ALTORDER = "AltOrder"
W_OR = "Or"
W_REGION = "TabstopRegion"

_CONTAINER_KINDS = {W_ROW, W_COLUMN, W_HFLOW, W_VFLOW}


@dataclass(frozen=True)
class OrcNode:
    kind: str
    widget_id: str | None = None
    children: tuple["OrcNode", ...] = ()
    penalty: int | None = None                      # Optional
    orders: tuple[tuple[str, ...], ...] = ()        # AltOrder: leaf-id orders
    region_ids: tuple[str, ...] = ()                # TabstopRegion

    def leaf_ids(self) -> frozenset[str]:
        if self.kind == W_WIDGET:
            return frozenset((self.widget_id,))
        if self.kind == W_REGION:
            return frozenset(self.region_ids)
        out: set[str] = set()
        for c in self.children:
            out |= c.leaf_ids()
        return frozenset(out)


def orc_widget(widget_id: str) -> OrcNode:
    return OrcNode(W_WIDGET, widget_id=widget_id)


def orc_container(kind: str, children: Iterable[OrcNode]) -> OrcNode:
    return OrcNode(kind, children=tuple(children))


def orc_from_layout(node: LayoutNode) -> OrcNode:
    if node.kind == "widget":
        return orc_widget(node.widget_id or "")
    if node.kind == "region":
        return OrcNode(W_REGION, region_ids=node.region_ids)
    kind = W_ROW if node.kind == ROW else W_COLUMN
    return OrcNode(kind, children=tuple(orc_from_layout(c) for c in node.children))


def orc_to_dict(node: OrcNode) -> dict:
    if node.kind == W_WIDGET:
        return {"kind": W_WIDGET, "id": node.widget_id}
    if node.kind == W_REGION:
        return {"kind": W_REGION, "ids": list(node.region_ids)}
    doc: dict = {"kind": node.kind}
    if node.kind == W_OPTIONAL:
        doc["child"] = orc_to_dict(node.children[0])
        doc["penalty"] = node.penalty
    elif node.kind in (W_ALT, W_OR):
        doc["branches"] = [orc_to_dict(c) for c in node.children]
    elif node.kind == W_PIVOT:
        doc["child"] = orc_to_dict(node.children[0])
    elif node.kind == W_ALTORDER:
        doc["child"] = orc_to_dict(node.children[0])
        doc["orders"] = [list(o) for o in node.orders]
    else:
        doc["children"] = [orc_to_dict(c) for c in node.children]
    return doc


def orc_from_dict(doc: dict) -> OrcNode:
    kind = doc.get("kind")
    if kind == W_WIDGET:
        return orc_widget(doc["id"])
    if kind == W_REGION:
        return OrcNode(W_REGION, region_ids=tuple(doc["ids"]))
    if kind == W_OPTIONAL:
        return OrcNode(W_OPTIONAL, children=(orc_from_dict(doc["child"]),),
                       penalty=doc.get("penalty"))
    if kind in (W_ALT, W_OR):
        return OrcNode(kind, children=tuple(orc_from_dict(b) for b in doc["branches"]))
    if kind == W_PIVOT:
        return OrcNode(W_PIVOT, children=(orc_from_dict(doc["child"]),))
    if kind == W_ALTORDER:
        return OrcNode(W_ALTORDER, children=(orc_from_dict(doc["child"]),),
                       orders=tuple(tuple(o) for o in doc.get("orders", [])))
    if kind in _CONTAINER_KINDS:
        return OrcNode(kind, children=tuple(orc_from_dict(c) for c in doc.get("children", [])))
    raise ParseError(f"unknown OrcNode kind {kind!r}")


@dataclass
class Variant:
    """One observed structure class with its guard and geometry templates."""

    vid: str
    tree: LayoutNode
    guard: list[GuardRect] = field(default_factory=list)
    templates: dict[Size, dict[str, Rect]] = field(default_factory=dict)

    def widget_ids(self) -> list[str]:
        first = self.templates[min(self.templates)]
        return sorted(first)


@dataclass
class OrcSpec:
    root: OrcNode
    variants: list[Variant]
    patterns: list[dict] = field(default_factory=list)
    min_size: Size = (1, 1)
    max_size: Size = (1, 1)

    @property
    def guards(self) -> dict[str, list[GuardRect]]:
        return {v.vid: list(v.guard) for v in self.variants}

    def variant_at(self, w: int, h: int) -> Variant:
        for v in self.variants:
            for (wlo, hlo, whi, hhi) in v.guard:
                if wlo <= w <= whi and hlo <= h <= hhi:
                    return v
        # Fallback for hand-edited specs with guard gaps: nearest by L-inf.
        best: tuple[int, int, Variant] | None = None
        for i, v in enumerate(self.variants):
            for (wlo, hlo, whi, hhi) in v.guard:
                dw = max(wlo - w, 0, w - whi)
                dh = max(hlo - h, 0, h - hhi)
                d = max(dw, dh)
                if best is None or (d, i) < (best[0], best[1]):
                    best = (d, i, v)
        if best is None:
            raise SizeOutOfRange("spec has no guard regions")
        return best[2]


def _bracket(value: int, coords: list[int]) -> tuple[int, int]:
    if value <= coords[0]:
        return coords[0], coords[0]
    if value >= coords[-1]:
        return coords[-1], coords[-1]
    for lo, hi in zip(coords, coords[1:]):
        if lo <= value <= hi:
            return (lo, lo) if value == lo else ((hi, hi) if value == hi else (lo, hi))
    return coords[-1], coords[-1]


def _template_at(variant: Variant, size: Size) -> dict[str, Rect]:
    if size in variant.templates:
        return variant.templates[size]
    # Missing lattice corner of an irregular grid: nearest sampled size.
    best = min(variant.templates,
               key=lambda s: (max(abs(s[0] - size[0]), abs(s[1] - size[1])), s))
    return variant.templates[best]


def _round_half_up(x: float) -> int:
    import math
    return math.floor(x + 0.5)


def render(spec: OrcSpec, w: int, h: int) -> WidgetSnapshot:
    """Instantiate the spec at (w, h); exact at every templated size."""
    if not (spec.min_size[0] <= w <= spec.max_size[0]
            and spec.min_size[1] <= h <= spec.max_size[1]):
        raise SizeOutOfRange(f"{w}x{h} outside spec envelope {spec.min_size}..{spec.max_size}")
    variant = spec.variant_at(w, h)
    ws = sorted({s[0] for s in variant.templates})
    hs = sorted({s[1] for s in variant.templates})
    w0, w1 = _bracket(w, ws)
    h0, h1 = _bracket(h, hs)
    t = 0.0 if w1 == w0 else (w - w0) / (w1 - w0)
    u = 0.0 if h1 == h0 else (h - h0) / (h1 - h0)
    corners = [(_template_at(variant, (w0, h0)), (1 - t) * (1 - u)),
               (_template_at(variant, (w1, h0)), t * (1 - u)),
               (_template_at(variant, (w0, h1)), (1 - t) * u),
               (_template_at(variant, (w1, h1)), t * u)]
    widgets = []
    for wid in variant.widget_ids():
        sides = [0.0, 0.0, 0.0, 0.0]
        for template, weight in corners:
            rect = template[wid]
            for k in range(4):
                sides[k] += weight * rect[k]
        left, top, right, bottom = (_round_half_up(x) for x in sides)
        widgets.append(Widget(wid, left, top, right - left, bottom - top))
    widgets.sort(key=lambda x: (x.top, x.left, x.id))
    return WidgetSnapshot(window_width=w, window_height=h, widgets=tuple(widgets))


# --- file format ---------------------------------------------------------------

FORMAT_TAG = "resizelens-spec/1"


def spec_to_dict(spec: OrcSpec) -> dict:
    return {
        "format": FORMAT_TAG,
        "min_size": list(spec.min_size),
        "max_size": list(spec.max_size),
        "root": orc_to_dict(spec.root),
        "patterns": spec.patterns,
        "variants": [{
            "id": v.vid,
            "tree": tree_to_dict(v.tree),
            "guard": [list(r) for r in v.guard],
            "templates": {
                f"{s[0]}x{s[1]}": {wid: list(rect) for wid, rect in sorted(tpl.items())}
                for s, tpl in sorted(v.templates.items())
            },
        } for v in spec.variants],
    }


def spec_from_dict(doc: dict) -> OrcSpec:
    if doc.get("format") != FORMAT_TAG:
        raise ParseError(f"not a {FORMAT_TAG} document")
    variants = []
    for vdoc in doc["variants"]:
        templates: dict[Size, dict[str, Rect]] = {}
        for key, tpl in vdoc["templates"].items():
            w, h = key.split("x")
            templates[(int(w), int(h))] = {wid: tuple(rect) for wid, rect in tpl.items()}
        variants.append(Variant(
            vid=vdoc["id"], tree=tree_from_dict(vdoc["tree"]),
            guard=[tuple(r) for r in vdoc["guard"]], templates=templates))
    return OrcSpec(
        root=orc_from_dict(doc["root"]),
        variants=variants,
        patterns=list(doc.get("patterns", [])),
        min_size=tuple(doc["min_size"]),
        max_size=tuple(doc["max_size"]),
    )


def serialize(spec: OrcSpec) -> bytes:
    return json.dumps(spec_to_dict(spec), sort_keys=True, indent=1).encode("utf-8")


def deserialize(raw: bytes | str) -> OrcSpec:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed spec document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("spec document must be a JSON object")
    try:
        return spec_from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed spec document: {exc}") from exc


# --- ORC-API-style exporter -----------------------------------------------------

class _Exporter:
    def __init__(self) -> None:
        self.defs: list[str] = []
        self.post: list[str] = []
        self.counters: dict[str, int] = {}

    def fresh(self, prefix: str) -> str:
        self.counters[prefix] = self.counters.get(prefix, 0) + 1
        return f"{prefix}{self.counters[prefix]}"

    def expr(self, node: OrcNode) -> str:
        if node.kind == W_WIDGET:
            return node.widget_id or "widget"
        if node.kind == W_REGION:
            name = self.fresh("TS")
            self.defs.append(f'{name} = TabstopRegion("{name}", [{", ".join(node.region_ids)}])')
            return name
        if node.kind in (W_ROW, W_COLUMN):
            name = self.fresh("R" if node.kind == W_ROW else "C")
            ctor = "Row" if node.kind == W_ROW else "Column"
            return f'{ctor}("{name}", [{", ".join(self.expr(c) for c in node.children)}])'
        if node.kind in (W_HFLOW, W_VFLOW):
            name = self.fresh("HF" if node.kind == W_HFLOW else "VF")
            ctor = "HorizontalFlow" if node.kind == W_HFLOW else "VerticalFlow"
            self.defs.append(f'{name} = {ctor}("{name}", '
                             f'[{", ".join(self.expr(c) for c in node.children)}])')
            return name
        if node.kind == W_OPTIONAL:
            inner = self.expr(node.children[0])
            target = inner if node.children[0].kind == W_WIDGET else self._named(inner)
            self.post.append(f"{target}.set_optional()")
            if node.penalty is not None:
                self.post.append(f"{target}.set_weight({node.penalty})")
            return inner
        if node.kind == W_ALT:
            name = self.fresh("ALT")
            self.defs.append(f'{name} = Alternative("{name}", '
                             f'{", ".join(self.expr(b) for b in node.children)})')
            return name
        if node.kind == W_PIVOT:
            name = self.fresh("P")
            self.defs.append(f'{name} = Pivot("{name}", {self.expr(node.children[0])})')
            return name
        if node.kind == W_ALTORDER:
            name = self.fresh("AO")
            orders = ", ".join("[" + ", ".join(o) + "]" for o in node.orders)
            self.defs.append(f'{name} = AlternativeOrder("{name}", '
                             f'{self.expr(node.children[0])}, {orders})')
            return name
        if node.kind == W_OR:
            name = self.fresh("OR")
            self.defs.append(f'{name} = Or("{name}", '
                             f'{", ".join(self.expr(b) for b in node.children)})')
            return name
        raise ValueError(f"cannot export node kind {node.kind!r}")

    def _named(self, expr: str) -> str:
        if "(" not in expr:
            return expr
        name = self.fresh("G")
        self.defs.append(f"{name} = {expr}")
        return name


def export_orc_script(spec: OrcSpec) -> str:
    """Human-readable constructor-call listing, one statement per pattern."""
    ex = _Exporter()
    root_expr = ex.expr(spec.root)
    lines = ex.defs + [f"layout = {root_expr}"] + ex.post
    return "\n".join(lines) + "\n"
