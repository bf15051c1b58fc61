"""Snapshot sources: recorded sample sets and synthetic layout engines.

Synthetic oracles are the ground truth for tests and demos.  They implement
greedy first-fit wrapping for flows and fixed window-size thresholds for
optional disappearance, node alternatives, Row<->Column pivoting, and
pathological reordering; `ribbon_composite` nests several of those behaviors
in one toolbar-like layout.  All synthetic oracles are pure: the same size
always yields the same snapshot, and every snapshot they produce is valid.

Config files are JSON: ``{"kind": "hflow", "params": {...}}``.  Parameters
not given fall back to the documented defaults of `builtin_catalog`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .geometry import (SampleSet, Size, SizeOutOfRange, ValidationError,
                       Widget, WidgetSnapshot, sample_set_from_dict,
                       sample_set_to_dict, validate_snapshot)


class MissingSample(LookupError):
    """A recorded oracle was queried at a size it has no snapshot for."""


@dataclass(frozen=True)
class OracleConfig:
    kind: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params}

    @staticmethod
    def from_dict(doc: dict) -> "OracleConfig":
        return OracleConfig(kind=doc["kind"], params=doc.get("params", {}))


class Oracle:
    """A queryable snapshot source over a size envelope."""

    def __init__(self, config: OracleConfig, min_size: Size, max_size: Size,
                 fn: Callable[[int, int], WidgetSnapshot], pure: bool = True,
                 queryable: bool = True):
        self.config = config
        self.min_size = min_size
        self.max_size = max_size
        self._fn = fn
        self.purity = pure
        self.queryable = queryable  # False for recorded sets: only stored keys

    def query(self, w: int, h: int) -> WidgetSnapshot:
        if not (self.min_size[0] <= w <= self.max_size[0]
                and self.min_size[1] <= h <= self.max_size[1]):
            raise SizeOutOfRange(
                f"{w}x{h} outside oracle range {self.min_size}..{self.max_size}")
        snap = self._fn(w, h)
        violations = validate_snapshot(snap)
        if violations:
            raise ValidationError(
                f"oracle {self.config.kind!r} produced an invalid snapshot at {w}x{h}: "
                + "; ".join(str(v) for v in violations))
        return snap


def _snap(w: int, h: int, widgets: list[Widget]) -> WidgetSnapshot:
    return WidgetSnapshot(window_width=w, window_height=h, widgets=tuple(widgets))


def _flow_rows(items: list[tuple[str, int, int]], avail: int, gap: int) -> list[list[tuple[str, int, int]]]:
    rows: list[list[tuple[str, int, int]]] = []
    current: list[tuple[str, int, int]] = []
    used = 0
    for item in items:
        extent = item[1]
        needed = extent if not current else used + gap + extent
        if current and needed > avail:
            rows.append(current)
            current, used = [item], extent
        else:
            current.append(item)
            used = needed
    if current:
        rows.append(current)
    return rows


def _hflow(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    items = [tuple(it) for it in params["items"]]  # (id, width, height)
    gap = params.get("gap", 0)

    def fn(w: int, h: int) -> WidgetSnapshot:
        widgets = []
        y = 0
        for row in _flow_rows(items, w, gap):
            x = 0
            row_h = max(it[2] for it in row)
            for wid, iw, ih in row:
                widgets.append(Widget(wid, x, y, iw, ih))
                x += iw + gap
            y += row_h
        return _snap(w, h, widgets)

    return fn


def _vflow(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    items = [tuple(it) for it in params["items"]]  # (id, height, width)
    gap = params.get("gap", 0)

    def fn(w: int, h: int) -> WidgetSnapshot:
        widgets = []
        x = 0
        for col in _flow_rows(items, h, gap):
            y = 0
            col_w = max(it[2] for it in col)
            for wid, ih, iw in col:
                widgets.append(Widget(wid, x, y, iw, ih))
                y += ih + gap
            x += col_w
        return _snap(w, h, widgets)

    return fn


def _grid(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    rows = params.get("rows", 2)
    cols = params.get("cols", 3)

    def fn(w: int, h: int) -> WidgetSnapshot:
        widgets = []
        for i in range(rows):
            y0, y1 = i * h // rows, (i + 1) * h // rows
            for j in range(cols):
                x0, x1 = j * w // cols, (j + 1) * w // cols
                widgets.append(Widget(f"G{i + 1}{j + 1}", x0, y0, x1 - x0, y1 - y0))
        return _snap(w, h, widgets)

    return fn


def _optional_set(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    visible_min_w = params.get("visible_min_w", 181)

    def fn(w: int, h: int) -> WidgetSnapshot:
        widgets = [Widget("A", 0, 0, 60, 40), Widget("B", 60, 0, 50, 40)]
        if w >= visible_min_w:
            widgets.append(Widget("X", w - 50, 0, 50, 40))
        return _snap(w, h, widgets)

    return fn


def _pivot(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    row_min_w = params.get("row_min_w", 240)

    def fn(w: int, h: int) -> WidgetSnapshot:
        if w >= row_min_w:
            widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 100, 0, 80, 40)]
        else:
            widgets = [Widget("A", 0, 0, 100, 40), Widget("B", 0, 40, 80, 40)]
        return _snap(w, h, widgets)

    return fn


def _alternative(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    expanded_min_w = params.get("expanded_min_w", 300)

    def fn(w: int, h: int) -> WidgetSnapshot:
        widgets = [Widget("A", 0, 0, 60, 40), Widget("B", 60, 0, 50, 40)]
        if w >= expanded_min_w:
            widgets.append(Widget("X_expanded", 110, 0, 120, 40))
        else:
            widgets.append(Widget("X_compact", 110, 0, 70, 40))
        return _snap(w, h, widgets)

    return fn


def _reorder_pathological(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    t1 = params.get("reorder_min_w", 260)   # below this, A/B/C shuffle
    t2 = params.get("restack_min_w", 200)   # below this, they also restack

    def fn(w: int, h: int) -> WidgetSnapshot:
        if w >= t1:
            widgets = [Widget("A", 0, 0, 60, 40), Widget("B", 60, 0, 50, 40),
                       Widget("C", 110, 0, 70, 40)]
        elif w >= t2:
            widgets = [Widget("C", 0, 0, 70, 40), Widget("A", 70, 0, 60, 40),
                       Widget("B", 130, 0, 50, 40)]
        else:
            widgets = [Widget("B", 0, 0, 50, 40), Widget("C", 50, 0, 70, 40),
                       Widget("A", 0, 40, 60, 40)]
        return _snap(w, h, widgets)

    return fn


def _ribbon_composite(params: dict) -> Callable[[int, int], WidgetSnapshot]:
    pane_min_w = params.get("pane_min_w", 380)      # styles pane appears
    expanded_min_w = params.get("expanded_min_w", 300)  # font group expands
    one_row_min_w = params.get("one_row_min_w", 260)    # button flow unwraps

    def fn(w: int, h: int) -> WidgetSnapshot:
        widgets = [Widget("a", 0, 0, 40, 50), Widget("b", 0, 50, 40, 50)]
        if w >= expanded_min_w:
            widgets.append(Widget("font_expanded", 44, 0, 120, 100))
            g3x = 44 + 120 + 4
        else:
            widgets.append(Widget("font_compact", 44, 0, 60, 100))
            g3x = 44 + 60 + 4
        if w >= one_row_min_w:
            widgets += [Widget("f1", g3x, 0, 36, 44), Widget("f2", g3x + 36, 0, 36, 44),
                        Widget("f3", g3x + 72, 0, 36, 44)]
            gallery_y = 44
        else:
            widgets += [Widget("f1", g3x, 0, 36, 44), Widget("f2", g3x + 36, 0, 36, 44),
                        Widget("f3", g3x, 44, 36, 44)]
            gallery_y = 88
        widgets.append(Widget("gallery", g3x, gallery_y, 108, 40))
        if w >= pane_min_w:
            widgets.append(Widget("styles_pane", w - 44, 0, 44, 100))
        return _snap(w, h, widgets)

    return fn


_BUILDERS: dict[str, Callable[[dict], Callable[[int, int], WidgetSnapshot]]] = {
    "hflow": _hflow,
    "vflow": _vflow,
    "grid": _grid,
    "optional_set": _optional_set,
    "pivot": _pivot,
    "alternative": _alternative,
    "reorder_pathological": _reorder_pathological,
    "ribbon_composite": _ribbon_composite,
}

_DEFAULTS: dict[str, dict] = {
    "hflow": {"items": [["A", 100, 40], ["B", 80, 40], ["C", 120, 40]], "gap": 0,
              "min_size": [130, 130], "max_size": [800, 600]},
    "vflow": {"items": [["A", 100, 40], ["B", 80, 40], ["C", 120, 40]], "gap": 0,
              "min_size": [130, 130], "max_size": [600, 800]},
    "grid": {"rows": 2, "cols": 3, "min_size": [60, 40], "max_size": [800, 600]},
    "optional_set": {"visible_min_w": 181, "min_size": [120, 60], "max_size": [600, 400]},
    "pivot": {"row_min_w": 240, "min_size": [110, 90], "max_size": [600, 400]},
    "alternative": {"expanded_min_w": 300, "min_size": [190, 60], "max_size": [600, 400]},
    "reorder_pathological": {"reorder_min_w": 260, "restack_min_w": 200,
                             "min_size": [130, 90], "max_size": [600, 400]},
    "ribbon_composite": {"pane_min_w": 380, "expanded_min_w": 300, "one_row_min_w": 260,
                         "min_size": [220, 130], "max_size": [700, 400]},
}

_RECORDED_DEFAULT = {
    "samples": [
        {"window": {"width": 300, "height": 100},
         "widgets": [{"id": "A", "left": 0, "top": 0, "width": 100, "height": 40},
                     {"id": "B", "left": 100, "top": 0, "width": 80, "height": 40}]},
        {"window": {"width": 200, "height": 100},
         "widgets": [{"id": "A", "left": 0, "top": 0, "width": 100, "height": 40},
                     {"id": "B", "left": 0, "top": 40, "width": 80, "height": 40}]},
    ],
}


def recorded_oracle(sample_set: SampleSet) -> Oracle:
    def fn(w: int, h: int) -> WidgetSnapshot:
        try:
            return sample_set.samples[(w, h)]
        except KeyError:
            raise MissingSample(f"no recorded snapshot at {w}x{h}") from None
    config = OracleConfig(kind="recorded", params=sample_set_to_dict(sample_set))
    return Oracle(config, sample_set.min_size, sample_set.max_size, fn,
                  pure=True, queryable=False)


def make_oracle(config: OracleConfig) -> Oracle:
    if config.kind == "recorded":
        doc = dict(config.params)
        doc.setdefault("samples", _RECORDED_DEFAULT["samples"])
        doc.pop("min_size", None)
        doc.pop("max_size", None)
        return recorded_oracle(sample_set_from_dict(doc))
    if config.kind not in _BUILDERS:
        raise ValueError(f"unknown oracle kind {config.kind!r}")
    params = dict(_DEFAULTS[config.kind])
    params.update(config.params)
    fn = _BUILDERS[config.kind](params)
    return Oracle(OracleConfig(config.kind, params),
                  tuple(params["min_size"]), tuple(params["max_size"]), fn)


def builtin_catalog() -> list[tuple[str, OracleConfig]]:
    """All builtin oracle kinds with their default parameters."""
    catalog = [(kind, OracleConfig(kind, dict(_DEFAULTS[kind]))) for kind in _BUILDERS]
    catalog.append(("recorded", OracleConfig("recorded", dict(_RECORDED_DEFAULT))))
    return catalog


def builtin_oracle(name: str, **overrides) -> Oracle:
    for kind, config in builtin_catalog():
        if kind == name:
            params = dict(config.params)
            params.update(overrides)
            return make_oracle(OracleConfig(kind, params))
    raise ValueError(f"unknown builtin oracle {name!r}")


def load_oracle_config(path: str | Path) -> OracleConfig:
    return OracleConfig.from_dict(json.loads(Path(path).read_text("utf-8")))
