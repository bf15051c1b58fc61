"""Reconstruction-quality scoring and the error-map raster.

Three signals over the size plane:

* structural error -- mean squared displacement of corresponding tabstops
  between the original and the reconstructed snapshot at one size (0 means
  pixel-exact alignment); sampled at the grid points, linearly interpolated
  between them, drawn in shades of yellow;
* transition error -- the gap between the size at which the original and the
  reconstruction change structure, located by bisection to 1 px where the
  source can be queried; green bands mean the original transitions at the
  larger size, blue at the smaller;
* fault lines -- black markers at transitions whose change set contains a
  child reorder or a raw-OR fallback, the paper's signal for confusing
  resize behavior.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Size, SizeOutOfRange, WidgetSnapshot
from .oracles import MissingSample, Oracle
from .orcspec import OrcSpec, render
from .patterns import (ALTERNATIVE_ORDER, OR_FALLBACK, ChangeContext,
                       match_change_set)
from .reconstruct import reconstruct_simplified
from .sampler import Edge, SampleGrid, TRANSITION
from .tabstops import DEFAULT_EPSILON, create_tabstops
from .tree import isomorphic

ORIGINAL_LARGER = "original_larger"    # drawn green
ORIGINAL_SMALLER = "original_smaller"  # drawn blue
BISECTED = "bisected"
SAMPLE_GAP = "sample_gap"

DEFAULT_RASTER_SCALE = 4.0

_STRUCT_RGB = (180, 140, 0)
_GREEN_RGB = (0, 160, 0)
_BLUE_RGB = (0, 80, 220)
_BAND_ALPHA = 0.6


def structural_error(original: WidgetSnapshot, reconstructed: WidgetSnapshot,
                     epsilon: int = DEFAULT_EPSILON) -> float:
    """Sum of squared differences of corresponding tabstop positions, divided
    by the number of unique tabstop pairs.  Pairs are induced by common
    widget boundaries and deduplicated, so shared alignments count once."""
    common = original.widget_ids() & reconstructed.widget_ids()
    if not common:
        return 0.0
    tabs_o = create_tabstops(original, epsilon)
    tabs_r = create_tabstops(reconstructed, epsilon)
    pairs: dict[tuple[str, int, int], tuple[int, int]] = {}
    for wid in sorted(common):
        for side, axis in (("left", "x"), ("right", "x"), ("top", "y"), ("bottom", "y")):
            to = tabs_o.boundary_refs[(wid, side)]
            tr = tabs_r.boundary_refs[(wid, side)]
            pairs[(axis, to.id, tr.id)] = (to.position, tr.position)
    if not pairs:
        return 0.0
    total = sum((po - pr) ** 2 for po, pr in pairs.values())
    return total / len(pairs)


@dataclass
class TransitionLocation:
    axis: str                       # "w" | "h"
    fixed: int                      # the unchanged coordinate
    original: tuple[int, int]       # (lo, hi): trees differ between lo and hi
    reconstructed: tuple[int, int] | None
    certainty: str                  # bisected | sample_gap

    @property
    def original_mid(self) -> float:
        return (self.original[0] + self.original[1]) / 2.0

    @property
    def reconstructed_mid(self) -> float | None:
        if self.reconstructed is None:
            return None
        return (self.reconstructed[0] + self.reconstructed[1]) / 2.0


def _probe_size(axis: str, fixed: int, value: int) -> Size:
    return (value, fixed) if axis == "w" else (fixed, value)


def _bisect_flip(lo: int, hi: int, tree_at) -> tuple[int, int]:
    """Shrink (lo, hi) to a width-1 interval across which the tree changes.
    Assumes tree(lo) differs from tree(hi)."""
    tree_hi = tree_at(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if isomorphic(tree_at(mid), tree_hi):
            hi = mid
        else:
            lo = mid
    return lo, hi


def locate_transition(oracle: Oracle, spec: OrcSpec, edge: Edge,
                      delta: int, epsilon: int = DEFAULT_EPSILON) -> TransitionLocation:
    """Pin down where the original and the reconstruction change structure
    along the edge's axis.  Recorded sources cannot be probed between
    samples, so their original position stays the full sample gap."""
    axis = edge.axis
    if axis is None:
        raise ValueError("locate_transition requires an axis-aligned edge")
    if axis == "w":
        fixed = edge.from_size[1]
        hi_val, lo_val = edge.from_size[0], edge.to_size[0]
    else:
        fixed = edge.from_size[0]
        hi_val, lo_val = edge.from_size[1], edge.to_size[1]

    def oracle_tree(value: int):
        return reconstruct_simplified(oracle.query(*_probe_size(axis, fixed, value)), epsilon)

    if oracle.queryable:
        original = _bisect_flip(lo_val, hi_val, oracle_tree)
        certainty = BISECTED
    else:
        original = (lo_val, hi_val)
        certainty = SAMPLE_GAP

    def rendered_tree(value: int):
        return reconstruct_simplified(render(spec, *_probe_size(axis, fixed, value)), epsilon)

    try:
        if isomorphic(rendered_tree(lo_val), rendered_tree(hi_val)):
            reconstructed = None  # the reconstruction does not flip on this edge
        else:
            reconstructed = _bisect_flip(lo_val, hi_val, rendered_tree)
    except (SizeOutOfRange, MissingSample):
        reconstructed = None
    return TransitionLocation(axis=axis, fixed=fixed, original=original,
                              reconstructed=reconstructed, certainty=certainty)


@dataclass(frozen=True)
class Band:
    axis: str
    interval: tuple[float, float]
    direction: str
    certainty: str


@dataclass(frozen=True)
class FaultLine:
    axis: str
    position: float
    cause: str  # reorder | or_fallback


@dataclass
class ErrorMap:
    scale: float
    min_size: Size
    max_size: Size
    cells: list[dict] = field(default_factory=list)  # {"size", "error", "fault"}
    e_max: float = 0.0
    bands: list[Band] = field(default_factory=list)
    fault_lines: list[FaultLine] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scale": self.scale,
            "min_size": list(self.min_size),
            "max_size": list(self.max_size),
            "e_max": self.e_max,
            "cells": [{"size": list(c["size"]), "error": c["error"], "fault": c["fault"]}
                      for c in sorted(self.cells, key=lambda c: c["size"])],
            "bands": [{"axis": b.axis, "interval": list(b.interval),
                       "direction": b.direction, "certainty": b.certainty}
                      for b in sorted(self.bands, key=lambda b: (b.axis, b.interval))],
            "fault_lines": [{"axis": f.axis, "position": f.position, "cause": f.cause}
                            for f in sorted(self.fault_lines,
                                            key=lambda f: (f.axis, f.position, f.cause))],
        }

    def dump(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1).encode("utf-8")


def build_error_map(oracle: Oracle, spec: OrcSpec, grid: SampleGrid,
                    raster_scale: float = DEFAULT_RASTER_SCALE,
                    epsilon: int = DEFAULT_EPSILON) -> ErrorMap:
    emap = ErrorMap(scale=raster_scale, min_size=grid.min_size, max_size=grid.max_size)

    for size in grid.sorted_sizes():
        original = grid.snapshot(size)
        reconstructed = render(spec, *size)
        fault = original.widget_ids() != reconstructed.widget_ids()
        err = structural_error(original, reconstructed, epsilon)
        emap.cells.append({"size": size, "error": err, "fault": fault})
    errs = [c["error"] for c in emap.cells]
    emap.e_max = max(errs) if errs else 0.0

    seen_bands: set = set()
    seen_faults: set = set()
    for edge in grid.transition_edges():
        if edge.axis is None:
            continue
        loc = locate_transition(oracle, spec, edge, grid.delta, epsilon)
        recon_mid = loc.reconstructed_mid
        if recon_mid is None:
            recon_mid = loc.original_mid
        interval = (min(loc.original_mid, recon_mid), max(loc.original_mid, recon_mid))
        direction = ORIGINAL_LARGER if loc.original_mid >= recon_mid else ORIGINAL_SMALLER
        band = Band(axis=loc.axis, interval=interval, direction=direction,
                    certainty=loc.certainty)
        if band not in seen_bands:
            seen_bands.add(band)
            emap.bands.append(band)

        ctx = ChangeContext(edge=edge, larger_tree=grid.tree(edge.from_size),
                            smaller_tree=grid.tree(edge.to_size),
                            larger_size=edge.from_size, smaller_size=edge.to_size,
                            transition_position={})
        kinds = {inst.kind for inst in match_change_set(ctx)}
        cause = None
        if OR_FALLBACK in kinds:
            cause = "or_fallback"
        elif ALTERNATIVE_ORDER in kinds:
            cause = "reorder"
        if cause is not None:
            fl = FaultLine(axis=loc.axis, position=loc.original_mid, cause=cause)
            key = (fl.axis, fl.position, fl.cause)
            if key not in seen_faults:
                seen_faults.add(key)
                emap.fault_lines.append(fl)
    return emap


# --- raster rendering --------------------------------------------------------------


def _lattice(emap: ErrorMap) -> tuple[list[int], list[int], np.ndarray]:
    sizes = [tuple(c["size"]) for c in emap.cells]
    values = {}
    for c in emap.cells:
        values[tuple(c["size"])] = emap.e_max if c["fault"] else c["error"]
    ws = sorted({s[0] for s in sizes})
    hs = sorted({s[1] for s in sizes})
    lattice = np.zeros((len(hs), len(ws)))
    for j, h in enumerate(hs):
        for i, w in enumerate(ws):
            if (w, h) in values:
                lattice[j, i] = values[(w, h)]
            else:
                nearest = min(sizes, key=lambda s: (max(abs(s[0] - w), abs(s[1] - h)), s))
                lattice[j, i] = values[nearest]
    return ws, hs, lattice


def _interp_1d(coords: list[int], value: float) -> tuple[int, int, float]:
    if value <= coords[0]:
        return 0, 0, 0.0
    if value >= coords[-1]:
        return len(coords) - 1, len(coords) - 1, 0.0
    for k in range(len(coords) - 1):
        if coords[k] <= value <= coords[k + 1]:
            span = coords[k + 1] - coords[k]
            t = 0.0 if span == 0 else (value - coords[k]) / span
            return k, k + 1, t
    return len(coords) - 1, len(coords) - 1, 0.0


def render_error_map(emap: ErrorMap) -> bytes:
    """PNG raster of the map.  x runs min->max width left to right, y runs
    min->max height top to bottom (the size-plane orientation of the grid
    figures).  Exact color law: structural pixel = white->(180,140,0) lerp by
    error/e_max; bands at 60% alpha green/blue; fault lines opaque black."""
    from PIL import Image

    min_w, min_h = emap.min_size
    max_w, max_h = emap.max_size
    scale = emap.scale
    width_px = max(1, int(math.floor((max_w - min_w) / scale)) + 1)
    height_px = max(1, int(math.floor((max_h - min_h) / scale)) + 1)

    ws, hs, lattice = _lattice(emap)
    img = np.zeros((height_px, width_px, 3), dtype=np.float64)
    for py in range(height_px):
        h = min_h + py * scale
        j0, j1, u = _interp_1d(hs, h)
        for px in range(width_px):
            w = min_w + px * scale
            i0, i1, t = _interp_1d(ws, w)
            e = (lattice[j0, i0] * (1 - t) * (1 - u) + lattice[j0, i1] * t * (1 - u)
                 + lattice[j1, i0] * (1 - t) * u + lattice[j1, i1] * t * u)
            frac = 0.0 if emap.e_max <= 0 else min(1.0, e / emap.e_max)
            for k in range(3):
                img[py, px, k] = 255 + (_STRUCT_RGB[k] - 255) * frac

    def to_px(axis: str, value: float) -> int:
        origin = min_w if axis == "w" else min_h
        return int(round((value - origin) / scale))

    for band in emap.bands:
        color = _GREEN_RGB if band.direction == ORIGINAL_LARGER else _BLUE_RGB
        a = to_px(band.axis, band.interval[0])
        b = max(to_px(band.axis, band.interval[1]), a)  # zero-width still visible
        if band.axis == "w":
            lo, hi = max(a, 0), min(b, width_px - 1)
            region = (slice(None), slice(lo, hi + 1))
        else:
            lo, hi = max(a, 0), min(b, height_px - 1)
            region = (slice(lo, hi + 1), slice(None))
        if lo > hi:
            continue
        for k in range(3):
            img[region + (k,)] = (1 - _BAND_ALPHA) * img[region + (k,)] + _BAND_ALPHA * color[k]

    for fl in emap.fault_lines:
        p = to_px(fl.axis, fl.position)
        if fl.axis == "w":
            if 0 <= p < width_px:
                img[:, p, :] = 0.0
        else:
            if 0 <= p < height_px:
                img[p, :, :] = 0.0

    data = np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)
    image = Image.fromarray(data, mode="RGB")
    import io
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()
