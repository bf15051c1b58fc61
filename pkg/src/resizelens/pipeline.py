"""End-to-end orchestration shared by the CLI and the HTTP service."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errormap import DEFAULT_RASTER_SCALE, ErrorMap, build_error_map, render_error_map
from .geometry import SampleSet, Size
from .oracles import Oracle, recorded_oracle
from .orcspec import OrcSpec, export_orc_script, serialize
from .patterns import infer
from .sampler import (DEFAULT_DELTA, DEFAULT_MAX_SAMPLES, SampleGrid,
                      grid_from_sample_set, grid_to_files, sample_grid)
from .tabstops import DEFAULT_EPSILON


@dataclass
class PipelineResult:
    oracle: Oracle
    grid: SampleGrid
    spec: OrcSpec
    emap: ErrorMap


def run_pipeline(oracle: Oracle, min_size: Size | None = None, max_size: Size | None = None,
                 delta: int = DEFAULT_DELTA, epsilon: int = DEFAULT_EPSILON,
                 max_samples: int = DEFAULT_MAX_SAMPLES,
                 raster_scale: float = DEFAULT_RASTER_SCALE) -> PipelineResult:
    min_size = tuple(min_size) if min_size else oracle.min_size
    max_size = tuple(max_size) if max_size else oracle.max_size
    grid = sample_grid(oracle, min_size, max_size, delta=delta, epsilon=epsilon,
                       max_samples=max_samples)
    spec = infer(grid)
    emap = build_error_map(oracle, spec, grid, raster_scale, epsilon)
    return PipelineResult(oracle=oracle, grid=grid, spec=spec, emap=emap)


def run_pipeline_from_samples(sample_set: SampleSet, delta: int = DEFAULT_DELTA,
                              epsilon: int = DEFAULT_EPSILON,
                              raster_scale: float = DEFAULT_RASTER_SCALE) -> PipelineResult:
    oracle = recorded_oracle(sample_set)
    grid = grid_from_sample_set(sample_set, epsilon=epsilon, delta=delta)
    spec = infer(grid)
    emap = build_error_map(oracle, spec, grid, raster_scale, epsilon)
    return PipelineResult(oracle=oracle, grid=grid, spec=spec, emap=emap)


def write_outputs(result: PipelineResult, outdir: Path) -> dict[str, Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "samples": outdir / "samples.json",
        "edges": outdir / "edges.json",
        "spec": outdir / "spec.json",
        "errormap_json": outdir / "errormap.json",
        "errormap_png": outdir / "errormap.png",
        "orc_script": outdir / "orc_script.txt",
    }
    grid_to_files(result.grid, paths["samples"], paths["edges"])
    paths["spec"].write_bytes(serialize(result.spec))
    paths["errormap_json"].write_bytes(result.emap.dump())
    paths["errormap_png"].write_bytes(render_error_map(result.emap))
    paths["orc_script"].write_text(export_orc_script(result.spec), "utf-8")
    return paths
