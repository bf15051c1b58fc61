"""Command-line interface: the full pipeline plus each stage for debugging.

Exit codes: 0 success, 1 input/validation error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .diff import diff
from .errormap import build_error_map, render_error_map
from .geometry import (ParseError, SizeOutOfRange, ValidationError,
                       load_sample_set, snapshot_from_dict, snapshot_to_dict)
from .oracles import (MissingSample, Oracle, OracleConfig, builtin_catalog,
                      make_oracle, load_oracle_config, recorded_oracle)
from .orcspec import deserialize, export_orc_script, render
from .pipeline import run_pipeline, run_pipeline_from_samples, write_outputs
from .patterns import infer
from .reconstruct import reconstruct, reconstruct_simplified
from .sampler import grid_from_files, grid_to_files, sample_grid
from .tabstops import DEFAULT_EPSILON, create_tabstops, layout_dividers
from .tree import dump_tree, format_tree, load_tree


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return (int(w), int(h))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")


def _load_oracle(args) -> Oracle:
    if getattr(args, "oracle_builtin", None):
        return make_oracle(OracleConfig(args.oracle_builtin))
    if getattr(args, "oracle", None):
        return make_oracle(load_oracle_config(args.oracle))
    if getattr(args, "samples", None):
        return recorded_oracle(load_sample_set(Path(args.samples)))
    raise ValidationError("one of --oracle, --oracle-builtin or --samples is required")


def _add_oracle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--oracle", help="oracle config JSON file")
    p.add_argument("--oracle-builtin", help="builtin oracle name (see `oracles`)")
    p.add_argument("--samples", help="recorded sample-set JSON file")
    p.add_argument("--min", type=_parse_size, help="minimum size WxH")
    p.add_argument("--max", type=_parse_size, help="maximum size WxH")
    p.add_argument("--delta", type=int, default=4, help="stop resolution in px")
    p.add_argument("--epsilon", type=int, default=DEFAULT_EPSILON,
                   help="tabstop merge tolerance in px")
    p.add_argument("--max-samples", type=int, default=10_000)


def _svg_overlay(snapshot, tree, epsilon: int) -> str:
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'width="{snapshot.window_width}" height="{snapshot.window_height}">']
    for w in snapshot.widgets:
        lines.append(f'<rect x="{w.left}" y="{w.top}" width="{w.width}" height="{w.height}" '
                     f'fill="#dce6f2" stroke="#555"/>')
        lines.append(f'<text x="{w.left + 2}" y="{w.top + 12}" font-size="10">{w.id}</text>')

    def emit(node):
        if node.is_leaf or node.geometry is None:
            return
        left, top, right, bottom = node.geometry
        for child in node.children[:-1]:
            if child.geometry is None:
                continue
            if node.kind == "row":
                x = child.geometry[2]
                lines.append(f'<line x1="{x}" y1="{top}" x2="{x}" y2="{bottom}" '
                             f'stroke="#e6c300" stroke-width="2"/>')
            else:
                y = child.geometry[3]
                lines.append(f'<line x1="{left}" y1="{y}" x2="{right}" y2="{y}" '
                             f'stroke="#2e8b57" stroke-width="2"/>')
        for child in node.children:
            emit(child)

    emit(tree)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _cmd_oracles(args) -> int:
    for name, config in builtin_catalog():
        if args.format == "json":
            print(json.dumps(config.to_dict(), sort_keys=True))
        else:
            print(f"{name}: {json.dumps(config.params, sort_keys=True)}")
    return 0


def _cmd_sample(args) -> int:
    oracle = _load_oracle(args)
    grid = sample_grid(oracle, args.min or oracle.min_size, args.max or oracle.max_size,
                       delta=args.delta, epsilon=args.epsilon, max_samples=args.max_samples)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid_to_files(grid, out / "samples.json", out / "edges.json")
    print(f"{len(grid.samples)} samples, {len(grid.transition_edges())} transitions "
          f"-> {out}/samples.json, {out}/edges.json")
    return 0


def _cmd_tabstops(args) -> int:
    snap = snapshot_from_dict(json.loads(Path(args.snapshot).read_text("utf-8")))
    tabs = create_tabstops(snap, args.epsilon)
    if args.format == "json":
        print(json.dumps({
            "xtabs": sorted(tabs.xtabs),
            "ytabs": sorted(tabs.ytabs),
            "x_dividers": layout_dividers(tabs, list(snap.widgets), "x"),
            "y_dividers": layout_dividers(tabs, list(snap.widgets), "y"),
        }, sort_keys=True))
    else:
        print("x tabstops:", sorted(tabs.xtabs))
        print("y tabstops:", sorted(tabs.ytabs))
        print("x dividers:", layout_dividers(tabs, list(snap.widgets), "x"))
        print("y dividers:", layout_dividers(tabs, list(snap.widgets), "y"))
    return 0


def _cmd_reconstruct(args) -> int:
    snap = snapshot_from_dict(json.loads(Path(args.snapshot).read_text("utf-8")))
    tree = reconstruct_simplified(snap, args.epsilon)
    if args.format == "json":
        sys.stdout.write(dump_tree(tree).decode())
        sys.stdout.write("\n")
    else:
        print(format_tree(tree))
    if args.svg:
        raw = reconstruct(snap, args.epsilon)
        Path(args.svg).write_text(_svg_overlay(snap, raw, args.epsilon), "utf-8")
        print(f"divider overlay -> {args.svg}", file=sys.stderr)
    return 0


def _cmd_diff(args) -> int:
    t1 = load_tree(Path(args.tree_a).read_text("utf-8"))
    t2 = load_tree(Path(args.tree_b).read_text("utf-8"))
    script = diff(t1, t2)
    sys.stdout.write(script.dump().decode())
    sys.stdout.write("\n")
    return 0


def _cmd_infer(args) -> int:
    grid = grid_from_files(Path(args.grid) / "samples.json", Path(args.grid) / "edges.json")
    spec = infer(grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    from .orcspec import serialize
    (out / "spec.json").write_bytes(serialize(spec))
    (out / "orc_script.txt").write_text(export_orc_script(spec), "utf-8")
    print(f"{len(spec.patterns)} patterns, {len(spec.variants)} variants -> {out}/spec.json")
    return 0


def _cmd_render(args) -> int:
    spec = deserialize(Path(args.spec).read_bytes())
    w, h = args.size
    snap = render(spec, w, h)
    print(json.dumps(snapshot_to_dict(snap), sort_keys=True))
    return 0


def _cmd_errormap(args) -> int:
    spec = deserialize(Path(args.spec).read_bytes())
    oracle = _load_oracle(args)
    grid = grid_from_files(Path(args.grid) / "samples.json", Path(args.grid) / "edges.json")
    emap = build_error_map(oracle, spec, grid, args.raster_scale, args.epsilon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "errormap.json").write_bytes(emap.dump())
    (out / "errormap.png").write_bytes(render_error_map(emap))
    print(f"errormap: e_max={emap.e_max}, {len(emap.bands)} bands, "
          f"{len(emap.fault_lines)} fault lines -> {out}/errormap.json|png")
    return 0


def _cmd_pipeline(args) -> int:
    if args.samples and not (args.oracle or args.oracle_builtin):
        result = run_pipeline_from_samples(load_sample_set(Path(args.samples)),
                                           delta=args.delta, epsilon=args.epsilon,
                                           raster_scale=args.raster_scale)
    else:
        oracle = _load_oracle(args)
        result = run_pipeline(oracle, args.min, args.max, delta=args.delta,
                              epsilon=args.epsilon, max_samples=args.max_samples,
                              raster_scale=args.raster_scale)
    paths = write_outputs(result, Path(args.out))
    print(f"{len(result.grid.samples)} samples, {len(result.spec.patterns)} patterns, "
          f"{len(result.emap.fault_lines)} fault lines -> {args.out}")
    if args.format == "json":
        print(json.dumps({k: str(v) for k, v in paths.items()}, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn
    from .service import create_app
    app = create_app(Path(args.sessions_dir))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resizelens",
                                     description="Reverse engineer dynamic UI resize behavior.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracles", help="list builtin oracles and their defaults")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=_cmd_oracles)

    p = sub.add_parser("sample", help="sample an oracle into a grid")
    _add_oracle_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("tabstops", help="print the tabstop maps of a snapshot")
    p.add_argument("snapshot")
    p.add_argument("--epsilon", type=int, default=DEFAULT_EPSILON)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=_cmd_tabstops)

    p = sub.add_parser("reconstruct", help="reconstruct the layout tree of a snapshot")
    p.add_argument("snapshot")
    p.add_argument("--epsilon", type=int, default=DEFAULT_EPSILON)
    p.add_argument("--svg", help="write a divider overlay SVG here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=_cmd_reconstruct)

    p = sub.add_parser("diff", help="edit script between two tree JSON files")
    p.add_argument("tree_a")
    p.add_argument("tree_b")
    p.set_defaults(fn=_cmd_diff)

    p = sub.add_parser("infer", help="infer a spec from a sampled grid directory")
    p.add_argument("--grid", required=True, help="directory with samples.json + edges.json")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_infer)

    p = sub.add_parser("render", help="render a spec at a size")
    p.add_argument("spec")
    p.add_argument("--size", type=_parse_size, required=True)
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("errormap", help="build the error map for a spec")
    p.add_argument("spec")
    _add_oracle_flags(p)
    p.add_argument("--grid", required=True)
    p.add_argument("--raster-scale", type=float, default=4.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_errormap)

    p = sub.add_parser("pipeline", help="oracle -> spec + error map, end to end")
    _add_oracle_flags(p)
    p.add_argument("--raster-scale", type=float, default=4.0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("serve", help="run the session HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--sessions-dir", default="sessions")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError, SizeOutOfRange, MissingSample,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
