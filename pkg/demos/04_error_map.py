"""Scoring a reconstruction with the error map.

Three signals over the size plane: structural error (yellow; mean squared
tabstop displacement), transition-error bands (green when the original flips
at the larger size, blue at the smaller), and black fault lines where widgets
reorder or only a raw OR of two subtrees explains the change.

The pathologically-reordering fixture produces one fault line per threshold;
a well-behaved flow produces an all-white map with zero-width bands.
"""

from pathlib import Path

from resizelens import build_error_map, builtin_oracle, sample_grid
from resizelens.errormap import render_error_map
from resizelens.patterns import infer

out = Path(__file__).resolve().parent / "out"
out.mkdir(exist_ok=True)

for name, window in (("hflow", ((200, 140), (400, 200))),
                     ("reorder_pathological", ((140, 100), (340, 130)))):
    oracle = builtin_oracle(name)
    grid = sample_grid(oracle, *window)
    spec = infer(grid)
    emap = build_error_map(oracle, spec, grid)
    png = out / f"errormap_{name}.png"
    png.write_bytes(render_error_map(emap))
    print(f"{name}: e_max={emap.e_max}, bands={len(emap.bands)}, "
          f"fault lines={[(f.axis, f.position, f.cause) for f in emap.fault_lines]}")
    print(f"  wrote {png}")
