"""Inferring OR-constraint patterns from a composite toolbar oracle.

The ribbon-like fixture changes in three ways while shrinking: a side pane
disappears (optional widget), the font group swaps for a compact version
(alternative node), and the button row wraps (horizontal flow).  Inference
folds the per-transition edit scripts into one renderable specification.
"""

from resizelens import builtin_oracle, render, sample_grid, snapshots_equal
from resizelens.orcspec import export_orc_script
from resizelens.patterns import infer

oracle = builtin_oracle("ribbon_composite")
grid = sample_grid(oracle, (230, 140), (420, 170), delta=4)
spec = infer(grid)

print("detected patterns:")
for p in spec.patterns:
    extra = f" penalty={p['penalty']}" if p["penalty"] is not None else ""
    print(f"  {p['kind']:16s} anchor={p['anchor']}{extra}")

print("\nexported constructor script:")
print(export_orc_script(spec))

exact = all(snapshots_equal(render(spec, *s), grid.snapshot(s))
            for s in grid.sorted_sizes())
print(f"render reproduces all {len(grid.samples)} samples exactly: {exact}")

probe = render(spec, 333, 155)  # an unsampled size inside the envelope
print(f"\nrender at 333x155 -> {len(probe.widgets)} widgets, e.g. "
      f"{[(w.id, w.rect()) for w in probe.widgets[:3]]}")
