"""Adaptive sampling of a synthetic flow layout and diffing its transitions.

The sampler starts from the extreme sizes, always subdivides the extreme
diagonal once, and then bisects every structurally-different neighboring pair.
Each transition edge carries the edit script from the larger tree to the
smaller one; applying the script reproduces the smaller tree exactly.
"""

from resizelens import builtin_oracle, sample_grid
from resizelens.tree import apply_edits, format_tree, isomorphic

oracle = builtin_oracle("hflow")
grid = sample_grid(oracle, (200, 140), (400, 200), delta=4)

print(f"sampled {len(grid.samples)} sizes, "
      f"{len(grid.transition_edges())} structural transitions\n")

for edge in grid.transition_edges():
    t_large = grid.tree(edge.from_size)
    t_small = grid.tree(edge.to_size)
    print(f"transition {edge.from_size} -> {edge.to_size}")
    print("larger tree:")
    print(format_tree(t_large))
    print("smaller tree:")
    print(format_tree(t_small))
    print("edit script:")
    for op in edge.change_set:
        print("  ", op.to_dict())
    assert isomorphic(apply_edits(t_large, edge.change_set), t_small)
    print("apply(script) == smaller tree: OK\n")
