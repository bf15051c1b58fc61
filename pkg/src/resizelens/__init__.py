"""resizelens: reverse engineering of dynamic UI resize behavior.

Sample widget geometry at many window sizes, reconstruct Row/Column layout
trees, diff them into edit scripts, infer OR-constraint layout patterns,
render the resulting specification at any size, and score reconstruction
quality with an error map.
"""

from .geometry import (ParseError, SampleSet, SizeOutOfRange, ValidationError,
                       Violation, Widget, WidgetSnapshot, dump_sample_set,
                       load_sample_set, snapshots_equal, validate_snapshot)
from .tabstops import Tabstop, TabstopMap, create_tabstops, layout_dividers
from .tree import (EditOp, EditScript, InvalidPath, LayoutNode, TreeIndex,
                   apply_edits, compute_hashes, isomorphic)
from .reconstruct import reconstruct, reconstruct_simplified, simplify
from .diff import DiffPlan, common_leaves, diff, diff_with_plan
from .oracles import (MissingSample, Oracle, OracleConfig, builtin_catalog,
                      builtin_oracle, make_oracle, recorded_oracle)
from .sampler import (BudgetExceeded, DegeneratePair, Edge, SampleGrid,
                      grid_from_sample_set, needs_subdivision, sample_grid,
                      subdivide)
from .orcspec import (OrcNode, OrcSpec, Variant, deserialize, export_orc_script,
                      render, serialize)
from .patterns import (ChangeContext, ConflictingPatterns, PatternInstance,
                       infer, iteration_order, match_change_set)
from .errormap import (Band, ErrorMap, FaultLine, build_error_map,
                       locate_transition, render_error_map, structural_error)
from .pipeline import PipelineResult, run_pipeline, run_pipeline_from_samples, write_outputs

__version__ = "0.1.0"
