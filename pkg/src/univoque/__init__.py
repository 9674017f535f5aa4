"""Hausdorff dimension of univoque sets of interval self-similar IFS.

The library identifies the set of points with a unique coding with a
subshift of finite type, builds the induced graph-directed construction,
and solves the spectral equation for its dimension.  Two synthesis routes
are provided: a geometric one for arbitrary interval-attractor systems and
a lexicographic one specialized to non-integer base expansions.
"""

from .beta import (
    BetaBase,
    beta_from_periodic_expansion,
    beta_ifs,
    expansion_of_one,
    find_lex_window,
    greedy_digits,
    is_univoque_by_greedy_lazy,
    lazy_digits,
    restrict_to_core,
    sft_from_lex,
)
from .common import Verdict, Word
from .graphdim import (
    SccReport,
    UnivoqueGraph,
    build_graph,
    export_dot,
    phi,
    scc_decompose,
    solve_dimension,
)
from .ifs import (
    IfsSpec,
    Interval,
    Similitude,
    SwitchRegion,
    admissible_branches,
    attractor,
    first_level_intervals,
    inverse_branch,
    is_coding_prefix,
    project,
    switch_regions,
)
from .oracle import (
    UniquenessVerdict,
    count_allowed_words,
    dimension_locally_constant_scan,
    is_univoque_point,
    pipelines_agree,
)
from .pipeline import run_beta_pipeline, run_ifs_pipeline
from .sftsynth import (
    EndpointWitness,
    SftSpec,
    SynthDiagnostics,
    choose_level,
    compute_delta,
    find_endpoint_witness,
    forbidden_words,
    synthesize,
)

__version__ = "0.1.0"
