"""End-to-end runs tying the modules together.

Two routes produce the same kind of result: a subshift, its graph, and the
dimension report.  The lexicographic route serves non-integer bases; the
geometric route serves any interval-attractor IFS (including the base case,
which is how the two are cross-checked).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import beta as beta_mod
from .beta import BetaBase, GreedyExpansion, LexWindow
from .errors import EmptyGraph, NoOverlap
from .graphdim import SccReport, UnivoqueGraph, build_graph, empty_report, solve_dimension
from .ifs import IfsSpec, Interval, SwitchRegion, attractor, switch_regions
from .sftsynth import (
    DEFAULT_DEPTH_MAX,
    DEFAULT_ENUMERATION_BUDGET,
    SftSpec,
    SynthDiagnostics,
    synthesize,
)


@dataclass
class BetaRunResult:
    base: BetaBase
    expansion: GreedyExpansion
    window: LexWindow | None
    sft: SftSpec | None
    graph: UnivoqueGraph | None
    report: SccReport
    solved_from: tuple | None = None


@dataclass
class IfsRunResult:
    ifs: IfsSpec
    attractor: Interval
    regions: list[SwitchRegion]
    sft: SftSpec | None
    graph: UnivoqueGraph | None
    report: SccReport
    diagnostics: SynthDiagnostics | None
    note: str = ""


def run_beta_pipeline(
    base: BetaBase | None = None,
    expansion: tuple | None = None,
    search_bound: int = beta_mod.DEFAULT_SEARCH_BOUND,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    bisection_tol: float = 1e-10,
) -> BetaRunResult:
    """Greedy expansion of 1 -> dominance window -> band subshift -> graph
    -> dimension.  ``expansion`` (preperiod, period) takes precedence over a
    numeric base when both are given."""
    solved_from = None
    if expansion is not None:
        pre, per = expansion
        root = beta_mod.beta_from_periodic_expansion(pre, per)
        tol = base.tolerance if base is not None else None
        base = BetaBase(root, tol) if tol else BetaBase(root)
        solved_from = (tuple(pre), tuple(per))
    if base is None:
        raise ValueError("need a base or a prescribed expansion")
    ge = beta_mod.expansion_of_one(base)
    if solved_from:
        ge.periodic_form = solved_from
    window = beta_mod.find_lex_window(ge, search_bound)
    sft = beta_mod.sft_from_lex(ge, window, enumeration_budget)
    ratios = [1.0 / base.beta] * base.digit_count
    try:
        graph = build_graph(sft, ratios)
    except EmptyGraph:
        return BetaRunResult(base, ge, window, sft, None, empty_report(), solved_from)
    report = solve_dimension(graph, bisection_tol)
    return BetaRunResult(base, ge, window, sft, graph, report, solved_from)


def run_ifs_pipeline(
    ifs: IfsSpec,
    depth_max: int = DEFAULT_DEPTH_MAX,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    bisection_tol: float = 1e-10,
    workers: int | None = None,
) -> IfsRunResult:
    """Attractor -> switch regions -> endpoint witnesses -> enlargement
    radius and level -> forbidden words -> graph -> dimension.

    With no overlaps at all the univoque set is the whole attractor and the
    dimension is 1; when pruning empties the graph the dimension is 0."""
    K = attractor(ifs)
    try:
        regions = switch_regions(ifs, K)
    except NoOverlap:
        report = empty_report(method="no-overlap")
        report.dimension = 1.0
        return IfsRunResult(
            ifs, K, [], None, None, report, None,
            note="no switch regions: every coding is unique",
        )
    sft, diagnostics = synthesize(
        ifs, K, regions, depth_max, enumeration_budget, workers
    )
    try:
        graph = build_graph(sft, ifs.ratios)
    except EmptyGraph:
        return IfsRunResult(ifs, K, regions, sft, None, empty_report(), diagnostics)
    report = solve_dimension(graph, bisection_tol)
    return IfsRunResult(ifs, K, regions, sft, graph, report, diagnostics)
