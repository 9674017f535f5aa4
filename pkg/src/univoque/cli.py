"""Command line front end.

Subcommands: ``beta`` and ``ifs`` run the two pipelines end to end and emit
a JSON report (optionally a DOT graph, a components CSV, and figures);
``expand`` prints digit streams; ``graph`` emits DOT; ``check`` runs the
cross-pipeline comparison; ``scan`` sweeps a base interval; ``oracle``
verdicts a single point.

Exit codes: 0 success, 2 bad input, 3 hypothesis not found, 4 degenerate
switch region, 5 finite greedy expansion of 1, 6 enumeration budget
exceeded, 7 other domain error, 8 pipeline mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import report as report_mod
from .beta import BetaBase, expansion_of_one, greedy_digits, lazy_digits
from .common import format_word, parse_expansion
from .errors import (
    DegenerateSwitchRegion,
    FiniteGreedyExpansion,
    Intractable,
    PipelineMismatch,
    UnivoqueError,
    WindowNotFound,
    WitnessNotFound,
)
from .graphdim import export_dot
from .ifs import IfsSpec, attractor, switch_regions
from .oracle import (
    dimension_locally_constant_scan,
    is_univoque_point,
    pipelines_agree,
)
from .pipeline import run_beta_pipeline, run_ifs_pipeline
from .sftsynth import DEFAULT_DEPTH_MAX, DEFAULT_ENUMERATION_BUDGET

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_DEGENERATE = 4
EXIT_FINITE_EXPANSION = 5
EXIT_INTRACTABLE = 6
EXIT_DOMAIN = 7
EXIT_MISMATCH = 8


@dataclass
class RunConfig:
    mode: str
    beta: float | None = None
    expansion: tuple | None = None
    spec_path: str | None = None
    depth_max: int = DEFAULT_DEPTH_MAX
    search_bound: int = 10_000
    tolerance: float = 1e-9
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    bisection_tol: float = 1e-10
    json_path: str | None = None
    dot_path: str | None = None
    csv_path: str | None = None
    sft_path: str | None = None
    plot_prefix: str | None = None
    workers: int = 1

    def __post_init__(self):
        sources = [
            self.expansion is not None,
            self.beta is not None,
            self.spec_path is not None,
        ]
        if not any(sources):
            raise ValueError("no instance given: need a base, an expansion, or a spec file")


def _add_numeric_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tolerance", type=float, default=1e-9,
                   help="boundary classification width (default 1e-9)")
    p.add_argument("--depth-max", type=int, default=DEFAULT_DEPTH_MAX,
                   help="witness search depth bound (default 64)")
    p.add_argument("--search-bound", type=int, default=10_000,
                   help="digit bound for the dominance window search")
    p.add_argument("--budget", type=int, default=DEFAULT_ENUMERATION_BUDGET,
                   help="word enumeration budget (default 1e8)")
    p.add_argument("--bisection-tol", type=float, default=1e-10)


def _add_output_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", dest="json_path", help="write the JSON report here")
    p.add_argument("--dot", dest="dot_path", help="write the graph in DOT format")
    p.add_argument("--csv", dest="csv_path", help="write the delimited table here")
    p.add_argument("--sft", dest="sft_path", help="write the subshift as JSON")
    p.add_argument("--plot", dest="plot_prefix",
                   help="render figures with this path prefix")


def _add_beta_instance(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, help="non-integer base > 1")
    p.add_argument("--expansion",
                   help='greedy expansion of 1, e.g. "111(00001)"; '
                        "authoritative when --beta is also given")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dim",
        description="Hausdorff dimension of univoque sets of interval "
                    "self-similar IFS",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_beta = sub.add_parser("beta", help="base-expansion pipeline")
    _add_beta_instance(p_beta)
    _add_numeric_opts(p_beta)
    _add_output_opts(p_beta)

    p_ifs = sub.add_parser("ifs", help="general IFS pipeline")
    p_ifs.add_argument("--spec", required=True, help="IFS instance JSON file")
    _add_numeric_opts(p_ifs)
    _add_output_opts(p_ifs)

    p_exp = sub.add_parser("expand", help="print greedy/lazy digit streams")
    _add_beta_instance(p_exp)
    p_exp.add_argument("--x", type=float, default=1.0)
    p_exp.add_argument("--count", type=int, default=30)
    p_exp.add_argument("--kind", choices=["greedy", "lazy", "both"], default="both")
    p_exp.add_argument("--tolerance", type=float, default=1e-9)

    p_graph = sub.add_parser("graph", help="emit the pruned graph as DOT")
    _add_beta_instance(p_graph)
    p_graph.add_argument("--spec", help="IFS instance JSON file")
    _add_numeric_opts(p_graph)
    p_graph.add_argument("--dot", dest="dot_path", help="output path (default stdout)")

    p_check = sub.add_parser("check", help="cross-check the two pipelines")
    _add_beta_instance(p_check)
    p_check.add_argument("--count-budget", type=int, default=40)
    _add_numeric_opts(p_check)
    p_check.add_argument("--json", dest="json_path")

    p_scan = sub.add_parser("scan", help="dimension across a base interval")
    _add_beta_instance(p_scan)
    p_scan.add_argument("--radius", type=float, required=True)
    p_scan.add_argument("--steps", type=int, default=5)
    _add_numeric_opts(p_scan)
    _add_output_opts(p_scan)

    p_oracle = sub.add_parser("oracle", help="uniqueness verdict for one point")
    _add_beta_instance(p_oracle)
    p_oracle.add_argument("--spec", help="IFS instance JSON file")
    p_oracle.add_argument("--x", type=float, required=True)
    p_oracle.add_argument("--depth", type=int, default=64)
    p_oracle.add_argument("--tolerance", type=float, default=1e-9)
    p_oracle.add_argument("--json", dest="json_path")
    return ap


def _load_base(args) -> tuple[BetaBase, tuple | None]:
    tol = getattr(args, "tolerance", 1e-9)
    if getattr(args, "expansion", None):
        from .beta import beta_from_periodic_expansion

        pre, per = parse_expansion(args.expansion)
        return BetaBase(beta_from_periodic_expansion(pre, per), tol), (pre, per)
    if getattr(args, "beta", None) is not None:
        return BetaBase(args.beta, tol), None
    raise ValueError("need --beta or --expansion")


def _load_ifs(args) -> IfsSpec:
    text = Path(args.spec).read_text()
    spec = IfsSpec.from_json(text)
    tol = getattr(args, "tolerance", None)
    if tol is not None and tol != spec.tolerance:
        spec = IfsSpec(spec.maps, tol)
    return spec


def _emit(doc: dict, json_path: str | None) -> None:
    text = report_mod.render_json(doc)
    sys.stdout.write(text)
    if json_path:
        Path(json_path).write_text(text)


def _write_outputs(args, res, doc) -> None:
    if getattr(args, "dot_path", None) and res.graph is not None:
        Path(args.dot_path).write_text(export_dot(res.graph))
    if getattr(args, "csv_path", None):
        Path(args.csv_path).write_text(report_mod.components_csv(doc))
    if getattr(args, "sft_path", None) and res.sft is not None:
        Path(args.sft_path).write_text(
            json.dumps(res.sft.to_json_dict(), sort_keys=True) + "\n"
        )
    if getattr(args, "plot_prefix", None) and res.graph is not None:
        report_mod.write_phi_figure(
            res.graph, doc["dimension"], f"{args.plot_prefix}_phi.png"
        )


def _cmd_beta(args) -> int:
    t0 = time.perf_counter()
    base, expansion = _load_base(args)
    res = run_beta_pipeline(
        base=base,
        expansion=None,
        search_bound=args.search_bound,
        enumeration_budget=args.budget,
        bisection_tol=args.bisection_tol,
    )
    if expansion:
        res.solved_from = expansion
        res.expansion.periodic_form = expansion
    doc = report_mod.beta_report_dict(res, wall_time_s=time.perf_counter() - t0)
    _emit(doc, args.json_path)
    _write_outputs(args, res, doc)
    return EXIT_OK


def _cmd_ifs(args) -> int:
    t0 = time.perf_counter()
    spec = _load_ifs(args)
    workers = int(os.environ.get("DIM_THREADS", "1") or "1")
    res = run_ifs_pipeline(
        spec,
        depth_max=args.depth_max,
        enumeration_budget=args.budget,
        bisection_tol=args.bisection_tol,
        workers=workers,
    )
    doc = report_mod.ifs_report_dict(res, wall_time_s=time.perf_counter() - t0)
    _emit(doc, args.json_path)
    _write_outputs(args, res, doc)
    return EXIT_OK


def _cmd_expand(args) -> int:
    base, _ = _load_base(args)
    out = {"beta": base.beta, "x": args.x}
    if args.kind in ("greedy", "both"):
        out["greedy"] = format_word(greedy_digits(base, args.x, args.count), base.m)
    if args.kind in ("lazy", "both"):
        out["lazy"] = format_word(lazy_digits(base, args.x, args.count), base.m)
    sys.stdout.write(report_mod.render_json(out))
    return EXIT_OK


def _cmd_graph(args) -> int:
    if getattr(args, "spec", None):
        res = run_ifs_pipeline(_load_ifs(args), depth_max=args.depth_max,
                               enumeration_budget=args.budget)
    else:
        base, _ = _load_base(args)
        res = run_beta_pipeline(base=base, search_bound=args.search_bound,
                                enumeration_budget=args.budget)
    if res.graph is None:
        sys.stdout.write("digraph univoque {\n}\n")
        return EXIT_OK
    text = export_dot(res.graph)
    if args.dot_path:
        Path(args.dot_path).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_check(args) -> int:
    base, _ = _load_base(args)
    rep = pipelines_agree(
        base,
        count_budget=args.count_budget,
        depth_max=args.depth_max,
        enumeration_budget=args.budget,
        search_bound=args.search_bound,
    )
    _emit(rep.to_json_dict(), args.json_path)
    return EXIT_OK


def _cmd_scan(args) -> int:
    base, _ = _load_base(args)
    scan = dimension_locally_constant_scan(
        base, args.radius, args.steps, args.search_bound
    )
    _emit(scan.to_json_dict(), getattr(args, "json_path", None))
    if getattr(args, "csv_path", None):
        Path(args.csv_path).write_text(report_mod.scan_csv(scan))
    if getattr(args, "plot_prefix", None):
        report_mod.write_scan_figure(scan, f"{args.plot_prefix}_scan.png")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    if getattr(args, "spec", None):
        spec = _load_ifs(args)
    else:
        from .beta import beta_ifs

        base, _ = _load_base(args)
        spec = beta_ifs(base)
    K = attractor(spec)
    try:
        regions = switch_regions(spec, K)
    except UnivoqueError:
        regions = []
    verdict = is_univoque_point(spec, K, regions, args.x, args.depth)
    doc = {
        "x": args.x,
        "depth": args.depth,
        "verdict": verdict.verdict.value,
        "depth_reached": verdict.depth_reached,
        "branch_witness": None,
    }
    if verdict.branch_witness:
        word, (k, l) = verdict.branch_witness
        doc["branch_witness"] = {"word": format_word(word, spec.m),
                                 "branches": [k, l]}
    _emit(doc, args.json_path)
    return EXIT_OK


_HANDLERS = {
    "beta": _cmd_beta,
    "ifs": _cmd_ifs,
    "expand": _cmd_expand,
    "graph": _cmd_graph,
    "check": _cmd_check,
    "scan": _cmd_scan,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _HANDLERS[args.command](args)
    except (WindowNotFound, WitnessNotFound) as exc:
        print(f"hypothesis not established: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except DegenerateSwitchRegion as exc:
        print(f"degenerate switch region: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except FiniteGreedyExpansion as exc:
        print(f"finite greedy expansion: {exc}", file=sys.stderr)
        return EXIT_FINITE_EXPANSION
    except Intractable as exc:
        print(f"intractable: {exc}", file=sys.stderr)
        return EXIT_INTRACTABLE
    except PipelineMismatch as exc:
        print(f"pipeline mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except UnivoqueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
