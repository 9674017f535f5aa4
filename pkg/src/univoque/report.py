"""Report rendering: versioned JSON documents, delimited component/scan
tables, and matplotlib figures written next to them."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .common import format_word
from .graphdim import UnivoqueGraph, phi, scc_decompose
from .oracle import ScanReport
from .pipeline import BetaRunResult, IfsRunResult

SCHEMA_VERSION = 1


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def beta_report_dict(res: BetaRunResult, wall_time_s: float | None = None) -> dict:
    p = res.window.p if res.window else 0
    doc = {
        "schema": SCHEMA_VERSION,
        "mode": "beta",
        "instance": {
            "beta": res.base.beta,
            "digits": res.base.digit_count,
            "tolerance": res.base.tolerance,
            "expansion": list(map(list, res.solved_from)) if res.solved_from else None,
        },
        "hypothesis": {
            "M": res.window.M if res.window else None,
            "p": p or None,
            "alpha_prefix": format_word(res.expansion.alpha(max(p, 12)), res.base.m),
            "epsilon_prefix": format_word(res.expansion.epsilon(max(p, 12)), res.base.m),
        },
        "sft": {
            "m": res.sft.m,
            "L": res.sft.length,
            "allowed_count": res.sft.allowed_count,
            "forbidden_count": res.sft.forbidden_count,
        }
        if res.sft
        else None,
        "graph": {
            "vertices": res.graph.n,
            "edges": res.graph.edge_count,
        }
        if res.graph
        else {"vertices": 0, "edges": 0},
    }
    doc.update(res.report.to_json_dict())
    if wall_time_s is not None:
        doc["wall_time_s"] = wall_time_s
    return doc


def ifs_report_dict(res: IfsRunResult, wall_time_s: float | None = None) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "mode": "ifs",
        "instance": json.loads(res.ifs.to_json()),
        "attractor": [res.attractor.left, res.attractor.right],
        "switch_regions": [
            {"left": r.left, "right": r.right, "branches": sorted(r.branch_set)}
            for r in res.regions
        ],
        "hypothesis": {
            "delta": res.diagnostics.delta,
            "level": res.diagnostics.level,
            "witnesses": [
                {
                    "endpoint": w.endpoint,
                    "word": format_word(w.word, res.ifs.m),
                    "image": w.image,
                    "margin": w.margin,
                    "expansion": w.expansion,
                }
                for w in res.diagnostics.witnesses
            ],
            "tolerance_flagged": res.diagnostics.tolerance_flagged,
        }
        if res.diagnostics
        else None,
        "sft": {
            "m": res.sft.m,
            "L": res.sft.length,
            "allowed_count": res.sft.allowed_count,
            "forbidden_count": res.sft.forbidden_count,
        }
        if res.sft
        else None,
        "graph": {
            "vertices": res.graph.n,
            "edges": res.graph.edge_count,
        }
        if res.graph
        else {"vertices": 0, "edges": 0},
        "note": res.note,
    }
    doc.update(res.report.to_json_dict())
    if wall_time_s is not None:
        doc["wall_time_s"] = wall_time_s
    return doc


def components_csv(report_dict: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["component", "size", "trivial", "root"])
    roots = {c["component"]: c["root"] for c in report_dict.get("component_roots", [])}
    for i, comp in enumerate(report_dict.get("components", [])):
        writer.writerow([i, comp["size"], comp["trivial"], roots.get(i, "")])
    return buf.getvalue()


def scan_csv(scan: ScanReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["beta", "dimension", "lambda", "M", "p", "forbidden_equal", "homogeneous_ok"]
    )
    for p in scan.points:
        writer.writerow(
            [
                repr(p.beta),
                repr(p.dimension),
                repr(p.lam),
                p.window[0],
                p.window[1],
                p.forbidden_equal,
                p.homogeneous_ok,
            ]
        )
    return buf.getvalue()


def write_phi_figure(graph: UnivoqueGraph, dimension: float, path: str | Path) -> Path:
    """Spectral-root curve of the dominant component with the unit level and
    the dimension marked."""
    comps = [c for c in scc_decompose(graph) if not c.trivial]
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    t_hi = max(1.0, dimension * 1.25 + 0.05)
    ts = np.linspace(0.0, t_hi, 60)
    for ci, comp in enumerate(comps[:4]):
        vals = [phi(graph, comp, float(t)).value for t in ts]
        ax.plot(ts, vals, label=f"component {ci} ({comp.indices.size} vertices)")
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    if dimension > 0:
        ax.axvline(dimension, color="crimson", lw=0.8, ls=":")
        ax.annotate(
            f"t1 = {dimension:.6f}",
            (dimension, 1.0),
            textcoords="offset points",
            xytext=(6, 8),
            fontsize=8,
        )
    ax.set_xlabel("t")
    ax.set_ylabel("spectral radius")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_scan_figure(scan: ScanReport, path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    betas = [p.beta for p in scan.points]
    dims = [p.dimension for p in scan.points]
    ax.plot(betas, dims, "o-", ms=3)
    if scan.stable_interval:
        ax.axvspan(*scan.stable_interval, color="seagreen", alpha=0.15,
                   label="forbidden set unchanged")
        ax.legend(fontsize=7)
    ax.set_xlabel("base")
    ax.set_ylabel("dimension")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
