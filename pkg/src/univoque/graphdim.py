"""Directed graph of unique-coding windows and the spectral dimension solve.

Vertices are the length-(L-1) prefixes of allowed words; an edge joins two
vertices when they overlap in L-2 symbols and the combined L-word is
allowed.  Each edge carries the contraction ratio of the similitude indexed
by the source's first symbol.  The Hausdorff dimension is the largest root
of Phi(t) = 1 over the strongly connected components, where Phi(t) is the
Perron eigenvalue of the component matrix with entries ratio^t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .common import Word, code_to_word, format_word
from .errors import ConvergenceFailure, EmptyGraph
from .sftsynth import SftSpec

BISECTION_TOL = 1e-10
POWER_RTOL = 1e-12
POWER_MAX_ITER = 200_000


@dataclass(eq=False)
class UnivoqueGraph:
    """Weighted digraph; ``vertex_codes`` ties vertices back to their words
    when the graph came from an SFT (synthetic test graphs may omit them)."""

    n: int
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_ratio: np.ndarray
    vertex_codes: np.ndarray | None = None
    m: int | None = None
    word_length: int | None = None

    @property
    def edge_count(self) -> int:
        return int(self.edge_src.size)

    def vertex_word(self, i: int) -> Word | None:
        if self.vertex_codes is None:
            return None
        return code_to_word(int(self.vertex_codes[i]), self.m, self.word_length)

    def vertex_label(self, i: int) -> str:
        w = self.vertex_word(i)
        return f"v{i}" if w is None else format_word(w, self.m)

    def has_self_loop(self, i: int) -> bool:
        return bool(np.any((self.edge_src == i) & (self.edge_dst == i)))

    @classmethod
    def from_edges(
        cls, n: int, edges: list[tuple[int, int, float]]
    ) -> "UnivoqueGraph":
        src = np.array([e[0] for e in edges], dtype=np.int64)
        dst = np.array([e[1] for e in edges], dtype=np.int64)
        ratio = np.array([e[2] for e in edges], dtype=float)
        return cls(n, src, dst, ratio)


def _prune_dead_ends(
    n: int, src: np.ndarray, dst: np.ndarray
) -> np.ndarray:
    """Boolean mask of vertices that survive repeated removal of
    out-degree-zero vertices (worklist, linear in edges)."""
    alive = np.ones(n, dtype=bool)
    out_deg = np.zeros(n, dtype=np.int64)
    np.add.at(out_deg, src, 1)
    order = np.argsort(dst, kind="stable")
    starts = np.searchsorted(dst[order], np.arange(n + 1))
    stack = list(np.nonzero(out_deg == 0)[0])
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for e in order[starts[v] : starts[v + 1]]:
            u = int(src[e])
            if alive[u]:
                out_deg[u] -= 1
                if out_deg[u] == 0:
                    alive[u] = False
                    stack.append(u)
    return alive


def build_graph(sft: SftSpec, ratios: "list[float] | tuple[float, ...]") -> UnivoqueGraph:
    """Construct the window-overlap graph of an SFT and prune dead ends.

    Pruning only removes vertices without outgoing edges (to a fixpoint);
    vertices without incoming edges are retained since they cannot affect
    any component root.
    """
    m, L = sft.m, sft.length
    if len(ratios) != m:
        raise ValueError("need one ratio per symbol")
    allowed = sft.allowed_codes
    if allowed.size == 0:
        raise EmptyGraph("the allowed set is empty")
    base = m ** (L - 1)
    vert = np.unique(allowed // m)
    suffix = allowed % base
    pos = np.searchsorted(vert, suffix)
    pos_clip = np.minimum(pos, vert.size - 1)
    valid = vert[pos_clip] == suffix
    words = allowed[valid]
    src_code = words // m
    dst_code = words % base
    esrc = np.searchsorted(vert, src_code).astype(np.int64)
    edst = np.searchsorted(vert, dst_code).astype(np.int64)

    alive = _prune_dead_ends(vert.size, esrc, edst)
    if not alive.any():
        raise EmptyGraph("pruning removed every vertex")
    keep = alive[esrc] & alive[edst]
    new_index = np.cumsum(alive) - 1
    esrc = new_index[esrc[keep]]
    edst = new_index[edst[keep]]
    first_symbol = (words[keep] // base).astype(np.int64)
    ratio_arr = np.asarray(ratios, dtype=float)[first_symbol]
    return UnivoqueGraph(
        n=int(alive.sum()),
        edge_src=esrc,
        edge_dst=edst,
        edge_ratio=ratio_arr,
        vertex_codes=vert[alive],
        m=m,
        word_length=L - 1,
    )


@dataclass(frozen=True)
class SccComponent:
    indices: np.ndarray
    trivial: bool


def scc_decompose(g: UnivoqueGraph) -> list[SccComponent]:
    """Strongly connected components, largest first (ties by smallest
    member); single vertices without a self-loop are marked trivial."""
    if g.n == 0:
        return []
    adj = csr_matrix(
        (np.ones(g.edge_count), (g.edge_src, g.edge_dst)), shape=(g.n, g.n)
    )
    _, labels = connected_components(adj, directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        comps.setdefault(int(lab), []).append(v)
    loops = set(map(int, g.edge_src[g.edge_src == g.edge_dst]))
    out = []
    for members in comps.values():
        idx = np.array(members, dtype=np.int64)
        trivial = idx.size == 1 and int(idx[0]) not in loops
        out.append(SccComponent(idx, trivial))
    out.sort(key=lambda c: (-c.indices.size, int(c.indices.min())))
    return out


@dataclass(frozen=True)
class PerronEnclosure:
    """Certified bracket for the Perron eigenvalue from Collatz-Wielandt
    bounds accumulated along the power iteration."""

    lo: float
    hi: float
    iterations: int

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _component_matrix(g: UnivoqueGraph, indices: np.ndarray, t: float) -> csr_matrix:
    lookup = -np.ones(g.n, dtype=np.int64)
    lookup[indices] = np.arange(indices.size)
    mask = (lookup[g.edge_src] >= 0) & (lookup[g.edge_dst] >= 0)
    src = lookup[g.edge_src[mask]]
    dst = lookup[g.edge_dst[mask]]
    vals = g.edge_ratio[mask] ** t
    return csr_matrix((vals, (src, dst)), shape=(indices.size, indices.size))


def phi(
    g: UnivoqueGraph,
    component: SccComponent,
    t: float,
    rtol: float = POWER_RTOL,
    max_iter: int = POWER_MAX_ITER,
) -> PerronEnclosure:
    """Perron eigenvalue of the component's weighted matrix at exponent t.

    Power iteration on the diagonally shifted matrix (shift restores
    primitivity for periodic components); min/max of ``(Ay)_i / y_i`` over
    the positive iterates bracket the eigenvalue, and the running
    intersection of those brackets is the certificate.
    """
    if component.trivial:
        raise ValueError("Phi is undefined on a trivial component")
    A = _component_matrix(g, component.indices, t)
    n = A.shape[0]
    if n == 1:
        val = float(A[0, 0])
        return PerronEnclosure(val, val, 1)
    shift = float(A.data.max())
    y = np.full(n, 1.0 / n)
    lo_best, hi_best = 0.0, np.inf
    for it in range(1, max_iter + 1):
        z = A.dot(y) + shift * y
        ratios = z / y
        lo_best = max(lo_best, float(ratios.min()) - shift)
        hi_best = min(hi_best, float(ratios.max()) - shift)
        if hi_best - lo_best <= rtol * max(abs(hi_best), 1.0):
            return PerronEnclosure(min(lo_best, hi_best), max(lo_best, hi_best), it)
        y = z / z.sum()
    raise ConvergenceFailure(
        f"power iteration stalled after {max_iter} iterations "
        f"(bracket [{lo_best}, {hi_best}])"
    )


@dataclass
class SccReport:
    """Per-component roots of Phi(t)=1 and their maximum."""

    components: list[SccComponent]
    component_roots: list[tuple[int, float]]
    dimension: float
    method: str
    residuals: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "components": [
                {"size": int(c.indices.size), "trivial": c.trivial}
                for c in self.components
            ],
            "component_roots": [
                {"component": i, "root": r} for i, r in self.component_roots
            ],
            "dimension": self.dimension,
            "method": self.method,
            "residuals": self.residuals,
        }


def empty_report(method: str = "empty") -> SccReport:
    return SccReport([], [], 0.0, method)


def _bisect_root(
    g: UnivoqueGraph, comp: SccComponent, tol: float
) -> tuple[float, PerronEnclosure]:
    phi0 = phi(g, comp, 0.0)
    if phi0.hi < 1.0 - 1e-9:
        raise ConvergenceFailure(
            "component with a cycle has Phi(0) < 1; graph weights inconsistent"
        )
    if abs(phi0.value - 1.0) <= 1e-12:
        return 0.0, phi0
    lo, hi = 0.0, 1.0
    # dimension on the line cannot exceed 1, but keep the solver total
    while phi(g, comp, hi).value > 1.0:
        hi *= 2.0
        if hi > 64.0:
            raise ConvergenceFailure("Phi stays above 1 out to t = 64")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if phi(g, comp, mid).value > 1.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return root, phi(g, comp, root)


def solve_dimension(
    g: UnivoqueGraph, bisection_tol: float = BISECTION_TOL
) -> SccReport:
    """Roots of Phi(t)=1 per nontrivial component; the dimension is their
    maximum (zero when no nontrivial component exists).

    On homogeneous graphs the closed form ``log Phi(0) / log(1/r)`` is also
    computed and must agree with the bisection root to 1e-9.
    """
    if g.n == 0:
        return empty_report()
    comps = scc_decompose(g)
    roots: list[tuple[int, float]] = []
    residuals: list[dict] = []
    method = "bisection"
    for i, comp in enumerate(comps):
        if comp.trivial:
            continue
        root, cert = _bisect_root(g, comp, bisection_tol)
        lookup = np.zeros(g.n, dtype=bool)
        lookup[comp.indices] = True
        mask = lookup[g.edge_src] & lookup[g.edge_dst]
        comp_ratios = g.edge_ratio[mask]
        if np.allclose(comp_ratios, comp_ratios[0], rtol=1e-12, atol=0.0):
            r = float(comp_ratios[0])
            lam = phi(g, comp, 0.0).value
            shortcut = float(np.log(lam) / np.log(1.0 / r))
            if abs(shortcut - root) > 1e-9:
                raise ConvergenceFailure(
                    f"homogeneous shortcut {shortcut} disagrees with "
                    f"bisection root {root}"
                )
            method = "homogeneous-shortcut"
        roots.append((i, root))
        residuals.append(
            {
                "component": i,
                "phi_lo": cert.lo,
                "phi_hi": cert.hi,
                "iterations": cert.iterations,
            }
        )
    dimension = max((r for _, r in roots), default=0.0)
    if not roots:
        method = "no-cycles"
    return SccReport(comps, roots, dimension, method, residuals)


def export_dot(g: UnivoqueGraph) -> str:
    """Deterministic DOT text: vertices in label order, edges sorted by
    endpoint labels, contraction ratios as edge labels."""
    labels = [g.vertex_label(i) for i in range(g.n)]
    lines = ["digraph univoque {"]
    for i in sorted(range(g.n), key=lambda i: labels[i]):
        lines.append(f'  "{labels[i]}";')
    edges = sorted(
        zip(g.edge_src, g.edge_dst, g.edge_ratio),
        key=lambda e: (labels[int(e[0])], labels[int(e[1])]),
    )
    for s, d, r in edges:
        lines.append(
            f'  "{labels[int(s)]}" -> "{labels[int(d)]}" [label="{r:.12g}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def component_word_counts(
    g: UnivoqueGraph, comp: SccComponent, n_values: list[int]
) -> dict[int, int]:
    """Exact counts of the length-n words carried by walks inside one
    strongly connected component.

    For n below the vertex word length these are the distinct n-prefixes of
    the component's vertex words; from the vertex word length on they are
    walk counts, which in this sliding-window presentation biject with the
    words of the component's internal language.
    """
    if g.vertex_codes is None:
        raise ValueError("word counts need an SFT-backed graph")
    wl = g.word_length
    lookup = -np.ones(g.n, dtype=np.int64)
    lookup[comp.indices] = np.arange(comp.indices.size)
    mask = (lookup[g.edge_src] >= 0) & (lookup[g.edge_dst] >= 0)
    src = lookup[g.edge_src[mask]]
    dst = lookup[g.edge_dst[mask]]
    codes = g.vertex_codes[comp.indices]

    out: dict[int, int] = {}
    small = [n for n in n_values if n < wl]
    for n in small:
        out[n] = int(np.unique(codes // (g.m ** (wl - n))).size)
    big = sorted(n for n in n_values if n >= wl)
    if big:
        counts = [1] * comp.indices.size
        steps_done = 0
        edge_list = list(zip(src.tolist(), dst.tolist()))
        for n in big:
            while steps_done < n - wl:
                nxt = [0] * len(counts)
                for s, d in edge_list:
                    nxt[d] += counts[s]
                counts = nxt
                steps_done += 1
            out[n] = sum(counts)
    return out
