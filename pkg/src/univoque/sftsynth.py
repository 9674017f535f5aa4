"""Forbidden-word synthesis for a general interval-attractor IFS.

The route: every switch-region endpoint must admit a finite branch word
mapping it into the open interior of some switch region.  Affine maps turn
the witness margins into an enlargement radius ``delta`` for which the
enlarged regions are still disjoint and interior; any cylinder shorter than
``delta`` then either misses the switch regions entirely or sits inside an
enlarged region, so the words whose cylinders meet a switch region form a
correct finite forbidden set.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .common import Word, code_to_word, format_word, word_to_code
from .errors import (
    AllForbidden,
    Intractable,
    NonPositiveDelta,
    WitnessNotFound,
    WitnessSearchStuck,
)
from .ifs import IfsSpec, Interval, SwitchRegion, admissible_branches, inverse_branch

DEFAULT_DEPTH_MAX = 64
DEFAULT_ENUMERATION_BUDGET = 10**8


@dataclass(frozen=True, eq=False)
class SftSpec:
    """Subshift of finite type over ``m`` symbols with window length
    ``length``; ``allowed_codes`` is the sorted integer encoding of the
    allowed words (complement of the forbidden set)."""

    m: int
    length: int
    allowed_codes: np.ndarray

    def __post_init__(self):
        if self.length < 2:
            raise ValueError("window length must be at least 2")

    @property
    def total_words(self) -> int:
        return self.m**self.length

    @property
    def allowed_count(self) -> int:
        return int(self.allowed_codes.size)

    @property
    def forbidden_count(self) -> int:
        return self.total_words - self.allowed_count

    def is_allowed(self, word: Word) -> bool:
        code = word_to_code(word, self.m)
        idx = int(np.searchsorted(self.allowed_codes, code))
        return idx < self.allowed_codes.size and int(self.allowed_codes[idx]) == code

    def allowed_words(self) -> list[Word]:
        return [code_to_word(int(c), self.m, self.length) for c in self.allowed_codes]

    def forbidden_codes(self) -> np.ndarray:
        mask = np.ones(self.total_words, dtype=bool)
        mask[self.allowed_codes] = False
        return np.nonzero(mask)[0].astype(np.int64)

    def forbidden_words(self) -> list[Word]:
        return [code_to_word(int(c), self.m, self.length) for c in self.forbidden_codes()]

    def same_language_presentation(self, other: "SftSpec") -> bool:
        return (
            self.m == other.m
            and self.length == other.length
            and np.array_equal(self.allowed_codes, other.allowed_codes)
        )

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "L": self.length,
            "forbidden": [format_word(w, self.m) for w in self.forbidden_words()],
        }

    @classmethod
    def from_allowed(cls, m: int, length: int, allowed: "np.ndarray | list[int]") -> "SftSpec":
        codes = np.unique(np.asarray(allowed, dtype=np.int64))
        return cls(m, length, codes)


@dataclass(frozen=True)
class EndpointWitness:
    """Finite branch word sending a switch-region endpoint into the open
    interior of some switch region, with the margin there and the total
    expansion factor accumulated along the word."""

    endpoint: float
    word: Word
    image: float
    margin: float
    expansion: float


@dataclass(frozen=True)
class SynthDiagnostics:
    delta: float
    level: int
    witnesses: tuple[EndpointWitness, ...]
    enlarged_regions: tuple[Interval, ...]
    tolerance_flagged: int = 0


def find_endpoint_witness(
    ifs: IfsSpec,
    K: Interval,
    regions: list[SwitchRegion],
    x: float,
    depth_max: int = DEFAULT_DEPTH_MAX,
) -> EndpointWitness:
    """Breadth-first search over admissible branch words from ``x``.

    Succeeds at the first image lying in the open interior of any switch
    region with margin above tolerance; breadth-first order with symbols
    expanded in increasing order makes the result the shortest witness,
    ties broken lexicographically.  Visited points are deduplicated within
    tolerance.
    """
    tau = ifs.tolerance
    escape = max(10.0 * tau, tau / min(ifs.ratios))

    def interior_hit(point: float) -> SwitchRegion | None:
        for reg in regions:
            if reg.left + tau < point < reg.right - tau:
                return reg
        return None

    visited: list[float] = []

    def seen(point: float) -> bool:
        for v in visited:
            if abs(v - point) <= tau:
                return True
        visited.append(point)
        return False

    queue: deque[tuple[float, Word]] = deque([(x, ())])
    seen(x)
    while queue:
        point, word = queue.popleft()
        reg = interior_hit(point)
        if reg is not None:
            expansion = 1.0
            for s in word:
                expansion /= ifs.maps[s].ratio
            return EndpointWitness(
                endpoint=x,
                word=word,
                image=point,
                margin=reg.interior_margin(point),
                expansion=expansion,
            )
        if len(word) >= depth_max:
            continue
        for j in sorted(admissible_branches(ifs, K, point)):
            nxt = inverse_branch(ifs, j, point)
            if nxt < K.left - escape or nxt > K.right + escape:
                raise WitnessSearchStuck(
                    f"iterate {nxt} left the attractor from {point} via branch {j}"
                )
            nxt = min(max(nxt, K.left), K.right)
            if not seen(nxt):
                queue.append((nxt, word + (j,)))
    raise WitnessNotFound(
        f"no witness for endpoint {x} within depth {depth_max}"
    )


def all_endpoint_witnesses(
    ifs: IfsSpec,
    K: Interval,
    regions: list[SwitchRegion],
    depth_max: int = DEFAULT_DEPTH_MAX,
) -> list[EndpointWitness]:
    """Witnesses for every region endpoint, left to right."""
    out = []
    for reg in regions:
        for x in (reg.left, reg.right):
            out.append(find_endpoint_witness(ifs, K, regions, x, depth_max))
    return out


def compute_delta(
    witnesses: list[EndpointWitness],
    regions: list[SwitchRegion],
    K: Interval,
) -> float:
    """Enlargement radius: the witness margins shrunk by their expansions,
    capped so the enlarged regions stay pairwise disjoint and interior to K.

    For affine branches the preimage of a margin ball is exact, so
    ``margin / expansion`` is the tight per-witness bound.
    """
    delta = min(w.margin / w.expansion for w in witnesses)
    for a, b in zip(regions, regions[1:]):
        gap = b.left - a.right
        delta = min(delta, 0.499 * gap)
    delta = min(delta, 0.999 * (regions[0].left - K.left))
    delta = min(delta, 0.999 * (K.right - regions[-1].right))
    if delta <= 0:
        raise NonPositiveDelta(f"enlargement radius collapsed to {delta}")
    return delta


def choose_level(delta: float, ifs: IfsSpec, K: Interval) -> int:
    """Smallest L (at least 2) with ``|K| * r_max^L < delta``."""
    if delta <= 0:
        raise NonPositiveDelta(f"delta must be positive, got {delta}")
    L = 2
    size = K.length * ifs.r_max**2
    while size >= delta:
        L += 1
        size *= ifs.r_max
        if L > 10_000:
            raise Intractable("cylinder level exceeds 10000; delta too small")
    return L


def _cylinder_arrays(
    ifs: IfsSpec, L: int, workers: int
) -> tuple[np.ndarray, np.ndarray]:
    """Affine data of all m^L cylinders in code order: scale and offset with
    ``f_w(x) = scale * x + offset``."""
    ratios = np.array(ifs.ratios)
    trans = np.array([f.translation for f in ifs.maps])

    def expand(scale: np.ndarray, offset: np.ndarray, levels: int):
        for _ in range(levels):
            # extend each word on the right: f_{w.j} = f_w . f_j
            offset = (offset[:, None] + scale[:, None] * trans[None, :]).ravel()
            scale = (scale[:, None] * ratios[None, :]).ravel()
        return scale, offset

    if workers <= 1 or L < 8:
        return expand(np.ones(1), np.zeros(1), L)

    # parallel over word-prefix blocks; results merge in code order
    head = min(4, L)
    scale0, offset0 = expand(np.ones(1), np.zeros(1), head)
    blocks = list(zip(scale0, offset0))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda so: expand(np.array([so[0]]), np.array([so[1]]), L - head),
                blocks,
            )
        )
    scale = np.concatenate([p[0] for p in parts])
    offset = np.concatenate([p[1] for p in parts])
    return scale, offset


def forbidden_words(
    ifs: IfsSpec,
    K: Interval,
    regions: list[SwitchRegion],
    L: int,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int | None = None,
) -> tuple[SftSpec, int]:
    """Enumerate all ``m^L`` words; forbid those whose cylinder meets any
    switch region (closed intersection, tolerance-conservative).

    Returns the SFT together with the number of words whose status was
    decided within tolerance of the boundary (flagged for diagnostics).
    """
    if L < 2:
        raise ValueError("level must be at least 2")
    m = ifs.m
    if m**L > enumeration_budget:
        raise Intractable(
            f"{m}^{L} = {m**L} words exceed the enumeration budget "
            f"{enumeration_budget}; reduce the level or raise the budget"
        )
    if workers is None:
        workers = int(os.environ.get("DIM_THREADS", "1") or "1")
    tau = ifs.tolerance
    scale, offset = _cylinder_arrays(ifs, L, workers)
    lo = offset + scale * K.left
    hi = offset + scale * K.right

    forbidden = np.zeros(lo.shape, dtype=bool)
    marginal = np.zeros(lo.shape, dtype=bool)
    for reg in regions:
        hit = (lo <= reg.right + tau) & (hi >= reg.left - tau)
        strict = (lo <= reg.right - tau) & (hi >= reg.left + tau)
        forbidden |= hit
        marginal |= hit & ~strict
    allowed = np.nonzero(~forbidden)[0].astype(np.int64)
    if allowed.size == 0:
        raise AllForbidden(f"every word of length {L} meets a switch region")
    return SftSpec(m, L, allowed), int(np.count_nonzero(marginal))


def synthesize(
    ifs: IfsSpec,
    K: Interval,
    regions: list[SwitchRegion],
    depth_max: int = DEFAULT_DEPTH_MAX,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int | None = None,
) -> tuple[SftSpec, SynthDiagnostics]:
    """Full geometric route: witnesses, enlargement radius, level, words."""
    witnesses = all_endpoint_witnesses(ifs, K, regions, depth_max)
    delta = compute_delta(witnesses, regions, K)
    level = choose_level(delta, ifs, K)
    sft, flagged = forbidden_words(
        ifs, K, regions, level, enumeration_budget, workers
    )
    diagnostics = SynthDiagnostics(
        delta=delta,
        level=level,
        witnesses=tuple(witnesses),
        enlarged_regions=tuple(
            Interval(reg.left - delta, reg.right + delta) for reg in regions
        ),
        tolerance_flagged=flagged,
    )
    return sft, diagnostics
