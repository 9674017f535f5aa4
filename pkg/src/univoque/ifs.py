"""Interval-attractor iterated function systems of similitudes on the line.

An instance is an ordered list of contracting maps ``f_j(x) = r_j x + a_j``
with ``0 < r_j < 1``.  The attractor is required to be an interval; the
overlaps of the first-level intervals ``I_j = f_j(K)`` are the switch
regions, where more than one inverse branch ``T_j(x) = (x - a_j)/r_j`` maps
a point back into the attractor.  Everything downstream (uniqueness of
codings, the forbidden-word synthesis, the graph construction) is phrased
in terms of these objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .common import Word
from .errors import (
    BoundaryTouch,
    DegenerateAttractor,
    DegenerateSwitchRegion,
    NoOverlap,
    NotAnInterval,
    OutsideAttractor,
)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Similitude:
    """One contracting map ``x -> ratio * x + translation``."""

    ratio: float
    translation: float

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError(f"ratio must lie strictly in (0, 1), got {self.ratio}")

    def __call__(self, x: float) -> float:
        return self.ratio * x + self.translation

    @property
    def fixed_point(self) -> float:
        return self.translation / (1.0 - self.ratio)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[left, right]``; used for the attractor, the
    first-level intervals, and cylinder images."""

    left: float
    right: float

    def __post_init__(self):
        if not self.left <= self.right:
            raise ValueError(f"empty interval [{self.left}, {self.right}]")

    @property
    def length(self) -> float:
        return self.right - self.left

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.left - tol <= x <= self.right + tol

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.left, other.left)
        hi = min(self.right, other.right)
        return Interval(lo, hi) if lo <= hi else None


@dataclass(frozen=True)
class SwitchRegion:
    """Maximal closed interval on which at least two inverse branches are
    admissible.  ``branch_set`` holds every symbol whose first-level interval
    overlaps the region in a set of positive length."""

    left: float
    right: float
    branch_set: frozenset[int]

    @property
    def length(self) -> float:
        return self.right - self.left

    def interior_margin(self, x: float) -> float:
        """Distance from ``x`` to the region boundary; positive inside."""
        return min(x - self.left, self.right - x)


@dataclass(frozen=True)
class IfsSpec:
    """Problem instance: the sorted maps and the boundary tolerance.

    Maps are stored sorted by fixed point (ties broken by ratio ascending);
    the stored order defines the symbol alphabet ``0..m-1``.
    """

    maps: tuple[Similitude, ...]
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ValueError("an IFS needs at least two maps")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        ordered = tuple(sorted(self.maps, key=lambda f: (f.fixed_point, f.ratio)))
        object.__setattr__(self, "maps", ordered)

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(f.ratio for f in self.maps)

    @property
    def r_max(self) -> float:
        return max(self.ratios)

    @classmethod
    def from_json(cls, text: str) -> "IfsSpec":
        """Parse ``{"maps": [{"ratio": r, "translation": a}, ...],
        "tolerance": t}``; map order in the file is irrelevant."""
        doc = json.loads(text)
        maps = tuple(
            Similitude(float(entry["ratio"]), float(entry["translation"]))
            for entry in doc["maps"]
        )
        tol = float(doc.get("tolerance", DEFAULT_TOLERANCE))
        return cls(maps, tol)

    def to_json(self) -> str:
        return json.dumps(
            {
                "maps": [
                    {"ratio": f.ratio, "translation": f.translation}
                    for f in self.maps
                ],
                "tolerance": self.tolerance,
            },
            sort_keys=True,
        )


def attractor(ifs: IfsSpec) -> Interval:
    """Attractor interval from the extreme fixed points, with a cover check.

    The endpoints are exact for similitudes: the leftmost and rightmost
    fixed points.  The cover check walks the first-level intervals sorted by
    left endpoint and rejects any gap wider than the tolerance.
    """
    tau = ifs.tolerance
    fixed = [f.fixed_point for f in ifs.maps]
    left, right = min(fixed), max(fixed)
    if right - left <= tau:
        raise DegenerateAttractor(
            f"attractor [{left}, {right}] is a point within tolerance {tau}"
        )
    K = Interval(left, right)
    covered = left
    for iv in sorted(first_level_intervals(ifs, K), key=lambda iv: iv.left):
        if iv.left > covered + tau:
            raise NotAnInterval(
                f"gap ({covered}, {iv.left}) between first-level intervals"
            )
        covered = max(covered, iv.right)
    if covered < right - tau:
        raise NotAnInterval(f"first-level intervals stop at {covered} < {right}")
    return K


def first_level_intervals(ifs: IfsSpec, K: Interval) -> list[Interval]:
    """``I_j = f_j(K)`` in alphabet order."""
    return [Interval(f(K.left), f(K.right)) for f in ifs.maps]


def switch_regions(ifs: IfsSpec, K: Interval) -> list[SwitchRegion]:
    """Merge all pairwise overlaps of the first-level intervals into maximal
    disjoint closed intervals, sorted left to right.

    Raises DegenerateSwitchRegion when an overlap is a single point within
    tolerance, NoOverlap when there is none at all (every coding is then
    unique), and BoundaryTouch when a region reaches an attractor endpoint.
    """
    tau = ifs.tolerance
    intervals = first_level_intervals(ifs, K)
    pieces: list[Interval] = []
    for i in range(ifs.m):
        for j in range(i + 1, ifs.m):
            lo = max(intervals[i].left, intervals[j].left)
            hi = min(intervals[i].right, intervals[j].right)
            if hi - lo > tau:
                pieces.append(Interval(lo, hi))
            elif hi - lo >= -tau:
                raise DegenerateSwitchRegion(
                    f"intervals {i} and {j} meet in a point near {lo}"
                )
    if not pieces:
        raise NoOverlap("no two first-level intervals overlap")

    pieces.sort(key=lambda iv: iv.left)
    merged: list[list[float]] = [[pieces[0].left, pieces[0].right]]
    for iv in pieces[1:]:
        if iv.left <= merged[-1][1] + tau:
            merged[-1][1] = max(merged[-1][1], iv.right)
        else:
            merged.append([iv.left, iv.right])

    regions = []
    for lo, hi in merged:
        if lo <= K.left + tau or hi >= K.right - tau:
            raise BoundaryTouch(
                f"switch region [{lo}, {hi}] touches the attractor boundary"
            )
        branches = frozenset(
            j
            for j, iv in enumerate(intervals)
            if min(iv.right, hi) - max(iv.left, lo) > tau
        )
        regions.append(SwitchRegion(lo, hi, branches))
    return regions


def inverse_branch(ifs: IfsSpec, j: int, x: float) -> float:
    """``T_j(x) = (x - a_j) / r_j``, defined for all real x."""
    f = ifs.maps[j]
    return (x - f.translation) / f.ratio


def admissible_branches(ifs: IfsSpec, K: Interval, x: float) -> set[int]:
    """Symbols whose first-level interval contains ``x``.

    Boundary classification is tolerance-conservative: a point within the
    tolerance of an interval endpoint counts as inside, so results near
    switch-region boundaries err toward non-uniqueness.
    """
    tau = ifs.tolerance
    if not K.contains(x, tau):
        raise OutsideAttractor(f"{x} outside attractor [{K.left}, {K.right}]")
    return {
        j
        for j, iv in enumerate(first_level_intervals(ifs, K))
        if iv.contains(x, tau)
    }


def project(ifs: IfsSpec, w: Word, K: Interval) -> Interval:
    """Cylinder interval ``f_{w_1} o ... o f_{w_n}(K)``.

    The first symbol is the outermost map, so the cylinder contains every
    point whose coding starts with ``w``; its length is ``|K| * prod r``.
    """
    scale, offset = 1.0, 0.0
    for s in w:
        f = ifs.maps[s]
        # compose on the right: f_w . f_s
        offset = offset + scale * f.translation
        scale = scale * f.ratio
    return Interval(offset + scale * K.left, offset + scale * K.right)


def is_coding_prefix(ifs: IfsSpec, K: Interval, x: float, w: Word) -> bool:
    """True iff every partial inverse orbit ``T_{w_1..w_k}(x)`` stays in K
    (within tolerance)."""
    tau = ifs.tolerance
    y = x
    for s in w:
        y = inverse_branch(ifs, s, y)
        if not K.contains(y, tau):
            return False
    return True
