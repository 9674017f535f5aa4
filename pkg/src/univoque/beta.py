"""Non-integer base expansions: greedy and lazy digit maps, the expansion
of 1, the reflected-dominance window test, and the direct band form of the
subshift of unique codings.

The base ``beta > 1`` (non-integer) induces the homogeneous IFS
``g_j(x) = (x + j) / beta`` over digits ``0 .. ceil(beta)-1`` whose attractor
is ``[0, (ceil(beta)-1)/(beta-1)]``.  A point has a unique expansion exactly
when its greedy and lazy digit streams coincide, and when the reflected
expansion of 1 lexicographically dominates a shift of itself, the unique
codings form a subshift of finite type cut out by a lexicographic band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp

from .common import Word, frac, word_to_code
from .errors import (
    FiniteGreedyExpansion,
    NoRoot,
    OutOfDomain,
    RoundTripFailed,
    WindowNotFound,
)
from .ifs import DEFAULT_TOLERANCE, IfsSpec, Interval, Similitude
from .sftsynth import DEFAULT_ENUMERATION_BUDGET, SftSpec
from .common import Verdict

DEFAULT_SEARCH_BOUND = 10_000


@dataclass(frozen=True)
class BetaBase:
    """A non-integer base ``beta > 1`` with digit alphabet ``0..ceil(beta)-1``."""

    beta: float
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.beta > 1.0:
            raise ValueError(f"base must exceed 1, got {self.beta}")
        if abs(self.beta - round(self.beta)) <= self.tolerance:
            raise ValueError(f"base {self.beta} is an integer within tolerance")

    @property
    def digit_count(self) -> int:
        return math.ceil(self.beta)

    @property
    def m(self) -> int:
        return self.digit_count

    @property
    def attractor_right(self) -> float:
        return (self.digit_count - 1) / (self.beta - 1)


def beta_ifs(b: BetaBase) -> IfsSpec:
    """The ``ceil(beta)``-map homogeneous IFS ``x -> (x + j)/beta``."""
    r = 1.0 / b.beta
    return IfsSpec(
        tuple(Similitude(r, j / b.beta) for j in range(b.digit_count)),
        b.tolerance,
    )


def _digits_of_one(beta: float, m: int, n: int, tau: float) -> tuple[list[int], int | None]:
    """First ``n`` greedy digits of 1 in base ``beta``, computed at working
    precision high enough that every digit is exact for the given float base.

    Returns the digits and, when the orbit reaches 0 (or a digit boundary)
    within tolerance, the 1-based position after which all digits are zero.
    """
    dps = 40 + int(n * math.log10(beta)) + 10
    with mp.workdps(dps):
        b = mp.mpf(beta)
        x = mp.mpf(1)
        digits: list[int] = []
        for _ in range(n):
            if x < tau:
                cut = len(digits)
                digits.extend([0] * (n - cut))
                return digits, cut
            t = b * x
            d = int(mp.floor(t))
            if d > m - 1:
                d = m - 1
            elif d < m - 1 and (d + 1) - t <= tau:
                # the orbit is about to land on a digit boundary: numerically
                # indistinguishable from a terminating expansion
                digits.append(d + 1)
                cut = len(digits)
                digits.extend([0] * (n - cut))
                return digits, cut
            digits.append(d)
            x = t - d
    return digits, None


@dataclass
class GreedyExpansion:
    """Greedy expansion of 1 and its digit reflection, extended on demand.

    ``alpha(n)`` gives the first n greedy digits of 1; ``epsilon(n)`` their
    reflection ``ceil(beta)-1 - alpha_n``.  ``terminates_at`` is set when the
    expansion was detected to be finite within the digits computed so far.
    """

    base: BetaBase
    periodic_form: tuple[Word, Word] | None = None
    _digits: list[int] = field(default_factory=list, repr=False)
    _terminates: int | None = field(default=None, repr=False)

    def _ensure(self, n: int) -> None:
        if len(self._digits) >= n:
            return
        digits, cut = _digits_of_one(
            self.base.beta, self.base.digit_count, n, self.base.tolerance
        )
        if digits[0] < 1:
            raise ValueError("greedy expansion of 1 must start with a digit >= 1")
        self._digits = digits
        self._terminates = cut

    def alpha(self, n: int) -> Word:
        self._ensure(n)
        return tuple(self._digits[:n])

    def epsilon(self, n: int) -> Word:
        top = self.base.digit_count - 1
        return tuple(top - a for a in self.alpha(n))

    @property
    def terminates_at(self) -> int | None:
        return self._terminates


def expansion_of_one(b: BetaBase) -> GreedyExpansion:
    return GreedyExpansion(b)


@dataclass(frozen=True)
class LexWindow:
    """Shift ``M`` and window length ``p`` witnessing that the reflected
    expansion of 1 strictly dominates the expansion itself:
    ``(eps_{M+1}..eps_p) > (alpha_1..alpha_{p-M})``."""

    M: int
    p: int

    def __post_init__(self):
        if not (self.M >= 0 and self.p > self.M):
            raise ValueError(f"need 0 <= M < p, got M={self.M}, p={self.p}")


def find_lex_window(
    ge: GreedyExpansion, search_bound: int = DEFAULT_SEARCH_BOUND
) -> LexWindow:
    """Smallest shift M whose dominance is witnessed within the bound, with
    the smallest valid window length p for that M.

    Raises FiniteGreedyExpansion when the expansion of 1 terminates within
    the bound, and WindowNotFound when no dominance is witnessed (which is
    not a disproof of existence).
    """
    chunk = min(64, search_bound)
    while True:
        alpha = np.array(ge.alpha(chunk), dtype=np.int64)
        if ge.terminates_at is not None:
            raise FiniteGreedyExpansion(
                f"greedy expansion of 1 in base {ge.base.beta} terminates "
                f"after {ge.terminates_at} digits"
            )
        eps = (ge.base.digit_count - 1) - alpha
        undecided = False
        for M in range(1, chunk):
            e = eps[M:]
            a = alpha[: chunk - M]
            diff = e - a
            nz = np.nonzero(diff)[0]
            if nz.size == 0:
                undecided = True
                continue
            i = int(nz[0])
            if diff[i] > 0:
                p = max(M + i + 1, 2)
                return LexWindow(M, p)
        if chunk >= search_bound:
            detail = "comparison undecided at the bound" if undecided else ""
            raise WindowNotFound(
                f"no dominance window within {search_bound} digits "
                f"for base {ge.base.beta}. {detail}".strip()
            )
        chunk = min(chunk * 4, search_bound)


def sft_from_lex(
    ge: GreedyExpansion,
    win: LexWindow,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> SftSpec:
    """Length-p subshift whose allowed words form the strict lexicographic
    band between the reflected prefix and the greedy prefix of 1.

    Words matching a bound exactly are forbidden: the strict infinite
    conditions pad the bounds with the extreme constant tails, so an exact
    prefix match always violates them.
    """
    from .errors import Intractable

    m = ge.base.digit_count
    p = win.p
    if m**p > enumeration_budget:
        raise Intractable(
            f"{m}^{p} = {m**p} words exceed the enumeration budget "
            f"{enumeration_budget}"
        )
    lo = word_to_code(ge.epsilon(p), m)
    hi = word_to_code(ge.alpha(p), m)
    allowed = np.arange(lo + 1, hi, dtype=np.int64)
    return SftSpec(m, p, allowed)


def restrict_to_core(b: BetaBase) -> Interval:
    """Absorbing core ``[(ceil(beta)-1-beta)/(beta-1), 1]`` for univoque
    orbits, clipped at the attractor's left endpoint when the formula is
    negative.  Dimension on the core equals dimension of the whole set."""
    raw = (b.digit_count - 1 - b.beta) / (b.beta - 1.0)
    return Interval(max(raw, 0.0), 1.0)


# ------------------------------------------------------------- digit maps


def _greedy_digit_float(beta: float, m: int, x: float) -> int:
    return min(int(math.floor(beta * x)), m - 1)


def greedy_digits(b: BetaBase, x: float, n: int) -> Word:
    """First n digits of the greedy expansion of x: each step takes the
    largest digit whose inverse branch stays in the attractor."""
    tau = b.tolerance
    A = b.attractor_right
    if x < -tau or x > A + tau:
        raise OutOfDomain(f"{x} outside [0, {A}]")
    x = min(max(x, 0.0), A)
    out = []
    for _ in range(n):
        d = _greedy_digit_float(b.beta, b.digit_count, x)
        d = max(d, 0)
        out.append(d)
        x = max(b.beta * x - d, 0.0)
    return tuple(out)


def lazy_digits(b: BetaBase, x: float, n: int) -> Word:
    """First n digits of the lazy expansion of x: each step takes the
    smallest admissible digit."""
    tau = b.tolerance
    A = b.attractor_right
    if x < -tau or x > A + tau:
        raise OutOfDomain(f"{x} outside [0, {A}]")
    x = min(max(x, 0.0), A)
    out = []
    for _ in range(n):
        d = max(0, min(b.digit_count - 1, math.ceil(b.beta * x - A)))
        out.append(d)
        x = min(max(b.beta * x - d, 0.0), A)
    return tuple(out)


def is_univoque_by_greedy_lazy(b: BetaBase, x: float, depth: int) -> Verdict:
    """Tri-state uniqueness test: greedy and lazy digits are compared along
    the orbit in exact rational arithmetic for the given float inputs.

    NOT_UNIQUE as soon as the digits differ (the orbit sits in a switch
    region, closed); INDETERMINATE when they agree to depth but some orbit
    point passes within tolerance of a switch-region boundary.
    """
    m = b.digit_count
    bq = frac(b.beta)
    tau = frac(b.tolerance)
    A = Fraction(m - 1) / (bq - 1)
    xq = frac(x)
    if xq < -tau or xq > A + tau:
        raise OutOfDomain(f"{x} outside [0, {float(A)}]")
    xq = min(max(xq, Fraction(0)), A)
    boundaries = []
    for l in range(1, m):
        boundaries.append(Fraction(l) / bq)
        boundaries.append(A / bq + Fraction(l - 1) / bq)
    seen_near = False
    for _ in range(depth):
        if any(abs(xq - bd) <= tau for bd in boundaries):
            seen_near = True
        t = bq * xq
        d_greedy = min(math.floor(t), m - 1)
        d_lazy = max(0, min(m - 1, math.ceil(t - A)))
        if d_greedy != d_lazy:
            return Verdict.NOT_UNIQUE
        xq = t - d_greedy
    return Verdict.INDETERMINATE if seen_near else Verdict.UNIQUE


# -------------------------------------------------- solving for the base


def _expansion_value(beta, preperiod: Word, period: Word):
    """Value of the (eventually periodic) digit sequence in base ``beta``;
    works for mpf and float alike."""
    v = 0.0 * beta
    binv = 1 / beta
    scale = 1
    for d in preperiod:
        scale = scale * binv
        v += d * scale
    if period:
        pv = 0.0 * beta
        pscale = 1
        for d in period:
            pscale = pscale * binv
            pv += d * pscale
        v += scale * pv / (1 - binv ** len(period))
    return v


def beta_from_periodic_expansion(
    preperiod: Word,
    period: Word,
    value_tolerance: float = 1e-12,
    tolerance: float = DEFAULT_TOLERANCE,
) -> float:
    """Unique base at which the prescribed eventually periodic sequence is a
    valid greedy expansion of 1, found by bisecting the strictly decreasing
    value function on ``(1, max_digit + 1)``.

    Raises NoRoot when the value function has no sign change on the bracket
    (or the root is an integer base), and RoundTripFailed when the solved
    base does not reproduce the prescribed digits greedily.
    """
    if all(d == 0 for d in period):
        period = ()
    digits = tuple(preperiod) + tuple(period)
    if not digits:
        raise ValueError("expansion must contain at least one digit")
    if any(d < 0 for d in digits):
        raise ValueError("digits must be nonnegative")
    dmax = max(digits)
    if dmax < 1:
        raise NoRoot("all digits are zero; the value function never reaches 1")

    with mp.workdps(60):
        lo = mp.mpf(1) + mp.mpf(10) ** -12
        hi = mp.mpf(dmax + 1) - mp.mpf(10) ** -12
        f_lo = _expansion_value(lo, preperiod, period) - 1
        f_hi = _expansion_value(hi, preperiod, period) - 1
        if not (f_lo > 0 > f_hi):
            raise NoRoot(
                f"value function does not cross 1 on (1, {dmax + 1}): "
                f"endpoint values {float(f_lo + 1):.6g}, {float(f_hi + 1):.6g}"
            )
        for _ in range(300):
            mid = (lo + hi) / 2
            fm = _expansion_value(mid, preperiod, period) - 1
            if abs(fm) < value_tolerance and hi - lo < mp.mpf(10) ** -30:
                break
            if fm > 0:
                lo = mid
            else:
                hi = mid
        root = float((lo + hi) / 2)

    if abs(root - round(root)) <= tolerance:
        raise NoRoot(f"root {root} is an integer base")
    base = BetaBase(root, tolerance)

    # round-trip: the solved base must reproduce the prescription greedily
    n_check = len(preperiod) + 3 * max(len(period), 1) + 3
    expected = list(preperiod)
    while len(expected) < n_check:
        expected.extend(period if period else (0,))
    got, _ = _digits_of_one(root, base.digit_count, n_check, tolerance)
    if got != expected[:n_check]:
        raise RoundTripFailed(
            f"greedy expansion of 1 in base {root} starts {got[:12]}, "
            f"prescribed {expected[:12]}"
        )
    return root
