"""Exception hierarchy shared across the package.

Every failure mode that the CLI maps to a dedicated exit code has its own
class here; modules raise these instead of bare ValueError so callers can
react to the *kind* of failure.
"""

from __future__ import annotations


class UnivoqueError(Exception):
    """Base class for all domain errors raised by this package."""


# ---------------------------------------------------------------- ifs layer


class NotAnInterval(UnivoqueError):
    """The first-level intervals leave a gap: the attractor is not an interval."""


class DegenerateAttractor(UnivoqueError):
    """Attractor endpoints coincide within tolerance."""


class DegenerateSwitchRegion(UnivoqueError):
    """Two first-level intervals meet in a single point (within tolerance)."""


class NoOverlap(UnivoqueError):
    """No two first-level intervals overlap; every coding is unique."""


class BoundaryTouch(UnivoqueError):
    """A switch region touches an attractor endpoint; unsupported geometry."""


class OutsideAttractor(UnivoqueError):
    """A query point lies outside the attractor by more than the tolerance."""


# --------------------------------------------------------------- beta layer


class OutOfDomain(UnivoqueError):
    """Point outside the domain of the greedy/lazy map."""


class NoRoot(UnivoqueError):
    """The digit-value function has no root > 1 on the search bracket."""


class RoundTripFailed(UnivoqueError):
    """Solved base does not reproduce the prescribed expansion greedily."""


class FiniteGreedyExpansion(UnivoqueError):
    """The greedy expansion of 1 terminates (or is numerically indistinguishable
    from terminating); the lexicographic route does not apply."""


class WindowNotFound(UnivoqueError):
    """No dominance window between the reflected and greedy expansions was
    witnessed within the search bound.  Not a disproof of existence."""


# ---------------------------------------------------------- synthesis layer


class WitnessNotFound(UnivoqueError):
    """Breadth-first search found no word mapping a region endpoint into the
    interior of a switch region within the depth bound."""


class WitnessSearchStuck(UnivoqueError):
    """An iterate left the attractor by more than tolerance; numerics broke."""


class NonPositiveDelta(UnivoqueError):
    """The safety caps force the enlargement radius to zero or below."""


class AllForbidden(UnivoqueError):
    """Every word at the chosen level is forbidden: the univoque set is at
    most countable."""


class Intractable(UnivoqueError):
    """The word enumeration would exceed the configured budget."""


# -------------------------------------------------------------- graph layer


class EmptyGraph(UnivoqueError):
    """Pruning removed every vertex: dimension zero."""


class ConvergenceFailure(UnivoqueError):
    """Power iteration failed to certify the spectral radius."""


# -------------------------------------------------------------- cross-check


class PipelineMismatch(UnivoqueError):
    """The two synthesis routes produced measurably different answers."""

    def __init__(self, message: str, first_n: int | None = None):
        super().__init__(message)
        self.first_n = first_n
