"""Fuzzy-set primitives: piecewise-linear membership functions, linguistic
variables with named terms, hedges, and alpha-cuts.

Everything here is a pure function over immutable data; variables can be
shared freely across threads once constructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, DomainError

TRIANGULAR = "triangular"
TRAPEZOIDAL = "trapezoidal"

# Atomic hedges. "very" reinforces (u^2), "more-or-less" weakens (sqrt u),
# "not" complements (1 - u).
HEDGE_NAMES = ("very", "more-or-less", "not")


@dataclass(frozen=True)
class MembershipFunction:
    """Triangular (a, b, c) or trapezoidal (a, b, c, d) membership function.

    Breakpoints must be nondecreasing. For cyclic functions (hue) the
    breakpoints are given unwrapped, e.g. (315, 345, 375, 385) for a set
    whose plateau straddles 0/360; evaluation reduces x into [a, a + period).
    """

    shape: str
    points: tuple[float, ...]
    cyclic: bool = False
    period: float = 360.0

    def __post_init__(self):
        n = {TRIANGULAR: 3, TRAPEZOIDAL: 4}.get(self.shape)
        if n is None:
            raise ConfigError(f"unknown membership shape {self.shape!r}")
        if len(self.points) != n:
            raise ConfigError(
                f"{self.shape} needs {n} breakpoints, got {len(self.points)}"
            )
        if any(not math.isfinite(p) for p in self.points):
            raise ConfigError(f"non-finite breakpoint in {self.points}")
        if list(self.points) != sorted(self.points):
            raise ConfigError(f"breakpoints must be nondecreasing: {self.points}")
        if self.cyclic:
            if self.period <= 0:
                raise ConfigError("cyclic membership function needs a positive period")
            if self.points[-1] - self.points[0] > self.period:
                raise ConfigError(
                    f"cyclic support wider than one period: {self.points}"
                )

    def __call__(self, x: float) -> float:
        if self.cyclic:
            a = self.points[0]
            x = a + ((x - a) % self.period)
        if self.shape == TRIANGULAR:
            a, b, c = self.points
            if x < a or x > c:
                return 0.0
            if x == b:
                return 1.0
            if x < b:
                return (x - a) / (b - a)
            return (c - x) / (c - b)
        a, b, c, d = self.points
        if x < a or x > d:
            return 0.0
        if b <= x <= c:
            return 1.0
        if x < b:
            return (x - a) / (b - a)
        return (d - x) / (d - c)


def eval_membership(mf: MembershipFunction, x: float) -> float:
    """Membership degree of x, always in [0, 1]; 0 outside the support."""
    if not math.isfinite(x):
        raise DomainError(f"membership argument must be finite, got {x!r}")
    return mf(x)


@dataclass(frozen=True)
class LinguisticVariable:
    """A named variable whose values are words, each backed by a membership
    function over a closed numeric domain.

    Term order is significant: argmax ties are resolved in favor of the
    earlier-declared term, which keeps classification deterministic.
    """

    name: str
    domain: tuple[float, float]
    terms: tuple[tuple[str, MembershipFunction], ...]

    # Clamp slack at the domain edges before rejecting a value.
    _EDGE_TOL = 1e-9

    def __post_init__(self):
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(f"bad domain for {self.name!r}: {self.domain}")
        names = [t for t, _ in self.terms]
        if len(names) != len(set(names)):
            raise ConfigError(f"duplicate term names in variable {self.name!r}")
        if not names:
            raise ConfigError(f"variable {self.name!r} has no terms")
        for x in self._sample_grid(1009):
            if max(mf(x) for _, mf in self.terms) <= 0.0:
                raise ConfigError(
                    f"variable {self.name!r} has a coverage hole near x={x:g}"
                )

    def _sample_grid(self, n: int) -> Iterable[float]:
        lo, hi = self.domain
        return (lo + (hi - lo) * i / (n - 1) for i in range(n))

    def term_names(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.terms)

    def memberships(self, x: float) -> dict[str, float]:
        """Degrees of all terms at x (no domain check; callers clamp first)."""
        return {t: mf(x) for t, mf in self.terms}

    def _coerce(self, x: float) -> float:
        lo, hi = self.domain
        if x < lo:
            if lo - x <= self._EDGE_TOL:
                return lo
            raise DomainError(f"{self.name}={x!r} below domain [{lo}, {hi}]")
        if x > hi:
            if x - hi <= self._EDGE_TOL:
                return hi
            raise DomainError(f"{self.name}={x!r} above domain [{lo}, {hi}]")
        return x

    def classify(self, x: float) -> tuple[str, float]:
        """Best term at x: maximal membership, earlier declaration wins ties."""
        x = self._coerce(x)
        best_name, best_mu = self.terms[0][0], self.terms[0][1](x)
        for name, mf in self.terms[1:]:
            mu = mf(x)
            if mu > best_mu:
                best_name, best_mu = name, mu
        return best_name, best_mu

    def ruspini_defect(self, samples: int = 1000) -> float:
        """Largest |sum of memberships - 1| over a uniform sample grid."""
        worst = 0.0
        for x in self._sample_grid(samples):
            s = sum(mf(x) for _, mf in self.terms)
            worst = max(worst, abs(s - 1.0))
        return worst


def classify(var: LinguisticVariable, x: float) -> tuple[str, float]:
    return var.classify(x)


def apply_hedges(hedges: Sequence[str], u: float) -> float:
    """Apply a written hedge sequence to a membership degree.

    The sequence is given in written order ("not very" -> ["not", "very"]);
    application is innermost-first, so the last hedge acts on u directly.
    """
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"hedge argument must be in [0, 1], got {u!r}")
    for h in reversed(hedges):
        if h == "very":
            u = u * u
        elif h == "more-or-less":
            u = math.sqrt(u)
        elif h == "not":
            u = 1.0 - u
        else:
            raise DomainError(f"unknown hedge {h!r}")
    return u


def normalize_hedge(token: str) -> str:
    """Canonicalize a hedge spelling ('more_or_less' -> 'more-or-less')."""
    t = token.strip().lower().replace("_", "-")
    if t not in HEDGE_NAMES:
        raise DomainError(f"unknown hedge {token!r}")
    return t


def alpha_cut(memberships: Mapping, alpha: float) -> set:
    """Crisp set of elements whose membership is at least alpha.

    alpha must lie in (0, 1]; alpha <= 0 would return the whole universe and
    is rejected to force explicit intent.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must be in (0, 1], got {alpha!r}")
    return {k for k, mu in memberships.items() if mu >= alpha}
