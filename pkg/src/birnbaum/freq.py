"""Conditional coverage examples and optimal level allocation.

* :func:`example3_coverage` -- the point-mass confidence set ``C = {X}``
  where ``P(X = theta) = 1 - theta`` and ``P(X = 0) = theta``.
* :func:`example4_analysis` -- two observations on ``{theta - 1, theta + 1}``
  with ``P(X = theta + 1) = 1/2 + theta * eps``, estimator ``min(X) + 1``.
* :func:`equal_level_test` / :func:`optimal_mixture_test` -- one-sided z-tests
  when one of two instruments is picked by a fair coin.  The most powerful
  test of the mixture uses one likelihood-ratio cutoff across instruments.

Examples 3 and 4 are exact (``Fraction``); the normal-theory part is float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from . import normal
from .errors import DomainError
from .model import as_rational

# -- point-mass coverage ------------------------------------------------------

CONDITIONINGS = ("unconditional", "given_X_positive", "given_X_zero")


def example3_coverage(theta, conditioning: str = "unconditional") -> Fraction:
    """Coverage probability of ``C = {X}``.

    ``conditioning`` is one of ``unconditional``, ``given_X_positive`` or
    ``given_X_zero``.  Conditioning on ``X > 0`` when ``theta == 0`` raises
    ``CONDITION_IMPOSSIBLE``.
    """
    theta = as_rational(theta)
    if not 0 <= theta < 1:
        raise DomainError("BAD_THETA", f"theta must lie in [0, 1), got {theta}")
    if conditioning == "unconditional":
        return 1 - theta
    if conditioning == "given_X_positive":
        if theta == 0:
            raise DomainError("CONDITION_IMPOSSIBLE", "X > 0 has probability 0 when theta = 0")
        return Fraction(1)
    if conditioning == "given_X_zero":
        return Fraction(1) if theta == 0 else Fraction(0)
    raise DomainError("BAD_CONDITIONING", f"conditioning must be one of {CONDITIONINGS}, got {conditioning!r}")


# -- two-point translation model ----------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval; ``None`` bounds are infinite."""

    lo: Fraction | None
    hi: Fraction | None

    def __contains__(self, v):
        return (self.lo is None or self.lo <= v) and (self.hi is None or v <= self.hi)

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max((b for b in (self.lo, other.lo) if b is not None), default=None)
        hi = min((b for b in (self.hi, other.hi) if b is not None), default=None)
        if lo is not None and hi is not None and lo > hi:
            return None
        return Interval(lo, hi)


@dataclass(frozen=True)
class TwoPointModel:
    epsilon: Fraction
    theta: Fraction

    def __post_init__(self):
        eps, theta = as_rational(self.epsilon), as_rational(self.theta)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "theta", theta)
        if not 0 <= eps <= 1:
            raise DomainError("INVALID_MODEL", f"epsilon must lie in [0, 1], got {eps}")
        if eps > 0 and abs(theta) > self.half_width:
            raise DomainError("INVALID_MODEL", f"|theta| must be <= 1/(2 eps) = {self.half_width}, got {theta}")

    @property
    def half_width(self) -> Fraction | None:
        return None if self.epsilon == 0 else 1 / (2 * self.epsilon)

    @property
    def p_up(self) -> Fraction:
        return Fraction(1, 2) + self.theta * self.epsilon

    @property
    def p_down(self) -> Fraction:
        return Fraction(1, 2) - self.theta * self.epsilon

    def support_sets(self) -> tuple[Interval, Interval]:
        """Possible values of ``theta - 1`` and of ``theta + 1`` over the parameter range."""
        w = self.half_width
        if w is None:
            return Interval(None, None), Interval(None, None)
        return Interval(-w - 1, w - 1), Interval(-w + 1, w + 1)

    def outcomes(self):
        """The four ``((x1, x2), probability)`` pairs."""
        vals = ((self.theta - 1, self.p_down), (self.theta + 1, self.p_up))
        return [((a, b), pa * pb) for (a, pa), (b, pb) in product(vals, vals)]


@dataclass
class TwoPointAnalysis:
    model: TwoPointModel
    unconditional: Fraction
    given_distinct: Fraction | None
    given_tie_lower_only: Fraction | None
    given_tie_upper_only: Fraction | None
    given_tie_both: Fraction | None
    event_probabilities: dict[str, Fraction]
    given_d1: Fraction | None
    given_d0: Fraction | None
    d_ancillary: bool
    sets_disjoint: bool
    modified_unconditional: Fraction
    oracle: dict[str, Fraction | None] = field(default_factory=dict)

    def values(self) -> dict[str, Fraction | None]:
        return {
            "unconditional": self.unconditional,
            "given_distinct": self.given_distinct,
            "given_tie_lower_only": self.given_tie_lower_only,
            "given_tie_upper_only": self.given_tie_upper_only,
            "given_tie_both": self.given_tie_both,
            "given_d1": self.given_d1,
            "given_d0": self.given_d0,
            "modified_unconditional": self.modified_unconditional,
        }


def _ratio(num, den):
    return None if den == 0 else num / den


def two_point_events(model: TwoPointModel):
    """Event predicates on ``(x1, x2)`` used by the conditional analyses."""
    a_down, a_up = model.support_sets()

    def tie(x):
        return x[0] == x[1]

    return {
        "distinct": lambda x: x[0] != x[1],
        "tie_lower_only": lambda x: tie(x) and x[0] in a_down and x[0] not in a_up,
        "tie_upper_only": lambda x: tie(x) and x[0] in a_up and x[0] not in a_down,
        "tie_both": lambda x: tie(x) and x[0] in a_down and x[0] in a_up,
        "d1": lambda x: abs(x[0] - x[1]) / 2 == 1,
        "d0": lambda x: abs(x[0] - x[1]) / 2 == 0,
    }


def enumerate_two_point(model: TwoPointModel, estimator=None) -> dict[str, Fraction | None]:
    """Brute-force ``P(T = theta | event)`` over the four outcomes of ``(X1, X2)``."""
    if estimator is None:
        def estimator(x):
            return min(x) + 1
    out: dict[str, Fraction | None] = {}
    outs = model.outcomes()
    out["unconditional"] = sum((p for x, p in outs if estimator(x) == model.theta), Fraction(0))
    for name, event in two_point_events(model).items():
        den = sum((p for x, p in outs if event(x)), Fraction(0))
        num = sum((p for x, p in outs if event(x) and estimator(x) == model.theta), Fraction(0))
        out["given_" + name] = _ratio(num, den)
    return out


def modified_estimator(x):
    lo = min(x)
    return lo - 1 if x[0] == x[1] and lo > 0 else lo + 1


def example4_analysis(model: TwoPointModel) -> TwoPointAnalysis:
    """Closed-form coverage of ``T = min(X1, X2) + 1`` under several conditionings.

    Conditional values are ``None`` when the conditioning event has
    probability 0.  Every value is checked against :func:`enumerate_two_point`
    before returning.
    """
    p, q = model.p_up, model.p_down
    lower, upper = model.theta - 1, model.theta + 1
    a_down, a_up = model.support_sets()

    # a tie at theta-1 has probability q^2, a tie at theta+1 probability p^2;
    # T = theta exactly on distinct pairs and on the tie at theta-1
    lower_in_up = lower in a_up
    upper_in_down = upper in a_down
    ev = {
        "distinct": 2 * p * q,
        "tie_lower_only": q * q if not lower_in_up else Fraction(0),
        "tie_upper_only": p * p if not upper_in_down else Fraction(0),
        "tie_both": (q * q if lower_in_up else 0) + (p * p if upper_in_down else 0),
    }
    unconditional = 1 - p * p
    given_distinct = Fraction(1) if ev["distinct"] else None
    given_lower_only = Fraction(1) if ev["tie_lower_only"] else None
    given_upper_only = Fraction(0) if ev["tie_upper_only"] else None
    if lower_in_up and upper_in_down:
        given_both = _ratio(q * q, q * q + p * p)
    elif lower_in_up:
        given_both = Fraction(1) if q else None
    elif upper_in_down:
        given_both = Fraction(0) if p else None
    else:
        given_both = None

    given_d1 = Fraction(1) if ev["distinct"] else None
    given_d0 = _ratio(q * q, q * q + p * p)
    d_ancillary = model.epsilon == 0
    sets_disjoint = a_down.intersect(a_up) is None

    modified = sum(
        (pr for x, pr in model.outcomes() if modified_estimator(x) == model.theta), Fraction(0)
    )

    result = TwoPointAnalysis(
        model=model,
        unconditional=unconditional,
        given_distinct=given_distinct,
        given_tie_lower_only=given_lower_only,
        given_tie_upper_only=given_upper_only,
        given_tie_both=given_both,
        event_probabilities=ev,
        given_d1=given_d1,
        given_d0=given_d0,
        d_ancillary=d_ancillary,
        sets_disjoint=sets_disjoint,
        modified_unconditional=modified,
    )
    oracle = enumerate_two_point(model)
    oracle["modified_unconditional"] = enumerate_two_point(model, modified_estimator)["unconditional"]
    result.oracle = oracle
    for key, value in result.values().items():
        if oracle[key] != value:
            raise DomainError("ORACLE_MISMATCH", f"{key}: closed form {value} != enumeration {oracle[key]}")
    return result


# -- instrument mixture tests ---------------------------------------------------

REFERENCE_FIGURES = {
    "conditional_power": 0.646,
    "optimal_power": 0.694,
    "alpha_old": 0.099,
    "alpha_new": 0.001,
}


@dataclass(frozen=True)
class InstrumentSpec:
    sigma: float
    mu0: float
    mu1: float
    n: int = 1

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("BAD_INSTRUMENT", f"sigma must be positive, got {self.sigma}")
        if not self.mu1 > self.mu0:
            raise DomainError("BAD_INSTRUMENT", f"need mu1 > mu0, got {self.mu0} and {self.mu1}")
        if self.n < 1:
            raise DomainError("BAD_INSTRUMENT", f"n must be a positive integer, got {self.n}")

    @property
    def delta(self) -> float:
        """Standardized shift of the sample mean under the alternative."""
        return (self.mu1 - self.mu0) * math.sqrt(self.n) / self.sigma


@dataclass(frozen=True)
class AllocationResult:
    alpha1: float
    alpha2: float
    power1: float
    power2: float
    avg_alpha: float
    avg_power: float
    lr_cutoff: float | None = None

    def as_dict(self):
        return {k: getattr(self, k) for k in
                ("alpha1", "alpha2", "power1", "power2", "avg_alpha", "avg_power", "lr_cutoff")}


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise DomainError("BAD_ALPHA", f"alpha must lie in (0, 1), got {alpha}")


def power_at_level(delta: float, alpha: float) -> float:
    """Power of the one-sided level-``alpha`` z-test at standardized shift ``delta``."""
    if alpha <= 0:
        return 0.0
    if alpha >= 1:
        return 1.0
    return normal.sf(normal.isf(alpha) - delta)


def equal_level_test(inst1: InstrumentSpec, inst2: InstrumentSpec, alpha: float) -> AllocationResult:
    """Level ``alpha`` on each instrument separately."""
    _check_alpha(alpha)
    p1 = power_at_level(inst1.delta, alpha)
    p2 = power_at_level(inst2.delta, alpha)
    return AllocationResult(alpha, alpha, p1, p2, alpha, (p1 + p2) / 2)


def _at_cutoff(d1, d2, kappa):
    # reject when d*z - d^2/2 > kappa, i.e. z > kappa/d + d/2
    t1, t2 = kappa / d1 + d1 / 2, kappa / d2 + d2 / 2
    a1, a2 = normal.sf(t1), normal.sf(t2)
    b1, b2 = normal.sf(t1 - d1), normal.sf(t2 - d2)
    return a1, a2, b1, b2


def common_cutoff_test(inst1: InstrumentSpec, inst2: InstrumentSpec, kappa: float) -> AllocationResult:
    """The test rejecting when the log likelihood ratio exceeds ``kappa``."""
    a1, a2, b1, b2 = _at_cutoff(inst1.delta, inst2.delta, kappa)
    return AllocationResult(a1, a2, b1, b2, (a1 + a2) / 2, (b1 + b2) / 2, kappa)


def optimal_mixture_test(inst1: InstrumentSpec, inst2: InstrumentSpec, overall_alpha: float,
                         tol: float = 1e-9, max_iter: int = 400) -> AllocationResult:
    """Most powerful overall-level test when a fair coin picks the instrument.

    Bisection on the common log-likelihood-ratio cutoff ``kappa``; the
    average size is strictly decreasing in ``kappa``.

    Raises
    ------
    DomainError
        ``BAD_ALPHA`` for a level outside (0, 1); ``NO_CONVERGENCE`` if no
        bracket is found or the size misses ``overall_alpha`` by more than
        ``tol``.
    """
    _check_alpha(overall_alpha)
    d1, d2 = inst1.delta, inst2.delta

    def size(kappa):
        a1, a2, _, _ = _at_cutoff(d1, d2, kappa)
        return (a1 + a2) / 2

    lo, hi = -1.0, 1.0
    for _ in range(200):
        if size(lo) > overall_alpha:
            break
        lo *= 2
    else:
        raise DomainError("NO_CONVERGENCE", "could not bracket the cutoff from below")
    for _ in range(200):
        if size(hi) < overall_alpha:
            break
        hi *= 2
    else:
        raise DomainError("NO_CONVERGENCE", "could not bracket the cutoff from above")

    for _ in range(max_iter):
        mid = (lo + hi) / 2
        s = size(mid)
        if abs(s - overall_alpha) <= tol * 1e-3 or hi - lo <= 1e-15 * max(1.0, abs(mid)):
            break
        if s > overall_alpha:
            lo = mid
        else:
            hi = mid
    result = common_cutoff_test(inst1, inst2, mid)
    if abs(result.avg_alpha - overall_alpha) > tol:
        raise DomainError(
            "NO_CONVERGENCE",
            f"average size {result.avg_alpha} misses {overall_alpha} by more than {tol}",
        )
    return result


def allocation_power(inst1: InstrumentSpec, inst2: InstrumentSpec, alpha1: float, alpha2: float) -> float:
    return (power_at_level(inst1.delta, alpha1) + power_at_level(inst2.delta, alpha2)) / 2


def allocation_grid(inst1: InstrumentSpec, inst2: InstrumentSpec, overall_alpha: float,
                    steps: int = 400) -> tuple[float, float, float]:
    """Coarse search over splits ``alpha1 + alpha2 = 2 * overall_alpha``.

    Returns ``(alpha1, alpha2, avg_power)`` of the best grid point; an
    independent cross-check on :func:`optimal_mixture_test`.
    """
    _check_alpha(overall_alpha)
    lo, hi = max(0.0, 2 * overall_alpha - 1), min(1.0, 2 * overall_alpha)
    best = None
    for i in range(steps + 1):
        a1 = lo + (hi - lo) * i / steps
        a2 = 2 * overall_alpha - a1
        pw = allocation_power(inst1, inst2, a1, a2)
        if best is None or pw > best[2]:
            best = (a1, a2, pw)
    return best


@dataclass
class SweepRow:
    n: int
    equal: AllocationResult
    optimal: AllocationResult


def reproduction_sweep(sigma1: float, sigma2: float, mu0: float, mu1: float, alpha: float,
                       ns: Iterable[int] = range(1, 11)) -> list[SweepRow]:
    """Equal-level and optimal tests for each sample size in ``ns``."""
    rows = []
    for n in ns:
        i1 = InstrumentSpec(sigma1, mu0, mu1, n)
        i2 = InstrumentSpec(sigma2, mu0, mu1, n)
        rows.append(SweepRow(n, equal_level_test(i1, i2, alpha), optimal_mixture_test(i1, i2, alpha)))
    return rows


def closest_to_reference(rows: list[SweepRow]) -> dict:
    """Sweep rows nearest to each of the reference figures (nothing is asserted)."""
    def nearest(key, value):
        row = min(rows, key=lambda r: abs(key(r) - value))
        return {"n": row.n, "computed": key(row), "reference": value}

    return {
        "conditional_power": nearest(lambda r: r.equal.avg_power, REFERENCE_FIGURES["conditional_power"]),
        "optimal_power": nearest(lambda r: r.optimal.avg_power, REFERENCE_FIGURES["optimal_power"]),
        "alpha_old": nearest(lambda r: r.optimal.alpha1, REFERENCE_FIGURES["alpha_old"]),
        "alpha_new": nearest(lambda r: r.optimal.alpha2, REFERENCE_FIGURES["alpha_new"]),
    }
