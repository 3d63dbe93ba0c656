"""Exact one-sided p-values for binomial and negative-binomial sampling.

Parameterization: ``theta`` is the success probability.  The binomial
experiment runs ``n`` trials; the negative-binomial experiment stops at the
``k``-th failure and records the number of successes ``s``.  With data
``(successes, failures)`` the two likelihoods are then proportional,
``C(n, s) / C(s + k - 1, k - 1)`` being the constant.  Large success counts
count as extreme (alternative ``theta > theta0``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import DomainError
from .model import (
    HALF,
    Experiment,
    InferenceBase,
    MixtureExperiment,
    as_rational,
    make_mixture,
    proportionality_constant,
    tagged_label,
    validate_experiment,
)
from .statistics import minimal_sufficient, sufficient_block_index

DEFAULT_THETAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))

PARAMETERIZATION_NOTE = (
    "negative binomial: theta = success probability, sampling stops at the k-th "
    "failure, the observation is the number of successes; this is the reading "
    "under which binomial and negative-binomial likelihoods are proportional"
)


def _theta(value) -> Fraction:
    t = as_rational(value)
    if not 0 < t < 1:
        raise DomainError("BAD_THETA", f"theta0 must lie in (0, 1), got {t}")
    return t


@dataclass(frozen=True)
class BinomialSpec:
    n: int
    theta0: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("BAD_N", f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "theta0", _theta(self.theta0))


@dataclass(frozen=True)
class NegBinomialSpec:
    k: int
    theta0: Fraction

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("BAD_K", f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "theta0", _theta(self.theta0))


def binom_pmf(n: int, theta: Fraction, s: int) -> Fraction:
    return comb(n, s) * theta**s * (1 - theta) ** (n - s)


def negbinom_pmf(k: int, theta: Fraction, s: int) -> Fraction:
    return comb(s + k - 1, k - 1) * theta**s * (1 - theta) ** k


def binom_pvalue(spec: BinomialSpec, x: int) -> Fraction:
    """``P(Binomial(n, theta0) >= x)``."""
    if not 0 <= x <= spec.n:
        raise DomainError("X_OUT_OF_RANGE", f"x must lie in [0, {spec.n}], got {x}")
    return sum((binom_pmf(spec.n, spec.theta0, j) for j in range(x, spec.n + 1)), Fraction(0))


def negbinom_pvalue(spec: NegBinomialSpec, s: int) -> Fraction:
    """``P(S >= s)`` for ``S`` successes before the ``k``-th failure.

    Computed as the complement of the finite lower sum.
    """
    if s < 0:
        raise DomainError("X_OUT_OF_RANGE", f"success count must be >= 0, got {s}")
    return 1 - sum((negbinom_pmf(spec.k, spec.theta0, j) for j in range(s)), Fraction(0))


def _check_data(b: BinomialSpec, nb: NegBinomialSpec, data):
    successes, failures = data
    if successes < 0 or failures < 0 or successes + failures != b.n or failures != nb.k:
        raise DomainError(
            "INCONSISTENT_DATA",
            f"data (successes={successes}, failures={failures}) needs successes + failures = n = {b.n} "
            f"and failures = k = {nb.k}",
        )
    if b.theta0 != nb.theta0:
        raise DomainError("INCONSISTENT_DATA", "both components must test the same theta0")
    return successes


def mixture_pvalue(b: BinomialSpec, nb: NegBinomialSpec, data: tuple[int, int]) -> Fraction:
    """Equal-weight average of the two component p-values at the same data."""
    s = _check_data(b, nb, data)
    return (binom_pvalue(b, s) + negbinom_pvalue(nb, s)) / 2


# -- finite experiment objects ------------------------------------------------


def _labels(thetas):
    return [str(Fraction(t)) for t in thetas]


def binomial_experiment(n: int, thetas: Sequence = DEFAULT_THETAS, id: str | None = None) -> Experiment:
    thetas = [as_rational(t) for t in thetas]
    rows = [[binom_pmf(n, t, s) for s in range(n + 1)] for t in thetas]
    return validate_experiment({
        "id": id or f"Bin{n}",
        "params": _labels(thetas),
        "outcomes": [str(s) for s in range(n + 1)],
        "rows": rows,
    })


def negbinomial_experiment(k: int, thetas: Sequence = DEFAULT_THETAS, tail: int = 16,
                           id: str | None = None) -> Experiment:
    """Negative binomial truncated at ``tail`` successes.

    Outcomes ``0 .. tail-1`` keep their exact probabilities; the remaining
    mass ``P(S >= tail)`` sits on a sink outcome labelled ``>=tail``.
    """
    if tail < 1:
        raise DomainError("BAD_TAIL", f"tail bound must be >= 1, got {tail}")
    thetas = [as_rational(t) for t in thetas]
    rows = []
    for t in thetas:
        head = [negbinom_pmf(k, t, s) for s in range(tail)]
        rows.append(head + [1 - sum(head, Fraction(0))])
    return validate_experiment({
        "id": id or f"NB{k}",
        "params": _labels(thetas),
        "outcomes": [str(s) for s in range(tail)] + [f">={tail}"],
        "rows": rows,
    })


def mayo_mixture(n: int, k: int, thetas: Sequence = DEFAULT_THETAS, tail: int = 16) -> MixtureExperiment:
    """Equal-weight mixture of ``binomial_experiment(n)`` and truncated ``negbinomial_experiment(k)``."""
    e1 = binomial_experiment(n, thetas)
    e2 = negbinomial_experiment(k, thetas, tail)
    return make_mixture(e1, e2, HALF, id=f"Mix{n}_{k}")


# -- the M versus Ev audit ----------------------------------------------------


@dataclass
class MethodAuditReport:
    """Outcome of :func:`audit_sp2_wcp`.

    ``m_values`` are method outputs keyed ``E1``, ``E2``, ``Emix(1,x)`` and
    ``Emix(2,x)``; ``ev_values`` are the agent's inferences under the rule
    that reports the p-value of the component actually run.
    """

    inputs: dict
    m_values: dict[str, Fraction]
    ev_values: dict[str, Fraction]
    sp2_check: bool
    sp2_witness: dict
    wcp_check: bool
    lp_check: bool
    sp_check: bool
    premise_constant: Fraction | None
    premise_verified: bool
    narrative: dict = field(default_factory=dict)
    header: str = PARAMETERIZATION_NOTE


def audit_sp2_wcp(b: BinomialSpec, nb: NegBinomialSpec, data: tuple[int, int],
                  thetas: Sequence = DEFAULT_THETAS, tail: int | None = None) -> MethodAuditReport:
    """Show that reporting the conditional p-value respects SP2 and WCP but not LP.

    ``thetas`` and ``tail`` shape the finite mixture experiment used to
    locate the sufficient block; the p-values themselves are exact and need
    no truncation.
    """
    s = _check_data(b, nb, data)
    tail = max(tail or 16, s + 1)
    x1, x2 = str(s), str(s)

    p1 = binom_pvalue(b, s)
    p2 = negbinom_pvalue(nb, s)
    pm = mixture_pvalue(b, nb, data)
    m_values = {"E1": p1, "E2": p2, "Emix(1,x)": pm, "Emix(2,x)": pm}

    # conditional-report rule: Ev(E_mix, (j, x)) = M(E_j, x), Ev(E_j, x) = M(E_j, x)
    ev_values = {"E1": p1, "E2": p2, "Emix(1,x)": p1, "Emix(2,x)": p2}

    grid = sorted({as_rational(t) for t in thetas} | {b.theta0})
    mix = mayo_mixture(b.n, nb.k, grid, tail)
    o1, o2 = tagged_label(1, x1), tagged_label(2, x2)
    idx = sufficient_block_index(mix)
    same_block = idx[o1] == idx[o2]
    block = minimal_sufficient(mix).blocks[idx[o1]]
    sp2_check = same_block and m_values["Emix(1,x)"] == m_values["Emix(2,x)"]

    wcp_check = (ev_values["Emix(1,x)"] == ev_values["E1"]
                 and ev_values["Emix(2,x)"] == ev_values["E2"])
    lp_check = ev_values["E1"] == ev_values["E2"]
    # SP read as a property of Ev: outcomes in one sufficient block get one inference
    sp_check = (not same_block) or ev_values["Emix(1,x)"] == ev_values["Emix(2,x)"]

    e1, e2 = mix.components
    c = proportionality_constant(InferenceBase(e1, x1), InferenceBase(e2, x2))
    expected = Fraction(comb(b.n, s), comb(s + nb.k - 1, nb.k - 1))
    premise_verified = c == expected and all(
        binom_pmf(b.n, t, s) == expected * negbinom_pmf(nb.k, t, s) for t in grid
    )

    narrative = {
        "sp2": "M is constant on the sufficient block {(1,x),(2,x)}" if sp2_check
               else "M differs on the sufficient block",
        "wcp": "Ev(E_mix,(j,x)) = M(E_j,x) = Ev(E_j,x)" if wcp_check else "WCP fails",
        "lp": "proportional likelihoods receive different inferences: LP violated" if not lp_check
              else "no LP violation at this data point",
        "sp": "reporting the conditional p-value violates SP as a property of Ev" if not sp_check
              else "SP (as a property of Ev) holds at this data point",
    }
    return MethodAuditReport(
        inputs={"n": b.n, "k": nb.k, "theta0": b.theta0, "successes": s, "failures": data[1]},
        m_values=m_values,
        ev_values=ev_values,
        sp2_check=sp2_check,
        sp2_witness={"mixture": mix.id, "block": block, "statistic": "T(j,x) = (1,x)"},
        wcp_check=wcp_check,
        lp_check=lp_check,
        sp_check=sp_check,
        premise_constant=c,
        premise_verified=premise_verified,
        narrative=narrative,
    )
