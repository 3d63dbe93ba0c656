"""Finite statistical experiments with exact rational probabilities.

An experiment is a finite sample space, a finite parameter set and one
probability row per parameter.  Probabilities are :class:`fractions.Fraction`
throughout so that every equality test below is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError

Rational = Fraction

HALF = Fraction(1, 2)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"refusing float probability {value!r}; use Fraction or 'a/b'")
    return Fraction(value)


def render(q: Fraction) -> str:
    """``a/b`` plus a 4-significant-digit decimal, e.g. ``433/8192 (0.05286)``."""
    return f"{q} ({float(q):#.4g})"


@dataclass(frozen=True)
class Experiment:
    """A validated finite experiment.

    ``pmf[i][k]`` is the probability of ``outcomes[k]`` under ``params[i]``.
    Build instances with :func:`validate_experiment` (or :meth:`build`) so the
    invariants are checked; the constructor itself trusts its input.
    """

    id: str
    params: tuple[str, ...]
    outcomes: tuple[str, ...]
    pmf: tuple[tuple[Fraction, ...], ...]

    def __hash__(self):
        return hash((self.id, self.params, self.outcomes))

    @classmethod
    def build(cls, id, params, outcomes, rows) -> "Experiment":
        return validate_experiment(
            {"id": id, "params": params, "outcomes": outcomes, "rows": rows}
        )

    def index(self, outcome: str) -> int:
        try:
            return self._outcome_index[outcome]
        except KeyError:
            raise DomainError(
                "UNKNOWN_OUTCOME", f"{outcome!r} is not an outcome of {self.id!r}"
            ) from None

    @property
    def _outcome_index(self) -> dict[str, int]:
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {x: k for k, x in enumerate(self.outcomes)}
            object.__setattr__(self, "_idx", cache)
        return cache

    def prob(self, param_index: int, outcome: str) -> Fraction:
        return self.pmf[param_index][self.index(outcome)]

    def column(self, outcome: str) -> tuple[Fraction, ...]:
        k = self.index(outcome)
        return tuple(row[k] for row in self.pmf)

    def mass(self, outcomes: Iterable[str]) -> tuple[Fraction, ...]:
        """Probability of a set of outcomes under each parameter."""
        ks = [self.index(x) for x in outcomes]
        return tuple(sum((row[k] for k in ks), Fraction(0)) for row in self.pmf)

    def same_distributions(self, other: "Experiment") -> bool:
        """Equal parameters, outcomes and pmf, ignoring the id."""
        return (
            self.params == other.params
            and self.outcomes == other.outcomes
            and self.pmf == other.pmf
        )


@dataclass(frozen=True)
class MixtureExperiment(Experiment):
    """Experiment whose outcome ``(j, x)`` records which component ran.

    ``tags[k]`` is the ``(j, x)`` pair behind ``outcomes[k]`` with ``j`` in
    ``{1, 2}``.
    """

    components: tuple[Experiment, Experiment]
    weights: tuple[Fraction, Fraction]
    tags: tuple[tuple[int, str], ...]

    __hash__ = Experiment.__hash__

    def tag(self, outcome: str) -> tuple[int, str]:
        return self.tags[self.index(outcome)]

    def tagged(self, j: int, x: str) -> str:
        return tagged_label(j, x)


@dataclass(frozen=True)
class InferenceBase:
    """An experiment together with one observed outcome."""

    experiment: Experiment
    outcome: str

    def __post_init__(self):
        e = self.experiment
        k = e.index(self.outcome)
        if all(row[k] == 0 for row in e.pmf):
            raise DomainError(
                "DEAD_OUTCOME", f"{self.outcome!r} has probability 0 under every parameter"
            )

    @property
    def label(self) -> str:
        return f"{self.experiment.id}:{self.outcome}"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class LikelihoodVector:
    entries: tuple[Fraction, ...]
    param_labels: tuple[str, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def ratio(self, i: int, j: int) -> Fraction | None:
        """Likelihood ratio of parameter ``i`` to parameter ``j``."""
        if self.entries[j] == 0:
            return None
        return self.entries[i] / self.entries[j]


def tagged_label(j: int, x: str) -> str:
    return f"({j},{x})"


def validate_experiment(candidate) -> Experiment:
    """Validate raw experiment data and return an :class:`Experiment`.

    ``candidate`` is a mapping with keys ``id``, ``params``, ``outcomes`` and
    ``rows`` (one sequence of probabilities per parameter, in ``params``
    order).  Entries may be ints, Fractions or ``"a/b"`` strings.

    Raises
    ------
    DomainError
        With code ``DUPLICATE_LABEL``, ``MISMATCHED_ROW_LENGTH``,
        ``NEGATIVE_PROB``, ``ROW_SUM`` or ``DEAD_OUTCOME``.  The offending row
        index is in ``error.context["row"]`` where one applies.
    """
    eid = str(candidate["id"])
    params = tuple(str(p) for p in candidate["params"])
    outcomes = tuple(str(x) for x in candidate["outcomes"])
    raw_rows = list(candidate["rows"])

    if not params or not outcomes:
        raise DomainError("EMPTY", f"experiment {eid!r} needs at least one parameter and one outcome")
    for kind, labels in (("parameter", params), ("outcome", outcomes)):
        if len(set(labels)) != len(labels):
            dup = next(x for x in labels if labels.count(x) > 1)
            raise DomainError("DUPLICATE_LABEL", f"duplicate {kind} label {dup!r} in {eid!r}")
    if len(raw_rows) != len(params):
        raise DomainError(
            "MISMATCHED_ROW_LENGTH",
            f"{eid!r} has {len(params)} parameters but {len(raw_rows)} pmf rows",
        )

    rows = []
    for i, raw in enumerate(raw_rows):
        row = tuple(as_rational(v) for v in raw)
        if len(row) != len(outcomes):
            raise DomainError(
                "MISMATCHED_ROW_LENGTH",
                f"row for parameter {params[i]!r} has {len(row)} entries, expected {len(outcomes)}",
                row=i,
            )
        if any(v < 0 for v in row):
            raise DomainError("NEGATIVE_PROB", f"negative probability in row {params[i]!r}", row=i)
        total = sum(row, Fraction(0))
        if total != 1:
            raise DomainError(
                "ROW_SUM", f"row for parameter {params[i]!r} sums to {total}, not 1", row=i
            )
        rows.append(row)

    for k, x in enumerate(outcomes):
        if all(row[k] == 0 for row in rows):
            raise DomainError("DEAD_OUTCOME", f"outcome {x!r} has probability 0 under every parameter")

    return Experiment(eid, params, outcomes, tuple(rows))


def likelihood_vector(base: InferenceBase) -> LikelihoodVector:
    e = base.experiment
    return LikelihoodVector(e.column(base.outcome), e.params)


def _check_params(a: Experiment, b: Experiment):
    if a.params != b.params:
        raise DomainError(
            "PARAM_MISMATCH",
            f"parameter lists differ: {a.id!r} has {list(a.params)}, {b.id!r} has {list(b.params)}",
        )


def proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction | None:
    """Return ``c > 0`` with ``u == c * v`` componentwise, else ``None``."""
    c = None
    for x, y in zip(u, v):
        if (x == 0) != (y == 0):
            return None
        if y == 0:
            continue
        r = x / y
        if c is None:
            c = r
        elif r != c:
            return None
    return c


def proportionality_constant(a: InferenceBase, b: InferenceBase) -> Fraction | None:
    """Constant ``c`` with ``p(x_a) = c * p(x_b)`` for every parameter, if any."""
    _check_params(a.experiment, b.experiment)
    return proportional(a.experiment.column(a.outcome), b.experiment.column(b.outcome))


def make_mixture(e1: Experiment, e2: Experiment, w1=HALF, id: str | None = None) -> MixtureExperiment:
    """Mixture running ``e1`` with probability ``w1`` and ``e2`` otherwise.

    Outcomes are ``(1,x)`` for ``x`` in ``e1`` followed by ``(2,x)`` for ``x``
    in ``e2``.
    """
    _check_params(e1, e2)
    w1 = as_rational(w1)
    if not 0 < w1 < 1:
        raise DomainError("BAD_WEIGHT", f"mixture weight must lie in (0, 1), got {w1}")
    w2 = 1 - w1
    tags = tuple((1, x) for x in e1.outcomes) + tuple((2, x) for x in e2.outcomes)
    outcomes = tuple(tagged_label(j, x) for j, x in tags)
    pmf = tuple(
        tuple(w1 * p for p in r1) + tuple(w2 * p for p in r2)
        for r1, r2 in zip(e1.pmf, e2.pmf)
    )
    if id is None:
        id = f"mix({e1.id},{e2.id})" if w1 == HALF else f"mix({e1.id},{e2.id};{w1})"
    return MixtureExperiment(id, e1.params, outcomes, pmf, (e1, e2), (w1, w2), tags)
