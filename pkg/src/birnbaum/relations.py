"""Relations between inference bases and their equivalence closure.

Four relations are checked pairwise:

``S``  same experiment, outcomes in one block of the minimal sufficient
       partition;
``C``  one side is a 50-50 mixture and the other is the component that was
       run, with the same result;
``A``  one side is the other's conditional experiment given a block of an
       ancillary partition containing the observed outcome;
``L``  proportional likelihood vectors.

:func:`closure` joins related pairs with union-find.  :func:`birnbaum_chain`
builds the explicit C, S, C path between two bases with proportional
likelihoods, and :func:`verify_birnbaum` checks on a whole universe that the
closure of S and C reproduces the L classes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError
from .model import (
    HALF,
    Experiment,
    InferenceBase,
    MixtureExperiment,
    make_mixture,
    proportional,
    proportionality_constant,
    tagged_label,
)
from .statistics import (
    StatisticPartition,
    Verdict,
    indicator_blocks,
    is_ancillary,
    is_sufficient,
    minimal_sufficient,
    sufficient_block_index,
)
from .unionfind import UnionFind


class RelationKind(str, enum.Enum):
    S = "S"
    C = "C"
    A = "A"
    L = "L"

    @classmethod
    def parse(cls, text: str) -> "RelationKind":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise DomainError("UNKNOWN_KIND", f"relation kind must be one of S, C, A, L; got {text!r}") from None

    @classmethod
    def parse_set(cls, text: str) -> frozenset["RelationKind"]:
        return frozenset(cls.parse(t) for t in text.split(",") if t.strip())


ORDER = (RelationKind.S, RelationKind.C, RelationKind.A, RelationKind.L)


def _kinds(kinds) -> frozenset[RelationKind]:
    return frozenset(RelationKind.parse(k) if isinstance(k, str) else k for k in kinds)


# -- pairwise relations -------------------------------------------------------


def _related_c(a: InferenceBase, b: InferenceBase) -> Verdict:
    for mix, other in ((a, b), (b, a)):
        e = mix.experiment
        if not isinstance(e, MixtureExperiment) or e.weights != (HALF, HALF):
            continue
        j, x = e.tag(mix.outcome)
        if x == other.outcome and e.components[j - 1] == other.experiment:
            return Verdict(True, {"mixture": e.id, "component": j, "outcome": x})
    return Verdict(False)


def _indicator_partition(e: MixtureExperiment) -> StatisticPartition:
    return StatisticPartition.of("indicator", indicator_blocks(e), e.id)


def _conditioning_witness(big: InferenceBase, small: InferenceBase, statistics) -> dict | None:
    e, f = big.experiment, small.experiment

    if isinstance(e, MixtureExperiment):
        j, x = e.tag(big.outcome)
        if x == small.outcome and e.components[j - 1] == f:
            w = e.weights[j - 1]
            # conditional of the mixture on its indicator, relabelled to f's outcomes
            ok = all(
                e.prob(i, tagged_label(j, y)) / w == f.prob(i, y)
                for i in range(len(e.params))
                for y in f.outcomes
            )
            if ok:
                t = _indicator_partition(e)
                return {"statistic": t.id, "partition": t, "block": t.blocks[t.block_of(big.outcome)],
                        "conditioned": e.id, "relabelled": True}

    if big.outcome != small.outcome or not set(f.outcomes) <= set(e.outcomes):
        return None
    block = tuple(sorted(f.outcomes, key=e.index))
    mass = e.mass(block)
    if mass[0] == 0 or any(m != mass[0] for m in mass):
        return None
    for i in range(len(e.params)):
        for y in f.outcomes:
            if f.prob(i, y) != e.prob(i, y) / mass[i]:
                return None

    # a block with parameter-free mass is a block of the ancillary {block, rest};
    # report a user-named statistic instead when one has this block
    chosen = None
    for t in statistics:
        if t.experiment_id not in (None, e.id):
            continue
        try:
            if set(block) in [set(b) for b in t.blocks] and is_ancillary(e, t):
                chosen = t
                break
        except DomainError:
            continue
    if chosen is None:
        rest = tuple(x for x in e.outcomes if x not in block)
        chosen = StatisticPartition.of("derived", [block, rest] if rest else [block], e.id)
    return {"statistic": chosen.id, "partition": chosen, "block": block,
            "conditioned": e.id, "relabelled": False}


def _related_a(a, b, statistics) -> Verdict:
    for big, small in ((a, b), (b, a)):
        w = _conditioning_witness(big, small, statistics)
        if w is not None:
            return Verdict(True, w)
    return Verdict(False)


def _related_s(a, b) -> Verdict:
    e = a.experiment
    if not (e is b.experiment or e == b.experiment):
        return Verdict(False, {"reason": "different experiments"})
    idx = sufficient_block_index(e)
    bi = idx[a.outcome]
    if bi != idx[b.outcome]:
        return Verdict(False)
    t = minimal_sufficient(e)
    return Verdict(True, {"statistic": t.id, "block": t.blocks[bi]})


def _related_l(a, b) -> Verdict:
    c = proportionality_constant(a, b)
    if c is None:
        return Verdict(False)
    return Verdict(True, {"c": c})


def related(kind, a: InferenceBase, b: InferenceBase, statistics: Iterable[StatisticPartition] = ()) -> Verdict:
    """Whether ``a`` and ``b`` are related by ``kind``, with a witness.

    ``statistics`` are optional named partitions; for ``A`` a matching one is
    reported as the conditioning witness in preference to a derived one.

    Raises
    ------
    DomainError
        ``PARAM_MISMATCH`` when the parameter lists differ.
    """
    kind = RelationKind.parse(kind) if isinstance(kind, str) else kind
    if a.experiment.params != b.experiment.params:
        raise DomainError(
            "PARAM_MISMATCH",
            f"{a.label} and {b.label} have different parameter lists",
        )
    if kind is RelationKind.S:
        return _related_s(a, b)
    if kind is RelationKind.C:
        return _related_c(a, b)
    if kind is RelationKind.A:
        return _related_a(a, b, tuple(statistics))
    return _related_l(a, b)


# -- universes and closure ----------------------------------------------------


@dataclass(frozen=True)
class Universe:
    bases: tuple[InferenceBase, ...]

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        seen = set()
        registry: dict[str, Experiment] = {}
        for base in self.bases:
            key = (base.experiment.id, base.outcome)
            if key in seen:
                raise DomainError("DUPLICATE_BASE", f"{base.label} appears twice in the universe")
            seen.add(key)
            prior = registry.setdefault(base.experiment.id, base.experiment)
            if prior is not base.experiment and prior != base.experiment:
                raise DomainError("ID_CLASH", f"two different experiments share the id {base.experiment.id!r}")

    @property
    def experiments(self) -> dict[str, Experiment]:
        reg = {}
        for base in self.bases:
            reg.setdefault(base.experiment.id, base.experiment)
        return reg

    def __len__(self):
        return len(self.bases)

    def labels(self, indices: Iterable[int]) -> list[str]:
        return [self.bases[i].label for i in indices]


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    kind: RelationKind
    witness: dict


@dataclass(frozen=True)
class ClosureResult:
    kinds_used: frozenset[RelationKind]
    edges: tuple[Edge, ...]
    classes: tuple[tuple[int, ...], ...]

    def class_of(self, i: int) -> tuple[int, ...]:
        return next(c for c in self.classes if i in c)

    @property
    def direct_pairs(self) -> set[tuple[int, int]]:
        return {(e.i, e.j) for e in self.edges}

    @property
    def added_pairs(self) -> list[tuple[int, int]]:
        """Pairs equivalent only through the closure, not by a direct edge."""
        direct = self.direct_pairs
        return [p for c in self.classes for p in combinations(c, 2) if p not in direct]


def closure(u: Universe, kinds, statistics: Sequence[StatisticPartition] = ()) -> ClosureResult:
    """Smallest equivalence relation on ``u`` containing the given relations.

    Pairs whose parameter lists differ are never related.  Classes are
    sorted tuples of base indices, ordered by their lowest member.
    """
    kinds = _kinds(kinds)
    uf = UnionFind(len(u.bases))
    edges = []
    for kind in ORDER:
        if kind not in kinds:
            continue
        for i, j in combinations(range(len(u.bases)), 2):
            a, b = u.bases[i], u.bases[j]
            if a.experiment.params != b.experiment.params:
                continue
            v = related(kind, a, b, statistics)
            if v:
                edges.append(Edge(i, j, kind, v.witness))
                uf.union(i, j)
    return ClosureResult(kinds, tuple(edges), tuple(uf.classes()))


# -- Birnbaum chains ----------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    source: InferenceBase
    target: InferenceBase
    kind: RelationKind
    evidence: dict


@dataclass(frozen=True)
class WitnessChain:
    steps: tuple[ChainStep, ...]
    constant: Fraction | None = None
    mixture: MixtureExperiment | None = None
    block_conditional: Fraction | None = None

    def __len__(self):
        return len(self.steps)

    def verify(self) -> bool:
        """Re-check every step and that consecutive steps share endpoints."""
        for prev, nxt in zip(self.steps, self.steps[1:]):
            if prev.target != nxt.source:
                return False
        return all(related(s.kind, s.source, s.target) for s in self.steps)

    def describe(self) -> list[str]:
        return [f"{s.source.label} ~{s.kind.value} {s.target.label}" for s in self.steps]


def birnbaum_chain(a: InferenceBase, b: InferenceBase) -> WitnessChain:
    """C, S, C chain through the 50-50 mixture of the two experiments.

    In the mixture, ``(1, x_a)`` has likelihood ``c`` times that of
    ``(2, x_b)``, so the two share a block of the minimal sufficient
    partition; inside that block ``(1, x_a)`` has parameter-free conditional
    probability ``c / (1 + c)``.

    Raises
    ------
    DomainError
        ``NOT_L_RELATED`` when the likelihoods are not proportional.
    """
    if a == b:
        return WitnessChain((), Fraction(1))
    c = proportionality_constant(a, b)
    if c is None:
        raise DomainError("NOT_L_RELATED", f"{a.label} and {b.label} do not have proportional likelihoods")

    mix = make_mixture(a.experiment, b.experiment, HALF)
    m1 = InferenceBase(mix, tagged_label(1, a.outcome))
    m2 = InferenceBase(mix, tagged_label(2, b.outcome))

    block = (m1.outcome, m2.outcome)
    probe = StatisticPartition.of(
        "birnbaum-block", [block] + [(x,) for x in mix.outcomes if x not in block], mix.id
    )
    suff = is_sufficient(mix, probe)
    conditional = suff.witness["conditionals"][0][m1.outcome] if suff else None

    steps = []
    for src, dst, kind in ((a, m1, RelationKind.C), (m1, m2, RelationKind.S), (m2, b, RelationKind.C)):
        v = related(kind, src, dst)
        if not v:
            raise DomainError("CHAIN_INVALID", f"{kind.value}-step {src.label} -> {dst.label} failed")
        evidence = dict(v.witness)
        if kind is RelationKind.S:
            evidence.update(birnbaum_block=block, block_sufficient=bool(suff), block_conditional=conditional)
        steps.append(ChainStep(src, dst, kind, evidence))
    return WitnessChain(tuple(steps), c, mix, conditional)


@dataclass
class BirnbaumReport:
    universe: Universe
    augmented: Universe
    pairs: list[tuple[int, int, Fraction, WitnessChain]]
    sc_classes: list[tuple[int, ...]]
    l_classes: list[tuple[int, ...]]
    sound: bool
    failures: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return sorted(self.sc_classes) == sorted(self.l_classes)

    @property
    def ok(self) -> bool:
        return self.complete and self.sound and not self.failures


def verify_birnbaum(u: Universe, depth: int = 1) -> BirnbaumReport:
    """Check that S and C generate L on ``u``.

    Every pair of bases with proportional likelihoods gets a
    :func:`birnbaum_chain`; the chain's mixture bases are added to the
    universe (repeated for up to ``depth`` rounds, each round only for pairs
    not yet joined).  The S+C closure of the augmented universe, restricted
    to the original bases, must equal the L closure of the original.
    Soundness is checked independently: every S or C edge of the augmented
    universe must join bases with proportional likelihoods.
    """
    n = len(u.bases)
    bases = list(u.bases)
    keys = {(b.experiment.id, b.outcome) for b in bases}
    failures: list[str] = []
    pairs = []

    l_pairs = []
    for i, j in combinations(range(n), 2):
        a, b = bases[i], bases[j]
        if a.experiment.params != b.experiment.params:
            continue
        c = proportionality_constant(a, b)
        if c is not None:
            l_pairs.append((i, j, c))

    todo = l_pairs
    sc = None
    for _ in range(max(depth, 1)):
        if not todo:
            break
        for i, j, c in todo:
            chain = birnbaum_chain(bases[i], bases[j])
            if not chain.verify():
                failures.append(f"chain {bases[i].label} -> {bases[j].label} failed re-verification")
            pairs.append((i, j, c, chain))
            for step in chain.steps:
                for base in (step.source, step.target):
                    key = (base.experiment.id, base.outcome)
                    if key not in keys:
                        keys.add(key)
                        bases.append(base)
        sc = closure(Universe(bases), {RelationKind.S, RelationKind.C})
        joined = {i: sc.class_of(i) for i in range(n)}
        todo = [(i, j, c) for i, j, c in l_pairs if j not in joined[i]]
    augmented = Universe(bases)
    if sc is None:
        sc = closure(augmented, {RelationKind.S, RelationKind.C})

    restricted = [tuple(i for i in cls if i < n) for cls in sc.classes]
    restricted = sorted((c for c in restricted if c), key=lambda c: c[0])
    l_classes = list(closure(u, {RelationKind.L}).classes)

    sound = True
    for e in sc.edges:
        if proportional(
            bases[e.i].experiment.column(bases[e.i].outcome),
            bases[e.j].experiment.column(bases[e.j].outcome),
        ) is None:
            sound = False
            failures.append(f"{e.kind.value}-edge {bases[e.i].label} - {bases[e.j].label} crosses L classes")

    return BirnbaumReport(u, augmented, pairs, restricted, l_classes, sound, failures)
