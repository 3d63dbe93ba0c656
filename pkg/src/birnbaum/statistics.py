"""Sufficiency, ancillarity and conditioning on finite experiments.

A statistic is identified with the partition of the sample space it induces,
so both properties reduce to exact checks over blocks:

* sufficient: within every block the conditional distribution is the same
  under every parameter that gives the block positive mass;
* ancillary: every block has the same mass under every parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError
from .model import Experiment, MixtureExperiment, proportional
from .partitions import bell, rgs_from_blocks

DEFAULT_ANCILLARY_CAP = 12


@dataclass(frozen=True)
class StatisticPartition:
    id: str
    blocks: tuple[tuple[str, ...], ...]
    experiment_id: str | None = None

    @classmethod
    def of(cls, id, blocks, experiment_id=None) -> "StatisticPartition":
        return cls(id, tuple(tuple(b) for b in blocks), experiment_id)

    def block_of(self, outcome: str) -> int:
        for i, b in enumerate(self.blocks):
            if outcome in b:
                return i
        raise DomainError("UNKNOWN_OUTCOME", f"{outcome!r} is in no block of {self.id!r}")

    def __str__(self):
        return " | ".join("{" + ",".join(b) + "}" for b in self.blocks)


@dataclass(frozen=True)
class Verdict:
    """Boolean answer plus the certificate that justifies it."""

    holds: bool
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def check_partition(e: Experiment, t: StatisticPartition):
    seen = []
    for b in t.blocks:
        if not b:
            raise DomainError("NOT_A_PARTITION", f"{t.id!r} has an empty block")
        seen.extend(b)
    if len(seen) != len(set(seen)):
        raise DomainError("NOT_A_PARTITION", f"blocks of {t.id!r} overlap")
    if set(seen) != set(e.outcomes):
        missing = sorted(set(e.outcomes) - set(seen))
        extra = sorted(set(seen) - set(e.outcomes))
        raise DomainError(
            "NOT_A_PARTITION",
            f"{t.id!r} does not partition {e.id!r} (missing {missing}, unknown {extra})",
        )


def one_block(e: Experiment) -> StatisticPartition:
    return StatisticPartition("trivial", (e.outcomes,), e.id)


def indicator_blocks(e: MixtureExperiment) -> list[tuple[str, ...]]:
    """Blocks of the component indicator of a mixture (always ancillary)."""
    blocks = [tuple(o for o, (j, _) in zip(e.outcomes, e.tags) if j == k) for k in (1, 2)]
    return [b for b in blocks if b]


def identity_partition(e: Experiment) -> StatisticPartition:
    return StatisticPartition("identity", tuple((x,) for x in e.outcomes), e.id)


def is_sufficient(e: Experiment, t: StatisticPartition) -> Verdict:
    """Check that the conditional law within each block is parameter-free.

    On success the witness holds ``conditionals``: for every block index the
    parameter-free conditional probability of each member.  On failure it
    names the block, the outcome and two parameters that disagree.
    """
    check_partition(e, t)
    table = {}
    for bi, block in enumerate(t.blocks):
        masses = e.mass(block)
        ref = None  # (param index, conditional tuple)
        for i, m in enumerate(masses):
            if m == 0:
                continue
            cond = tuple(e.prob(i, x) / m for x in block)
            if ref is None:
                ref = (i, cond)
                continue
            if cond != ref[1]:
                k = next(k for k in range(len(block)) if cond[k] != ref[1][k])
                return Verdict(False, {
                    "block": bi,
                    "outcome": block[k],
                    "params": (e.params[ref[0]], e.params[i]),
                    "conditionals": (ref[1][k], cond[k]),
                })
        if ref is not None:
            table[bi] = dict(zip(block, ref[1]))
    return Verdict(True, {"conditionals": table})


def is_ancillary(e: Experiment, t: StatisticPartition) -> Verdict:
    """Check that each block has the same probability under every parameter."""
    check_partition(e, t)
    dist = {}
    for bi, block in enumerate(t.blocks):
        masses = e.mass(block)
        for i in range(1, len(masses)):
            if masses[i] != masses[0]:
                return Verdict(False, {
                    "block": bi,
                    "params": (e.params[0], e.params[i]),
                    "probabilities": (masses[0], masses[i]),
                })
        dist[bi] = masses[0]
    return Verdict(True, {"distribution": dist})


@lru_cache(maxsize=4096)
def minimal_sufficient(e: Experiment) -> StatisticPartition:
    """Group outcomes whose likelihood vectors are proportional.

    Blocks are ordered by their first outcome in the experiment's order.
    """
    reps: list[tuple[Fraction, ...]] = []
    blocks: list[list[str]] = []
    for x in e.outcomes:
        col = e.column(x)
        for bi, rep in enumerate(reps):
            if proportional(col, rep) is not None:
                blocks[bi].append(x)
                break
        else:
            reps.append(col)
            blocks.append([x])
    return StatisticPartition.of(f"minsuff({e.id})", blocks, e.id)


@lru_cache(maxsize=4096)
def sufficient_block_index(e: Experiment) -> dict[str, int]:
    t = minimal_sufficient(e)
    return {x: bi for bi, b in enumerate(t.blocks) for x in b}


def enumerate_ancillaries(e: Experiment, max_outcomes: int = DEFAULT_ANCILLARY_CAP) -> list[StatisticPartition]:
    """Every non-trivial ancillary partition of the sample space.

    Results are ordered lexicographically by restricted growth string.  The
    search is an exact cover over outcome subsets whose mass is
    parameter-free, which visits only ancillary partitions instead of all
    ``bell(n)`` of them.

    Raises
    ------
    DomainError
        ``TOO_LARGE`` when the sample space exceeds ``max_outcomes``.
    """
    n = len(e.outcomes)
    if n > max_outcomes:
        raise DomainError(
            "TOO_LARGE",
            f"{e.id!r} has {n} outcomes; cap is {max_outcomes} (bell({n}) = {bell(n)} partitions)",
        )

    # free[i]: parameter-free subsets (bitmasks) whose lowest element is i
    free: list[list[int]] = [[] for _ in range(n)]
    cols = [e.column(x) for x in e.outcomes]
    nparams = len(e.params)
    for mask in range(1, 1 << n):
        tot = [Fraction(0)] * nparams
        for k in range(n):
            if mask >> k & 1:
                c = cols[k]
                for i in range(nparams):
                    tot[i] += c[i]
        if all(v == tot[0] for v in tot):
            low = (mask & -mask).bit_length() - 1
            free[low].append(mask)

    found: list[list[int]] = []
    full = (1 << n) - 1

    def cover(remaining: int, chosen: list[int]):
        if remaining == 0:
            found.append(list(chosen))
            return
        low = (remaining & -remaining).bit_length() - 1
        for mask in free[low]:
            if mask & ~remaining == 0:
                chosen.append(mask)
                cover(remaining & ~mask, chosen)
                chosen.pop()

    cover(full, [])

    parts = []
    for masks in found:
        if len(masks) == 1:
            continue  # the one-block partition
        blocks = [tuple(e.outcomes[k] for k in range(n) if m >> k & 1) for m in masks]
        parts.append((rgs_from_blocks(blocks, e.outcomes), blocks))
    parts.sort(key=lambda p: p[0])
    return [
        StatisticPartition.of(f"anc{i + 1}", sorted(blocks, key=lambda b: e.index(b[0])), e.id)
        for i, (_, blocks) in enumerate(parts)
    ]


def resolve_block(t: StatisticPartition, block) -> int:
    """Block index from a 1-based integer or from the block's members."""
    if isinstance(block, int) or (isinstance(block, str) and block.isdigit()):
        bi = int(block) - 1
        if not 0 <= bi < len(t.blocks):
            raise DomainError("UNKNOWN_BLOCK", f"{t.id!r} has no block {block}")
        return bi
    members = set(block)
    for bi, b in enumerate(t.blocks):
        if set(b) == members:
            return bi
    raise DomainError("UNKNOWN_BLOCK", f"{sorted(members)} is not a block of {t.id!r}")


def condition(e: Experiment, t: StatisticPartition, block, id: str | None = None) -> Experiment:
    """Conditional experiment given that the ancillary ``t`` fell in ``block``.

    ``block`` is a 1-based block number or the block's outcome labels.  The
    result's sample space is the block itself.  Conditioning on the whole
    sample space returns ``e`` unchanged.
    """
    verdict = is_ancillary(e, t)
    if not verdict:
        w = verdict.witness
        raise DomainError(
            "NOT_ANCILLARY",
            f"{t.id!r} is not ancillary for {e.id!r}: block {w['block'] + 1} has "
            f"probabilities {w['probabilities'][0]} and {w['probabilities'][1]}",
        )
    bi = resolve_block(t, block)
    members = t.blocks[bi]
    if set(members) == set(e.outcomes):
        return e
    members = tuple(sorted(members, key=e.index))
    mass = e.mass(members)
    if mass[0] == 0:
        raise DomainError("EMPTY_BLOCK", f"block {bi + 1} of {t.id!r} has probability 0")
    pmf = tuple(tuple(e.prob(i, x) / mass[i] for x in members) for i in range(len(e.params)))
    return Experiment(id or f"{e.id}|{t.id}={bi + 1}", e.params, members, pmf)


def mle_distribution(e: Experiment) -> dict[str, dict[tuple[str, ...], Fraction]]:
    """Sampling law of the maximum-likelihood estimate under each parameter.

    Keys of the inner mapping are argmax sets (a tuple with more than one
    label means a tie).
    """
    argmax = {}
    for x in e.outcomes:
        col = e.column(x)
        top = max(col)
        argmax[x] = tuple(p for p, v in zip(e.params, col) if v == top)
    out = {}
    for i, theta in enumerate(e.params):
        law: dict[tuple[str, ...], Fraction] = {}
        for x in e.outcomes:
            law[argmax[x]] = law.get(argmax[x], Fraction(0)) + e.prob(i, x)
        out[theta] = law
    return out


def within_block_conditional(e: Experiment, block: Sequence[str], outcome: str) -> Fraction | None:
    """Parameter-free conditional probability of ``outcome`` inside ``block``."""
    t = StatisticPartition.of("probe", [tuple(block)] + [(x,) for x in e.outcomes if x not in block], e.id)
    v = is_sufficient(e, t)
    if not v:
        return None
    return v.witness["conditionals"][0][outcome]
