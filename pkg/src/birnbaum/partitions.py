"""Set partitions via restricted growth strings."""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterator, Sequence


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    if n == 0:
        return 1
    return sum(comb(n - 1, k) * bell(k) for k in range(n))


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All RGS of length ``n`` in lexicographic order.

    ``a[0] == 0`` and ``a[i] <= 1 + max(a[:i])``; each string encodes one set
    partition of ``range(n)`` (element ``i`` goes to block ``a[i]``).
    """
    if n == 0:
        yield ()
        return
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for k in range(i + 1, n):
            a[k] = 0
            m[k] = m[i]


def blocks_from_rgs(rgs: Sequence[int], items: Sequence) -> list[list]:
    blocks: list[list] = []
    for item, b in zip(items, rgs):
        if b == len(blocks):
            blocks.append([])
        blocks[b].append(item)
    return blocks


def rgs_from_blocks(blocks: Sequence[Sequence], items: Sequence) -> tuple[int, ...]:
    """Inverse of :func:`blocks_from_rgs` (block numbering by first element)."""
    owner = {}
    for bi, block in enumerate(blocks):
        for x in block:
            owner[x] = bi
    relabel: dict[int, int] = {}
    out = []
    for x in items:
        b = owner[x]
        if b not in relabel:
            relabel[b] = len(relabel)
        out.append(relabel[b])
    return tuple(out)


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    for rgs in restricted_growth_strings(len(items)):
        yield blocks_from_rgs(rgs, items)
