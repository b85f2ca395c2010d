"""Partitions, compositions and bipartitions.

Compositions and partitions are plain tuples of integers in canonical form
(trailing zeros stripped); bipartitions are the frozen :class:`Bipartition`
pairs.  Indices in docstrings are 1-based, matching the usual notation
``(mu_1, nu_1, mu_2, nu_2, ...)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate, zip_longest
from typing import Iterable, Iterator, Sequence

Composition = tuple  # tuple[int, ...], canonical: no trailing zeros
Partition = tuple


class Infinity(enum.Enum):
    """Value of ``k(empty partition)``; never compared as an integer."""

    INFINITY = "infinity"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = Infinity.INFINITY


class WeightMismatch(ValueError):
    """Raised when comparing objects of different total size."""


def canonical(parts: Iterable[int]) -> tuple[int, ...]:
    parts = [int(p) for p in parts]
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def weight(parts: Sequence[int]) -> int:
    return sum(parts)


def is_partition(parts: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(parts, parts[1:])) and all(p >= 0 for p in parts)


def is_quasi_partition(parts: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(parts, parts[2:])) and all(p >= 0 for p in parts)


def partition(parts: Iterable[int]) -> Partition:
    """Validate and canonicalize a partition."""
    p = canonical(parts)
    if not is_partition(p):
        raise ValueError(f"{p} is not weakly decreasing")
    return p


def part(lam: Sequence[int], i: int) -> int:
    """The 1-based ``i``-th part; zero past the end."""
    return lam[i - 1] if 1 <= i <= len(lam) else 0


@dataclass(frozen=True)
class Bipartition:
    """An ordered pair ``(mu; nu)`` of partitions."""

    mu: Partition = ()
    nu: Partition = ()

    def __post_init__(self):
        object.__setattr__(self, "mu", partition(self.mu))
        object.__setattr__(self, "nu", partition(self.nu))

    @property
    def size(self) -> int:
        return sum(self.mu) + sum(self.nu)

    def __str__(self) -> str:
        def fmt(p):
            return "(" + ",".join(map(str, p)) + ")"

        return f"({fmt(self.mu)};{fmt(self.nu)})"

    def __repr__(self) -> str:
        return f"Bipartition({self.mu!r}, {self.nu!r})"

    def sort_key(self) -> tuple[int, ...]:
        return interleave(self)


def bip(mu: Iterable[int] = (), nu: Iterable[int] = ()) -> Bipartition:
    return Bipartition(tuple(mu), tuple(nu))


def _same_weight(a: Sequence[int], b: Sequence[int]) -> None:
    if sum(a) != sum(b):
        raise WeightMismatch(f"weights differ: |{tuple(a)}|={sum(a)} vs |{tuple(b)}|={sum(b)}")


def dominance_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Dominance order on compositions of equal weight (prefix sums)."""
    _same_weight(a, b)
    return all(x <= y for x, y in zip_longest(accumulate(a), accumulate(b), fillvalue=sum(a)))


def interleave(bp: Bipartition) -> Composition:
    out = []
    for i in range(max(len(bp.mu), len(bp.nu))):
        out.append(part(bp.mu, i + 1))
        out.append(part(bp.nu, i + 1))
    return canonical(out)


def from_quasi_partition(c: Sequence[int]) -> Bipartition:
    c = canonical(c)
    if not is_quasi_partition(c):
        raise ValueError(f"{c} is not a quasi-partition")
    return Bipartition(canonical(c[0::2]), canonical(c[1::2]))


def bipartition_leq(a: Bipartition, b: Bipartition) -> bool:
    """Interleaved dominance ``a <= b``."""
    return dominance_leq(interleave(a), interleave(b))


def b_stat(bp: Bipartition) -> int:
    return sum(k * p for k, p in enumerate(interleave(bp)))


def add_parts(a: Sequence[int], b: Sequence[int]) -> Partition:
    s = canonical(x + y for x, y in zip_longest(a, b, fillvalue=0))
    if not is_partition(s):
        raise ValueError(f"termwise sum {s} is not a partition")
    return s


def duplicate(lam: Sequence[int]) -> Partition:
    return tuple(p for p in canonical(lam) for _ in range(2))


def multiplicity(lam: Sequence[int], a: int) -> int:
    return sum(1 for p in lam if p == a)


def head_multiplicity(lam: Sequence[int]) -> int | Infinity:
    lam = canonical(lam)
    if not lam:
        return INFINITY
    return multiplicity(lam, lam[0])


def length(lam: Sequence[int]) -> int:
    """Number of nonzero parts."""
    return sum(1 for p in lam if p)


def _partitions(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n``, lexicographically descending."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(_partitions(n, n))


@lru_cache(maxsize=None)
def enumerate_bipartitions(n: int) -> tuple[Bipartition, ...]:
    """All bipartitions of ``n``, by interleaved composition descending."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = [
        Bipartition(mu, nu)
        for k in range(n + 1)
        for mu in enumerate_partitions(k)
        for nu in enumerate_partitions(n - k)
    ]
    out.sort(key=Bipartition.sort_key, reverse=True)
    return tuple(out)


def _support(bp: Bipartition) -> range:
    return range(1, max(len(bp.mu), len(bp.nu)) + 2)


def is_B_dist(bp: Bipartition) -> bool:
    mu, nu = bp.mu, bp.nu
    return all(
        part(mu, i) >= part(nu, i) - 2 and part(nu, i) >= part(mu, i + 1) for i in _support(bp)
    )


def is_C_dist(bp: Bipartition) -> bool:
    mu, nu = bp.mu, bp.nu
    return all(
        part(mu, i) >= part(nu, i) - 1 and part(nu, i) >= part(mu, i + 1) - 1 for i in _support(bp)
    )


def is_special(bp: Bipartition) -> bool:
    mu, nu = bp.mu, bp.nu
    return all(
        part(mu, i) >= part(nu, i) - 1 and part(nu, i) >= part(mu, i + 1) for i in _support(bp)
    )


def is_B2_dist(bp: Bipartition) -> bool:
    return all(part(bp.mu, i) >= part(bp.nu, i) - 2 for i in _support(bp))


def is_P2nC(lam: Sequence[int]) -> bool:
    """Every odd part has even multiplicity."""
    lam = canonical(lam)
    return is_partition(lam) and all(multiplicity(lam, a) % 2 == 0 for a in set(lam) if a % 2)


def is_P2n1B(lam: Sequence[int]) -> bool:
    """Odd weight, and every even part has even multiplicity."""
    lam = canonical(lam)
    return (
        is_partition(lam)
        and sum(lam) % 2 == 1
        and all(multiplicity(lam, a) % 2 == 0 for a in set(lam) if a % 2 == 0)
    )


def preceq(a: Bipartition, b: Bipartition) -> bool:
    """``a <= b`` with equal termwise sums ``rho + sigma = mu + nu``."""
    _same_weight(interleave(a), interleave(b))
    if add_parts(a.mu, a.nu) != add_parts(b.mu, b.nu):
        return False
    leq = bipartition_leq(a, b)
    # With equal sums the order reduces to rho_i <= mu_i.
    componentwise = all(part(a.mu, i) <= part(b.mu, i) for i in range(1, len(a.mu) + 1))
    assert leq == componentwise, (a, b)
    return leq
