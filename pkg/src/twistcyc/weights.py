"""Dominant weights of SO(n,1): support counts, degree ranges and branching.

Only the numerical shadows of the Vogan-Zuckerman theory appear here: the
support count ``i(mu)``, the interval of degrees where cohomology can be
nonzero, the dimension ``R`` of ``u ∩ p`` for the parabolic attached to a
weight, and the two degrees carried by the corresponding ``A_q(lambda)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence


class InvalidWeight(ValueError):
    pass


class NoCompatibleParabolic(ValueError):
    """n = 2m-1 and every entry of the weight is nonzero."""


def rank_of(n: int) -> int:
    """m = floor((n+1)/2), the number of entries of a dominant weight."""
    return (n + 1) // 2


@dataclass(frozen=True)
class DominantWeight:
    entries: tuple[int, ...]
    ambient_n: int

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if self.ambient_n < 1:
            raise InvalidWeight(f"n must be positive, got {self.ambient_n}")
        m = rank_of(self.ambient_n)
        if len(entries) != m:
            raise InvalidWeight(
                f"SO({self.ambient_n},1) weights have {m} entries, got {len(entries)}")
        if any(not isinstance(b, int) or isinstance(b, bool) for b in entries):
            raise InvalidWeight("weight entries must be integers")
        if any(b < 0 for b in entries):
            raise InvalidWeight("weight entries must be nonnegative")
        if any(a < b for a, b in zip(entries, entries[1:])):
            raise InvalidWeight(f"weight {entries} is not weakly decreasing")

    @classmethod
    def parse(cls, text: str, n: int) -> "DominantWeight":
        try:
            entries = tuple(int(t) for t in text.replace("(", "").replace(")", "").split(",") if t.strip())
        except ValueError as exc:
            raise InvalidWeight(f"malformed weight {text!r}") from exc
        return cls(entries, n)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def size(self) -> int:
        return sum(self.entries)

    def partition(self) -> tuple[int, ...]:
        return normalize_partition(self.entries)


def support_count(mu) -> int:
    """i(mu): number of nonzero entries."""
    entries = mu.entries if isinstance(mu, DominantWeight) else mu
    return sum(1 for b in entries if b != 0)


def vanishes_identically(mu: DominantWeight) -> bool:
    return mu.ambient_n == 2 * mu.m - 1 and support_count(mu) == mu.m


def nonvanishing_range(mu: DominantWeight) -> list[int]:
    """Degrees p in [i(mu), n - i(mu)], or [] in the totally vanishing case."""
    if vanishes_identically(mu):
        return []
    i = support_count(mu)
    return list(range(i, mu.ambient_n - i + 1))


def levi_R(lam: DominantWeight) -> int:
    if vanishes_identically(lam):
        raise NoCompatibleParabolic(
            f"no theta-stable parabolic is compatible with {lam.entries} for n={lam.ambient_n}")
    return support_count(lam)


def aq_degrees(lam: DominantWeight) -> list[int]:
    r = levi_R(lam)
    return sorted({r, lam.ambient_n - r})


def normalize_partition(p: Iterable[int]) -> tuple[int, ...]:
    """Strip trailing zeros, keeping ``(0,)`` for the empty partition."""
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (0,)


def is_partition(p: Sequence[int]) -> bool:
    return all(isinstance(b, int) and b >= 0 for b in p) and all(a >= b for a, b in zip(p, p[1:]))


def branch(mu: Sequence[int]) -> list[tuple[int, ...]]:
    """Partitions interlacing ``mu``: b1 >= c1 >= b2 >= c2 >= ... >= b_l >= c_l >= 0."""
    if isinstance(mu, DominantWeight):
        mu = mu.entries
    mu = tuple(mu)
    if not is_partition(mu):
        raise InvalidWeight(f"{mu} is not a partition")
    lows = list(mu[1:]) + [0]
    ranges = [range(lo, hi + 1) for hi, lo in zip(mu, lows)]
    found = {normalize_partition(c) for c in product(*ranges)}
    return sorted(found)


def partitions(total: int, max_parts: int | None = None, max_part: int | None = None):
    """All partitions of ``total`` (weakly decreasing tuples of positive parts)."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        rest_parts = None if max_parts is None else max_parts - 1
        for rest in partitions(total - first, rest_parts, first):
            yield (first,) + rest


def dominant_weights(n: int, max_size: int):
    """Every dominant weight of SO(n,1) with |mu| <= max_size."""
    m = rank_of(n)
    for total in range(max_size + 1):
        for p in partitions(total, m):
            yield DominantWeight(p + (0,) * (m - len(p)), n)


def branch_depth(mu: Sequence[int]) -> int:
    """Fewest branching steps needed to reach the zero partition."""
    frontier = {normalize_partition(mu)}
    steps = 0
    while (0,) not in frontier:
        frontier = {nu for p in frontier for nu in branch(p)}
        steps += 1
    return steps
