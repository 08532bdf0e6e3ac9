"""Integer partitions, point configurations and support enumeration.

Partitions are stored as trimmed tuples of positive parts; ``part(i)`` reads
zero beyond the stored length so formulas can index freely.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from typing import Iterable, Sequence


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Trailing zeros are dropped on construction, so ``Partition([2, 1, 0])``
    equals ``Partition([2, 1])``.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValueError(f"parts must be weakly decreasing, got {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be nonnegative, got {parts}")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({list(self)})"

    def part(self, i: int) -> int:
        """Return the ``i``-th part (1-indexed), zero past the length."""
        if i < 1:
            raise IndexError("parts are indexed from 1")
        return self[i - 1] if i <= len(self) else 0

    def size(self) -> int:
        return sum(self)

    def length(self) -> int:
        return len(self)

    def multiplicity(self, i: int) -> int:
        return self.count(i)

    def z_factor(self) -> int:
        """``prod_i i**m_i * m_i!``, the power-sum norm of this partition."""
        out = 1
        for i in set(self):
            m = self.count(i)
            out *= i**m * math.factorial(m)
        return out

    def to_json(self) -> str:
        return json.dumps(list(self))

    @classmethod
    def from_json(cls, text: str) -> "Partition":
        return cls(json.loads(text))


EMPTY = Partition()


def as_partition(obj) -> Partition:
    """Coerce a sequence (or a bare int, read as a one-row shape) to a Partition."""
    if isinstance(obj, Partition):
        return obj
    if isinstance(obj, int):
        return Partition([obj])
    return Partition(obj)


@lru_cache(maxsize=None)
def _partitions_of(n: int, max_part: int, max_length: int) -> tuple:
    # lexicographically descending partitions of n with bounded parts/length
    if n == 0:
        return ((),)
    if max_length == 0:
        return ()
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first, max_length - 1):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int, max_length: int | None = None) -> list[Partition]:
    """All partitions of ``n`` with at most ``max_length`` parts, lex-descending."""
    cap = n if max_length is None else max_length
    return [Partition(p) for p in _partitions_of(n, n, cap)]


def enumerate_partitions(max_size: int, max_length: int | None = None) -> list[Partition]:
    """Every partition with size <= max_size and length <= max_length.

    Ordered by size, then lexicographically descending within a size.
    ``max_length=None`` means unbounded.
    """
    if max_size < 0:
        raise ValueError("max_size must be nonnegative")
    out = []
    for n in range(max_size + 1):
        out.extend(partitions_of(n, max_length))
    return out


def point_config_measure(lam: Sequence[int]) -> frozenset:
    """The finite configuration ``{lam_i - i : 1 <= i <= len(lam)}``."""
    lam = as_partition(lam)
    return frozenset(p - i for i, p in enumerate(lam, start=1))


def point_config_process(lams: Sequence[Sequence[int]]) -> frozenset:
    """Union over levels of ``(level, lam_j - j)`` for the stored parts."""
    if len(lams) < 1:
        raise ValueError("need at least one level")
    out = set()
    for level, lam in enumerate(lams, start=1):
        out.update((level, x) for x in point_config_measure(lam))
    return frozenset(out)


def occupies(lam: Sequence[int], t: int) -> bool:
    """Whether ``t`` is in the full configuration ``{lam_j - j : j >= 1}``.

    The full configuration keeps the zero parts, so every integer below
    ``-len(lam)`` is occupied. Correlation functions are probabilities of
    containment in this set.
    """
    lam = as_partition(lam)
    ell = len(lam)
    if t <= -ell - 1:
        return True
    return any(p - i == t for i, p in enumerate(lam, start=1))


def occupies_all(lam: Sequence[int], ts: Iterable[int]) -> bool:
    return all(occupies(lam, t) for t in ts)


def contains(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff ``mu_i <= lam_i`` for every i (absent parts read 0)."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


def is_horizontal_strip(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff ``lam / mu`` has at most one box in each column."""
    if not contains(lam, mu):
        return False
    for i in range(1, len(lam)):
        mu_i = mu[i - 1] if i - 1 < len(mu) else 0
        if lam[i] > mu_i:
            return False
    return True


def horizontal_strips_below(lam: Sequence[int], lower: Sequence[int] = ()) -> list[Partition]:
    """All ``nu`` with ``lower <= nu``, ``nu <= lam`` and ``lam / nu`` a horizontal strip.

    Interlacing ``lam_{i+1} <= nu_i <= lam_i`` bounds each part independently.
    """
    lam = tuple(lam)
    ranges = []
    for i in range(len(lam)):
        lo = lam[i + 1] if i + 1 < len(lam) else 0
        if i < len(lower):
            lo = max(lo, lower[i])
        if lo > lam[i]:
            return []
        ranges.append(range(lo, lam[i] + 1))
    if len(lower) > len(lam):
        return []
    out = []

    def rec(i, acc):
        if i == len(ranges):
            out.append(Partition(acc))
            return
        for v in ranges[i]:
            acc.append(v)
            rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def subpartitions(lam: Sequence[int], other: Sequence[int] | None = None) -> list[Partition]:
    """Partitions contained in ``lam`` (and in ``other`` when given), graded order."""
    bound = list(lam)
    if other is not None:
        bound = [min(a, b) for a, b in zip(lam, other)]
    bound = Partition(bound) if bound else EMPTY
    out = []

    def rec(i, prev, acc):
        out.append(Partition(acc))
        if i == len(bound):
            return
        for v in range(1, min(prev, bound[i]) + 1):
            acc.append(v)
            rec(i + 1, v, acc)
            acc.pop()

    rec(0, bound.part(1) if bound else 0, [])
    out.sort(key=lambda p: (sum(p), tuple(-x for x in p)))
    return out


def enumerate_process_supports(m: int, max_size_per_level: int,
                               max_length: int | None = None) -> list[tuple]:
    """All chains ``lam1 >= mu1 <= lam2 >= ... <= lam_m`` inside the caps.

    Returns ``(lams, mus)`` pairs with ``len(lams) == m`` and
    ``len(mus) == m - 1``; the order is the nested loop order over
    ``lam1, mu1, lam2, ...`` with graded-lexicographic order at each slot.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if max_size_per_level < 0:
        raise ValueError("bounds must be nonnegative")
    base = enumerate_partitions(max_size_per_level, max_length)
    out = []

    def rec(lams, mus):
        if len(lams) == m:
            out.append((tuple(lams), tuple(mus)))
            return
        if not lams:
            for lam in base:
                rec([lam], [])
            return
        for mu in subpartitions(lams[-1]):
            for lam in base:
                if contains(lam, mu):
                    rec(lams + [lam], mus + [mu])

    rec([], [])
    return out


def partition_count(n: int) -> int:
    """Number of partitions of ``n`` via Euler's pentagonal recursion."""
    table = [1] + [0] * n
    for k in range(1, n + 1):
        total, j = 0, 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > k:
                break
            sign = 1 if j % 2 else -1
            total += sign * table[k - g1]
            g2 = j * (3 * j + 1) // 2
            if g2 <= k:
                total += sign * table[k - g2]
            j += 1
        table[k] = total
    return table[n]


def config_to_json(config) -> str:
    """Serialize a configuration as a sorted JSON array."""
    items = sorted(config)
    if items and isinstance(items[0], tuple):
        return json.dumps([list(p) for p in items])
    return json.dumps(items)
