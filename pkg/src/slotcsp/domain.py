"""Finite integer domains with holes.

A domain is stored as a tuple of closed ``(lo, hi)`` intervals kept in
normal form: sorted, non-empty, and separated by at least one missing
value. Instances are immutable, so sharing one between a variable, a
trail frame and a message costs nothing.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Iterator

from .errors import EmptyDomain

Interval = tuple[int, int]


def _normalize(pairs: Iterable[Interval]) -> tuple[Interval, ...]:
    ordered = sorted((lo, hi) for lo, hi in pairs if lo <= hi)
    out: list[Interval] = []
    for lo, hi in ordered:
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


class FiniteDomain:
    __slots__ = ("_iv", "_size", "_hash")

    def __init__(self, intervals: Iterable[Interval] = ()):
        self._iv = _normalize(intervals)
        self._size = sum(hi - lo + 1 for lo, hi in self._iv)
        self._hash = None

    @classmethod
    def _trusted(cls, iv: tuple[Interval, ...]) -> FiniteDomain:
        d = cls.__new__(cls)
        d._iv = iv
        d._size = sum(hi - lo + 1 for lo, hi in iv)
        d._hash = None
        return d

    @classmethod
    def interval(cls, lo: int, hi: int) -> FiniteDomain:
        return cls._trusted(((lo, hi),) if lo <= hi else ())

    @classmethod
    def from_values(cls, values: Iterable[int]) -> FiniteDomain:
        return cls((v, v) for v in values)

    @classmethod
    def singleton(cls, value: int) -> FiniteDomain:
        return cls._trusted(((value, value),))

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return self._iv

    # -- queries --------------------------------------------------------

    def size(self) -> int:
        return self._size

    def __len__(self) -> int:
        return self._size

    def is_empty(self) -> bool:
        return not self._iv

    def __bool__(self) -> bool:
        return bool(self._iv)

    def is_singleton(self) -> bool:
        return self._size == 1

    def min(self) -> int:
        if not self._iv:
            raise EmptyDomain("min() of an empty domain")
        return self._iv[0][0]

    def max(self) -> int:
        if not self._iv:
            raise EmptyDomain("max() of an empty domain")
        return self._iv[-1][1]

    def value(self) -> int:
        """The single member of an instantiated domain."""
        if self._size != 1:
            raise ValueError(f"{self} is not a singleton")
        return self._iv[0][0]

    def hull(self) -> FiniteDomain:
        if len(self._iv) <= 1:
            return self
        return FiniteDomain._trusted(((self._iv[0][0], self._iv[-1][1]),))

    def _find(self, v: int) -> int:
        # index of the interval that would hold v, or -1
        i = bisect_right(self._iv, (v, float("inf"))) - 1
        if i >= 0 and self._iv[i][1] >= v:
            return i
        return -1

    def contains(self, v: int) -> bool:
        return self._find(v) >= 0

    __contains__ = contains

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self._iv:
            yield from range(lo, hi + 1)

    def issubset(self, other: FiniteDomain) -> bool:
        return self.intersect(other) == self

    # -- constructive operations -----------------------------------------

    def remove(self, v: int) -> FiniteDomain:
        i = self._find(v)
        if i < 0:
            return self
        lo, hi = self._iv[i]
        pieces = tuple(p for p in ((lo, v - 1), (v + 1, hi)) if p[0] <= p[1])
        return FiniteDomain._trusted(self._iv[:i] + pieces + self._iv[i + 1:])

    def remove_all(self, values: Iterable[int]) -> FiniteDomain:
        d = self
        for v in values:
            d = d.remove(v)
        return d

    def intersect(self, other: FiniteDomain) -> FiniteDomain:
        if self._iv == other._iv:
            return self
        a, b = self._iv, other._iv
        out: list[Interval] = []
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        # pieces come from disjoint, non-adjacent inputs, so already normal
        return FiniteDomain._trusted(tuple(out))

    __and__ = intersect

    def union(self, other: FiniteDomain) -> FiniteDomain:
        return FiniteDomain(self._iv + other._iv)

    __or__ = union

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteDomain):
            return NotImplemented
        return self._iv == other._iv

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._iv)
        return self._hash

    def __str__(self) -> str:
        parts = [str(lo) if lo == hi else f"{lo}..{hi}" for lo, hi in self._iv]
        return "{" + ",".join(parts) + "}"

    def __repr__(self) -> str:
        return f"FiniteDomain({str(self)})"


EMPTY = FiniteDomain()


def interval(lo: int, hi: int) -> FiniteDomain:
    """``{lo..hi}``, or the empty domain when ``lo > hi``."""
    return FiniteDomain.interval(lo, hi)


def domain_of(*values: int) -> FiniteDomain:
    return FiniteDomain.from_values(values)
