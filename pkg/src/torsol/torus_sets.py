"""Measurable subsets of the circle as finite unions of rational intervals.

A set is stored as a normalized (sorted, disjoint, non-adjacent) tuple of
half-open intervals [a, b) with exact rational endpoints in [0, 1].  All
set algebra (complement, intersection, union, symmetric difference, shift
around the circle) stays exact.  Sets aligned to a 1/p grid correspond to
subsets of Z_p and convert back and forth losslessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import GridAlignmentError, InvalidInputError
from .rationals import format_rational, parse_rational

__all__ = ["IntervalUnion", "DiscreteSet", "from_discrete", "sets_to_json", "sets_from_json"]


def _normalize(pairs) -> tuple[tuple[Fraction, Fraction], ...]:
    items = []
    for a, b in pairs:
        a, b = Fraction(a), Fraction(b)
        if not (0 <= a < b <= 1):
            raise InvalidInputError(f"interval [{a}, {b}) not inside [0, 1]")
        items.append((a, b))
    items.sort()
    merged: list[list[Fraction]] = []
    for a, b in items:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


@dataclass(frozen=True)
class IntervalUnion:
    """Normalized finite union of half-open rational intervals in the circle."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, pairs=()):
        object.__setattr__(self, "intervals", _normalize(pairs))

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalUnion":
        return cls(pairs)

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @classmethod
    def full(cls) -> "IntervalUnion":
        return cls(((Fraction(0), Fraction(1)),))

    def is_empty(self) -> bool:
        return not self.intervals

    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def contains(self, x: Fraction) -> bool:
        x = Fraction(x) % 1
        return any(a <= x < b for a, b in self.intervals)

    def complement(self) -> "IntervalUnion":
        out = []
        cursor = Fraction(0)
        for a, b in self.intervals:
            if cursor < a:
                out.append((cursor, a))
            cursor = b
        if cursor < 1:
            out.append((cursor, Fraction(1)))
        return IntervalUnion(out)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.intervals + other.intervals)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalUnion(out)

    def symmetric_difference(self, other: "IntervalUnion") -> "IntervalUnion":
        both = self.intersect(other)
        return self.union(other).intersect(both.complement())

    def shift(self, t) -> "IntervalUnion":
        """Rotate the set by t around the circle (wraps modulo 1)."""
        t = Fraction(t) % 1
        out = []
        for a, b in self.intervals:
            a, b = a + t, b + t
            if b <= 1:
                out.append((a, b))
            elif a >= 1:
                out.append((a - 1, b - 1))
            else:
                out.append((a, Fraction(1)))
                out.append((Fraction(0), b - 1))
        return IntervalUnion(out)

    def snap_to_grid(self, n: int) -> "IntervalUnion":
        """Inner approximation by whole cells [x/n, (x+1)/n).

        The symmetric difference with the original has measure at most
        2 * (number of intervals) / n.
        """
        if n < 1:
            raise InvalidInputError("grid modulus must be positive")
        out = []
        for a, b in self.intervals:
            first = math.ceil(a * n)
            last = math.floor(b * n)
            if first < last:
                out.append((Fraction(first, n), Fraction(last, n)))
        return IntervalUnion(out)

    def is_grid_aligned(self, p: int) -> bool:
        return all((a * p).denominator == 1 and (b * p).denominator == 1 for a, b in self.intervals)

    def to_discrete(self, p: int) -> "DiscreteSet":
        """Subset of Z_p matching a p-grid-aligned set cell by cell."""
        if p < 1:
            raise InvalidInputError("grid modulus must be positive")
        members = [False] * p
        for a, b in self.intervals:
            lo, hi = a * p, b * p
            if lo.denominator != 1:
                raise GridAlignmentError(
                    f"endpoint {format_rational(a)} is not a multiple of 1/{p}", endpoint=a
                )
            if hi.denominator != 1:
                raise GridAlignmentError(
                    f"endpoint {format_rational(b)} is not a multiple of 1/{p}", endpoint=b
                )
            for x in range(int(lo), int(hi)):
                members[x] = True
        return DiscreteSet(p, tuple(members))

    def density_points(self) -> list[tuple[Fraction, Fraction]]:
        """Points of local density 1: the interior of the closure.

        Each maximal closed block [a, b] (merging across 0 when the set
        wraps) contributes the open interval (a, b); a wrapping block is
        reported with b > 1 and is to be read modulo 1.  The full circle is
        reported as (0, 1).
        """
        if not self.intervals:
            return []
        blocks = [list(iv) for iv in self.intervals]
        if len(blocks) > 1 and blocks[0][0] == 0 and blocks[-1][1] == 1:
            first = blocks.pop(0)
            blocks[-1][1] = first[1] + 1
        return [(a, b) for a, b in blocks]

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(f"[{format_rational(a)},{format_rational(b)})" for a, b in self.intervals)


@dataclass(frozen=True)
class DiscreteSet:
    """Subset of Z_p as a boolean membership array of length p."""

    p: int
    members: tuple[bool, ...]

    def __init__(self, p: int, members):
        if p < 1:
            raise InvalidInputError("modulus must be positive")
        members = tuple(bool(v) for v in members)
        if len(members) != p:
            raise InvalidInputError(f"membership array must have length {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "members", members)

    @classmethod
    def from_indices(cls, p: int, indices) -> "DiscreteSet":
        members = [False] * p
        for x in indices:
            members[x % p] = True
        return cls(p, members)

    def indices(self) -> list[int]:
        return [x for x, inside in enumerate(self.members) if inside]

    def size(self) -> int:
        return sum(self.members)

    def to_interval_union(self) -> IntervalUnion:
        out = []
        start = None
        for x in range(self.p):
            if self.members[x] and start is None:
                start = x
            elif not self.members[x] and start is not None:
                out.append((Fraction(start, self.p), Fraction(x, self.p)))
                start = None
        if start is not None:
            out.append((Fraction(start, self.p), Fraction(self.p, self.p)))
        return IntervalUnion(out)


def from_discrete(dset: DiscreteSet) -> IntervalUnion:
    return dset.to_interval_union()


def sets_to_json(sets) -> list:
    return [
        [[format_rational(a), format_rational(b)] for a, b in s.intervals] for s in sets
    ]


def sets_from_json(data) -> list[IntervalUnion]:
    if not isinstance(data, list):
        raise InvalidInputError("sets JSON must be a list of sets")
    out = []
    for entry in data:
        pairs = []
        for pair in entry:
            if len(pair) != 2:
                raise InvalidInputError(f"interval {pair!r} must have two endpoints")
            pairs.append((parse_rational(pair[0]), parse_rational(pair[1])))
        out.append(IntervalUnion(pairs))
    return out
