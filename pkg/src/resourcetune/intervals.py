"""Single-intervals, multiple-intervals and shapes over the frequency axis.

All values are in MHz. Endpoints are compared exactly; there is no epsilon.

>>> m = MultipleInterval.of((0.5, 5), (7, 8), (11, 15))
>>> shape_of(m)
Shape(entries=(4.5, 2.0, 1.0, 3.0, 4.0))
>>> measure(m)
9.5
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class SingleInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"single-interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __repr__(self):
        return f"[{self.lo:g}, {self.hi:g}]"


@dataclass(frozen=True)
class MultipleInterval:
    """Canonical union of disjoint single-intervals, sorted, with positive gaps."""

    singles: tuple[SingleInterval, ...] = ()
    _los: tuple[float, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "singles", tuple(self.singles))
        object.__setattr__(self, "_los", tuple(s.lo for s in self.singles))
        for a, b in zip(self.singles, self.singles[1:]):
            if not a.hi < b.lo:
                raise ValueError(f"singles {a} and {b} are not sorted with a positive gap")

    @classmethod
    def of(cls, *pairs: tuple[float, float]) -> "MultipleInterval":
        return cls(tuple(SingleInterval(float(lo), float(hi)) for lo, hi in pairs))

    @property
    def lo(self) -> float:
        return self.singles[0].lo

    @property
    def hi(self) -> float:
        return self.singles[-1].hi

    def __bool__(self):
        return bool(self.singles)

    def __len__(self):
        return len(self.singles)

    def __iter__(self):
        return iter(self.singles)

    def covers(self, f: float) -> bool:
        """True if frequency ``f`` lies in one of the closed singles."""
        i = bisect.bisect_right(self._los, f) - 1
        return i >= 0 and f <= self.singles[i].hi

    def pairs(self) -> list[list[float]]:
        return [[s.lo, s.hi] for s in self.singles]

    def __repr__(self):
        if not self.singles:
            return "MultipleInterval(empty)"
        return " u ".join(repr(s) for s in self.singles)


EMPTY = MultipleInterval()


@dataclass(frozen=True)
class Shape:
    """Odd-length vector: single widths at even 0-based positions, gaps between."""

    entries: tuple[float, ...]

    def __post_init__(self):
        entries = tuple(float(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) % 2 != 1:
            raise ValueError(f"shape must have odd length, got {entries}")
        if any(x <= 0 for x in entries):
            raise ValueError(f"shape entries must be positive, got {entries}")

    @property
    def widths(self) -> tuple[float, ...]:
        return self.entries[::2]

    @property
    def single_count(self) -> int:
        return (len(self.entries) + 1) // 2

    @property
    def total_width(self) -> float:
        return sum(self.widths)

    @property
    def offsets(self) -> tuple[float, ...]:
        """Left edge of every single relative to the leftmost point."""
        out, pos = [], 0.0
        for i, x in enumerate(self.entries):
            if i % 2 == 0:
                out.append(pos)
            pos += x
        return tuple(out)

    @property
    def span(self) -> float:
        return sum(self.entries)


def measure(m: MultipleInterval) -> float:
    return sum(s.width for s in m.singles)


def shape_of(m: MultipleInterval) -> Shape:
    if not m.singles:
        raise ValueError("an empty multiple-interval has no shape")
    entries = [m.singles[0].width]
    for prev, s in zip(m.singles, m.singles[1:]):
        entries += [s.lo - prev.hi, s.width]
    return Shape(tuple(entries))


def contains(outer: SingleInterval, inner: SingleInterval) -> bool:
    return outer.lo <= inner.lo and inner.hi <= outer.hi


def union_all(ms: Iterable[MultipleInterval]) -> MultipleInterval:
    """Union of multiple-intervals; touching or overlapping bands merge."""
    singles = sorted(s for m in ms for s in m.singles)
    merged: list[list[float]] = []
    for s in singles:
        if merged and s.lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], s.hi)
        else:
            merged.append([s.lo, s.hi])
    return MultipleInterval(tuple(SingleInterval(lo, hi) for lo, hi in merged))


def realize_shape(shape: Shape, origin: float) -> MultipleInterval:
    """The member of I[shape] whose leftmost point is ``origin``."""
    if not origin > 0:
        raise ValueError(f"origin must be positive, got {origin}")
    singles = []
    pos = float(origin)
    for i, x in enumerate(shape.entries):
        if i % 2 == 0:
            singles.append(SingleInterval(pos, pos + x))
        pos += x
    return MultipleInterval(tuple(singles))


def parse_shapes(raw: Sequence[Sequence[float]]) -> tuple[Shape, ...]:
    return tuple(Shape(tuple(s)) for s in raw)
