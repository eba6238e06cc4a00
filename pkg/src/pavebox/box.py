"""Boxes (interval vectors) and interval matrices."""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from .interval import EMPTY, Interval


class Box:
    """Axis-aligned box: one Interval per variable, immutable.

    A box is EMPTY as soon as any component is EMPTY.  Width is the
    L-infinity width, max over components of (hi - lo).
    """

    __slots__ = ("ivs",)

    def __init__(self, intervals: Iterable[Interval]):
        self.ivs = tuple(intervals)

    @classmethod
    def from_bounds(cls, bounds: Sequence[Tuple[float, float]]) -> "Box":
        return cls(Interval(lo, hi) for lo, hi in bounds)

    @classmethod
    def from_point(cls, point: Sequence[float]) -> "Box":
        return cls(Interval(v, v) for v in point)

    @classmethod
    def empty(cls, n: int) -> "Box":
        return cls([EMPTY] * n)

    @property
    def n(self) -> int:
        return len(self.ivs)

    @property
    def is_empty(self) -> bool:
        return any(iv.is_empty for iv in self.ivs)

    @property
    def width(self) -> float:
        return max(iv.width for iv in self.ivs)

    def widest_dim(self) -> int:
        """Index of the widest component; ties go to the lowest index."""
        best, best_w = 0, -1.0
        for i, iv in enumerate(self.ivs):
            w = iv.width
            if w > best_w:
                best, best_w = i, w
        return best

    def center(self) -> Tuple[float, ...]:
        return tuple(iv.mid for iv in self.ivs)

    def bounds(self) -> List[Tuple[float, float]]:
        return [(iv.lo, iv.hi) for iv in self.ivs]

    def contains_point(self, point: Sequence[float]) -> bool:
        return all(iv.contains(v) for iv, v in zip(self.ivs, point))

    def encloses(self, other: "Box") -> bool:
        if other.is_empty:
            return True
        return all(a.encloses(b) for a, b in zip(self.ivs, other.ivs))

    def inflated(self, ulps: int = 1) -> "Box":
        return Box(iv.inflated(ulps) for iv in self.ivs)

    def intersect(self, other: "Box") -> "Box":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return Box(a.intersect(b) for a, b in zip(self.ivs, other.ivs))

    __and__ = intersect

    def hull(self, other: "Box") -> "Box":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return Box(a.hull(b) for a, b in zip(self.ivs, other.ivs))

    __or__ = hull

    def bisect(self, dim: int) -> Tuple["Box", "Box"]:
        """Split component dim at its midpoint; rejects degenerate dims."""
        if self.is_empty:
            raise ValueError("cannot bisect an EMPTY box")
        iv = self.ivs[dim]
        if iv.is_degenerate:
            raise ValueError(f"dimension {dim} is degenerate")
        m = iv.mid
        if not (iv.lo < m < iv.hi):
            raise ValueError(f"dimension {dim} too thin to split")
        left = list(self.ivs)
        right = list(self.ivs)
        left[dim] = Interval(iv.lo, m)
        right[dim] = Interval(m, iv.hi)
        return Box(left), Box(right)

    def replace(self, dim: int, iv: Interval) -> "Box":
        ivs = list(self.ivs)
        ivs[dim] = iv
        return Box(ivs)

    def corners(self) -> List[Tuple[float, ...]]:
        """All 2^n corner points (non-empty boxes only)."""
        pts: List[Tuple[float, ...]] = [()]
        for iv in self.ivs:
            ends = (iv.lo,) if iv.is_degenerate else (iv.lo, iv.hi)
            pts = [p + (e,) for p in pts for e in ends]
        return pts

    def sort_key(self) -> Tuple[float, ...]:
        return tuple(iv.lo for iv in self.ivs) + tuple(iv.hi for iv in self.ivs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return self.ivs == other.ivs

    def __hash__(self) -> int:
        return hash(self.ivs)

    def __getitem__(self, i: int) -> Interval:
        return self.ivs[i]

    def __len__(self) -> int:
        return len(self.ivs)

    def __repr__(self) -> str:
        if self.is_empty:
            return f"Box.empty({self.n})"
        parts = " x ".join(f"[{iv.lo}, {iv.hi}]" for iv in self.ivs)
        return f"Box({parts})"


class IntervalMatrix:
    """Dense p x n matrix of Intervals (e.g. an interval Jacobian)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Interval]]):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged interval matrix")

    def __getitem__(self, ij: Tuple[int, int]) -> Interval:
        return self.entries[ij[0]][ij[1]]

    def row(self, i: int) -> List[Interval]:
        return self.entries[i]

    def __repr__(self) -> str:
        return f"IntervalMatrix({self.rows}x{self.cols})"
