"""Projection profiles of box sets and the valleys that license cuts.

A profile counts, at each coordinate along one axis, how many boxes'
closed projection intervals cover it. Coverage is computed exactly from
interval endpoints (a sweep over breakpoints), never by pixel sampling,
so fractional post-augmentation coordinates lose nothing. Intervals are
closed on both ends: boxes that touch at a single point share coverage
there and produce no valley between them.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

from .geometry import TokenBox

__all__ = ["Axis", "Valley", "ProjectionProfile", "box_interval", "profile", "valleys"]


class Axis(Enum):
    """Projection direction. HORIZONTAL profiles coverage along y (row
    structure, cut by horizontal lines); VERTICAL along x (columns)."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    @property
    def other(self) -> Axis:
        return Axis.VERTICAL if self is Axis.HORIZONTAL else Axis.HORIZONTAL


def box_interval(box: TokenBox, axis: Axis) -> tuple[float, float]:
    """The box's closed projection interval on the given axis."""
    if axis is Axis.HORIZONTAL:
        return (box.y1, box.y2)
    return (box.x1, box.x2)


@dataclass(frozen=True)
class Valley:
    """A maximal open interval of zero coverage strictly inside the profile
    domain; coverage is positive immediately on both sides."""

    start: float
    end: float

    @property
    def width(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class ProjectionProfile:
    """Piecewise-constant coverage over [lo, hi].

    ``intervals`` holds one closed interval per box, sorted by (start, end).
    ``coverage(t)`` answers point queries exactly; ``steps()`` exposes the
    (breakpoint, count) view used for rendering.
    """

    axis: Axis
    lo: float
    hi: float
    intervals: tuple[tuple[float, float], ...]

    @cached_property
    def _starts(self) -> list[float]:
        return sorted(s for s, _ in self.intervals)

    @cached_property
    def _ends(self) -> list[float]:
        return sorted(e for _, e in self.intervals)

    @property
    def size(self) -> int:
        """Number of contributing boxes."""
        return len(self.intervals)

    def coverage(self, t: float) -> int:
        """How many boxes' closed intervals contain t (0 outside [lo, hi])."""
        if t < self.lo or t > self.hi:
            return 0
        return bisect_right(self._starts, t) - bisect_left(self._ends, t)

    def steps(self) -> list[tuple[float, float, int]]:
        """(start, end, count) segments between consecutive breakpoints,
        covering [lo, hi]. Counts are taken in the open interior of each
        segment; isolated endpoint spikes do not appear."""
        points = sorted({p for pair in self.intervals for p in pair})
        return [
            (a, b, self.coverage((a + b) / 2.0))
            for a, b in zip(points, points[1:])
        ]


def profile(boxes: Sequence[TokenBox], axis: Axis) -> ProjectionProfile:
    """Exact projection profile of a box set onto one axis."""
    if not boxes:
        raise ValueError("empty box sequence")
    intervals = sorted(box_interval(b, axis) for b in boxes)
    lo = intervals[0][0]
    hi = max(e for _, e in intervals)
    return ProjectionProfile(axis=axis, lo=lo, hi=hi, intervals=tuple(intervals))


def valleys(p: ProjectionProfile) -> tuple[Valley, ...]:
    """All maximal zero-coverage gaps between the profile's covered runs,
    sorted ascending. Margins outside the covered span are not valleys, and
    with closed intervals every valley has strictly positive width."""
    out: list[Valley] = []
    run_end: float | None = None
    for start, end in p.intervals:
        if run_end is None or start <= run_end:
            run_end = end if run_end is None else max(run_end, end)
        else:
            out.append(Valley(run_end, start))
            run_end = end
    return tuple(out)
