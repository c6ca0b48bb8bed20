"""Randomized box shifting: the augmentation that turns the plain cut into
a sampler of diverse proper reading orders.

Each box independently draws a pair (v_x, v_y); a coordinate shifts by
theta * v only when |v| exceeds its lambda threshold, so width and height
never change and no shift exceeds theta. Draws use Python's seeded
Mersenne Twister (``random.Random``), whose ``random()`` sequence for a
given seed is guaranteed stable across platforms and CPython versions; one
pair is drawn per box in ascending source_index order, so appending tokens
never disturbs earlier boxes' draws.

The default draw distribution is uniform on [-1, 1]: it bounds shifts by
theta and makes the 0.5 threshold fire with probability one half. A
clipped standard normal ("clipped-normal") is available as an alternative.
Augmentation is a sampling-time tool; inference paths use the plain cut.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .geometry import Document, ReadingOrder
from .xycut import XYTree, xy_cut

__all__ = [
    "DISTRIBUTIONS",
    "AugmentParams",
    "ShiftSample",
    "sample_shifts",
    "shift_boxes",
    "augmented_xy_cut",
]

DISTRIBUTIONS = ("uniform", "clipped-normal")


@dataclass(frozen=True)
class AugmentParams:
    """Shift thresholds and magnitude: lambda_x, lambda_y in [0, 1] gate the
    shift per axis, theta scales it (pixels). Defaults (0.5, 0.5, 5)."""

    lambda_x: float = 0.5
    lambda_y: float = 0.5
    theta: float = 5.0
    seed: int = 0
    distribution: str = "uniform"

    def __post_init__(self) -> None:
        if not (0.0 <= self.lambda_x <= 1.0 and 0.0 <= self.lambda_y <= 1.0):
            raise ValueError("lambda_x and lambda_y must lie in [0, 1]")
        if not (math.isfinite(self.theta) and self.theta >= 0.0):
            raise ValueError("theta must be a non-negative finite number")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}")


@dataclass(frozen=True)
class ShiftSample:
    """One box's draw pair; |v_x| <= 1 and |v_y| <= 1 by construction."""

    v_x: float
    v_y: float


def _draw(rng: random.Random, distribution: str) -> float:
    if distribution == "uniform":
        return rng.uniform(-1.0, 1.0)
    return max(-1.0, min(1.0, rng.gauss(0.0, 1.0)))


def sample_shifts(
    count: int, params: AugmentParams, rng: random.Random | None = None
) -> tuple[ShiftSample, ...]:
    """Draw one (v_x, v_y) pair per box, in ascending source_index order."""
    if rng is None:
        rng = random.Random(params.seed)
    dist = params.distribution
    return tuple(
        ShiftSample(_draw(rng, dist), _draw(rng, dist)) for _ in range(count)
    )


def shift_boxes(
    doc: Document, params: AugmentParams, rng: random.Random | None = None
) -> Document:
    """Apply the threshold-gated shifts to every box independently.

    Sample assignment goes by source_index, so a shuffled document shifts
    exactly like its unshuffled twin. With theta large enough to push a box
    past the page slack region, Document construction rejects the result.
    """
    samples = sample_shifts(len(doc.tokens), params, rng)
    shifted = []
    for tok in doc.tokens:
        v = samples[tok.source_index]
        dx = params.theta * v.v_x if abs(v.v_x) > params.lambda_x else 0.0
        dy = params.theta * v.v_y if abs(v.v_y) > params.lambda_y else 0.0
        shifted.append(tok if dx == 0.0 and dy == 0.0 else tok.shifted(dx, dy))
    return Document(doc.id, doc.width, doc.height, tuple(shifted))


def augmented_xy_cut(
    doc: Document, params: AugmentParams, rng: random.Random | None = None
) -> tuple[ReadingOrder, XYTree]:
    """Shift, then cut. The returned order indexes the original document's
    tokens (shifts influence the ordering only, never emitted geometry)."""
    return xy_cut(shift_boxes(doc, params, rng))
