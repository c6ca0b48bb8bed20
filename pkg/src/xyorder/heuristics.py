"""Baseline token orderings keyed on each box's top-left corner.

These are the simple sorts the cut is compared against, and the same rule
family the cut falls back to inside indivisible clusters. Every sort
breaks ties by source_index, so outputs are invariant under shuffling of
the input sequence.
"""

from __future__ import annotations

import random

from .augment import AugmentParams, shift_boxes
from .geometry import Document, ReadingOrder

__all__ = ["order_yx", "order_xy", "order_sum", "order_aug_yx"]


def order_yx(doc: Document) -> ReadingOrder:
    """Top-first then left-first: sort by (y1, x1, source_index)."""
    ranked = sorted(doc.tokens, key=lambda t: (t.y1, t.x1, t.source_index))
    return ReadingOrder(tuple(t.source_index for t in ranked))


def order_xy(doc: Document) -> ReadingOrder:
    """Left-first then top-first: sort by (x1, y1, source_index)."""
    ranked = sorted(doc.tokens, key=lambda t: (t.x1, t.y1, t.source_index))
    return ReadingOrder(tuple(t.source_index for t in ranked))


def order_sum(doc: Document) -> ReadingOrder:
    """Diagonal sweep: sort by (y1 + x1, source_index)."""
    ranked = sorted(doc.tokens, key=lambda t: (t.y1 + t.x1, t.source_index))
    return ReadingOrder(tuple(t.source_index for t in ranked))


def order_aug_yx(
    doc: Document, params: AugmentParams, rng: random.Random | None = None
) -> ReadingOrder:
    """Shift boxes, then order_yx; the order indexes the original tokens."""
    return order_yx(shift_boxes(doc, params, rng))
