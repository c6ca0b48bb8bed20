"""Core geometry types shared by every ordering strategy.

Coordinate convention: origin at the top-left corner of the page, x grows
rightward, y grows downward (the usual image/OCR convention). Reading
precedence is therefore ascending y (top of page first), then ascending x
(left first). All coordinates are stored as floats so that fractional
augmentation shifts survive losslessly; integer inputs are widened.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["TokenBox", "Document", "ReadingOrder", "extent", "apply_order"]


@dataclass(frozen=True, slots=True)
class TokenBox:
    """One OCR token: an axis-aligned rectangle plus its text payload.

    ``source_index`` names the token's position in the original input file
    and survives any reordering. Degenerate boxes (zero width or height)
    are legal; their projection interval is a single point.
    """

    x1: float
    y1: float
    x2: float
    y2: float
    text: str = ""
    source_index: int = 0

    def __post_init__(self) -> None:
        for name in ("x1", "y1", "x2", "y2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"box coordinate {name} must be finite")
            object.__setattr__(self, name, value)
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise ValueError(
                f"box corners must satisfy x1 <= x2 and y1 <= y2, "
                f"got ({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )
        if self.source_index < 0:
            raise ValueError("source_index must be non-negative")

    def shifted(self, dx: float, dy: float) -> TokenBox:
        """Return a copy translated by (dx, dy); size is unchanged."""
        return TokenBox(
            self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy,
            self.text, self.source_index,
        )


@dataclass(frozen=True)
class Document:
    """An ordered collection of token boxes with the page extent.

    ``source_index`` values must be exactly 0..K-1 (a bijection with token
    positions, though not necessarily the identity: a shuffled document
    keeps its original labels). Boxes may lie up to one page width/height
    outside the page so that augmentation shifts past the edges stay legal.
    """

    id: str
    width: float
    height: float
    tokens: tuple[TokenBox, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for name in ("width", "height"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"page {name} must be a positive finite number")
            object.__setattr__(self, name, value)
        seen = [False] * len(self.tokens)
        for tok in self.tokens:
            if tok.source_index >= len(self.tokens) or seen[tok.source_index]:
                raise ValueError(
                    "token source_index values must be exactly 0..K-1 with no duplicates"
                )
            seen[tok.source_index] = True
            if not (-self.width <= tok.x1 and tok.x2 <= 2 * self.width
                    and -self.height <= tok.y1 and tok.y2 <= 2 * self.height):
                raise ValueError(
                    f"token {tok.source_index} lies outside the page slack region"
                )

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class ReadingOrder:
    """A permutation of token indices: ``order[rank]`` is the index of the
    token read at position ``rank``."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))
        seen = [False] * len(self.order)
        for value in self.order:
            if not isinstance(value, int) or value < 0 or value >= len(seen) or seen[value]:
                raise ValueError(f"order is not a permutation of 0..{len(seen) - 1}")
            seen[value] = True

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, rank: int) -> int:
        return self.order[rank]

    def inverse(self) -> ReadingOrder:
        inv = [0] * len(self.order)
        for rank, idx in enumerate(self.order):
            inv[idx] = rank
        return ReadingOrder(tuple(inv))


def extent(doc: Document) -> tuple[float, float, float, float]:
    """Coordinate-wise extrema over all boxes: (x_min, y_min, x_max, y_max)."""
    if not doc.tokens:
        raise ValueError("empty document")
    return (
        min(t.x1 for t in doc.tokens),
        min(t.y1 for t in doc.tokens),
        max(t.x2 for t in doc.tokens),
        max(t.y2 for t in doc.tokens),
    )


def apply_order(doc: Document, order: ReadingOrder) -> Document:
    """Reorder the token sequence: new position ``rank`` holds the token at
    current position ``order[rank]``. ``source_index`` fields are preserved,
    so for a freshly ingested document (tokens in file order) ranks and
    source indices coincide."""
    if len(order) != len(doc.tokens):
        raise ValueError(
            f"order length {len(order)} does not match token count {len(doc.tokens)}"
        )
    return Document(doc.id, doc.width, doc.height,
                    tuple(doc.tokens[i] for i in order))
