"""Rank-correlation scoring of predicted orders against references.

The score is Kendall tau-a over pair concordance of ranks:
tau = 1 - 2 * inversions / (K * (K - 1) / 2), where an inversion is a
token pair the two orders rank oppositely. Inversions are counted with a
merge sort, so scoring stays cheap for large documents; tests check it
against explicit pair enumeration. A single-token document has no pairs
and scores 1.0 (it is always an exact match).
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import ReadingOrder

__all__ = ["EvalEntry", "EvalReport", "evaluate", "count_inversions"]


def count_inversions(seq: list[int]) -> int:
    """Number of out-of-order pairs, via merge sort."""

    def sort(values: list[int]) -> tuple[list[int], int]:
        if len(values) <= 1:
            return values, 0
        mid = len(values) // 2
        left, inv_l = sort(values[:mid])
        right, inv_r = sort(values[mid:])
        merged: list[int] = []
        inv = inv_l + inv_r
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
                inv += len(left) - i
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, inv

    return sort(list(seq))[1]


@dataclass(frozen=True)
class EvalEntry:
    doc_id: str
    size: int
    inversions: int
    kendall_tau: float
    exact_match: bool


@dataclass(frozen=True)
class EvalReport:
    entries: tuple[EvalEntry, ...]

    @property
    def mean_tau(self) -> float:
        return sum(e.kendall_tau for e in self.entries) / len(self.entries)

    @property
    def exact_rate(self) -> float:
        return sum(e.exact_match for e in self.entries) / len(self.entries)

    @property
    def total_inversions(self) -> int:
        return sum(e.inversions for e in self.entries)


def evaluate(pred: ReadingOrder, ref: ReadingOrder, doc_id: str = "") -> EvalEntry:
    """Score one predicted order against its reference."""
    if len(pred) != len(ref):
        raise ValueError(
            f"order length mismatch: predicted {len(pred)}, reference {len(ref)}"
        )
    k = len(pred)
    rank = [0] * k
    for r, idx in enumerate(ref):
        rank[idx] = r
    inversions = count_inversions([rank[idx] for idx in pred])
    pairs = k * (k - 1) // 2
    tau = 1.0 if pairs == 0 else 1.0 - 2.0 * inversions / pairs
    return EvalEntry(
        doc_id=doc_id,
        size=k,
        inversions=inversions,
        kendall_tau=tau,
        exact_match=pred.order == ref.order,
    )
