"""Recursive valley-division ordering and its recursion-trace tree.

The cut alternates axes: project the current cluster, divide at every
valley, and recurse into each piece with the other axis. A division along
one axis leaves each piece with a gap-free profile on that axis, so the
only place a retry can succeed is the very first level; the retry is kept
general anyway because it is cheap and makes termination obvious. Clusters
no valley can split on either axis are closed out by the lexicographic
fallback, their members becoming consecutive leaves. The final reading
order is the left-to-right leaf traversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .geometry import Document, ReadingOrder, TokenBox
from .projection import Axis, box_interval

__all__ = ["NodeKind", "XYNode", "XYTree", "divide", "fallback", "xy_cut", "flatten"]


class NodeKind(Enum):
    ROOT = "root"
    DIVISION = "division"
    LEAF = "leaf"


@dataclass(frozen=True)
class XYNode:
    """One node of the recursion trace.

    ``indices`` is the sorted set of token source indices the node covers;
    children are stored in reading precedence. Leaves carry exactly one
    index. ``axis`` records the direction of the division that produced the
    children (None for a leaf or a fallback-ordered group).
    """

    kind: NodeKind
    indices: tuple[int, ...]
    axis: Axis | None = None
    children: tuple[XYNode, ...] = ()

    @property
    def leaf_index(self) -> int:
        if self.kind is not NodeKind.LEAF:
            raise ValueError("leaf_index is only defined for leaf nodes")
        return self.indices[0]

    def to_dict(self) -> dict:
        """JSON-friendly view (used by the CLI tree dump)."""
        return {
            "kind": self.kind.value,
            "axis": self.axis.value if self.axis is not None else None,
            "indices": list(self.indices),
            "children": [child.to_dict() for child in self.children],
        }


@dataclass(frozen=True)
class XYTree:
    root: XYNode

    def to_dict(self) -> dict:
        return self.root.to_dict()


def divide(boxes: Sequence[TokenBox], axis: Axis) -> list[list[TokenBox]]:
    """Partition boxes into the maximal runs of positive coverage on one axis.

    Clusters come back in reading precedence (ascending y for HORIZONTAL,
    ascending x for VERTICAL); each keeps its boxes in input order. A single
    cluster means the profile has no valley.
    """
    if not boxes:
        raise ValueError("empty box sequence")
    n = len(boxes)
    intervals = [box_interval(b, axis) for b in boxes]
    by_start = sorted(range(n), key=intervals.__getitem__)
    cluster_of = [0] * n
    cluster = -1
    run_end = None
    for i in by_start:
        start, end = intervals[i]
        if run_end is None or start > run_end:
            cluster += 1
            run_end = end
        elif end > run_end:
            run_end = end
        cluster_of[i] = cluster
    clusters: list[list[TokenBox]] = [[] for _ in range(cluster + 1)]
    for box, c in zip(boxes, cluster_of):
        clusters[c].append(box)
    return clusters


def fallback(boxes: Sequence[TokenBox]) -> ReadingOrder:
    """Order an indivisible cluster: ascending (y1, x1), stable by
    source_index. Returns positions local to the given sequence."""
    ranked = sorted(
        range(len(boxes)),
        key=lambda i: (boxes[i].y1, boxes[i].x1, boxes[i].source_index),
    )
    return ReadingOrder(tuple(ranked))


def _leaf(box: TokenBox) -> XYNode:
    return XYNode(NodeKind.LEAF, (box.source_index,))


def _subdivide(boxes: list[TokenBox], axis: Axis) -> tuple[Axis | None, list[XYNode]]:
    """Children for a multi-box cluster.

    Returns (axis actually used, child nodes). A None axis means neither
    direction had a valley: the children are the cluster's members as
    leaves in fallback order, to be spliced into the parent.
    """
    clusters = divide(boxes, axis)
    used = axis
    if len(clusters) == 1:
        used = axis.other
        clusters = divide(boxes, used)
        if len(clusters) == 1:
            rank = fallback(boxes)
            return None, [_leaf(boxes[i]) for i in rank]
    children: list[XYNode] = []
    for cluster in clusters:
        if len(cluster) == 1:
            children.append(_leaf(cluster[0]))
            continue
        sub_used, sub_children = _subdivide(cluster, used.other)
        if sub_used is None:
            children.extend(sub_children)
        else:
            children.append(XYNode(
                NodeKind.DIVISION,
                tuple(sorted(b.source_index for b in cluster)),
                sub_used,
                tuple(sub_children),
            ))
    return used, children


def xy_cut(doc: Document) -> tuple[ReadingOrder, XYTree]:
    """Deterministic recursive cut of a whole document.

    The first projection is HORIZONTAL (split into top-to-bottom bands);
    if it has no valley the first level retries VERTICAL before giving up.
    """
    if not doc.tokens:
        raise ValueError("empty document")
    if len(doc.tokens) == 1:
        tree = XYTree(_leaf(doc.tokens[0]))
    else:
        used, children = _subdivide(list(doc.tokens), Axis.HORIZONTAL)
        root = XYNode(
            NodeKind.ROOT,
            tuple(sorted(t.source_index for t in doc.tokens)),
            used,
            tuple(children),
        )
        tree = XYTree(root)
    return flatten(tree), tree


def flatten(tree: XYTree) -> ReadingOrder:
    """Depth-first leaf collection in stored child order."""
    leaves: list[int] = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.kind is NodeKind.LEAF:
            leaves.append(node.leaf_index)
        else:
            stack.extend(reversed(node.children))
    seen = [False] * len(leaves)
    for idx in leaves:
        if idx >= len(leaves) or seen[idx]:
            raise ValueError("malformed tree: duplicate or missing leaf indices")
        seen[idx] = True
    return ReadingOrder(tuple(leaves))
