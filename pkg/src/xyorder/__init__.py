"""Reading-order engine for OCR token boxes.

Orders the tokens of visually rich documents by recursively dividing the
page at projection-profile valleys, optionally after randomized box
shifts that sample diverse proper orders from noisy geometry. Ships the
classic top-left sorting baselines, a rank-correlation evaluator, a
latency benchmark, profile figure rendering, and the forward numerics of
a dilated-convolution position encoder.
"""

from .augment import AugmentParams, ShiftSample, augmented_xy_cut, sample_shifts, shift_boxes
from .evaluate import EvalEntry, EvalReport, evaluate
from .geometry import Document, ReadingOrder, TokenBox, apply_order, extent
from .heuristics import order_aug_yx, order_sum, order_xy, order_yx
from .io import InputError, ingest, write_boxes_json
from .projection import Axis, ProjectionProfile, Valley, profile, valleys
from .xycut import NodeKind, XYNode, XYTree, divide, fallback, flatten, xy_cut

__version__ = "0.1.0"

__all__ = [
    "AugmentParams",
    "Axis",
    "Document",
    "EvalEntry",
    "EvalReport",
    "InputError",
    "NodeKind",
    "ProjectionProfile",
    "ReadingOrder",
    "ShiftSample",
    "TokenBox",
    "Valley",
    "XYNode",
    "XYTree",
    "apply_order",
    "augmented_xy_cut",
    "divide",
    "evaluate",
    "extent",
    "fallback",
    "flatten",
    "ingest",
    "order_aug_yx",
    "order_sum",
    "order_xy",
    "order_yx",
    "profile",
    "sample_shifts",
    "shift_boxes",
    "valleys",
    "write_boxes_json",
    "xy_cut",
]
