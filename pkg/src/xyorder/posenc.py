"""Dilated-convolution position-encoding numerics, forward pass only.

Text tokens run through a stack of 1D dilated convolutions, the pooled
visual grid through a 2D stack; the encoded grid is flattened row-major
and concatenated after the text branch, so the output length tracks the
input length plus the (fixed) grid size. Dilation spaces the kernel taps
by l positions, widening the receptive field without adding parameters:
a kernel of size k holds k*C_in*C_out weights (k^2*C_in*C_out in 2D)
regardless of l. Zero padding of l*(k-1)/2 per side keeps the resolution,
which is the unique resolution-preserving choice for odd k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FeatureSeq",
    "FeatureGrid",
    "DilatedKernel",
    "EncoderConfig",
    "build_kernels",
    "dilated_conv_1d",
    "dilated_conv_2d",
    "encode",
    "receptive_field",
]


def _as_feature_array(values, ndim: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{what} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must contain only finite values")
    return arr


@dataclass(frozen=True)
class FeatureSeq:
    """A (length, channels) feature sequence for the text branch."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_feature_array(self.values, 2, "sequence"))

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def channels(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FeatureGrid:
    """A (height, width, channels) feature grid for the visual branch."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_feature_array(self.values, 3, "grid"))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class DilatedKernel:
    """Convolution weights with a dilation rate.

    1D weights are (k, C_in, C_out), 2D weights (k, k, C_in, C_out); k must
    be odd so the tap window centers on the output position. ``param_count``
    is independent of the dilation rate.
    """

    weights: np.ndarray
    dilation: int = 1

    def __post_init__(self) -> None:
        arr = np.asarray(self.weights, dtype=np.float64)
        if arr.ndim not in (3, 4):
            raise ValueError("weights must be (k, C_in, C_out) or (k, k, C_in, C_out)")
        if arr.ndim == 4 and arr.shape[0] != arr.shape[1]:
            raise ValueError("2D kernels must be square")
        if arr.shape[0] % 2 == 0:
            raise ValueError("kernel size must be odd")
        if not np.all(np.isfinite(arr)):
            raise ValueError("weights must be finite")
        if self.dilation < 1:
            raise ValueError("dilation rate must be >= 1")
        object.__setattr__(self, "weights", arr)

    @property
    def spatial_ndim(self) -> int:
        return self.weights.ndim - 2

    @property
    def kernel_size(self) -> int:
        return self.weights.shape[0]

    @property
    def in_channels(self) -> int:
        return self.weights.shape[-2]

    @property
    def out_channels(self) -> int:
        return self.weights.shape[-1]

    @property
    def param_count(self) -> int:
        return self.weights.size


def dilated_conv_1d(f: FeatureSeq, ker: DilatedKernel) -> FeatureSeq:
    """out(p) = sum_t f(p - l*t) * w(t) over the centered tap window, with
    zero padding so the output length equals the input length."""
    if ker.spatial_ndim != 1:
        raise ValueError("dilated_conv_1d needs a 1D kernel")
    if ker.in_channels != f.channels:
        raise ValueError(
            f"channel mismatch: sequence has {f.channels}, kernel expects {ker.in_channels}"
        )
    length = f.length
    reach = (ker.kernel_size - 1) // 2
    out = np.zeros((length, ker.out_channels))
    for j in range(ker.kernel_size):
        shift = ker.dilation * (j - reach)
        lo = max(0, shift)
        hi = min(length, length + shift)
        if lo >= hi:
            continue
        out[lo:hi] += f.values[lo - shift:hi - shift] @ ker.weights[j]
    return FeatureSeq(out)


def dilated_conv_2d(f: FeatureGrid, ker: DilatedKernel) -> FeatureGrid:
    """The same contract applied per axis; zero padding preserves H x W."""
    if ker.spatial_ndim != 2:
        raise ValueError("dilated_conv_2d needs a 2D kernel")
    if ker.in_channels != f.channels:
        raise ValueError(
            f"channel mismatch: grid has {f.channels}, kernel expects {ker.in_channels}"
        )
    h, w = f.height, f.width
    reach = (ker.kernel_size - 1) // 2
    out = np.zeros((h, w, ker.out_channels))
    for j1 in range(ker.kernel_size):
        row_shift = ker.dilation * (j1 - reach)
        rlo, rhi = max(0, row_shift), min(h, h + row_shift)
        if rlo >= rhi:
            continue
        for j2 in range(ker.kernel_size):
            col_shift = ker.dilation * (j2 - reach)
            clo, chi = max(0, col_shift), min(w, w + col_shift)
            if clo >= chi:
                continue
            out[rlo:rhi, clo:chi] += (
                f.values[rlo - row_shift:rhi - row_shift,
                         clo - col_shift:chi - col_shift]
                @ ker.weights[j1, j2]
            )
    return FeatureGrid(out)


def _check_stack(stack: tuple[tuple[int, int], ...], what: str) -> None:
    if not stack:
        raise ValueError(f"{what} must be non-empty")
    for k, l in stack:
        if k < 1 or k % 2 == 0:
            raise ValueError(f"{what}: kernel sizes must be odd and >= 1")
        if l < 1:
            raise ValueError(f"{what}: dilation rates must be >= 1")


@dataclass(frozen=True)
class EncoderConfig:
    """Per-branch (kernel size, dilation) stacks and the shared channel
    width. The default stacks two layers per branch, the second dilated."""

    channels: int = 8
    text_stack: tuple[tuple[int, int], ...] = ((3, 1), (3, 2))
    visual_stack: tuple[tuple[int, int], ...] = ((3, 1), (3, 2))
    seed: int = 0

    def __post_init__(self) -> None:
        if self.channels < 1:
            raise ValueError("channels must be >= 1")
        object.__setattr__(self, "text_stack", tuple(tuple(p) for p in self.text_stack))
        object.__setattr__(self, "visual_stack", tuple(tuple(p) for p in self.visual_stack))
        _check_stack(self.text_stack, "text_stack")
        _check_stack(self.visual_stack, "visual_stack")


def build_kernels(cfg: EncoderConfig) -> tuple[list[DilatedKernel], list[DilatedKernel]]:
    """Materialize seeded demo weights (uniform, fan-in scaled) for both
    branches. Tests exercising exact values supply explicit kernels instead."""
    rng = np.random.default_rng(cfg.seed)
    c = cfg.channels

    def uniform(shape: tuple[int, ...], fan_in: int) -> np.ndarray:
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    text = [
        DilatedKernel(uniform((k, c, c), k * c), l)
        for k, l in cfg.text_stack
    ]
    visual = [
        DilatedKernel(uniform((k, k, c, c), k * k * c), l)
        for k, l in cfg.visual_stack
    ]
    return text, visual


def _check_branch(kernels, stack, channels: int, ndim: int, what: str) -> None:
    if len(kernels) != len(stack):
        raise ValueError(f"{what}: expected {len(stack)} kernels, got {len(kernels)}")
    for ker, (k, l) in zip(kernels, stack):
        if ker.spatial_ndim != ndim:
            raise ValueError(f"{what}: kernel dimensionality mismatch")
        if ker.kernel_size != k or ker.dilation != l:
            raise ValueError(f"{what}: kernel does not match configured (size, dilation)")
        if ker.in_channels != channels or ker.out_channels != channels:
            raise ValueError(f"{what}: kernels must map {channels} -> {channels} channels")


def encode(
    text: FeatureSeq,
    grid: FeatureGrid,
    cfg: EncoderConfig,
    text_kernels: list[DilatedKernel] | None = None,
    visual_kernels: list[DilatedKernel] | None = None,
) -> FeatureSeq:
    """Run both branches and concatenate: text output first, then the
    encoded grid flattened row-major. Output shape (L + H*W, channels)."""
    if text.channels != cfg.channels or grid.channels != cfg.channels:
        raise ValueError(
            f"channel mismatch: config expects {cfg.channels}, "
            f"got text {text.channels} and grid {grid.channels}"
        )
    if text_kernels is None or visual_kernels is None:
        built_text, built_visual = build_kernels(cfg)
        text_kernels = built_text if text_kernels is None else text_kernels
        visual_kernels = built_visual if visual_kernels is None else visual_kernels
    _check_branch(text_kernels, cfg.text_stack, cfg.channels, 1, "text branch")
    _check_branch(visual_kernels, cfg.visual_stack, cfg.channels, 2, "visual branch")

    seq = text
    for ker in text_kernels:
        seq = dilated_conv_1d(seq, ker)
    vis = grid
    for ker in visual_kernels:
        vis = dilated_conv_2d(vis, ker)
    flat = vis.values.reshape(vis.height * vis.width, vis.channels)
    return FeatureSeq(np.concatenate([seq.values, flat], axis=0))


def receptive_field(stack: tuple[tuple[int, int], ...]) -> int:
    """Input span influencing one output position: 1 + sum (k_i - 1) * l_i."""
    _check_stack(tuple(stack), "stack")
    return 1 + sum((k - 1) * l for k, l in stack)
