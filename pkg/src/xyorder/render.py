"""Profile figures: step plot of coverage with valley bands shaded.

Output is SVG and byte-stable for a given input: the SVG hash salt is
pinned to the document id and the creation date is stripped, which removes
matplotlib's only sources of run-to-run variation.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .geometry import Document
from .projection import Axis, profile, valleys

__all__ = ["render_profile"]

VALLEY_GID = "valley-band"


def render_profile(doc: Document, axis: Axis, out_path: str | Path) -> Path:
    """Render the document's projection profile on one axis to an SVG file."""
    out_path = Path(out_path)
    prof = profile(doc.tokens, axis)
    gaps = valleys(prof)
    coord = "y" if axis is Axis.HORIZONTAL else "x"

    fig, ax = plt.subplots(figsize=(8.0, 3.0))
    for i, gap in enumerate(gaps):
        band = ax.axvspan(gap.start, gap.end, color="0.88", zorder=0)
        band.set_gid(f"{VALLEY_GID}-{i}")
    segments = prof.steps()
    if segments:
        xs = [seg[0] for seg in segments] + [segments[-1][1]]
        ys = [seg[2] for seg in segments] + [segments[-1][2]]
        ax.step(xs, ys, where="post", color="tab:blue", linewidth=1.5)
    else:
        # all boxes project to one point
        ax.plot([prof.lo], [prof.coverage(prof.lo)], "o", color="tab:blue")
    ax.set_xlabel(f"page {coord} coordinate")
    ax.set_ylabel("boxes covered")
    ax.set_title(f"{doc.id}: {axis.value} projection profile")
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    try:
        with matplotlib.rc_context({"svg.hashsalt": f"profile:{doc.id}"}):
            fig.savefig(out_path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return out_path
