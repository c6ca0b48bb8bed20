import random

import pytest

from docgen import random_document
from xyorder.geometry import Document, TokenBox
from xyorder.projection import Axis
from xyorder.render import VALLEY_GID, render_profile


def stacked_doc():
    return Document("stacked", 100, 100, (
        TokenBox(0, 0, 10, 10, "a", 0),
        TokenBox(0, 20, 10, 30, "b", 1),
    ))


def test_one_valley_band_for_stacked_boxes(tmp_path):
    out = render_profile(stacked_doc(), Axis.HORIZONTAL, tmp_path / "p.svg")
    svg = out.read_text()
    assert svg.count(f'"{VALLEY_GID}-') == 1
    assert "<svg" in svg


def test_no_valley_bands_for_single_box(tmp_path):
    doc = Document("one", 100, 100, (TokenBox(0, 0, 10, 10, "a", 0),))
    svg = render_profile(doc, Axis.HORIZONTAL, tmp_path / "p.svg").read_text()
    assert VALLEY_GID not in svg


def test_vertical_axis(tmp_path):
    doc = Document("cols", 100, 100, (
        TokenBox(0, 0, 10, 10, "a", 0),
        TokenBox(50, 0, 60, 10, "b", 1),
        TokenBox(80, 0, 90, 10, "c", 2),
    ))
    svg = render_profile(doc, Axis.VERTICAL, tmp_path / "p.svg").read_text()
    assert svg.count(f'"{VALLEY_GID}-') == 2


def test_byte_stable_across_renders(tmp_path):
    rng = random.Random(111)
    doc = random_document(rng, k=25, doc_id="stable")
    a = render_profile(doc, Axis.HORIZONTAL, tmp_path / "a.svg").read_bytes()
    b = render_profile(doc, Axis.HORIZONTAL, tmp_path / "b.svg").read_bytes()
    assert a == b


def test_degenerate_point_profile(tmp_path):
    doc = Document("point", 100, 100, (TokenBox(5, 5, 9, 5, "a", 0),))
    out = render_profile(doc, Axis.HORIZONTAL, tmp_path / "p.svg")
    assert out.exists() and out.stat().st_size > 0


def test_unwritable_path_raises(tmp_path):
    doc = stacked_doc()
    with pytest.raises(OSError):
        render_profile(doc, Axis.HORIZONTAL, tmp_path / "missing" / "p.svg")
