"""Reading annotation files and writing order/report artifacts.

Two input formats are supported. ``boxes-json`` is the canonical one:

    { "id": str, "width": num, "height": num,
      "tokens": [ { "text": str, "box": [x1, y1, x2, y2] }, ... ] }

``funsd-annotation`` flattens the nested form annotation shipped with the
public form-understanding datasets: every element of each form entry's
"words" list becomes one token, in file order. Those files carry no page
size, so width/height are derived from the maximum box extent.

All user-facing input problems raise InputError; the CLI maps that to
exit code 1.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Iterable

from .geometry import Document, ReadingOrder, TokenBox

__all__ = [
    "InputError",
    "FORMATS",
    "ingest",
    "parse_boxes_json",
    "parse_funsd",
    "write_boxes_json",
    "order_record",
    "load_reference_orders",
    "safe_filename",
]

FORMATS = ("boxes-json", "funsd-annotation")


class InputError(Exception):
    """A problem with user-supplied files or options."""


def _load_json(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InputError(f"{where}: coordinates must be finite")
    return value


def _token_from_entry(entry, index: int, where: str) -> TokenBox:
    if not isinstance(entry, dict):
        raise InputError(f"{where}: token {index} is not an object")
    text = entry.get("text")
    if not isinstance(text, str):
        raise InputError(f"{where}: token {index} is missing a string \"text\"")
    box = entry.get("box")
    if not isinstance(box, list) or len(box) != 4:
        raise InputError(f"{where}: token {index} needs \"box\": [x1, y1, x2, y2]")
    x1, y1, x2, y2 = (_as_number(v, f"{where}: token {index}") for v in box)
    if x1 > x2 or y1 > y2:
        raise InputError(
            f"{where}: token {index} has inverted box corners "
            f"({x1}, {y1}, {x2}, {y2})"
        )
    return TokenBox(x1, y1, x2, y2, text=text, source_index=index)


def parse_boxes_json(path: Path) -> Document:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    doc_id = data.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise InputError(f"{path}: missing non-empty string \"id\"")
    width = _as_number(data.get("width"), f"{path}: width")
    height = _as_number(data.get("height"), f"{path}: height")
    if width <= 0 or height <= 0:
        raise InputError(f"{path}: width and height must be positive")
    tokens_raw = data.get("tokens")
    if not isinstance(tokens_raw, list):
        raise InputError(f"{path}: missing \"tokens\" list")
    if not tokens_raw:
        raise InputError(f"{path}: empty token list")
    tokens = [_token_from_entry(e, i, str(path)) for i, e in enumerate(tokens_raw)]
    try:
        return Document(doc_id, width, height, tuple(tokens))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_funsd(path: Path) -> Document:
    data = _load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("form"), list):
        raise InputError(f"{path}: expected an object with a top-level \"form\" list")
    tokens: list[TokenBox] = []
    for entry in data["form"]:
        if not isinstance(entry, dict):
            raise InputError(f"{path}: form entries must be objects")
        words = entry.get("words", [])
        if not isinstance(words, list):
            raise InputError(f"{path}: form entry \"words\" must be a list")
        for word in words:
            tokens.append(_token_from_entry(word, len(tokens), str(path)))
    if not tokens:
        raise InputError(f"{path}: empty token list")
    width = max(1.0, max(t.x2 for t in tokens))
    height = max(1.0, max(t.y2 for t in tokens))
    try:
        return Document(path.stem, width, height, tuple(tokens))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def ingest(path: str | Path, fmt: str = "boxes-json") -> list[Document]:
    """Parse one annotation file into documents (one per file for both
    current formats)."""
    path = Path(path)
    if fmt == "boxes-json":
        return [parse_boxes_json(path)]
    if fmt == "funsd-annotation":
        return [parse_funsd(path)]
    raise InputError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def write_boxes_json(doc: Document, path: str | Path) -> None:
    """Emit the canonical boxes-json form; ingest(write(doc)) == doc."""
    record = {
        "id": doc.id,
        "width": doc.width,
        "height": doc.height,
        "tokens": [
            {"text": t.text, "box": [t.x1, t.y1, t.x2, t.y2]} for t in doc.tokens
        ],
    }
    Path(path).write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")


def order_record(doc: Document, strategy: str, seed: int | None,
                 order: ReadingOrder) -> dict:
    """The order output schema: id, strategy, seed, order, and the token
    objects reordered with their original source_index."""
    tokens = [doc.tokens[i] for i in order]
    return {
        "id": doc.id,
        "strategy": strategy,
        "seed": seed,
        "order": list(order),
        "tokens": [
            {
                "text": t.text,
                "box": [t.x1, t.y1, t.x2, t.y2],
                "source_index": t.source_index,
            }
            for t in tokens
        ],
    }


def _reference_from_obj(obj, where: str, out: dict[str, ReadingOrder]) -> None:
    if not isinstance(obj, dict) or "id" not in obj or "order" not in obj:
        raise InputError(f"{where}: reference entries need \"id\" and \"order\"")
    if not isinstance(obj["order"], list):
        raise InputError(f"{where}: \"order\" must be a list of integers")
    try:
        out[obj["id"]] = ReadingOrder(tuple(obj["order"]))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def load_reference_orders(path: str | Path) -> dict[str, ReadingOrder]:
    """Load reference orders from a JSON file (one order object or a list
    of them) or from a directory of such files; order files written by the
    CLI are accepted directly."""
    path = Path(path)
    files: Iterable[Path]
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise InputError(f"{path}: no .json reference files found")
    else:
        files = [path]
    refs: dict[str, ReadingOrder] = {}
    for file in files:
        data = _load_json(file)
        entries = data if isinstance(data, list) else [data]
        for obj in entries:
            _reference_from_obj(obj, str(file), refs)
    return refs


def safe_filename(doc_id: str) -> str:
    """Flatten a document id into a filesystem-safe stem."""
    return re.sub(r"[^\w.-]+", "_", doc_id) or "document"
