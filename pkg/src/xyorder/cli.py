"""Batch tool: ingest annotation files, order their tokens under a chosen
strategy, and emit ordered documents, evaluation reports, profile figures,
tree dumps, or latency measurements.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.

Documents are independent; with --jobs > 1 they are processed in a thread
pool. Augmentation seeds are derived per document from the base seed and
the document id (never from scheduling), so outputs are byte-identical at
any parallelism level.

Usage sketch:

    xyorder --input page.json --order xycut --output out/
    xyorder --input page.json --order aug-xycut --seed 7 --output out/
    xyorder --input page.json --order xycut --ref truth/ --output out/
    xyorder --input page.json --order xycut --bench 100 --output out/
    xyorder --input page.json --profile-svg out/ --axis h
    xyorder encode --input features.json --output encoded.json

Reports land next to the order files: evaluation.csv when --ref is given,
bench.csv for --bench, both with one row per document plus an aggregate.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import secrets
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .augment import AugmentParams, augmented_xy_cut
from .evaluate import EvalEntry, EvalReport, evaluate
from .geometry import Document, ReadingOrder
from .heuristics import order_aug_yx, order_sum, order_xy, order_yx
from .io import (
    FORMATS,
    InputError,
    ingest,
    load_reference_orders,
    order_record,
    safe_filename,
)
from .projection import Axis
from .xycut import XYTree, xy_cut

__all__ = [
    "STRATEGIES",
    "OrderStrategy",
    "OrderResult",
    "BenchResult",
    "derive_doc_seed",
    "run_order",
    "bench",
    "main",
]

STRATEGIES = ("default", "yx", "xy", "sum", "xycut", "aug-xycut", "aug-yx")
AUG_STRATEGIES = ("aug-xycut", "aug-yx")


@dataclass(frozen=True)
class OrderStrategy:
    """One of the supported ordering strategies, with augmentation
    parameters where applicable."""

    name: str
    params: AugmentParams | None = None

    def __post_init__(self) -> None:
        if self.name not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.name!r}; expected one of {STRATEGIES}")
        if self.name in AUG_STRATEGIES and self.params is None:
            raise ValueError(f"strategy {self.name!r} requires augmentation parameters")

    @property
    def is_augmented(self) -> bool:
        return self.name in AUG_STRATEGIES

    @property
    def produces_tree(self) -> bool:
        return self.name in ("xycut", "aug-xycut")


@dataclass(frozen=True)
class OrderResult:
    doc: Document
    strategy: str
    seed: int | None
    order: ReadingOrder
    tree: XYTree | None = None


@dataclass(frozen=True)
class BenchResult:
    doc_id: str
    size: int
    repetitions: int
    mean_seconds: float
    stddev_seconds: float


def derive_doc_seed(base_seed: int, doc_id: str) -> int:
    """Per-document seed, stable across platforms and scheduling order."""
    digest = hashlib.blake2b(
        f"{base_seed}:{doc_id}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def _order_one(doc: Document, strategy: OrderStrategy) -> OrderResult:
    name = strategy.name
    tree = None
    base_seed = strategy.params.seed if strategy.params is not None else None
    if name == "default":
        order = ReadingOrder(tuple(t.source_index for t in doc.tokens))
    elif name == "yx":
        order = order_yx(doc)
    elif name == "xy":
        order = order_xy(doc)
    elif name == "sum":
        order = order_sum(doc)
    elif name == "xycut":
        order, tree = xy_cut(doc)
    else:
        assert strategy.params is not None
        params = AugmentParams(
            lambda_x=strategy.params.lambda_x,
            lambda_y=strategy.params.lambda_y,
            theta=strategy.params.theta,
            seed=derive_doc_seed(strategy.params.seed, doc.id),
            distribution=strategy.params.distribution,
        )
        if name == "aug-xycut":
            order, tree = augmented_xy_cut(doc, params)
        else:
            order = order_aug_yx(doc, params)
    return OrderResult(
        doc=doc,
        strategy=name,
        seed=base_seed if strategy.is_augmented else None,
        order=order,
        tree=tree,
    )


def run_order(
    docs: Sequence[Document], strategy: OrderStrategy, jobs: int = 1
) -> list[OrderResult]:
    """Order every document; results come back in input order regardless of
    the degree of parallelism."""
    if jobs <= 1 or len(docs) <= 1:
        return [_order_one(doc, strategy) for doc in docs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda d: _order_one(d, strategy), docs))


def bench(
    docs: Sequence[Document], strategy: OrderStrategy, repetitions: int
) -> list[BenchResult]:
    """Wall-clock ordering latency per document, excluding all file I/O."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    results = []
    for doc in docs:
        samples = []
        for _ in range(repetitions):
            start = time.perf_counter()
            _order_one(doc, strategy)
            samples.append(time.perf_counter() - start)
        results.append(BenchResult(
            doc_id=doc.id,
            size=len(doc.tokens),
            repetitions=repetitions,
            mean_seconds=statistics.fmean(samples),
            stddev_seconds=statistics.stdev(samples) if len(samples) > 1 else 0.0,
        ))
    return results


# ---------------------------------------------------------------------------
# command-line front end


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through InputError so
    # usage problems land on exit code 1 instead.
    def error(self, message):
        raise InputError(message)


def _build_order_parser() -> _Parser:
    parser = _Parser(
        prog="xyorder",
        description="Compute reading orders for OCR token boxes.",
        epilog="Run 'xyorder encode --help' for the position-encoder subcommand.",
    )
    parser.add_argument("--input", nargs="+", required=True, metavar="PATH",
                        help="annotation file(s) to process")
    parser.add_argument("--format", choices=FORMATS, default="boxes-json")
    parser.add_argument("--order", choices=STRATEGIES, default="xycut",
                        help="ordering strategy (default: xycut)")
    parser.add_argument("--lambda-x", type=float, default=0.5)
    parser.add_argument("--lambda-y", type=float, default=0.5)
    parser.add_argument("--theta", type=float, default=5.0)
    parser.add_argument("--seed", type=int, default=None,
                        help="base seed for aug strategies (generated and reported if omitted)")
    parser.add_argument("--ref", metavar="PATH",
                        help="reference orders (file or directory); enables evaluation")
    parser.add_argument("--dump-tree", metavar="PATH",
                        help="write cut trees as JSON (xycut strategies only)")
    parser.add_argument("--profile-svg", metavar="PATH",
                        help="render projection profiles to SVG")
    parser.add_argument("--axis", choices=("h", "v"), default="h",
                        help="profile axis for --profile-svg (h: over y, v: over x)")
    parser.add_argument("--bench", type=int, metavar="N",
                        help="benchmark mode: time N ordering repetitions per document")
    parser.add_argument("--output", metavar="PATH",
                        help="output directory (or file, for a single document)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="process documents with this many threads")
    return parser


def _build_encode_parser() -> _Parser:
    parser = _Parser(
        prog="xyorder encode",
        description="Run the dilated position encoder on feature arrays.",
    )
    parser.add_argument("--input", required=True, metavar="PATH",
                        help='JSON with "text" (LxC) and "visual" (HxWxC) arrays')
    parser.add_argument("--output", metavar="PATH",
                        help="output JSON path (default: stdout)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the demo weight scheme")
    parser.add_argument("--text-stack", default="3:1,3:2", metavar="K:L,...",
                        help="text branch layers as kernel:dilation pairs")
    parser.add_argument("--visual-stack", default="3:1,3:2", metavar="K:L,...")
    return parser


def _resolve_outputs(base: str, docs: Sequence[Document], suffix: str) -> list[Path]:
    """One output path per document. A path that already names a file of the
    right type (by extension) is used directly for a single document;
    otherwise the path is treated as a directory."""
    base_path = Path(base)
    tail = suffix[suffix.rfind("."):]
    try:
        if len(docs) == 1 and base_path.suffix == tail and not base_path.is_dir():
            base_path.parent.mkdir(parents=True, exist_ok=True)
            return [base_path]
        base_path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {base_path}: {exc.strerror or exc}") from exc
    return [base_path / f"{safe_filename(doc.id)}{suffix}" for doc in docs]


def _report_dir(base: str) -> Path:
    base_path = Path(base)
    if base_path.suffix and not base_path.is_dir():
        base_path = base_path.parent
    try:
        base_path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {base_path}: {exc.strerror or exc}") from exc
    return base_path


def _write_json(path: Path, payload: dict) -> None:
    try:
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _write_eval_csv(path: Path, report: EvalReport) -> None:
    try:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["doc_id", "size", "inversions", "kendall_tau", "exact_match"])
            for e in report.entries:
                writer.writerow([e.doc_id, e.size, e.inversions,
                                 f"{e.kendall_tau:.6f}", int(e.exact_match)])
            writer.writerow(["AGGREGATE", sum(e.size for e in report.entries),
                             report.total_inversions, f"{report.mean_tau:.6f}",
                             f"{report.exact_rate:.6f}"])
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _write_bench_csv(path: Path, results: Sequence[BenchResult]) -> None:
    try:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["doc_id", "size", "repetitions", "mean_ms", "stddev_ms"])
            for r in results:
                writer.writerow([r.doc_id, r.size, r.repetitions,
                                 f"{r.mean_seconds * 1e3:.6f}",
                                 f"{r.stddev_seconds * 1e3:.6f}"])
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _ingest_all(paths: Sequence[str], fmt: str) -> list[Document]:
    docs: list[Document] = []
    seen: set[str] = set()
    for path in paths:
        for doc in ingest(path, fmt):
            if doc.id in seen:
                raise InputError(f"duplicate document id {doc.id!r} (from {path})")
            seen.add(doc.id)
            docs.append(doc)
    return docs


def _run_order_command(argv: Sequence[str]) -> int:
    args = _build_order_parser().parse_args(argv)
    if args.jobs < 1:
        raise InputError("--jobs must be >= 1")
    if args.bench is not None and args.bench < 1:
        raise InputError("--bench must be >= 1")
    if args.bench is not None and (args.ref or args.dump_tree or args.profile_svg):
        raise InputError("--bench cannot be combined with --ref, --dump-tree, or --profile-svg")

    docs = _ingest_all(args.input, args.format)

    params = None
    if args.order in AUG_STRATEGIES:
        seed = args.seed
        if seed is None:
            seed = secrets.randbits(63)
            print(f"generated seed: {seed}", file=sys.stderr)
        try:
            params = AugmentParams(lambda_x=args.lambda_x, lambda_y=args.lambda_y,
                                   theta=args.theta, seed=seed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    strategy = OrderStrategy(args.order, params)

    if args.dump_tree and not strategy.produces_tree:
        raise InputError("--dump-tree requires --order xycut or aug-xycut")

    if args.profile_svg:
        from .render import render_profile  # defer the matplotlib import

        axis = Axis.HORIZONTAL if args.axis == "h" else Axis.VERTICAL
        svg_paths = _resolve_outputs(args.profile_svg, docs, f".{args.axis}.svg")
        for doc, path in zip(docs, svg_paths):
            try:
                render_profile(doc, axis, path)
            except OSError as exc:
                raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc

    if args.bench is not None:
        results = bench(docs, strategy, args.bench)
        for r in results:
            print(f"{r.doc_id}: {r.size} boxes, {strategy.name}: "
                  f"mean {r.mean_seconds * 1e3:.3f} ms, "
                  f"stddev {r.stddev_seconds * 1e3:.3f} ms over {r.repetitions} reps")
        if args.output:
            _write_bench_csv(_report_dir(args.output) / "bench.csv", results)
        return 0

    results = run_order(docs, strategy, jobs=args.jobs)

    if args.output:
        order_paths = _resolve_outputs(args.output, docs, ".json")
        for result, path in zip(results, order_paths):
            _write_json(path, order_record(result.doc, result.strategy,
                                           result.seed, result.order))
    else:
        for result in results:
            record = order_record(result.doc, result.strategy, result.seed, result.order)
            print(json.dumps(record, separators=(",", ":")))

    if args.dump_tree:
        tree_paths = _resolve_outputs(args.dump_tree, docs, ".tree.json")
        for result, path in zip(results, tree_paths):
            assert result.tree is not None
            _write_json(path, result.tree.to_dict())

    if args.ref:
        refs = load_reference_orders(args.ref)
        entries: list[EvalEntry] = []
        for result in results:
            if result.doc.id not in refs:
                raise InputError(f"no reference order for document {result.doc.id!r}")
            try:
                entries.append(evaluate(result.order, refs[result.doc.id], result.doc.id))
            except ValueError as exc:
                raise InputError(f"{result.doc.id}: {exc}") from exc
        report = EvalReport(tuple(entries))
        for e in report.entries:
            print(f"{e.doc_id}: tau_a={e.kendall_tau:.4f} "
                  f"inversions={e.inversions} exact={'yes' if e.exact_match else 'no'}")
        print(f"aggregate: mean_tau={report.mean_tau:.4f} "
              f"exact_rate={report.exact_rate:.4f} over {len(report.entries)} document(s)")
        if args.output:
            _write_eval_csv(_report_dir(args.output) / "evaluation.csv", report)

    return 0


def _parse_stack(text: str, what: str) -> tuple[tuple[int, int], ...]:
    layers = []
    for part in text.split(","):
        pieces = part.strip().split(":")
        try:
            k, l = (int(p) for p in pieces)
        except ValueError as exc:
            raise InputError(f"{what}: expected kernel:dilation pairs, got {part!r}") from exc
        layers.append((k, l))
    return tuple(layers)


def _run_encode_command(argv: Sequence[str]) -> int:
    # Imported lazily: ordering paths should not pay for numpy.
    import numpy as np

    from .posenc import EncoderConfig, FeatureGrid, FeatureSeq, encode

    args = _build_encode_parser().parse_args(argv)
    path = Path(args.input)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict) or "text" not in data or "visual" not in data:
        raise InputError(f'{path}: expected an object with "text" and "visual" arrays')
    try:
        text = FeatureSeq(np.asarray(data["text"], dtype=np.float64))
        grid = FeatureGrid(np.asarray(data["visual"], dtype=np.float64))
        cfg = EncoderConfig(
            channels=text.channels,
            text_stack=_parse_stack(args.text_stack, "--text-stack"),
            visual_stack=_parse_stack(args.visual_stack, "--visual-stack"),
            seed=args.seed,
        )
        encoded = encode(text, grid, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = {
        "text_length": text.length,
        "grid": [grid.height, grid.width],
        "channels": encoded.channels,
        "values": encoded.values.tolist(),
    }
    if args.output:
        _write_json(Path(args.output), payload)
    else:
        print(json.dumps(payload))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "encode":
            return _run_encode_command(argv[1:])
        return _run_order_command(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - contract: nonzero on any violation
        print(f"internal invariant violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
