"""Batch command-line interface.

Exit codes: 0 success, 1 usage or parameter error, 2 I/O or file format
error, 3 model/config/evaluation mismatch. Outputs are byte-reproducible
for identical inputs; timing figures from `bench` are the one exception.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .classify import METRICS, load_model, predict, serialize_model
from .descriptor import grid_descriptor
from .detect import nms, scan_detect
from .errors import (
    BoundsError,
    CorruptMapError,
    EvaluationError,
    ManifestError,
    ModelFormatError,
    ModelMismatchError,
    ParameterError,
    PgmFormatError,
    TrainingError,
)
from .evaluate import benchmark_fps, evaluate, load_manifest_file, train_model
from .lbp import LbpParams, lbp_map, lbp_map_to_image
from .image import load_pgm_file, save_pgm_file
from .mapping import MAPPING_MODES

THREAD_CAP_ENV = "LBPX_THREADS"


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse's default of 2 is reserved for I/O errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_pair(text: str, what: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ParameterError(f"{what} must be two integers separated by 'x', got {text!r}")
    try:
        first, second = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParameterError(f"{what} must contain two integers, got {text!r}") from None
    if first < 1 or second < 1:
        raise ParameterError(f"{what} components must be positive, got {text!r}")
    return first, second


def _add_params_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--neighbors", type=int, default=8, help="sampling points P (default 8)")
    p.add_argument("--radius", type=float, default=1.0, help="circle radius R (default 1.0)")
    p.add_argument(
        "--sampling",
        choices=("square3x3", "circular"),
        default="square3x3",
        help="neighborhood sampling mode (default square3x3)",
    )
    p.add_argument(
        "--mapping",
        choices=MAPPING_MODES,
        default="u2",
        help="code-to-label mapping (default u2)",
    )


def _add_grid_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", default="3x3", help="descriptor grid ROWSxCOLS (default 3x3)")


def _add_metric_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--metric", choices=METRICS, default="chi2", help="distance (default chi2)")


def _params_from_args(args) -> LbpParams:
    return LbpParams(
        neighbors=args.neighbors,
        radius=args.radius,
        sampling=args.sampling,
        mapping=args.mapping,
    )


def _grid_from_args(args) -> tuple[int, int]:
    return _parse_pair(args.grid, "grid")


def _emit_text(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lbpx", description="Local binary pattern texture engine")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("map", help="compute an LBP label map and write it as PGM")
    p.add_argument("--input", required=True, help="input PGM image")
    p.add_argument("--output", required=True, help="output PGM label map")
    _add_params_flags(p)

    p = sub.add_parser("describe", help="compute a grid histogram descriptor as JSON")
    p.add_argument("--input", required=True, help="input PGM image")
    p.add_argument("--output", help="output JSON path (default: stdout)")
    _add_params_flags(p)
    _add_grid_flag(p)

    p = sub.add_parser("train", help="build per-class templates from a manifest's train split")
    p.add_argument("--manifest", required=True, help="CSV manifest (path,label,split)")
    p.add_argument("--output", help="output model JSON path (default: stdout)")
    _add_params_flags(p)
    _add_grid_flag(p)

    p = sub.add_parser("classify", help="classify one image against a trained model")
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--input", required=True, help="input PGM image")
    _add_metric_flag(p)

    p = sub.add_parser("evaluate", help="train/test evaluation over a manifest")
    p.add_argument("--manifest", required=True, help="CSV manifest (path,label,split)")
    p.add_argument("--output", help="output report JSON path (default: stdout)")
    _add_params_flags(p)
    _add_grid_flag(p)
    _add_metric_flag(p)

    p = sub.add_parser("detect", help="sliding-window detection against a one-class model")
    p.add_argument("--scene", required=True, help="scene PGM image")
    p.add_argument("--model", required=True, help="single-class model JSON file")
    p.add_argument("--window", required=True, help="window WIDTHxHEIGHT, e.g. 32x32")
    p.add_argument("--stride", type=int, default=1, help="scan stride in pixels (default 1)")
    p.add_argument(
        "--threshold",
        type=float,
        default=float("inf"),
        help="maximum chi-square distance to report (default: no limit)",
    )
    p.add_argument(
        "--nms-iou",
        type=float,
        default=0.3,
        help="suppress boxes with IoU above this against a better hit (default 0.3)",
    )
    p.add_argument("--output", help="output JSON-lines path (default: stdout)")

    p = sub.add_parser("bench", help="throughput benchmark of the map operator")
    p.add_argument("--input", required=True, help="input PGM image")
    p.add_argument("--iterations", type=int, default=100, help="timed iterations (default 100)")
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help=f"worker threads, capped by ${THREAD_CAP_ENV} (default 1)",
    )
    _add_params_flags(p)

    return parser


def _cmd_map(args) -> int:
    params = _params_from_args(args)
    lmap = lbp_map(load_pgm_file(args.input), params)
    save_pgm_file(lbp_map_to_image(lmap), args.output)
    return 0


def _cmd_describe(args) -> int:
    params = _params_from_args(args)
    rows, cols = _grid_from_args(args)
    desc = grid_descriptor(lbp_map(load_pgm_file(args.input), params), rows, cols)
    _emit_text(json.dumps(desc.to_json_dict(), indent=2) + "\n", args.output)
    return 0


def _cmd_train(args) -> int:
    params = _params_from_args(args)
    rows, cols = _grid_from_args(args)
    manifest = load_manifest_file(args.manifest)
    model = train_model(manifest, params, rows, cols, base_dir=Path(args.manifest).parent)
    _emit_text(serialize_model(model), args.output)
    return 0


def _cmd_classify(args) -> int:
    model = load_model(args.model)
    desc = grid_descriptor(
        lbp_map(load_pgm_file(args.input), model.params), model.grid_rows, model.grid_cols
    )
    label, scores = predict(model, desc, args.metric)
    lines = [label]
    for class_label, score in zip(model.class_labels, scores):
        lines.append(f"{class_label}\t{score:.6f}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_evaluate(args) -> int:
    params = _params_from_args(args)
    rows, cols = _grid_from_args(args)
    manifest = load_manifest_file(args.manifest)
    report = evaluate(
        manifest, params, rows, cols, metric=args.metric, base_dir=Path(args.manifest).parent
    )
    _emit_text(json.dumps(report.to_json_dict(), indent=2) + "\n", args.output)
    return 0


def _cmd_detect(args) -> int:
    scene = load_pgm_file(args.scene)
    model = load_model(args.model)
    window = _parse_pair(args.window, "window")
    hits = scan_detect(scene, model, window, stride=args.stride, threshold=args.threshold)
    hits = nms(hits, args.nms_iou)
    lines = [
        f'{{"x":{d.x},"y":{d.y},"w":{d.width},"h":{d.height},"score":{d.score:.6f}}}'
        for d in hits
    ]
    _emit_text("".join(line + "\n" for line in lines), args.output)
    return 0


def _cmd_bench(args) -> int:
    params = _params_from_args(args)
    img = load_pgm_file(args.input)
    threads = args.threads
    cap = int(os.environ.get(THREAD_CAP_ENV, "0") or "0")
    if cap > 0:
        threads = min(threads, cap)
    if threads < 1 or args.iterations < 1:
        raise ParameterError("iterations and threads must be at least 1")
    result = benchmark_fps(img, params, iterations=args.iterations, threads=threads)
    config = json.dumps(params.to_json_dict())
    sys.stdout.write(
        "{\n"
        f'  "fps": {result.fps:.6f},\n'
        f'  "ms_per_frame": {result.ms_per_frame:.6f},\n'
        f'  "iterations": {result.iterations},\n'
        f'  "threads": {result.threads},\n'
        f'  "image": [{result.image_width}, {result.image_height}],\n'
        f'  "config": {config}\n'
        "}\n"
    )
    return 0


_COMMANDS = {
    "map": _cmd_map,
    "describe": _cmd_describe,
    "train": _cmd_train,
    "classify": _cmd_classify,
    "evaluate": _cmd_evaluate,
    "detect": _cmd_detect,
    "bench": _cmd_bench,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, BoundsError, CorruptMapError, TrainingError) as exc:
        print(f"lbpx: {exc}", file=sys.stderr)
        return 1
    except (PgmFormatError, ManifestError, ModelFormatError) as exc:
        print(f"lbpx: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        name = getattr(exc, "filename", None)
        detail = f"{name}: {exc.strerror}" if name else str(exc)
        print(f"lbpx: {detail}", file=sys.stderr)
        return 2
    except (ModelMismatchError, EvaluationError) as exc:
        print(f"lbpx: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
