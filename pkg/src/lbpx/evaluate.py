"""Dataset manifests, train/test evaluation, and throughput benchmarking."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import Model, build_templates, predict
from .descriptor import grid_descriptor
from .errors import EvaluationError, ManifestError, ParameterError
from .image import GrayImage, load_pgm_file
from .lbp import LbpParams, lbp_map

MANIFEST_HEADER = ("path", "label", "split")
SPLITS = ("train", "test")


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: str
    split: str


@dataclass(frozen=True)
class Manifest:
    """Ordered dataset listing; the train/test split lives in the file."""

    entries: tuple[ManifestEntry, ...]

    def split(self, which: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == which]


def load_manifest(text) -> Manifest:
    """Parse CSV with header path,label,split; data rows are numbered from 1."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ManifestError("empty manifest") from None
    if tuple(field.strip() for field in header) != MANIFEST_HEADER:
        raise ManifestError(
            f"manifest header must be {','.join(MANIFEST_HEADER)!r}, got {','.join(header)!r}"
        )
    entries = []
    seen: set[str] = set()
    row_number = 0
    for row in reader:
        if not row or all(not field.strip() for field in row):
            continue
        row_number += 1
        if len(row) != 3:
            raise ManifestError(f"row {row_number}: expected 3 fields, got {len(row)}")
        path, label, split = (field.strip() for field in row)
        if not path:
            raise ManifestError(f"row {row_number}: empty path")
        if not label:
            raise ManifestError(f"row {row_number}: empty label")
        if split not in SPLITS:
            raise ManifestError(
                f"row {row_number}: unknown split {split!r}, expected one of {SPLITS}"
            )
        if path in seen:
            raise ManifestError(f"row {row_number}: duplicate path {path!r}")
        seen.add(path)
        entries.append(ManifestEntry(path=path, label=label, split=split))
    return Manifest(entries=tuple(entries))


def load_manifest_file(path) -> Manifest:
    with open(path, "r", encoding="utf-8") as fh:
        return load_manifest(fh.read())


@dataclass(frozen=True, eq=False)
class EvalReport:
    """Accuracy, confusion counts, and the configuration that produced them."""

    accuracy: float
    class_labels: tuple[str, ...]
    confusion: np.ndarray
    n_test: int
    params: LbpParams
    grid_rows: int
    grid_cols: int
    metric: str
    fps: float | None = None

    def __post_init__(self):
        arr = np.ascontiguousarray(self.confusion, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "confusion", arr)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvalReport):
            return NotImplemented
        return (
            self.accuracy == other.accuracy
            and self.class_labels == other.class_labels
            and bool(np.array_equal(self.confusion, other.confusion))
            and self.n_test == other.n_test
            and self.params == other.params
            and self.grid_rows == other.grid_rows
            and self.grid_cols == other.grid_cols
            and self.metric == other.metric
            and self.fps == other.fps
        )

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "n_test": self.n_test,
            "classes": list(self.class_labels),
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "fps": self.fps,
            "config": {
                "neighbors": self.params.neighbors,
                "radius": self.params.radius,
                "sampling": self.params.sampling,
                "mapping": self.params.mapping,
                "grid": [self.grid_rows, self.grid_cols],
                "metric": self.metric,
            },
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "EvalReport":
        config = d["config"]
        return cls(
            accuracy=float(d["accuracy"]),
            class_labels=tuple(str(c) for c in d["classes"]),
            confusion=np.array(d["confusion"], dtype=np.int64),
            n_test=int(d["n_test"]),
            params=LbpParams(
                neighbors=int(config["neighbors"]),
                radius=float(config["radius"]),
                sampling=str(config["sampling"]),
                mapping=str(config["mapping"]),
            ),
            grid_rows=int(config["grid"][0]),
            grid_cols=int(config["grid"][1]),
            metric=str(config["metric"]),
            fps=None if d["fps"] is None else float(d["fps"]),
        )


def _describe_entry(entry: ManifestEntry, params: LbpParams, rows: int, cols: int, base_dir):
    # OSError and PgmFormatError propagate with the offending path attached
    path = Path(base_dir) / entry.path if base_dir is not None else Path(entry.path)
    img = load_pgm_file(path)
    return grid_descriptor(lbp_map(img, params), rows, cols)


def train_model(
    manifest: Manifest,
    params: LbpParams,
    grid_rows: int = 3,
    grid_cols: int = 3,
    base_dir=None,
) -> Model:
    """Build per-class templates from the manifest's train split."""
    train = manifest.split("train")
    if not train:
        raise EvaluationError("manifest has no train entries")
    samples = [
        (e.label, _describe_entry(e, params, grid_rows, grid_cols, base_dir)) for e in train
    ]
    return build_templates(samples)


def evaluate(
    manifest: Manifest,
    params: LbpParams,
    grid_rows: int = 3,
    grid_cols: int = 3,
    metric: str = "chi2",
    base_dir=None,
) -> EvalReport:
    """Train on the train split, classify the test split, report accuracy.

    Confusion rows are true classes and columns predicted classes, both in
    model (ascending label) order; accuracy is the trace over n_test.
    """
    test = manifest.split("test")
    if not test:
        raise EvaluationError("manifest has no test entries")
    model = train_model(manifest, params, grid_rows, grid_cols, base_dir)
    index = {label: i for i, label in enumerate(model.class_labels)}
    for entry in test:
        if entry.label not in index:
            raise EvaluationError(
                f"test label {entry.label!r} does not appear in the train split"
            )
    confusion = np.zeros((model.n_classes, model.n_classes), dtype=np.int64)
    for entry in test:
        desc = _describe_entry(entry, params, grid_rows, grid_cols, base_dir)
        predicted, _ = predict(model, desc, metric)
        confusion[index[entry.label], index[predicted]] += 1
    accuracy = float(np.trace(confusion)) / len(test)
    return EvalReport(
        accuracy=accuracy,
        class_labels=model.class_labels,
        confusion=confusion,
        n_test=len(test),
        params=params,
        grid_rows=grid_rows,
        grid_cols=grid_cols,
        metric=metric,
    )


@dataclass(frozen=True)
class BenchmarkResult:
    """Throughput of repeated whole-image map computation, I/O excluded."""

    fps: float
    ms_per_frame: float
    iterations: int
    threads: int
    image_width: int
    image_height: int
    params: LbpParams


def benchmark_fps(
    img: GrayImage, params: LbpParams, iterations: int = 100, threads: int = 1
) -> BenchmarkResult:
    """Time `iterations` map computations; fps = iterations / elapsed seconds.

    Map allocation is part of the measured work. With threads > 1 the same
    number of iterations is spread over a thread pool and wall-clock time is
    still measured outside the pool.
    """
    if iterations < 1:
        raise ParameterError(f"iterations must be at least 1, got {iterations}")
    if threads < 1:
        raise ParameterError(f"threads must be at least 1, got {threads}")
    lbp_map(img, params)  # warm-up outside the timed loop
    if threads == 1:
        start = time.perf_counter()
        for _ in range(iterations):
            lbp_map(img, params)
        elapsed = time.perf_counter() - start
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            start = time.perf_counter()
            futures = [pool.submit(lbp_map, img, params) for _ in range(iterations)]
            for future in futures:
                future.result()
            elapsed = time.perf_counter() - start
    elapsed = max(elapsed, 1e-9)
    fps = iterations / elapsed
    return BenchmarkResult(
        fps=fps,
        ms_per_frame=1000.0 / fps,
        iterations=iterations,
        threads=threads,
        image_width=img.width,
        image_height=img.height,
        params=params,
    )
