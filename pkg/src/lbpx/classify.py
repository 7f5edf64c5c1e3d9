"""Histogram distances, per-class templates, nearest-template classification."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .descriptor import GridDescriptor
from .errors import ModelFormatError, ModelMismatchError, ParameterError, TrainingError
from .lbp import LbpParams

METRICS = ("chi2", "wchi2", "intersect", "l1")

MODEL_FORMAT_VERSION = 1


def _chi2(a: np.ndarray, b: np.ndarray) -> float:
    # 0/0 bins are skipped rather than smoothed with an epsilon
    total = a + b
    mask = total > 0
    diff = a[mask] - b[mask]
    return float(np.sum(diff * diff / total[mask]))


def distance(a, b, metric: str = "chi2", weights=None) -> float:
    """Distance between two descriptor value vectors.

    chi2       sum (a-b)^2 / (a+b), skipping bins where a+b == 0
    wchi2      chi2 with each region's partial sum scaled by its weight;
               `weights` must have one non-negative entry per region
    intersect  1 - sum min(a, b), for L1-normalized inputs
    l1         sum |a - b|
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if len(a) != len(b):
        raise ParameterError(f"descriptor lengths differ: {len(a)} vs {len(b)}")
    if metric not in METRICS:
        raise ParameterError(f"unknown metric {metric!r}, expected one of {METRICS}")
    if metric == "chi2":
        return _chi2(a, b)
    if metric == "wchi2":
        if weights is None:
            raise ParameterError("wchi2 requires per-region weights")
        weights = np.asarray(weights, dtype=np.float64).reshape(-1)
        if len(weights) == 0 or len(a) % len(weights) != 0:
            raise ParameterError(
                f"descriptor length {len(a)} is not divisible into {len(weights)} regions"
            )
        if np.any(weights < 0):
            raise ParameterError("region weights must be non-negative")
        span = len(a) // len(weights)
        total = 0.0
        for r, w in enumerate(weights):
            total += float(w) * _chi2(a[r * span : (r + 1) * span], b[r * span : (r + 1) * span])
        return total
    if metric == "intersect":
        return float(1.0 - np.sum(np.minimum(a, b)))
    return float(np.sum(np.abs(a - b)))


@dataclass(frozen=True, eq=False)
class Model:
    """Per-class template descriptors plus the configuration that produced them.

    Class labels are unique and stored in ascending lexicographic order;
    templates[i] belongs to class_labels[i].
    """

    params: LbpParams
    grid_rows: int
    grid_cols: int
    class_labels: tuple[str, ...]
    templates: np.ndarray
    region_weights: np.ndarray | None = None
    format_version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        arr = np.ascontiguousarray(self.templates, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "templates", arr)
        if self.region_weights is not None:
            weights = np.ascontiguousarray(self.region_weights, dtype=np.float64)
            weights.setflags(write=False)
            object.__setattr__(self, "region_weights", weights)

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        if self.region_weights is None or other.region_weights is None:
            weights_equal = self.region_weights is None and other.region_weights is None
        else:
            weights_equal = bool(np.array_equal(self.region_weights, other.region_weights))
        return (
            self.params == other.params
            and self.grid_rows == other.grid_rows
            and self.grid_cols == other.grid_cols
            and self.class_labels == other.class_labels
            and self.format_version == other.format_version
            and bool(np.array_equal(self.templates, other.templates))
            and weights_equal
        )


def _renormalize_regions(values: np.ndarray, region_count: int) -> np.ndarray:
    span = len(values) // region_count
    out = values.copy()
    for r in range(region_count):
        chunk = out[r * span : (r + 1) * span]
        total = chunk.sum()
        if total > 0:
            chunk /= total
    return out


def build_templates(samples, region_weights=None) -> Model:
    """Average each class's sample descriptors into one template per class.

    `samples` is a sequence of (class label, GridDescriptor) pairs sharing a
    single configuration; each template's region slices are re-normalized to
    sum 1 after averaging.
    """
    samples = list(samples)
    if not samples:
        raise TrainingError("no training samples")
    reference = samples[0][1]
    by_class: dict[str, list[np.ndarray]] = {}
    for label, desc in samples:
        if not isinstance(label, str) or not label:
            raise TrainingError(f"class label must be a non-empty string, got {label!r}")
        if (
            desc.params != reference.params
            or desc.grid_rows != reference.grid_rows
            or desc.grid_cols != reference.grid_cols
            or len(desc.values) != len(reference.values)
        ):
            raise TrainingError(
                f"sample for class {label!r} has a different descriptor configuration"
            )
        by_class.setdefault(label, []).append(desc.values)

    labels = tuple(sorted(by_class))
    region_count = reference.region_count
    templates = np.empty((len(labels), len(reference.values)), dtype=np.float64)
    for i, label in enumerate(labels):
        mean = np.mean(by_class[label], axis=0)
        templates[i] = _renormalize_regions(mean, region_count)

    weights = None
    if region_weights is not None:
        weights = np.asarray(region_weights, dtype=np.float64).reshape(-1)
        if len(weights) != region_count:
            raise TrainingError(
                f"expected {region_count} region weights, got {len(weights)}"
            )
        if np.any(weights < 0):
            raise TrainingError("region weights must be non-negative")

    return Model(
        params=reference.params,
        grid_rows=reference.grid_rows,
        grid_cols=reference.grid_cols,
        class_labels=labels,
        templates=templates,
        region_weights=weights,
    )


def predict(model: Model, query: GridDescriptor, metric: str = "chi2") -> tuple[str, np.ndarray]:
    """Nearest-template class of `query` plus per-class distances in model order.

    Ties break toward the lexicographically smallest label.
    """
    if (
        query.params != model.params
        or query.grid_rows != model.grid_rows
        or query.grid_cols != model.grid_cols
        or len(query.values) != model.templates.shape[1]
    ):
        raise ModelMismatchError("query descriptor configuration does not match the model")
    weights = model.region_weights if metric == "wchi2" else None
    if metric == "wchi2" and weights is None:
        raise ParameterError("wchi2 requires a model with region weights")
    scores = np.array(
        [distance(model.templates[i], query.values, metric, weights) for i in range(model.n_classes)]
    )
    # labels are sorted, so the first minimum is the lexicographically smallest
    winner = int(np.argmin(scores))
    return model.class_labels[winner], scores


def serialize_model(model: Model) -> str:
    doc = {
        "format_version": model.format_version,
        "params": model.params.to_json_dict(),
        "grid": [model.grid_rows, model.grid_cols],
        "classes": [
            {"label": label, "template": [float(v) for v in model.templates[i]]}
            for i, label in enumerate(model.class_labels)
        ],
    }
    if model.region_weights is not None:
        doc["weights"] = [float(w) for w in model.region_weights]
    return json.dumps(doc, indent=2) + "\n"


def deserialize_model(text: str) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from None
    try:
        version = int(doc["format_version"])
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {version}")
        params = LbpParams.from_json_dict(doc["params"])
        rows, cols = (int(v) for v in doc["grid"])
        classes = doc["classes"]
        labels = tuple(str(entry["label"]) for entry in classes)
        if len(set(labels)) != len(labels):
            raise ModelFormatError("duplicate class labels in model file")
        if labels != tuple(sorted(labels)):
            raise ModelFormatError("model classes must be sorted by label")
        if not labels:
            raise ModelFormatError("model contains no classes")
        templates = np.array([entry["template"] for entry in classes], dtype=np.float64)
        if templates.ndim != 2:
            raise ModelFormatError("class templates must share one length")
        weights = None
        if "weights" in doc and doc["weights"] is not None:
            weights = np.array(doc["weights"], dtype=np.float64)
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from None
    return Model(
        params=params,
        grid_rows=rows,
        grid_cols=cols,
        class_labels=labels,
        templates=templates,
        region_weights=weights,
        format_version=version,
    )


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_model(model))


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return deserialize_model(fh.read())
