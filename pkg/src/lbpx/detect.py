"""Sliding-window localization against a single-class template model."""

from __future__ import annotations

from dataclasses import dataclass

from .classify import Model, distance
from .descriptor import grid_values
from .errors import ModelMismatchError, ParameterError
from .image import GrayImage
from .lbp import lbp_map
from .mapping import label_count


@dataclass(frozen=True)
class Detection:
    """Window hit; score is the chi-square distance to the template (lower is better)."""

    x: int
    y: int
    width: int
    height: int
    score: float


def iou(a: Detection, b: Detection) -> float:
    """Intersection over union of two inclusive pixel rectangles."""
    ix0 = max(a.x, b.x)
    iy0 = max(a.y, b.y)
    ix1 = min(a.x + a.width - 1, b.x + b.width - 1)
    iy1 = min(a.y + a.height - 1, b.y + b.height - 1)
    iw = max(0, ix1 - ix0 + 1)
    ih = max(0, iy1 - iy0 + 1)
    inter = iw * ih
    if inter == 0:
        return 0.0
    union = a.width * a.height + b.width * b.height - inter
    return inter / union


def scan_detect(
    scene: GrayImage,
    template_model: Model,
    window: tuple[int, int],
    stride: int = 1,
    threshold: float = float("inf"),
) -> list[Detection]:
    """Score every stride-aligned window against the template and keep hits.

    Each window's grid descriptor (computed with the model's configuration)
    is compared to the single template by chi-square distance; windows at
    distance <= threshold are returned sorted ascending by distance, with
    row-major scan order breaking ties.
    """
    if template_model.n_classes != 1:
        raise ModelMismatchError(
            f"detection needs a single-class model, got {template_model.n_classes} classes"
        )
    win_w, win_h = window
    if win_w < 1 or win_h < 1:
        raise ParameterError(f"window must be at least 1x1, got {win_w}x{win_h}")
    if win_w > scene.width or win_h > scene.height:
        raise ParameterError(
            f"window {win_w}x{win_h} larger than scene {scene.width}x{scene.height}"
        )
    if stride < 1:
        raise ParameterError(f"stride must be at least 1, got {stride}")
    if threshold < 0:
        raise ParameterError(f"threshold must be non-negative, got {threshold}")

    params = template_model.params
    o = params.origin_offset
    map_w = win_w - 2 * o
    map_h = win_h - 2 * o
    if map_w < template_model.grid_cols or map_h < template_model.grid_rows:
        raise ParameterError(
            f"window {win_w}x{win_h} too small for a "
            f"{template_model.grid_rows}x{template_model.grid_cols} grid at origin offset {o}"
        )

    # The full-scene map restricted to a window equals that window's own map,
    # so one map computation serves every window position.
    full = lbp_map(scene, params).labels
    bins = label_count(params.mapping, params.neighbors)
    template = template_model.templates[0]

    hits: list[Detection] = []
    for y in range(0, scene.height - win_h + 1, stride):
        for x in range(0, scene.width - win_w + 1, stride):
            values = grid_values(
                full[y : y + map_h, x : x + map_w],
                template_model.grid_rows,
                template_model.grid_cols,
                bins,
            )
            score = distance(template, values, "chi2")
            if score <= threshold:
                hits.append(Detection(x=x, y=y, width=win_w, height=win_h, score=score))
    hits.sort(key=lambda d: d.score)
    return hits


def nms(detections, iou_threshold: float) -> list[Detection]:
    """Greedy suppression: keep the best-scoring box, drop overlapping rivals.

    A box is dropped when its IoU with an already-kept box exceeds
    `iou_threshold`; output is sorted ascending by score. Ties keep their
    input order, which for scan_detect output is row-major scan order.
    """
    if not 0.0 <= iou_threshold <= 1.0:
        raise ParameterError(f"iou threshold must lie in [0, 1], got {iou_threshold}")
    pending = sorted(detections, key=lambda d: d.score)
    kept: list[Detection] = []
    while pending:
        best = pending.pop(0)
        kept.append(best)
        pending = [d for d in pending if iou(best, d) <= iou_threshold]
    return kept
