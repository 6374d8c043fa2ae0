"""Per-frame multi-label detection metrics.

Average precision is the uninterpolated ranking form: sort frames by
descending score (ties keep original order), average the precision at each
positive. Frames are pooled across videos per class; classes with no
positive frames are excluded from the mean rather than scored 0. All
reported values are percentages in [0, 100].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import LabelTrack, VolaugError, round_half_up
from .policy import PredictionTrack

CHARADES_FRAMES = 25

__all__ = [
    "EvalReport",
    "average_precision",
    "map_per_frame",
    "map_charades_protocol",
    "split_statistics",
    "charades_frame_indices",
    "evaluate_detection",
]


@dataclass
class EvalReport:
    """Evaluation summary; ``map`` and every AP are percentages.

    ``per_class_ap`` holds NaN for classes without positives (absent, not
    zero). ``split_maps`` values are None when a split has no frames or no
    positives.
    """

    map: float
    per_class_ap: np.ndarray
    split_maps: dict[str, float | None] = field(default_factory=dict)
    protocol: str = "per-frame"
    num_videos: int = 0

    def to_dict(self) -> dict:
        return {
            "map": self.map,
            "per_class_ap": [None if math.isnan(a) else a for a in self.per_class_ap],
            "split_maps": self.split_maps,
            "protocol": self.protocol,
            "num_videos": self.num_videos,
        }


def average_precision(scores: np.ndarray, truth: np.ndarray) -> float:
    """AP of one class: mean precision at each positive, ranked by score.

    ``truth`` is binary; requires at least one positive. Ties in ``scores``
    are broken by original order (stable sort).
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    if scores.shape != truth.shape or scores.ndim != 1:
        raise VolaugError("scores and truth must be equal-length vectors")
    npos = int((truth > 0).sum())
    if npos == 0:
        raise VolaugError("average precision undefined without positives")
    order = np.argsort(-scores, kind="stable")
    hits = (truth[order] > 0).astype(np.float64)
    cum_hits = np.cumsum(hits)
    ranks = np.arange(1, len(scores) + 1, dtype=np.float64)
    return float((cum_hits[hits > 0] / ranks[hits > 0]).sum() / npos)


def _pool(preds: list[PredictionTrack], truths: list[LabelTrack]) -> tuple[np.ndarray, np.ndarray]:
    if len(preds) != len(truths):
        raise VolaugError("prediction/truth counts differ")
    if not preds:
        raise VolaugError("nothing to evaluate")
    k = truths[0].num_classes
    for i, (p, t) in enumerate(zip(preds, truths)):
        if t.num_classes != k:
            raise VolaugError(f"video {i}: class count {t.num_classes} != {k}")
        if p.scores.shape != t.weights.shape:
            raise VolaugError(
                f"video {i}: prediction shape {p.scores.shape} != truth {t.weights.shape}"
            )
    scores = np.concatenate([p.scores for p in preds], axis=0)
    truth = np.concatenate([t.weights for t in truths], axis=0)
    return scores, truth


def _per_class_ap(scores: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """AP per class over pooled frames, as percentages; NaN if no positives."""
    k = scores.shape[1]
    aps = np.full(k, np.nan)
    for c in range(k):
        if (truth[:, c] > 0).any():
            aps[c] = 100.0 * average_precision(scores[:, c], truth[:, c])
    return aps


def _mean_present(aps: np.ndarray) -> float:
    present = aps[~np.isnan(aps)]
    if present.size == 0:
        raise VolaugError("no class has positive frames")
    return float(present.mean())


def map_per_frame(
    preds: list[PredictionTrack], truths: list[LabelTrack]
) -> EvalReport:
    """Unweighted mAP over every frame of every video, pooled per class."""
    scores, truth = _pool(preds, truths)
    aps = _per_class_ap(scores, truth)
    return EvalReport(
        map=_mean_present(aps),
        per_class_ap=aps,
        protocol="per-frame",
        num_videos=len(preds),
    )


def charades_frame_indices(length: int) -> np.ndarray:
    """The 25 evenly-spaced frame indices used by the localization protocol."""
    if length < CHARADES_FRAMES:
        raise VolaugError(
            f"charades protocol needs >= {CHARADES_FRAMES} frames, got {length}"
        )
    step = (length - 1) / (CHARADES_FRAMES - 1)
    return np.asarray([round_half_up(i * step) for i in range(CHARADES_FRAMES)])


def map_charades_protocol(
    preds: list[PredictionTrack],
    truths: list[LabelTrack],
    class_weights: np.ndarray,
) -> EvalReport:
    """Class-weighted mAP over 25 evenly-sampled frames per video.

    Each class AP is scaled by its weight before the mean over classes with
    positives; with unit weights this equals the unweighted evaluation of
    the same frame subset.
    """
    if class_weights is None:
        raise VolaugError("charades protocol requires a class weight vector")
    sub_preds, sub_truths = [], []
    for p, t in zip(preds, truths):
        idx = charades_frame_indices(t.length)
        sub_preds.append(PredictionTrack(scores=p.scores[idx]))
        sub_truths.append(LabelTrack(weights=t.weights[idx], num_classes=t.num_classes))
    scores, truth = _pool(sub_preds, sub_truths)
    weights = np.asarray(class_weights, dtype=np.float64)
    if weights.shape != (scores.shape[1],):
        raise VolaugError(
            f"class weights shape {weights.shape} != ({scores.shape[1]},)"
        )
    aps = _per_class_ap(scores, truth)
    return EvalReport(
        map=_mean_present(aps * weights),
        per_class_ap=aps,
        protocol="charades25",
        num_videos=len(preds),
    )


def boundary_frames(truth: np.ndarray, dilation: int) -> np.ndarray:
    """Frames within ``dilation`` of any per-class label transition.

    A transition sits at index t when any class differs between t-1 and t;
    the first frame of a video is not a transition.
    """
    active = truth > 0
    changed = np.any(active[1:] != active[:-1], axis=1)
    points = np.flatnonzero(changed) + 1
    mask = np.zeros(truth.shape[0], dtype=bool)
    for c in points:
        mask[max(0, c - dilation) : c + dilation + 1] = True
    return mask


def split_statistics(
    preds: list[PredictionTrack],
    truths: list[LabelTrack],
    dilation: int = 3,
) -> dict[str, float | None]:
    """mAP restricted to frame subsets defined by the truth structure.

    Subsets: exactly one active class / more than one; within ``dilation``
    frames of a label transition / not. Empty or positive-free subsets are
    reported as None.
    """
    scores, truth = _pool(preds, truths)
    if truth.size and not np.isin(truth, (0.0, 1.0)).all():
        raise VolaugError("split statistics need binary truth labels")
    counts = (truth > 0).sum(axis=1)
    boundary = np.concatenate(
        [boundary_frames(t.weights, dilation) for t in truths], axis=0
    )
    subsets = {
        "single_action": counts == 1,
        "multi_action": counts > 1,
        "boundary": boundary,
        "non_boundary": ~boundary,
    }
    out: dict[str, float | None] = {}
    for name, mask in subsets.items():
        if not mask.any():
            out[name] = None
            continue
        aps = _per_class_ap(scores[mask], truth[mask])
        present = aps[~np.isnan(aps)]
        out[name] = float(present.mean()) if present.size else None
    return out


def evaluate_detection(
    preds: list[PredictionTrack],
    truths: list[LabelTrack],
    protocol: str = "per-frame",
    class_weights: np.ndarray | None = None,
    dilation: int = 3,
    with_splits: bool = True,
) -> EvalReport:
    """Full evaluation: protocol mAP plus the frame-subset breakdown."""
    if protocol == "per-frame":
        report = map_per_frame(preds, truths)
    elif protocol == "charades25":
        report = map_charades_protocol(preds, truths, class_weights)
    else:
        raise VolaugError(f"unknown protocol {protocol!r}")
    if with_splits:
        binary = all(
            np.isin(t.weights, (0.0, 1.0)).all() for t in truths
        )
        if binary:
            report.split_maps = split_statistics(preds, truths, dilation)
    return report
