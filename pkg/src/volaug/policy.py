"""Combining augmentations: the joint batch policy and prediction ensembling.

Joint training applies each augmentation to a whole batch with its own
probability, independently of the others (a batch may get none or all
three), composed in the fixed order freeze -> mixup -> cutmix; blend
partners are other members of the same batch, in their original
(pre-augmentation) state. Model ensembling averages per-frame prediction
tracks element-wise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AugRecord, ClipVolume, LabelTrack, VolaugError
from .cutmix import MODE_VIEW, MODE_WINDOW, cutmix_view, cutmix_window, sample_cutmix_params
from .freeze import freeze, sample_freeze_params
from .mixup import mixup, mixup_hard, sample_mixup_shift


@dataclass(frozen=True)
class PredictionTrack:
    """T x K per-frame per-class scores in [0, 1]; rows need not sum to 1."""

    scores: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        if s.ndim != 2:
            raise VolaugError(f"prediction track must be TxK, got shape {s.shape}")
        if s.size and (s.min() < 0.0 or s.max() > 1.0):
            raise VolaugError("prediction scores outside [0,1]")
        s = np.ascontiguousarray(s)
        s.setflags(write=False)
        object.__setattr__(self, "scores", s)


Sample = tuple[ClipVolume, LabelTrack]


def _pick_partner(i: int, size: int, rng: np.random.Generator) -> int:
    j = int(rng.integers(0, size - 1))
    return j + 1 if j >= i else j


def joint_policy(
    batch: list[Sample],
    probs: tuple[float, float, float],
    rng: np.random.Generator,
    cutmix_mode: str = MODE_WINDOW,
    delta: int | None = None,
) -> tuple[list[Sample], list[list[AugRecord]]]:
    """Randomly augment a batch; returns the new samples and per-sample records.

    ``probs`` are the per-batch application probabilities of (freeze, mixup,
    cutmix). A batch of size 1 skips mixup/cutmix draws with a recorded
    note, since there is no partner to blend with.
    """
    for p in probs:
        if not (0.0 <= p <= 1.0):
            raise VolaugError(f"probability {p} outside [0,1]")
    p_vf, p_vm, p_vc = probs
    apply_vf = rng.random() < p_vf
    apply_vm = rng.random() < p_vm
    apply_vc = rng.random() < p_vc

    size = len(batch)
    current = list(batch)
    records: list[list[AugRecord]] = [[] for _ in range(size)]

    def note(i: int, kind: str, reason: str) -> None:
        records[i].append(
            AugRecord(kind="none", sources=(batch[i][0].id,),
                      params={"skipped": kind, "reason": reason}, seed=0)
        )

    if apply_vf:
        for i in range(size):
            clip, labels = current[i]
            if clip.length < 3:
                note(i, "freeze", "clip too short to freeze")
                continue
            r, m = sample_freeze_params(clip.length, rng)
            clip, labels, rec = freeze(clip, labels, r, m)
            current[i] = (clip, labels)
            records[i].append(rec)

    if apply_vm:
        for i in range(size):
            if size < 2:
                note(i, "mixup", "batch of size 1 has no partner")
                continue
            clip, labels = current[i]
            partner_clip, partner_labels = batch[_pick_partner(i, size, rng)]
            r = sample_mixup_shift(clip.length, partner_clip.length, rng)
            clip, labels, rec = mixup(clip, labels, partner_clip, partner_labels, r)
            current[i] = (clip, labels)
            records[i].append(rec)

    if apply_vc:
        for i in range(size):
            if size < 2:
                note(i, "cutmix", "batch of size 1 has no partner")
                continue
            clip, labels = current[i]
            partner_clip, partner_labels = batch[_pick_partner(i, size, rng)]
            mode, r, d = sample_cutmix_params(
                clip.length, partner_clip.length, rng, mode=cutmix_mode, delta=delta
            )
            if mode == MODE_VIEW:
                if partner_clip.length != clip.length:
                    note(i, "cutmix", "transient view requires equal lengths")
                    continue
                clip, labels, rec = cutmix_view(
                    clip, labels, partner_clip, partner_labels, delta=d
                )
            else:
                clip, labels, rec = cutmix_window(
                    clip, labels, partner_clip, partner_labels, r, delta=d
                )
            current[i] = (clip, labels)
            records[i].append(rec)

    for i in range(size):
        if not records[i]:
            records[i].append(
                AugRecord(kind="none", sources=(batch[i][0].id,), params={}, seed=0)
            )
    return current, records


def apply_record(
    record: AugRecord, sources: dict[str, Sample], hard: bool = False
) -> Sample:
    """Re-run one recorded augmentation against its source samples.

    Reproduces the original output bit-exactly; ``sources`` maps clip id to
    (clip, labels) in the state the record was applied to.
    """
    if record.kind == "none":
        return sources[record.sources[0]]
    if record.kind == "freeze":
        clip, labels = sources[record.sources[0]]
        for r, m in record.params["segments"]:
            clip, labels, _ = freeze(clip, labels, r, m)
        return clip, labels
    if record.kind == "mixup":
        c1, l1 = sources[record.sources[0]]
        c2, l2 = sources[record.sources[1]]
        fn = mixup_hard if record.params.get("hard", hard) else mixup
        clip, labels, _ = fn(c1, l1, c2, l2, record.params["r"])
        return clip, labels
    if record.kind == "cutmix_window":
        c1, l1 = sources[record.sources[0]]
        c2, l2 = sources[record.sources[1]]
        clip, labels, _ = cutmix_window(
            c1, l1, c2, l2, record.params["r"], delta=record.params["delta"]
        )
        return clip, labels
    if record.kind == "cutmix_view":
        c1, l1 = sources[record.sources[0]]
        c2, l2 = sources[record.sources[1]]
        clip, labels, _ = cutmix_view(c1, l1, c2, l2, delta=record.params["delta"])
        return clip, labels
    raise VolaugError(f"unknown augmentation kind {record.kind!r}")


def ensemble(tracks: list[PredictionTrack], method: str = "mean") -> PredictionTrack:
    """Combine prediction tracks element-wise (arithmetic mean by default).

    All tracks must share one shape; ``method="geometric"`` takes the
    per-element geometric mean instead.
    """
    if not tracks:
        raise VolaugError("ensemble needs at least one track")
    shape = tracks[0].scores.shape
    for t in tracks[1:]:
        if t.scores.shape != shape:
            raise VolaugError(f"track shape {t.scores.shape} != {shape}")
    stack = np.stack([t.scores for t in tracks])
    if method == "mean":
        combined = stack.mean(axis=0)
    elif method == "geometric":
        combined = np.prod(stack, axis=0) ** (1.0 / len(tracks))
    else:
        raise VolaugError(f"unknown ensemble method {method!r}")
    return PredictionTrack(scores=np.minimum(combined, 1.0))
