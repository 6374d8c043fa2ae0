"""Volume mixup: blend two clips under a piecewise-linear temporal weight.

Clip 2 is shifted right by ``r`` frames and both clips are zero-padded to
the composite length. The per-frame weight of clip 1 is

    scenario 1 (n2 + r >= n1, composite runs clip1 -> clip2, length n2 + r):
        alpha[t] = clamp01((n1 - t) / (n1 - r))
    scenario 2 (otherwise, clip1 -> clip2 -> clip1, length n1):
        alpha[t] = clamp01(|n2 + 2r - 2t| / n2)

Clamping pins alpha to 1 where only clip 1 is present and 0 where only
clip 2 is, so absent frames never leak into the blend. Labels mix with the
same weights, giving per-frame soft labels of mass exactly 1.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DTYPE_U8,
    AlphaMask,
    AugRecord,
    ClipVolume,
    LabelTrack,
    VolaugError,
    require_shared_geometry,
    truncate01,
)

__all__ = [
    "alpha_mask",
    "alpha_mask_at_resolution",
    "mixup",
    "mixup_hard",
    "sample_mixup_shift",
    "fit_length",
]


def _alpha_at(t: float, n1: int, n2: int, r: int, scenario: int) -> float:
    if scenario == 1:
        return truncate01((n1 - t) / (n1 - r))
    return truncate01(abs(n2 + 2 * r - 2 * t) / n2)


def _check_mix_params(n1: int, n2: int, r: int) -> int:
    """Validate (n1, n2, r) and return the scenario (1 or 2)."""
    if n1 < 2 or n2 < 2:
        raise VolaugError("mixup needs clips of length >= 2")
    if r < 0:
        raise VolaugError("shift must be non-negative")
    if r >= n1:
        raise VolaugError("no overlap: shift places clip 2 entirely past clip 1")
    return 1 if n2 + r >= n1 else 2


def alpha_mask(n1: int, n2: int, r: int) -> AlphaMask:
    """Per-frame clip-1 weights for lengths (n1, n2) and shift r."""
    scenario = _check_mix_params(n1, n2, r)
    length = n2 + r if scenario == 1 else n1
    values = [_alpha_at(t, n1, n2, r, scenario) for t in range(length)]
    return AlphaMask(values=np.asarray(values), scenario=scenario, params=(n1, n2, r))


def alpha_mask_at_resolution(n1: int, n2: int, r: int, out_length: int) -> AlphaMask:
    """The same weight function resampled to ``out_length`` points.

    Evaluates the continuous weight at ``t' = t * (L-1) / (out_length-1)``;
    lets callers blend feature tensors whose temporal length differs from
    the frame count.
    """
    if out_length < 2:
        raise VolaugError("resampled mask needs length >= 2")
    scenario = _check_mix_params(n1, n2, r)
    length = n2 + r if scenario == 1 else n1
    scale = (length - 1) / (out_length - 1)
    values = [_alpha_at(t * scale, n1, n2, r, scenario) for t in range(out_length)]
    return AlphaMask(values=np.asarray(values), scenario=scenario, params=(n1, n2, r))


def sample_mixup_shift(n1: int, n2: int, rng: np.random.Generator) -> int:
    """Draw the temporal shift of clip 2, uniform on [0, n1 - 1]."""
    if n1 < 2 or n2 < 2:
        raise VolaugError("mixup needs clips of length >= 2")
    return int(rng.integers(0, n1))


def _padded_pair(
    clip1: ClipVolume, clip2: ClipVolume, r: int, length: int
) -> tuple[np.ndarray, np.ndarray]:
    """Zero-padded float32 volumes of the composite length."""
    h, w, c = clip1.height, clip1.width, clip1.channels
    a = np.zeros((length, h, w, c), dtype=np.float32)
    b = np.zeros_like(a)
    a[: clip1.length] = clip1.frames
    b[r : r + clip2.length] = clip2.frames
    return a, b


def _mix_labels(
    labels1: LabelTrack, labels2: LabelTrack, r: int, weights_t: np.ndarray
) -> LabelTrack:
    if labels1.num_classes != labels2.num_classes:
        raise VolaugError("label tracks disagree on class count")
    length = weights_t.shape[0]
    k = labels1.num_classes
    l1 = np.zeros((length, k), dtype=np.float64)
    l2 = np.zeros_like(l1)
    l1[: labels1.length] = labels1.weights
    l2[r : r + labels2.length] = labels2.weights
    col = weights_t.reshape(-1, 1)
    return LabelTrack(weights=col * l1 + (1.0 - col) * l2, num_classes=k)


def _mix(
    clip1: ClipVolume,
    labels1: LabelTrack,
    clip2: ClipVolume,
    labels2: LabelTrack,
    r: int,
    hard: bool,
    seed: int,
) -> tuple[ClipVolume, LabelTrack, AugRecord]:
    require_shared_geometry(clip1, clip2)
    if labels1.length != clip1.length or labels2.length != clip2.length:
        raise VolaugError("labels length must match clip length")
    mask = alpha_mask(clip1.length, clip2.length, r)
    weights = mask.values
    if hard:
        weights = np.where(weights >= 0.5, 1.0, 0.0)

    a, b = _padded_pair(clip1, clip2, r, mask.length)
    w32 = weights.astype(np.float32).reshape(-1, 1, 1, 1)
    # blend in place; a and b are fresh padded buffers owned here
    np.multiply(a, w32, out=a)
    np.multiply(b, np.float32(1.0) - w32, out=b)
    np.add(a, b, out=a)
    if clip1.dtype == DTYPE_U8:
        frames = np.rint(a).astype(np.uint8)
    else:
        frames = a

    out_labels = _mix_labels(labels1, labels2, r, weights)
    record = AugRecord(
        kind="mixup",
        sources=(clip1.id, clip2.id),
        params={"r": int(r), "scenario": mask.scenario, "hard": hard},
        seed=seed,
    )
    out_clip = ClipVolume(frames=frames, dtype=clip1.dtype, id=clip1.id)
    return out_clip, out_labels, record


def mixup(clip1, labels1, clip2, labels2, r, seed: int = 0):
    """Blend two clips with the seamless temporal weight mask."""
    return _mix(clip1, labels1, clip2, labels2, r, hard=False, seed=seed)


def mixup_hard(clip1, labels1, clip2, labels2, r, seed: int = 0):
    """Mixup with weights thresholded to {0, 1} (ties at 0.5 go to clip 1).

    Every output frame is a pure copy of one source frame and every label
    row stays one-hot.
    """
    return _mix(clip1, labels1, clip2, labels2, r, hard=True, seed=seed)


def fit_length(
    clip: ClipVolume, labels: LabelTrack, target: int
) -> tuple[ClipVolume, LabelTrack]:
    """Fit a variable-length composite to a fixed length.

    Longer clips are center-cropped; shorter ones are upsampled by
    nearest-index resampling. Used behind the ``--fit`` option so training
    batches can have a constant temporal size.
    """
    if target < 1:
        raise VolaugError("fit length must be >= 1")
    n = clip.length
    if n == target:
        return clip, labels
    if n > target:
        start = (n - target) // 2
        idx = np.arange(start, start + target)
    else:
        pos = np.arange(target) * ((n - 1) / (target - 1))
        idx = np.floor(pos + 0.5).astype(np.int64)
    frames = np.ascontiguousarray(clip.frames[idx])
    weights = np.ascontiguousarray(labels.weights[idx])
    return (
        clip.with_frames(frames),
        LabelTrack(weights=weights, num_classes=labels.num_classes),
    )
