"""Volume cutmix: composite two clips per frame across a vertical split.

Two modes:

* transient window — the split column follows the temporal weight mask,
  ``w_t = round_half_up(W * alpha[t])``, so the window sweeps across the
  frame while the overlap progresses (same two scenarios and zero padding
  as mixup);
* transient view — both windows stay fixed at half width (requires equal
  clip lengths, no shift) while each clip's content pans left-to-right
  underneath, ``o_t = round_half_up(t * (W/2) / (n-1))``.

A 2*delta-wide band at the split blends the sides linearly instead of a
hard seam. Labels are weighted by the mask area, which matches the pixels
of the actually-applied (rounded) mask exactly.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DTYPE_U8,
    AugRecord,
    ClipVolume,
    LabelTrack,
    SpatialMask,
    VolaugError,
    _mask_row,
    _row_area,
    require_shared_geometry,
    round_half_up,
    spatial_mask,
)
from .mixup import alpha_mask

__all__ = [
    "default_delta",
    "cutmix_window",
    "cutmix_view",
    "sample_cutmix_params",
    "spatial_mask",
]

MODE_WINDOW = "window"
MODE_VIEW = "view"


def default_delta(width: int) -> int:
    """Transition half-width when none is configured: ~5% of frame width."""
    return max(1, round_half_up(0.05 * width))


def _check_delta(width: int, delta: int) -> int:
    delta = int(delta)
    if not (1 <= delta <= width / 4):
        raise VolaugError(f"transition half-width {delta} outside [1, {width / 4:g}]")
    return delta


def _band_blend(
    a: np.ndarray, b: np.ndarray, row: list[float], dtype: str
) -> np.ndarray:
    """Blend two aligned f32 frames with per-column weights."""
    m32 = np.asarray(row, dtype=np.float32).reshape(1, -1, 1)
    out = a * m32 + b * (np.float32(1.0) - m32)
    if dtype == DTYPE_U8:
        return np.rint(out).astype(np.uint8)
    return out


def cutmix_window(
    clip1: ClipVolume,
    labels1: LabelTrack,
    clip2: ClipVolume,
    labels2: LabelTrack,
    r: int,
    delta: int | None = None,
    seed: int = 0,
) -> tuple[ClipVolume, LabelTrack, AugRecord]:
    """Composite with a split column that moves with the temporal mask."""
    require_shared_geometry(clip1, clip2)
    if labels1.length != clip1.length or labels2.length != clip2.length:
        raise VolaugError("labels length must match clip length")
    if labels1.num_classes != labels2.num_classes:
        raise VolaugError("label tracks disagree on class count")
    h, w, c = clip1.height, clip1.width, clip1.channels
    delta = _check_delta(w, delta if delta is not None else default_delta(w))

    mask = alpha_mask(clip1.length, clip2.length, r)
    length = mask.length
    a = np.zeros((length, h, w, c), dtype=np.float32)
    b = np.zeros_like(a)
    a[: clip1.length] = clip1.frames
    b[r : r + clip2.length] = clip2.frames

    k = labels1.num_classes
    l1 = np.zeros((length, k), dtype=np.float64)
    l2 = np.zeros_like(l1)
    l1[: clip1.length] = labels1.weights
    l2[r : r + clip2.length] = labels2.weights

    rows = np.empty((length, w), dtype=np.float32)
    areas = np.empty((length, 1), dtype=np.float64)
    for t in range(length):
        w_t = round_half_up(w * float(mask.values[t]))
        row = _mask_row(w, w_t, delta)
        rows[t] = row
        areas[t, 0] = _row_area(row, w)

    m32 = rows.reshape(length, 1, w, 1)
    np.multiply(a, m32, out=a)
    np.multiply(b, np.float32(1.0) - m32, out=b)
    np.add(a, b, out=a)
    if clip1.dtype == DTYPE_U8:
        frames = np.rint(a).astype(np.uint8)
    else:
        frames = a
    out_weights = areas * l1 + (1.0 - areas) * l2

    record = AugRecord(
        kind="cutmix_window",
        sources=(clip1.id, clip2.id),
        params={"r": int(r), "delta": delta, "scenario": mask.scenario},
        seed=seed,
    )
    out_clip = ClipVolume(frames=frames, dtype=clip1.dtype, id=clip1.id)
    out_labels = LabelTrack(weights=out_weights, num_classes=k)
    return out_clip, out_labels, record


def pan_offsets(length: int, width: int) -> list[int]:
    """Column offsets sweeping each half-width view across its clip."""
    half = width // 2
    return [round_half_up(t * half / (length - 1)) for t in range(length)]


def cutmix_view(
    clip1: ClipVolume,
    labels1: LabelTrack,
    clip2: ClipVolume,
    labels2: LabelTrack,
    delta: int | None = None,
    seed: int = 0,
) -> tuple[ClipVolume, LabelTrack, AugRecord]:
    """Composite with constant half-width windows and panning content.

    Output column j of the left window shows clip 1 column ``j + o_t``; the
    right window shows clip 2 column ``j + o_t - W/2``. Inside the 2*delta
    band the pan index is clamped to the frame edge so both sources stay
    defined. Labels are a constant 0.5/0.5 mix.
    """
    require_shared_geometry(clip1, clip2)
    n = clip1.length
    if clip2.length != n:
        raise VolaugError("transient view requires equal lengths")
    if n < 2:
        raise VolaugError("transient view needs clips of length >= 2")
    if labels1.length != n or labels2.length != n:
        raise VolaugError("labels length must match clip length")
    if labels1.num_classes != labels2.num_classes:
        raise VolaugError("label tracks disagree on class count")
    w = clip1.width
    if w % 2 != 0:
        raise VolaugError("transient view requires an even frame width")
    half = w // 2
    delta = _check_delta(w, delta if delta is not None else default_delta(w))

    offsets = pan_offsets(n, w)
    row = _mask_row(w, half, delta)
    cols = np.arange(w)
    frames = np.empty_like(clip1.frames)
    for t in range(n):
        o = offsets[t]
        idx1 = np.clip(cols + o, 0, w - 1)
        idx2 = np.clip(cols + o - half, 0, w - 1)
        a = clip1.frames[t][:, idx1].astype(np.float32, copy=False)
        b = clip2.frames[t][:, idx2].astype(np.float32, copy=False)
        frames[t] = _band_blend(a, b, row, clip1.dtype)

    out_weights = 0.5 * labels1.weights + 0.5 * labels2.weights
    record = AugRecord(
        kind="cutmix_view",
        sources=(clip1.id, clip2.id),
        params={"delta": delta},
        seed=seed,
    )
    out_clip = ClipVolume(frames=frames, dtype=clip1.dtype, id=clip1.id)
    out_labels = LabelTrack(weights=out_weights, num_classes=labels1.num_classes)
    return out_clip, out_labels, record


def sample_cutmix_params(
    n1: int,
    n2: int,
    rng: np.random.Generator,
    mode: str = MODE_WINDOW,
    delta: int | None = None,
) -> tuple[str, int, int | None]:
    """Draw (mode, r, delta) for one cutmix application.

    Mode and delta are configuration, not random; only the window mode's
    shift is sampled (uniform on [0, n1 - 1], as in mixup).
    """
    if mode not in (MODE_WINDOW, MODE_VIEW):
        raise VolaugError(f"unknown cutmix mode {mode!r}")
    if mode == MODE_WINDOW:
        if n1 < 2:
            raise VolaugError("cutmix needs clips of length >= 2")
        r = int(rng.integers(0, n1))
    else:
        r = 0
    return mode, r, delta
