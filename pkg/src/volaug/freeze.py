"""Volume freeze: replicate one frame into a motionless background segment.

Freezing frame ``r`` for ``m`` positions shifts the rest of the clip right
and drops whatever overflows the end, so length is preserved:

    frames -> [f0..f_{r-1}, f_r * m, f_{r+1}..f_{n-m}]
    labels -> [l0..l_{r-1}, 0 * m,   l_{r+1}..l_{n-m}]

The frozen run carries zero label mass (no motion means no action).
"""

from __future__ import annotations

import numpy as np

from .core import AugRecord, ClipVolume, LabelTrack, VolaugError


def freeze(
    clip: ClipVolume,
    labels: LabelTrack,
    r: int,
    m: int,
    seed: int = 0,
) -> tuple[ClipVolume, LabelTrack, AugRecord]:
    """Freeze frame ``r`` (0-based) for ``m`` positions.

    Requires ``0 <= r <= n-2`` and ``2 <= m <= n-r``; output length equals
    input length.
    """
    n = clip.length
    if labels.length != n:
        raise VolaugError(f"labels length {labels.length} != clip length {n}")
    if not (0 <= r <= n - 2):
        raise VolaugError(f"freeze start r={r} outside [0, {n - 2}]")
    if not (2 <= m <= n - r):
        raise VolaugError(f"freeze length m={m} outside [2, {n - r}]")

    f = clip.frames
    frames = np.concatenate(
        [f[:r], np.repeat(f[r : r + 1], m, axis=0), f[r + 1 : n - m + 1]], axis=0
    )
    w = labels.weights
    zeros = np.zeros((m, labels.num_classes), dtype=np.float64)
    weights = np.concatenate([w[:r], zeros, w[r + 1 : n - m + 1]], axis=0)

    record = AugRecord(
        kind="freeze",
        sources=(clip.id,),
        params={"segments": [[int(r), int(m)]]},
        seed=seed,
    )
    out_clip = clip.with_frames(frames)
    out_labels = LabelTrack(weights=weights, num_classes=labels.num_classes)
    return out_clip, out_labels, record


def freeze_multi(
    clip: ClipVolume,
    labels: LabelTrack,
    segments: list[tuple[int, int]],
    seed: int = 0,
) -> tuple[ClipVolume, LabelTrack, AugRecord]:
    """Apply several freezes sequentially; each (r, m) sees the prior result."""
    out_clip, out_labels = clip, labels
    applied = []
    for r, m in segments:
        out_clip, out_labels, _ = freeze(out_clip, out_labels, r, m, seed=seed)
        applied.append([int(r), int(m)])
    record = AugRecord(
        kind="freeze", sources=(clip.id,), params={"segments": applied}, seed=seed
    )
    return out_clip, out_labels, record


def sample_freeze_params(n: int, rng: np.random.Generator) -> tuple[int, int]:
    """Draw (r, m): r uniform on [0, n-2], then m uniform on [2, n-r]."""
    if n < 3:
        raise VolaugError("clip too short to freeze")
    r = int(rng.integers(0, n - 1))
    m = int(rng.integers(2, n - r + 1))
    return r, m
