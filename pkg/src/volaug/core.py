"""Core data model and deterministic primitives shared by all augmentations.

Everything here is immutable after construction and safe to share across
worker threads; all functions are pure. Determinism rules used throughout
the package:

* per-sample randomness always comes from a seed derived with
  :func:`derive_seed`, never from global RNG state;
* pixel blending happens in float32 (uint8 clips are rounded half-to-even
  back to uint8 on output);
* label arithmetic happens in float64;
* mask areas are computed as an ordered left-to-right float64 row sum
  divided by the width, so independent implementations can reproduce the
  exact bits.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ClipVolume",
    "LabelTrack",
    "AlphaMask",
    "SpatialMask",
    "AugRecord",
    "truncate01",
    "mask_area",
    "derive_seed",
    "rng_from_seed",
    "round_half_up",
    "algo_fingerprint",
]

DTYPE_U8 = "u8"
DTYPE_F32 = "f32"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

# Bumped whenever an output-affecting numeric convention changes; hashed into
# the fingerprint that conformance suites audit against.
_ALGO_CONVENTIONS = (
    "volaug-algo-v1",
    "rng=pcg64",
    "blend=f32",
    "u8-round=half-even",
    "w_t-round=half-up",
    "labels=f64",
    "mask-area=row-ordered-sum/W",
)


class VolaugError(ValueError):
    """Raised on contract violations (bad parameters, shapes, or inputs)."""


def truncate01(x: float) -> float:
    """Clamp a finite scalar into [0, 1]: 1 if x >= 1, 0 if x < 0, else x."""
    if not math.isfinite(x):
        raise VolaugError("non-finite mask value")
    if x >= 1.0:
        return 1.0
    if x < 0.0:
        return 0.0
    return float(x)


def round_half_up(x: float) -> int:
    """Round to nearest integer with .5 going up (deterministic, monotone)."""
    return int(math.floor(x + 0.5))


def derive_seed(global_seed: int, sample_index: int) -> int:
    """Derive a stable per-sample 64-bit seed from a global seed and an index.

    SplitMix-style finalizer over ``global_seed XOR index*gamma``; pure
    integer math, so the result is identical on every platform. Distinct
    indices always map to distinct seeds for a fixed global seed.
    """
    x = (global_seed ^ ((sample_index * _GAMMA) & _MASK64)) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def rng_from_seed(seed: int) -> np.random.Generator:
    """Build the package-wide RNG (PCG64) from a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def algo_fingerprint() -> str:
    """Hash of the numeric conventions; used for cross-implementation audits."""
    return hashlib.sha256(";".join(_ALGO_CONVENTIONS).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ClipVolume:
    """A T x H x W x C frame tensor with dtype and provenance metadata.

    ``dtype`` is either ``"u8"`` (values 0..255) or ``"f32"`` (values in
    [0, 1]). Frames are kept C-contiguous and read-only.
    """

    frames: np.ndarray
    dtype: str
    id: str = ""

    def __post_init__(self):
        f = self.frames
        if f.ndim != 4:
            raise VolaugError(f"clip tensor must be TxHxWxC, got shape {f.shape}")
        t, h, w, c = f.shape
        if t < 1 or h < 1 or w < 1 or c not in (1, 3):
            raise VolaugError(f"bad clip geometry T={t} H={h} W={w} C={c}")
        if self.dtype == DTYPE_U8:
            if f.dtype != np.uint8:
                raise VolaugError("u8 clip must be backed by a uint8 array")
        elif self.dtype == DTYPE_F32:
            if f.dtype != np.float32:
                raise VolaugError("f32 clip must be backed by a float32 array")
        else:
            raise VolaugError(f"unknown clip dtype {self.dtype!r}")
        f = np.ascontiguousarray(f)
        f.setflags(write=False)
        object.__setattr__(self, "frames", f)

    @property
    def length(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    @property
    def channels(self) -> int:
        return self.frames.shape[3]

    def geometry(self) -> tuple[int, int, int, str]:
        """(H, W, C, dtype) — what two clips must share to be blended."""
        return (self.height, self.width, self.channels, self.dtype)

    def validate_pixels(self) -> None:
        """Range-check pixel values (f32 must lie in [0, 1])."""
        if self.dtype == DTYPE_F32:
            lo = float(self.frames.min())
            hi = float(self.frames.max())
            if lo < 0.0 or hi > 1.0:
                raise VolaugError(f"f32 pixels outside [0,1]: min={lo} max={hi}")

    def with_frames(self, frames: np.ndarray, new_id: str | None = None) -> "ClipVolume":
        return ClipVolume(frames=frames, dtype=self.dtype, id=self.id if new_id is None else new_id)


@dataclass(frozen=True)
class LabelTrack:
    """Per-frame class weights: a T x K float64 matrix with entries in [0, 1].

    For augmentation outputs the per-frame mass is exactly 1 on one-hot or
    blended frames and exactly 0 on frozen background frames; as detection
    ground truth the rows are binary and mass counts the active classes.
    """

    weights: np.ndarray
    num_classes: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2:
            raise VolaugError(f"label track must be TxK, got shape {w.shape}")
        if w.shape[1] != self.num_classes:
            raise VolaugError(
                f"label track has {w.shape[1]} columns, expected {self.num_classes}"
            )
        # no row-mass bound here: soft augmentation tracks keep mass <= 1
        # (asserted where they are produced), but the same type carries
        # multi-label ground truth whose mass is the active-class count
        if w.size and (w.min() < 0.0 or w.max() > 1.0 + 1e-12):
            raise VolaugError("label weights outside [0,1]")
        w = np.ascontiguousarray(w)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def length(self) -> int:
        return self.weights.shape[0]

    def row_mass(self) -> np.ndarray:
        return self.weights.sum(axis=1)


@dataclass(frozen=True)
class AlphaMask:
    """Length-L vector of per-frame blend weights in [0, 1].

    ``scenario`` is 1 when the composite transitions clip1 -> clip2
    (monotone non-increasing weights) and 2 when it transitions
    clip1 -> clip2 -> clip1 (a dip that returns to 1).
    """

    values: np.ndarray
    scenario: int
    params: tuple[int, int, int]  # (n1, n2, r)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 1:
            raise VolaugError("alpha mask must be a non-empty vector")
        if v.min() < 0.0 or v.max() > 1.0:
            raise VolaugError("alpha values outside [0,1]")
        if self.scenario not in (1, 2):
            raise VolaugError(f"bad scenario {self.scenario}")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def length(self) -> int:
        return self.values.shape[0]


def _mask_row(width: int, split_column: int, delta: int) -> list[float]:
    """One row of the vertical-split mask: 1 left of the band, 0 right of it,
    linear across the 2*delta transition. Split columns at the frame edges
    degenerate to constant rows so a fully absent side never bleeds in.
    """
    if split_column <= 0:
        return [0.0] * width
    if split_column >= width:
        return [1.0] * width
    inv = 1.0 / (2.0 * delta)
    row = []
    for j in range(width):
        if j < split_column - delta:
            row.append(1.0)
        elif j >= split_column + delta:
            row.append(0.0)
        else:
            row.append((split_column + delta - j) * inv)
    return row


def _row_area(row: list[float], width: int) -> float:
    # Ordered left-to-right accumulation; the exact bits are part of the
    # contract (independent implementations must reproduce them).
    s = 0.0
    for v in row:
        s += v
    return s / width


@dataclass(frozen=True)
class SpatialMask:
    """H x W per-pixel weights for a vertical-split composite.

    Every row is identical and non-increasing left to right: 1 for
    ``j < split_column - delta``, 0 for ``j >= split_column + delta``,
    linear across the 2*delta band. ``area`` is the mean weight, computed
    once from the row.
    """

    values: np.ndarray
    split_column: int
    transition_half_width: int
    area: float = field(default=-1.0)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise VolaugError("spatial mask must be HxW")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.area < 0.0:
            row = [float(x) for x in v[0]]
            object.__setattr__(self, "area", _row_area(row, v.shape[1]))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def spatial_mask(height: int, width: int, split_column: int, delta: int) -> SpatialMask:
    """Build the vertical-split mask for a frame of the given size.

    ``split_column`` must lie in [0, width]; ``delta`` in [1, width/4].
    """
    if height < 1 or width < 1:
        raise VolaugError("mask needs positive dimensions")
    if not (0 <= split_column <= width):
        raise VolaugError(f"split column {split_column} outside [0, {width}]")
    if not (1 <= delta <= width / 4):
        raise VolaugError(f"transition half-width {delta} outside [1, {width / 4:g}]")
    row = _mask_row(width, split_column, delta)
    values = np.tile(np.asarray(row, dtype=np.float64), (height, 1))
    return SpatialMask(
        values=values,
        split_column=split_column,
        transition_half_width=delta,
        area=_row_area(row, width),
    )


def mask_area(mask: SpatialMask) -> float:
    """Mean of all mask elements, in [0, 1]."""
    return mask.area


@dataclass(frozen=True)
class AugRecord:
    """Provenance of one augmented sample.

    Replaying ``params`` against the same source clips reproduces the output
    bit-exactly; ``seed`` records where the parameters were drawn from.
    """

    kind: str  # freeze | mixup | cutmix_window | cutmix_view | none
    sources: tuple[str, ...]
    params: dict
    seed: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "sources": list(self.sources),
            "params": self.params,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "AugRecord":
        return AugRecord(
            kind=d["kind"],
            sources=tuple(d["sources"]),
            params=dict(d["params"]),
            seed=int(d["seed"]),
        )


def require_shared_geometry(a: ClipVolume, b: ClipVolume) -> None:
    if a.geometry() != b.geometry():
        raise VolaugError(
            f"incompatible clip geometry: {a.geometry()} vs {b.geometry()}"
        )
