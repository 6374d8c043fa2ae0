"""VVOL binary clip container and the JSON sidecar formats.

Layout (little-endian):

    magic   4 bytes  "VVOL"
    version 1 byte   0x01
    dtype   1 byte   0 = u8, 1 = f32
    T,H,W,C 4x u32
    data    raw frames, t-major then h, w, c

Label sidecar: ``{"num_classes": K, "weights": [[K floats] x T]}``.
Prediction track: ``{"scores": [[K floats] x T]}``.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .core import DTYPE_F32, DTYPE_U8, ClipVolume, LabelTrack, VolaugError

MAGIC = b"VVOL"
VERSION = 1
_HEADER = struct.Struct("<4sBBIIII")
_DTYPE_CODES = {DTYPE_U8: 0, DTYPE_F32: 1}
_CODE_DTYPES = {0: DTYPE_U8, 1: DTYPE_F32}
_NP_DTYPES = {DTYPE_U8: np.dtype(np.uint8), DTYPE_F32: np.dtype("<f4")}


def encode_clip(clip: ClipVolume) -> bytes:
    """Serialize a clip to VVOL bytes."""
    t, h, w, c = clip.frames.shape
    header = _HEADER.pack(MAGIC, VERSION, _DTYPE_CODES[clip.dtype], t, h, w, c)
    data = np.ascontiguousarray(clip.frames, dtype=_NP_DTYPES[clip.dtype])
    return header + data.tobytes()


def decode_clip(buf: bytes, clip_id: str = "") -> ClipVolume:
    """Parse VVOL bytes into a clip, validating the header and payload size."""
    if len(buf) < _HEADER.size:
        raise VolaugError("truncated VVOL header")
    magic, version, code, t, h, w, c = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise VolaugError("not a VVOL file (bad magic)")
    if version != VERSION:
        raise VolaugError(f"unsupported VVOL version {version}")
    if code not in _CODE_DTYPES:
        raise VolaugError(f"unknown VVOL dtype code {code}")
    dtype = _CODE_DTYPES[code]
    np_dtype = _NP_DTYPES[dtype]
    expected = _HEADER.size + t * h * w * c * np_dtype.itemsize
    if len(buf) != expected:
        raise VolaugError(f"VVOL payload size {len(buf)} != expected {expected}")
    frames = np.frombuffer(buf, dtype=np_dtype, offset=_HEADER.size).reshape(t, h, w, c)
    clip = ClipVolume(frames=frames, dtype=dtype, id=clip_id)
    clip.validate_pixels()
    return clip


def write_clip(path: str | Path, clip: ClipVolume) -> None:
    Path(path).write_bytes(encode_clip(clip))


def read_clip(path: str | Path, clip_id: str | None = None) -> ClipVolume:
    p = Path(path)
    return decode_clip(p.read_bytes(), clip_id if clip_id is not None else p.stem)


def _dump_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True) + "\n")


def encode_labels(labels: LabelTrack) -> str:
    return (
        json.dumps(
            {"num_classes": labels.num_classes, "weights": labels.weights.tolist()},
            sort_keys=True,
        )
        + "\n"
    )


def write_labels(path: str | Path, labels: LabelTrack) -> None:
    Path(path).write_text(encode_labels(labels))


def read_labels(path: str | Path) -> LabelTrack:
    d = json.loads(Path(path).read_text())
    return LabelTrack(
        weights=np.asarray(d["weights"], dtype=np.float64),
        num_classes=int(d["num_classes"]),
    )


def write_prediction_track(path: str | Path, scores: np.ndarray) -> None:
    _dump_json({"scores": np.asarray(scores, dtype=np.float64).tolist()}, path)


def read_prediction_track(path: str | Path) -> np.ndarray:
    d = json.loads(Path(path).read_text())
    scores = np.asarray(d["scores"], dtype=np.float64)
    if scores.ndim != 2:
        raise VolaugError(f"prediction track must be TxK, got shape {scores.shape}")
    if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
        raise VolaugError("prediction scores outside [0,1]")
    return scores
