"""Expand video-level class labels into frame-level label tracks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import LabelTrack, VolaugError


def pseudo_label(clip_length: int, class_index: int, num_classes: int) -> LabelTrack:
    """Replicate a single class label onto every frame of a clip.

    Returns a ``clip_length x num_classes`` track whose rows are one-hot at
    ``class_index``; a pure function of its arguments.
    """
    if clip_length < 1:
        raise VolaugError("clip length must be >= 1")
    if not (0 <= class_index < num_classes):
        raise VolaugError("class index out of range")
    weights = np.zeros((clip_length, num_classes), dtype=np.float64)
    weights[:, class_index] = 1.0
    return LabelTrack(weights=weights, num_classes=num_classes)


@dataclass(frozen=True)
class ManifestEntry:
    """One source clip: id, video-level class, and where its VVOL lives."""

    id: str
    class_index: int
    path: str


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a JSON-lines manifest: ``{"id": ..., "class": ..., "path"?: ...}``.

    ``path`` defaults to ``<id>.vvol`` next to the manifest. Blank lines are
    skipped.
    """
    p = Path(path)
    entries = []
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise VolaugError(f"{p}:{lineno}: bad manifest line: {e}") from e
        if "id" not in obj or "class" not in obj:
            raise VolaugError(f"{p}:{lineno}: manifest entry needs 'id' and 'class'")
        clip_path = obj.get("path", f"{obj['id']}.vvol")
        if not Path(clip_path).is_absolute():
            clip_path = str(p.parent / clip_path)
        entries.append(
            ManifestEntry(id=str(obj["id"]), class_index=int(obj["class"]), path=clip_path)
        )
    return entries
