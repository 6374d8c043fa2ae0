"""Streaming, parallel, deterministic batch driver.

Manifest entries are grouped into fixed-size batches by manifest order;
each batch is augmented by a stateless worker and written by the single
writer (the main thread). Every random draw comes from a seed derived from
(global seed, batch index) or (global seed, manifest index), so outputs
are byte-identical for any worker count and across runs. In-flight batches
are bounded, keeping at most ``workers + queue`` batches of clips resident.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import ClipVolume, LabelTrack, VolaugError, derive_seed, rng_from_seed
from .cutmix import MODE_VIEW, MODE_WINDOW
from .policy import joint_policy
from .pseudo import ManifestEntry, pseudo_label, read_manifest
from .mixup import fit_length
from . import vvol

log = logging.getLogger("volaug")

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_SKIPS = 2

_BATCH_SALT = 0x8F1BBCDC5A17C0DE

POLICIES = ("joint", "single:vf", "single:vm", "single:vc")
_FORCED_PROBS = {
    "single:vf": (1.0, 0.0, 0.0),
    "single:vm": (0.0, 1.0, 0.0),
    "single:vc": (0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class PipelineConfig:
    """Run configuration; hashed into the run log for provenance."""

    seed: int = 0
    policy: str = "joint"
    probs: tuple[float, float, float] = (0.5, 0.5, 0.5)
    window: int | None = None
    stride: int = 1
    fit: int | None = None
    delta: int | None = None
    mode: str = MODE_WINDOW
    workers: int = 1
    batch: int = 8
    num_classes: int = 400

    def validate(self) -> None:
        if self.policy not in POLICIES:
            raise VolaugError(f"unknown policy {self.policy!r}")
        if self.mode not in (MODE_WINDOW, MODE_VIEW):
            raise VolaugError(f"unknown cutmix mode {self.mode!r}")
        if self.mode == MODE_VIEW and self.window is None:
            # view mode needs equal-length partners, which only windowing
            # guarantees up front
            raise VolaugError("cutmix view mode requires a window length")
        if self.workers < 1 or self.batch < 1 or self.num_classes < 1:
            raise VolaugError("workers, batch and num_classes must be >= 1")
        if self.window is not None and (self.window < 1 or self.stride < 1):
            raise VolaugError("window and stride must be >= 1")
        for p in self.probs:
            if not (0.0 <= p <= 1.0):
                raise VolaugError(f"probability {p} outside [0,1]")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "policy": self.policy,
            "probs": list(self.probs),
            "window": self.window,
            "stride": self.stride,
            "fit": self.fit,
            "delta": self.delta,
            "mode": self.mode,
            "workers": self.workers,
            "batch": self.batch,
            "num_classes": self.num_classes,
        }

    def content_hash(self) -> str:
        d = self.to_dict()
        d.pop("workers")  # execution detail; must not affect outputs
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    @staticmethod
    def from_dict(d: dict) -> "PipelineConfig":
        known = {f for f in PipelineConfig.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise VolaugError(f"unknown config keys: {sorted(extra)}")
        if "probs" in d:
            d = dict(d)
            d["probs"] = tuple(float(p) for p in d["probs"])
        return PipelineConfig(**d)


def window_sample(
    clip: ClipVolume,
    window: int,
    stride: int,
    start: int = 0,
    labels: LabelTrack | None = None,
):
    """Take ``window`` frames at ``start + i*stride``; labels slice along.

    Returns the sampled clip, or a (clip, labels) pair when labels are given.
    """
    if window < 1 or stride < 1 or start < 0:
        raise VolaugError("window, stride must be >= 1 and start >= 0")
    last = start + (window - 1) * stride
    if last >= clip.length:
        raise VolaugError(
            f"clip too short for window: needs frame {last}, has {clip.length}"
        )
    idx = start + np.arange(window) * stride
    out = clip.with_frames(np.ascontiguousarray(clip.frames[idx]))
    if labels is None:
        return out
    if labels.length != clip.length:
        raise VolaugError("labels length must match clip length")
    sliced = LabelTrack(
        weights=np.ascontiguousarray(labels.weights[idx]),
        num_classes=labels.num_classes,
    )
    return out, sliced


@dataclass
class _SampleOut:
    index: int
    id: str
    seed: int
    kind: str
    clip_bytes: bytes
    labels_json: str
    record_json: str
    base_name: str


@dataclass
class _BatchResult:
    samples: list[_SampleOut] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    loaded_clips: int = 0


@dataclass
class RunSummary:
    exit_code: int
    produced: int
    skipped: int
    log_path: Path


class _BufferGauge:
    """Tracks how many clips are resident across workers at once."""

    def __init__(self):
        self._lock = threading.Lock()
        self._current = 0
        self.peak = 0

    def add(self, n: int) -> None:
        with self._lock:
            self._current += n
            self.peak = max(self.peak, self._current)

    def remove(self, n: int) -> None:
        with self._lock:
            self._current -= n


def _load_sample(
    entry: ManifestEntry, config: PipelineConfig
) -> tuple[ClipVolume, LabelTrack]:
    clip = vvol.read_clip(entry.path, clip_id=entry.id)
    if config.window is not None:
        clip = window_sample(clip, config.window, config.stride)
    labels = pseudo_label(clip.length, entry.class_index, config.num_classes)
    return clip, labels


def _process_batch(
    batch_index: int,
    members: list[tuple[int, ManifestEntry]],
    config: PipelineConfig,
    gauge: _BufferGauge,
) -> _BatchResult:
    result = _BatchResult()
    samples = []
    indices = []
    for mi, entry in members:
        try:
            samples.append(_load_sample(entry, config))
            indices.append(mi)
        except (VolaugError, OSError) as e:
            result.skipped.append({"index": mi, "id": entry.id, "error": str(e)})
    if not samples:
        return result
    gauge.add(len(samples))
    result.loaded_clips = len(samples)
    try:
        probs = _FORCED_PROBS.get(config.policy, config.probs)
        rng = rng_from_seed(derive_seed(config.seed ^ _BATCH_SALT, batch_index))
        augmented, records = joint_policy(
            samples, probs, rng, cutmix_mode=config.mode, delta=config.delta
        )
        by_index = {mi: e for mi, e in members}
        for (clip, labels), recs, mi in zip(augmented, records, indices):
            if config.fit is not None:
                clip, labels = fit_length(clip, labels, config.fit)
            sample_seed = derive_seed(config.seed, mi)
            recs = [replace(rec, seed=sample_seed) for rec in recs]
            applied = [r.kind for r in recs if r.kind != "none"]
            kind = "+".join(applied) if applied else "none"
            base = f"{by_index[mi].id}__{kind.replace('_', '-')}__{sample_seed:016x}"
            record_doc = {
                "index": mi,
                "id": by_index[mi].id,
                "seed": sample_seed,
                "records": [r.to_dict() for r in recs],
            }
            result.samples.append(
                _SampleOut(
                    index=mi,
                    id=by_index[mi].id,
                    seed=sample_seed,
                    kind=kind,
                    clip_bytes=vvol.encode_clip(clip),
                    labels_json=vvol.encode_labels(labels),
                    record_json=json.dumps(record_doc, sort_keys=True) + "\n",
                    base_name=base,
                )
            )
    finally:
        gauge.remove(len(samples))
    return result


def _write_sample(out_dir: Path, s: _SampleOut, resume: bool) -> dict:
    paths = {
        "clip": out_dir / f"{s.base_name}.vvol",
        "labels": out_dir / f"{s.base_name}.labels.json",
        "record": out_dir / f"{s.base_name}.record.json",
    }
    payloads = {
        "clip": s.clip_bytes,
        "labels": s.labels_json.encode(),
        "record": s.record_json.encode(),
    }
    digests = {}
    for key, path in paths.items():
        data = payloads[key]
        if not (resume and path.exists()):
            path.write_bytes(data)
        digests[key] = hashlib.sha256(data).hexdigest()
    return {
        "index": s.index,
        "id": s.id,
        "kind": s.kind,
        "seed": f"{s.seed:016x}",
        "files": {k: p.name for k, p in paths.items()},
        "digests": digests,
    }


def run_pipeline(
    manifest_path: str | Path,
    out_dir: str | Path,
    config: PipelineConfig,
    resume: bool = False,
) -> RunSummary:
    """Augment every manifest entry and persist clips, labels and records.

    Returns a summary whose exit code is 0 on success, 2 when samples were
    skipped, and raises :class:`VolaugError` on fatal configuration or
    manifest problems.
    """
    config.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = read_manifest(manifest_path)

    batches = []
    for b0 in range(0, len(entries), config.batch):
        members = [(i, entries[i]) for i in range(b0, min(b0 + config.batch, len(entries)))]
        batches.append((len(batches), members))

    gauge = _BufferGauge()
    sample_rows: list[dict] = []
    skipped: list[dict] = []
    max_inflight = config.workers * 2  # workers + an equal-size ready queue

    with ThreadPoolExecutor(max_workers=config.workers) as ex:
        pending = set()
        it = iter(batches)
        while True:
            while len(pending) < max_inflight:
                nxt = next(it, None)
                if nxt is None:
                    break
                pending.add(ex.submit(_process_batch, nxt[0], nxt[1], config, gauge))
            if not pending:
                break
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                res = fut.result()
                skipped.extend(res.skipped)
                for s in res.samples:
                    sample_rows.append(_write_sample(out, s, resume))

    sample_rows.sort(key=lambda r: r["index"])
    skipped.sort(key=lambda r: r["index"])
    for row in skipped:
        log.error("skipped sample %d (%s): %s", row["index"], row["id"], row["error"])

    run_log = {
        "global_seed": config.seed,
        "config": config.to_dict(),
        "config_hash": config.content_hash(),
        "counts": {
            "manifest": len(entries),
            "produced": len(sample_rows),
            "skipped": len(skipped),
        },
        "samples": sample_rows,
        "skipped": skipped,
        "runtime": {"peak_buffers": gauge.peak, "workers": config.workers},
    }
    log_path = out / "run_log.json"
    log_path.write_text(json.dumps(run_log, indent=1, sort_keys=True) + "\n")

    code = EXIT_SKIPS if skipped else EXIT_OK
    return RunSummary(
        exit_code=code,
        produced=len(sample_rows),
        skipped=len(skipped),
        log_path=log_path,
    )
