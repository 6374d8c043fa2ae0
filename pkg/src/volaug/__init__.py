"""Deterministic volume augmentations and per-frame detection evaluation.

Turns single-action clips with video-level labels into detection-style
training data: frozen background segments, temporally blended multi-action
frames and vertically composited frames, each with per-frame soft labels,
plus the matching per-frame mAP evaluation protocols.
"""

__version__ = "0.1.0"

from .core import (
    AlphaMask,
    AugRecord,
    ClipVolume,
    LabelTrack,
    SpatialMask,
    VolaugError,
    algo_fingerprint,
    derive_seed,
    mask_area,
    rng_from_seed,
    round_half_up,
    spatial_mask,
    truncate01,
)
from .cutmix import cutmix_view, cutmix_window, default_delta, sample_cutmix_params
from .evaluate import (
    EvalReport,
    average_precision,
    evaluate_detection,
    map_charades_protocol,
    map_per_frame,
    split_statistics,
)
from .freeze import freeze, freeze_multi, sample_freeze_params
from .mixup import (
    alpha_mask,
    alpha_mask_at_resolution,
    fit_length,
    mixup,
    mixup_hard,
    sample_mixup_shift,
)
from .pipeline import PipelineConfig, run_pipeline, window_sample
from .policy import PredictionTrack, apply_record, ensemble, joint_policy
from .pseudo import ManifestEntry, pseudo_label, read_manifest
from .vvol import (
    decode_clip,
    encode_clip,
    read_clip,
    read_labels,
    read_prediction_track,
    write_clip,
    write_labels,
    write_prediction_track,
)

__all__ = [
    "__version__",
    "AlphaMask",
    "AugRecord",
    "ClipVolume",
    "EvalReport",
    "LabelTrack",
    "ManifestEntry",
    "PipelineConfig",
    "PredictionTrack",
    "SpatialMask",
    "VolaugError",
    "algo_fingerprint",
    "alpha_mask",
    "alpha_mask_at_resolution",
    "apply_record",
    "average_precision",
    "cutmix_view",
    "cutmix_window",
    "decode_clip",
    "default_delta",
    "derive_seed",
    "encode_clip",
    "ensemble",
    "evaluate_detection",
    "fit_length",
    "freeze",
    "freeze_multi",
    "joint_policy",
    "map_charades_protocol",
    "map_per_frame",
    "mask_area",
    "mixup",
    "mixup_hard",
    "pseudo_label",
    "read_clip",
    "read_labels",
    "read_manifest",
    "read_prediction_track",
    "rng_from_seed",
    "round_half_up",
    "run_pipeline",
    "sample_cutmix_params",
    "sample_freeze_params",
    "sample_mixup_shift",
    "spatial_mask",
    "split_statistics",
    "truncate01",
    "window_sample",
    "write_clip",
    "write_labels",
    "write_prediction_track",
]
