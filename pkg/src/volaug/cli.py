"""volaug command-line interface.

Subcommands: freeze, mixup, cutmix, mask, pipeline, ensemble, eval,
inspect, version. Augmentation subcommands read VVOL clips plus label
sidecars and write the augmented clip, its labels and the provenance
record next to ``--out``. ``eval`` writes a JSON report, a per-class CSV
and figures alongside it.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, vvol
from .core import (
    AugRecord,
    VolaugError,
    algo_fingerprint,
    rng_from_seed,
    spatial_mask,
)
from .cutmix import MODE_VIEW, MODE_WINDOW, cutmix_view, cutmix_window, default_delta
from .evaluate import evaluate_detection
from .freeze import freeze_multi, sample_freeze_params
from .mixup import alpha_mask, alpha_mask_at_resolution, fit_length, mixup, mixup_hard, sample_mixup_shift
from .pipeline import EXIT_FATAL, PipelineConfig, run_pipeline
from .policy import PredictionTrack, ensemble
from .pseudo import pseudo_label


def _write_outputs(out_dir: str, clip, labels, record: AugRecord) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    kind = record.kind.replace("_", "-")
    base = f"{record.sources[0]}__{kind}__{record.seed:016x}"
    vvol.write_clip(out / f"{base}.vvol", clip)
    vvol.write_labels(out / f"{base}.labels.json", labels)
    (out / f"{base}.record.json").write_text(
        json.dumps(record.to_dict(), sort_keys=True) + "\n"
    )
    print(out / f"{base}.vvol")
    return out / f"{base}.vvol"


def _load_pair(clip_path: str, labels_path: str):
    clip = vvol.read_clip(clip_path)
    labels = vvol.read_labels(labels_path)
    if labels.length != clip.length:
        raise VolaugError(
            f"labels length {labels.length} != clip length {clip.length}"
        )
    return clip, labels


def _cmd_freeze(args) -> int:
    clip, labels = _load_pair(getattr(args, "in"), args.labels)
    rng = rng_from_seed(args.seed)
    # length is preserved by every freeze, so the sampling domain is stable
    segments = [sample_freeze_params(clip.length, rng) for _ in range(args.segments)]
    out_clip, out_labels, record = freeze_multi(clip, labels, segments, seed=args.seed)
    _write_outputs(args.out, out_clip, out_labels, record)
    return 0


def _cmd_mixup(args) -> int:
    clip1, labels1 = _load_pair(args.a, args.labels_a)
    clip2, labels2 = _load_pair(args.b, args.labels_b)
    rng = rng_from_seed(args.seed)
    r = sample_mixup_shift(clip1.length, clip2.length, rng)
    fn = mixup_hard if args.hard else mixup
    out_clip, out_labels, record = fn(clip1, labels1, clip2, labels2, r, seed=args.seed)
    if args.fit is not None:
        out_clip, out_labels = fit_length(out_clip, out_labels, args.fit)
        record = AugRecord(
            kind=record.kind, sources=record.sources,
            params={**record.params, "fit": args.fit}, seed=record.seed,
        )
    _write_outputs(args.out, out_clip, out_labels, record)
    return 0


def _cmd_cutmix(args) -> int:
    clip1, labels1 = _load_pair(args.a, args.labels_a)
    clip2, labels2 = _load_pair(args.b, args.labels_b)
    rng = rng_from_seed(args.seed)
    if args.mode == MODE_VIEW:
        out_clip, out_labels, record = cutmix_view(
            clip1, labels1, clip2, labels2, delta=args.delta, seed=args.seed
        )
    else:
        r = sample_mixup_shift(clip1.length, clip2.length, rng)
        out_clip, out_labels, record = cutmix_window(
            clip1, labels1, clip2, labels2, r, delta=args.delta, seed=args.seed
        )
    _write_outputs(args.out, out_clip, out_labels, record)
    return 0


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_mask_mixup(args) -> int:
    if args.out_res is not None:
        mask = alpha_mask_at_resolution(args.n1, args.n2, args.r, args.out_res)
    else:
        mask = alpha_mask(args.n1, args.n2, args.r)
    _emit(
        {
            "values": mask.values.tolist(),
            "scenario": mask.scenario,
            "params": {"n1": args.n1, "n2": args.n2, "r": args.r},
        },
        args.out,
    )
    if args.plot:
        from .plots import plot_alpha_mask

        plot_alpha_mask(mask, args.plot)
    return 0


def _cmd_mask_cutmix(args) -> int:
    delta = args.delta if args.delta is not None else default_delta(args.w)
    mask = spatial_mask(args.rows, args.w, args.wt, delta)
    _emit(
        {
            "row": mask.values[0].tolist(),
            "area": mask.area,
            "split_column": mask.split_column,
            "delta": mask.transition_half_width,
        },
        args.out,
    )
    if args.plot:
        from .plots import plot_spatial_mask

        plot_spatial_mask(mask, args.plot)
    return 0


def _cmd_pipeline(args) -> int:
    cfg = {}
    if args.config:
        cfg = json.loads(Path(args.config).read_text())
    overrides = {
        "seed": args.seed,
        "policy": args.policy,
        "workers": args.workers,
        "window": args.window,
        "stride": args.stride,
        "fit": args.fit,
        "delta": args.delta,
        "mode": args.mode,
        "batch": args.batch,
        "num_classes": args.num_classes,
    }
    if args.probs:
        parts = [float(x) for x in args.probs.split(",")]
        if len(parts) != 3:
            raise VolaugError("--probs needs three comma-separated values")
        overrides["probs"] = tuple(parts)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    config = PipelineConfig.from_dict(cfg)
    summary = run_pipeline(args.manifest, args.out, config, resume=args.resume)
    print(
        f"produced {summary.produced} samples, skipped {summary.skipped} "
        f"(log: {summary.log_path})"
    )
    return summary.exit_code


def _cmd_ensemble(args) -> int:
    tracks = [PredictionTrack(scores=vvol.read_prediction_track(p)) for p in getattr(args, "in")]
    combined = ensemble(tracks, method="geometric" if args.geometric else "mean")
    vvol.write_prediction_track(args.out, combined.scores)
    print(args.out)
    return 0


def _collect_eval_inputs(preds_dir: str, truth_dir: str):
    preds, truths, ids = [], [], []
    truth_files = {p.stem: p for p in sorted(Path(truth_dir).glob("*.json"))}
    for pred_file in sorted(Path(preds_dir).glob("*.json")):
        truth_file = truth_files.get(pred_file.stem)
        if truth_file is None:
            raise VolaugError(f"no truth file for prediction {pred_file.name}")
        preds.append(PredictionTrack(scores=vvol.read_prediction_track(pred_file)))
        truths.append(vvol.read_labels(truth_file))
        ids.append(pred_file.stem)
    if not preds:
        raise VolaugError(f"no prediction tracks found in {preds_dir}")
    return preds, truths, ids


def _cmd_eval(args) -> int:
    preds, truths, _ = _collect_eval_inputs(args.preds, args.truth)
    weights = None
    if args.weights:
        doc = json.loads(Path(args.weights).read_text())
        weights = np.asarray(doc["weights"] if isinstance(doc, dict) else doc, dtype=np.float64)
    protocol = {"per-frame": "per-frame", "charades25": "charades25"}[args.protocol]
    report = evaluate_detection(
        preds, truths, protocol=protocol, class_weights=weights, dilation=args.dilation
    )
    report_path = Path(args.report)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    report_path.write_text(json.dumps(report.to_dict(), sort_keys=True, indent=1) + "\n")

    csv_path = report_path.with_suffix(".csv")
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class", "ap_percent"])
        for c, ap in enumerate(report.per_class_ap):
            writer.writerow([c, "" if np.isnan(ap) else f"{ap:.6f}"])
        writer.writerow(["map", f"{report.map:.6f}"])

    figures = []
    if not args.no_figures:
        from .plots import plot_per_class_ap, plot_split_maps

        figures.append(plot_per_class_ap(report, report_path.with_suffix(".ap.png")))
        if report.split_maps:
            figures.append(plot_split_maps(report, report_path.with_suffix(".splits.png")))

    print(f"mAP: {report.map:.4f}%  ({report.protocol}, {report.num_videos} videos)")
    for name, value in report.split_maps.items():
        shown = "absent" if value is None else f"{value:.4f}%"
        print(f"  {name}: {shown}")
    print(f"report: {report_path}, csv: {csv_path}" + (
        f", figures: {', '.join(str(f) for f in figures)}" if figures else ""))
    return 0


def _cmd_inspect(args) -> int:
    clip = vvol.read_clip(args.path)
    t, h, w, c = clip.frames.shape
    print(json.dumps(
        {"id": clip.id, "dtype": clip.dtype, "T": t, "H": h, "W": w, "C": c,
         "bytes": clip.frames.nbytes},
        sort_keys=True,
    ))
    return 0


def _cmd_version(_args) -> int:
    print(json.dumps({"version": __version__, "config_hash": algo_fingerprint()},
                     sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="volaug",
                                description="volume augmentations and per-frame detection evaluation")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("freeze", help="freeze a random segment of a clip")
    f.add_argument("--in", required=True, help="input .vvol clip")
    f.add_argument("--labels", required=True, help="input label track JSON")
    f.add_argument("--seed", type=int, required=True)
    f.add_argument("--segments", type=int, default=1)
    f.add_argument("--out", default=".")
    f.set_defaults(fn=_cmd_freeze)

    m = sub.add_parser("mixup", help="blend two clips with the temporal mask")
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.add_argument("--labels-a", required=True)
    m.add_argument("--labels-b", required=True)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--hard", action="store_true")
    m.add_argument("--fit", type=int, default=None)
    m.add_argument("--out", default=".")
    m.set_defaults(fn=_cmd_mixup)

    c = sub.add_parser("cutmix", help="vertical-split composite of two clips")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--labels-a", required=True)
    c.add_argument("--labels-b", required=True)
    c.add_argument("--mode", choices=[MODE_WINDOW, MODE_VIEW], default=MODE_WINDOW)
    c.add_argument("--delta", type=int, default=None)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--out", default=".")
    c.set_defaults(fn=_cmd_cutmix)

    mask = sub.add_parser("mask", help="emit blend masks as JSON (and figures)")
    mask_sub = mask.add_subparsers(dest="mask_kind", required=True)
    mm = mask_sub.add_parser("mixup", help="temporal alpha mask")
    mm.add_argument("--n1", type=int, required=True)
    mm.add_argument("--n2", type=int, required=True)
    mm.add_argument("--r", type=int, required=True)
    mm.add_argument("--out-res", type=int, default=None)
    mm.add_argument("--out", default=None)
    mm.add_argument("--plot", default=None)
    mm.set_defaults(fn=_cmd_mask_mixup)
    mc = mask_sub.add_parser("cutmix", help="one spatial mask row")
    mc.add_argument("--w", type=int, required=True, help="frame width")
    mc.add_argument("--wt", type=int, required=True, help="split column")
    mc.add_argument("--delta", type=int, default=None)
    mc.add_argument("--rows", type=int, default=1, help="mask height")
    mc.add_argument("--out", default=None)
    mc.add_argument("--plot", default=None)
    mc.set_defaults(fn=_cmd_mask_cutmix)

    pl = sub.add_parser("pipeline", help="augment a whole manifest")
    pl.add_argument("--manifest", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--config", default=None, help="JSON config file")
    pl.add_argument("--policy", choices=["joint", "single:vf", "single:vm", "single:vc"],
                    default=None)
    pl.add_argument("--probs", default=None, help="p_vf,p_vm,p_vc")
    pl.add_argument("--seed", type=int, default=None)
    pl.add_argument("--workers", type=int, default=None)
    pl.add_argument("--window", type=int, default=None)
    pl.add_argument("--stride", type=int, default=None)
    pl.add_argument("--fit", type=int, default=None)
    pl.add_argument("--delta", type=int, default=None)
    pl.add_argument("--mode", choices=[MODE_WINDOW, MODE_VIEW], default=None)
    pl.add_argument("--batch", type=int, default=None)
    pl.add_argument("--num-classes", type=int, default=None)
    pl.add_argument("--resume", action="store_true")
    pl.set_defaults(fn=_cmd_pipeline)

    e = sub.add_parser("ensemble", help="average prediction tracks")
    e.add_argument("--in", nargs="+", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--geometric", action="store_true")
    e.set_defaults(fn=_cmd_ensemble)

    ev = sub.add_parser("eval", help="per-frame detection evaluation")
    ev.add_argument("--preds", required=True, help="directory of prediction JSONs")
    ev.add_argument("--truth", required=True, help="directory of truth label JSONs")
    ev.add_argument("--protocol", choices=["per-frame", "charades25"], default="per-frame")
    ev.add_argument("--weights", default=None, help="class weight JSON (charades25)")
    ev.add_argument("--dilation", type=int, default=3)
    ev.add_argument("--report", required=True)
    ev.add_argument("--no-figures", action="store_true")
    ev.set_defaults(fn=_cmd_eval)

    ins = sub.add_parser("inspect", help="print VVOL header fields")
    ins.add_argument("path")
    ins.set_defaults(fn=_cmd_inspect)

    v = sub.add_parser("version", help="print version and algorithm fingerprint")
    v.set_defaults(fn=_cmd_version)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except VolaugError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FATAL
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
