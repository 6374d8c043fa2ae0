/** Vertical-split composites mirroring the core's cutmix modes. */

import {
  BindingError,
  Clip,
  Labels,
  defaultDelta,
  frameSize,
  makeClip,
  maskRow,
  roundHalfUp,
  rowArea,
  sameGeometry,
} from "./core.js";
import { MixResult, alphaMask, blendFrame } from "./mixup.js";

function checkDelta(width: number, delta: number): number {
  if (!(delta >= 1 && delta <= width / 4)) {
    throw new BindingError(`transition half-width ${delta} outside [1, ${width / 4}]`);
  }
  return delta;
}

export function cutmixWindow(
  clip1: Clip,
  labels1: Labels,
  clip2: Clip,
  labels2: Labels,
  r: number,
  delta?: number,
): MixResult {
  sameGeometry(clip1, clip2);
  if (labels1.k !== labels2.k) throw new BindingError("class count mismatch");
  const w = clip1.w;
  const d = checkDelta(w, delta ?? defaultDelta(w));
  const mask = alphaMask(clip1.t, clip2.t, r);
  const k = labels1.k;
  const fs = frameSize(clip1);
  const frames =
    clip1.dtype === "u8"
      ? new Uint8Array(mask.length * fs)
      : new Float32Array(mask.length * fs);
  const weights = new Float64Array(mask.length * k);

  for (let t = 0; t < mask.length; t++) {
    const split = roundHalfUp(w * mask.values[t]);
    const row = maskRow(w, split, d);
    const area = rowArea(row);
    const inA = t < clip1.t;
    const inB = t >= r && t < r + clip2.t;
    blendFrame(
      frames,
      t * fs,
      inA ? clip1.frames : null,
      inA ? t * fs : 0,
      inB ? clip2.frames : null,
      inB ? (t - r) * fs : 0,
      row,
      clip1.h,
      clip1.w,
      clip1.c,
      clip1.dtype,
    );
    for (let ci = 0; ci < k; ci++) {
      const la = inA ? labels1.weights[t * k + ci] : 0.0;
      const lb = inB ? labels2.weights[(t - r) * k + ci] : 0.0;
      weights[t * k + ci] = area * la + (1.0 - area) * lb;
    }
  }
  return {
    clip: makeClip(frames, mask.length, clip1.h, clip1.w, clip1.c, clip1.dtype, clip1.id),
    labels: { weights, t: mask.length, k },
  };
}

export function panOffsets(length: number, width: number): number[] {
  const half = Math.floor(width / 2);
  const out: number[] = [];
  for (let t = 0; t < length; t++) out.push(roundHalfUp((t * half) / (length - 1)));
  return out;
}

export function cutmixView(
  clip1: Clip,
  labels1: Labels,
  clip2: Clip,
  labels2: Labels,
  delta?: number,
): MixResult {
  sameGeometry(clip1, clip2);
  if (clip1.t !== clip2.t) throw new BindingError("transient view requires equal lengths");
  if (clip1.t < 2) throw new BindingError("transient view needs clips of length >= 2");
  if (clip1.w % 2 !== 0) throw new BindingError("transient view requires an even width");
  if (labels1.k !== labels2.k) throw new BindingError("class count mismatch");
  const { t: n, h, w, c } = clip1;
  const half = w / 2;
  const d = checkDelta(w, delta ?? defaultDelta(w));
  const row = maskRow(w, half, d);
  const offsets = panOffsets(n, w);
  const fs = frameSize(clip1);
  const frames = clip1.dtype === "u8" ? new Uint8Array(n * fs) : new Float32Array(n * fs);
  const k = labels1.k;
  const weights = new Float64Array(n * k);

  // panned copies of each frame, pan index clamped at the frame edge
  const fa = clip1.dtype === "u8" ? new Uint8Array(fs) : new Float32Array(fs);
  const fb = clip1.dtype === "u8" ? new Uint8Array(fs) : new Float32Array(fs);
  for (let t = 0; t < n; t++) {
    const o = offsets[t];
    for (let i = 0; i < h; i++) {
      for (let j = 0; j < w; j++) {
        const j1 = Math.min(Math.max(j + o, 0), w - 1);
        const j2 = Math.min(Math.max(j + o - half, 0), w - 1);
        for (let ci = 0; ci < c; ci++) {
          fa[(i * w + j) * c + ci] = clip1.frames[(t * h * w + i * w + j1) * c + ci];
          fb[(i * w + j) * c + ci] = clip2.frames[(t * h * w + i * w + j2) * c + ci];
        }
      }
    }
    blendFrame(frames, t * fs, fa, 0, fb, 0, row, h, w, c, clip1.dtype);
    for (let ci = 0; ci < k; ci++) {
      weights[t * k + ci] =
        0.5 * labels1.weights[t * k + ci] + 0.5 * labels2.weights[t * k + ci];
    }
  }
  return {
    clip: makeClip(frames, n, h, w, c, clip1.dtype, clip1.id),
    labels: { weights, t: n, k },
  };
}
