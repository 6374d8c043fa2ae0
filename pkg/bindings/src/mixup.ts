/**
 * Temporal mixup on typed arrays; numerically identical to the core:
 * float64 alpha values, float32 pixel blends (fround per operation),
 * half-to-even rounding back to uint8.
 */

import {
  BindingError,
  Clip,
  Labels,
  frameSize,
  makeClip,
  roundHalfEven,
  sameGeometry,
  truncate01,
} from "./core.js";

export interface AlphaMask {
  values: Float64Array;
  scenario: 1 | 2;
  length: number;
}

function checkParams(n1: number, n2: number, r: number): 1 | 2 {
  if (n1 < 2 || n2 < 2) throw new BindingError("mixup needs clips of length >= 2");
  if (r < 0) throw new BindingError("shift must be non-negative");
  if (r >= n1) throw new BindingError("no overlap");
  return n2 + r >= n1 ? 1 : 2;
}

function alphaAt(t: number, n1: number, n2: number, r: number, scenario: 1 | 2): number {
  if (scenario === 1) return truncate01((n1 - t) / (n1 - r));
  return truncate01(Math.abs(n2 + 2 * r - 2 * t) / n2);
}

export function alphaMask(n1: number, n2: number, r: number): AlphaMask {
  const scenario = checkParams(n1, n2, r);
  const length = scenario === 1 ? n2 + r : n1;
  const values = new Float64Array(length);
  for (let t = 0; t < length; t++) values[t] = alphaAt(t, n1, n2, r, scenario);
  return { values, scenario, length };
}

export function alphaMaskAtResolution(
  n1: number,
  n2: number,
  r: number,
  outLength: number,
): AlphaMask {
  if (outLength < 2) throw new BindingError("resampled mask needs length >= 2");
  const scenario = checkParams(n1, n2, r);
  const length = scenario === 1 ? n2 + r : n1;
  const scale = (length - 1) / (outLength - 1);
  const values = new Float64Array(outLength);
  for (let t = 0; t < outLength; t++) values[t] = alphaAt(t * scale, n1, n2, r, scenario);
  return { values, scenario, length: outLength };
}

export interface MixResult {
  clip: Clip;
  labels: Labels;
}

/**
 * Blend the frame at `t` of two (possibly absent) sources with per-column
 * float32 weights into `out`. Absent sources contribute exact zeros.
 */
export function blendFrame(
  out: Uint8Array | Float32Array,
  outOff: number,
  a: Uint8Array | Float32Array | null,
  aOff: number,
  b: Uint8Array | Float32Array | null,
  bOff: number,
  weightsByColumn: Float64Array | number,
  h: number,
  w: number,
  c: number,
  dtype: "u8" | "f32",
): void {
  const scalar = typeof weightsByColumn === "number";
  for (let i = 0; i < h; i++) {
    for (let j = 0; j < w; j++) {
      const wRaw = scalar ? (weightsByColumn as number) : (weightsByColumn as Float64Array)[j];
      const w32 = Math.fround(wRaw);
      const omw32 = Math.fround(1.0 - w32);
      const base = (i * w + j) * c;
      for (let k = 0; k < c; k++) {
        const av = a === null ? 0 : a[aOff + base + k];
        const bv = b === null ? 0 : b[bOff + base + k];
        const v = Math.fround(Math.fround(av * w32) + Math.fround(bv * omw32));
        out[outOff + base + k] = dtype === "u8" ? roundHalfEven(v) : v;
      }
    }
  }
}

export function mixup(
  clip1: Clip,
  labels1: Labels,
  clip2: Clip,
  labels2: Labels,
  r: number,
  hard = false,
): MixResult {
  sameGeometry(clip1, clip2);
  if (labels1.t !== clip1.t || labels2.t !== clip2.t) {
    throw new BindingError("labels length must match clip length");
  }
  if (labels1.k !== labels2.k) throw new BindingError("class count mismatch");
  const mask = alphaMask(clip1.t, clip2.t, r);
  const k = labels1.k;
  const fs = frameSize(clip1);
  const frames =
    clip1.dtype === "u8"
      ? new Uint8Array(mask.length * fs)
      : new Float32Array(mask.length * fs);
  const weights = new Float64Array(mask.length * k);

  for (let t = 0; t < mask.length; t++) {
    let a = mask.values[t];
    if (hard) a = a >= 0.5 ? 1.0 : 0.0;
    const inA = t < clip1.t;
    const inB = t >= r && t < r + clip2.t;
    blendFrame(
      frames,
      t * fs,
      inA ? clip1.frames : null,
      inA ? t * fs : 0,
      inB ? clip2.frames : null,
      inB ? (t - r) * fs : 0,
      a,
      clip1.h,
      clip1.w,
      clip1.c,
      clip1.dtype,
    );
    for (let ci = 0; ci < k; ci++) {
      const la = inA ? labels1.weights[t * k + ci] : 0.0;
      const lb = inB ? labels2.weights[(t - r) * k + ci] : 0.0;
      weights[t * k + ci] = a * la + (1.0 - a) * lb;
    }
  }
  return {
    clip: makeClip(frames, mask.length, clip1.h, clip1.w, clip1.c, clip1.dtype, clip1.id),
    labels: { weights, t: mask.length, k },
  };
}
