/**
 * Core numeric primitives, mirrored bit-for-bit against the volaug core:
 * float64 everywhere except pixel blends, which emulate float32 arithmetic
 * with Math.fround at every step; uint8 outputs round half-to-even.
 */

export const VERSION = "0.1.0";

/** Fingerprint of the numeric conventions shared with the core package. */
export const CORE_CONFIG_HASH = "b070faa7390c757b";

export function versionString(): string {
  return `volaug-bindings ${VERSION} (core ${CORE_CONFIG_HASH})`;
}

export type Dtype = "u8" | "f32";

export interface Clip {
  frames: Uint8Array | Float32Array; // t-major, then h, w, c
  t: number;
  h: number;
  w: number;
  c: number;
  dtype: Dtype;
  id: string;
}

export interface Labels {
  weights: Float64Array; // t-major, k per row
  t: number;
  k: number;
}

export class BindingError extends Error {}

export function truncate01(x: number): number {
  if (!Number.isFinite(x)) throw new BindingError("non-finite mask value");
  if (x >= 1.0) return 1.0;
  if (x < 0.0) return 0.0;
  return x;
}

export function roundHalfUp(x: number): number {
  return Math.floor(x + 0.5);
}

/** Round a non-negative value to the nearest integer, ties to even. */
export function roundHalfEven(x: number): number {
  const fl = Math.floor(x);
  const diff = x - fl;
  if (diff > 0.5) return fl + 1;
  if (diff < 0.5) return fl;
  return fl % 2 === 0 ? fl : fl + 1;
}

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;

/** SplitMix-style seed derivation; matches the core bit for bit. */
export function deriveSeed(globalSeed: bigint, index: bigint): bigint {
  let x = (globalSeed ^ ((index * GAMMA) & MASK64)) & MASK64;
  x = ((x ^ (x >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
  x = ((x ^ (x >> 27n)) * 0x94d049bb133111ebn) & MASK64;
  return (x ^ (x >> 31n)) & MASK64;
}

/** One row of the vertical-split mask (float64 values). */
export function maskRow(width: number, split: number, delta: number): Float64Array {
  const row = new Float64Array(width);
  if (split <= 0) return row;
  if (split >= width) {
    row.fill(1.0);
    return row;
  }
  const inv = 1.0 / (2.0 * delta);
  for (let j = 0; j < width; j++) {
    if (j < split - delta) row[j] = 1.0;
    else if (j >= split + delta) row[j] = 0.0;
    else row[j] = (split + delta - j) * inv;
  }
  return row;
}

/** Ordered left-to-right row sum divided by width; the exact contract. */
export function rowArea(row: Float64Array): number {
  let s = 0.0;
  for (let j = 0; j < row.length; j++) s += row[j];
  return s / row.length;
}

export function defaultDelta(width: number): number {
  return Math.max(1, roundHalfUp(0.05 * width));
}

export function pseudoLabel(t: number, classIndex: number, k: number): Labels {
  if (classIndex < 0 || classIndex >= k) throw new BindingError("class index out of range");
  const weights = new Float64Array(t * k);
  for (let i = 0; i < t; i++) weights[i * k + classIndex] = 1.0;
  return { weights, t, k };
}

export function makeClip(
  frames: Uint8Array | Float32Array,
  t: number,
  h: number,
  w: number,
  c: number,
  dtype: Dtype,
  id = "",
): Clip {
  if (frames.length !== t * h * w * c) {
    throw new BindingError(`frame buffer length ${frames.length} != ${t * h * w * c}`);
  }
  if (dtype === "u8" && !(frames instanceof Uint8Array)) {
    throw new BindingError("u8 clip must be backed by Uint8Array");
  }
  if (dtype === "f32" && !(frames instanceof Float32Array)) {
    throw new BindingError("f32 clip must be backed by Float32Array");
  }
  return { frames, t, h, w, c, dtype, id };
}

export function frameSize(clip: Clip): number {
  return clip.h * clip.w * clip.c;
}

export function sameGeometry(a: Clip, b: Clip): void {
  if (a.h !== b.h || a.w !== b.w || a.c !== b.c || a.dtype !== b.dtype) {
    throw new BindingError("incompatible clip geometry");
  }
}

/** Take `window` frames at start + i*stride, labels sliced identically. */
export function windowSample(
  clip: Clip,
  window: number,
  stride: number,
  start = 0,
): Clip {
  const last = start + (window - 1) * stride;
  if (last >= clip.t) throw new BindingError("clip too short for window");
  const fs = frameSize(clip);
  const out =
    clip.dtype === "u8" ? new Uint8Array(window * fs) : new Float32Array(window * fs);
  for (let i = 0; i < window; i++) {
    const src = (start + i * stride) * fs;
    out.set(clip.frames.subarray(src, src + fs), i * fs);
  }
  return makeClip(out, window, clip.h, clip.w, clip.c, clip.dtype, clip.id);
}
