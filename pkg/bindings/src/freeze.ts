/** Volume freeze on typed arrays; exact frame copies, zeroed label rows. */

import { BindingError, Clip, Labels, frameSize, makeClip } from "./core.js";

export interface FreezeResult {
  clip: Clip;
  labels: Labels;
}

export function freeze(clip: Clip, labels: Labels, r: number, m: number): FreezeResult {
  const n = clip.t;
  if (labels.t !== n) throw new BindingError("labels length must match clip length");
  if (!(r >= 0 && r <= n - 2)) throw new BindingError(`freeze start ${r} out of range`);
  if (!(m >= 2 && m <= n - r)) throw new BindingError(`freeze length ${m} out of range`);
  const fs = frameSize(clip);
  const frames = clip.dtype === "u8" ? new Uint8Array(n * fs) : new Float32Array(n * fs);
  const k = labels.k;
  const weights = new Float64Array(n * k);

  let out = 0;
  const copyFrame = (src: number, withLabels: boolean) => {
    frames.set(clip.frames.subarray(src * fs, (src + 1) * fs), out * fs);
    if (withLabels) {
      weights.set(labels.weights.subarray(src * k, (src + 1) * k), out * k);
    }
    out += 1;
  };
  for (let t = 0; t < r; t++) copyFrame(t, true);
  for (let i = 0; i < m; i++) copyFrame(r, false); // zero label mass
  for (let t = r + 1; t <= n - m; t++) copyFrame(t, true);

  return {
    clip: makeClip(frames, n, clip.h, clip.w, clip.c, clip.dtype, clip.id),
    labels: { weights, t: n, k },
  };
}

export function freezeMulti(
  clip: Clip,
  labels: Labels,
  segments: Array<[number, number]>,
): FreezeResult {
  let state: FreezeResult = { clip, labels };
  for (const [r, m] of segments) state = freeze(state.clip, state.labels, r, m);
  return state;
}
