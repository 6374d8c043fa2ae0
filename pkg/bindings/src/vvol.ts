/** VVOL container codec and the JSON label sidecar, for conformance I/O. */

import { BindingError, Clip, Dtype, Labels, makeClip } from "./core.js";

const MAGIC = 0x4c4f5656; // "VVOL" little-endian
const HEADER_SIZE = 22;

export function encodeClip(clip: Clip): Uint8Array {
  const itemSize = clip.dtype === "u8" ? 1 : 4;
  const buf = new Uint8Array(HEADER_SIZE + clip.frames.length * itemSize);
  const view = new DataView(buf.buffer);
  view.setUint32(0, MAGIC, true);
  view.setUint8(4, 1);
  view.setUint8(5, clip.dtype === "u8" ? 0 : 1);
  view.setUint32(6, clip.t, true);
  view.setUint32(10, clip.h, true);
  view.setUint32(14, clip.w, true);
  view.setUint32(18, clip.c, true);
  if (clip.dtype === "u8") {
    buf.set(clip.frames as Uint8Array, HEADER_SIZE);
  } else {
    buf.set(new Uint8Array((clip.frames as Float32Array).buffer,
      (clip.frames as Float32Array).byteOffset, clip.frames.length * 4), HEADER_SIZE);
  }
  return buf;
}

export function decodeClip(buf: Uint8Array, id = ""): Clip {
  if (buf.length < HEADER_SIZE) throw new BindingError("truncated VVOL header");
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  if (view.getUint32(0, true) !== MAGIC) throw new BindingError("bad VVOL magic");
  if (view.getUint8(4) !== 1) throw new BindingError("unsupported VVOL version");
  const code = view.getUint8(5);
  if (code !== 0 && code !== 1) throw new BindingError("unknown VVOL dtype code");
  const dtype: Dtype = code === 0 ? "u8" : "f32";
  const t = view.getUint32(6, true);
  const h = view.getUint32(10, true);
  const w = view.getUint32(14, true);
  const c = view.getUint32(18, true);
  const count = t * h * w * c;
  const itemSize = dtype === "u8" ? 1 : 4;
  if (buf.length !== HEADER_SIZE + count * itemSize) {
    throw new BindingError("VVOL payload size mismatch");
  }
  // copy into a fresh, aligned buffer (Buffer.slice would alias the source)
  const payload = new Uint8Array(buf.subarray(HEADER_SIZE));
  const frames = dtype === "u8" ? payload : new Float32Array(payload.buffer);
  return makeClip(frames, t, h, w, c, dtype, id);
}

export function encodeLabels(labels: Labels): string {
  const rows: number[][] = [];
  for (let t = 0; t < labels.t; t++) {
    rows.push(Array.from(labels.weights.subarray(t * labels.k, (t + 1) * labels.k)));
  }
  return JSON.stringify({ num_classes: labels.k, weights: rows }) + "\n";
}

export function decodeLabels(text: string): Labels {
  const doc = JSON.parse(text) as { num_classes: number; weights: number[][] };
  const t = doc.weights.length;
  const k = doc.num_classes;
  const weights = new Float64Array(t * k);
  for (let i = 0; i < t; i++) {
    if (doc.weights[i].length !== k) throw new BindingError("ragged label rows");
    weights.set(doc.weights[i], i * k);
  }
  return { weights, t, k };
}
