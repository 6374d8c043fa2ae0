/**
 * In-process bindings for the volaug operations on caller-owned typed
 * arrays: freeze / mixup / cutmix plus the blend masks, mirroring the CLI
 * subcommands one to one. All results are fresh copies, never aliases into
 * caller buffers, and every function is pure; determinism is governed
 * entirely by caller-supplied parameters.
 */

export {
  BindingError,
  CORE_CONFIG_HASH,
  VERSION,
  versionString,
  truncate01,
  roundHalfUp,
  roundHalfEven,
  deriveSeed,
  maskRow,
  rowArea,
  defaultDelta,
  pseudoLabel,
  makeClip,
  windowSample,
} from "./core.js";
export type { Clip, Labels, Dtype } from "./core.js";
export { alphaMask, alphaMaskAtResolution, mixup } from "./mixup.js";
export type { AlphaMask, MixResult } from "./mixup.js";
export { cutmixWindow, cutmixView, panOffsets } from "./cutmix.js";
export { freeze, freezeMulti } from "./freeze.js";
export { encodeClip, decodeClip, encodeLabels, decodeLabels } from "./vvol.js";

import type { Clip, Labels } from "./core.js";
import { freezeMulti } from "./freeze.js";
import { mixup } from "./mixup.js";
import { cutmixView, cutmixWindow } from "./cutmix.js";

export interface FreezeParams {
  segments: Array<[number, number]>;
}

export interface MixupParams {
  r: number;
  hard?: boolean;
}

export interface CutmixParams {
  mode: "window" | "view";
  r?: number;
  delta?: number;
}

/** Mirrors `volaug freeze`. */
export function bindFreeze(clip: Clip, labels: Labels, params: FreezeParams) {
  return freezeMulti(clip, labels, params.segments);
}

/** Mirrors `volaug mixup`. */
export function bindMixup(
  clip1: Clip,
  labels1: Labels,
  clip2: Clip,
  labels2: Labels,
  params: MixupParams,
) {
  return mixup(clip1, labels1, clip2, labels2, params.r, params.hard ?? false);
}

/** Mirrors `volaug cutmix`. */
export function bindCutmix(
  clip1: Clip,
  labels1: Labels,
  clip2: Clip,
  labels2: Labels,
  params: CutmixParams,
) {
  if (params.mode === "view") {
    return cutmixView(clip1, labels1, clip2, labels2, params.delta);
  }
  return cutmixWindow(clip1, labels1, clip2, labels2, params.r ?? 0, params.delta);
}
