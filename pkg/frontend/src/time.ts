// Time arithmetic shared by the timeline: snapping, segment tiling and the
// interval-to-segment projection. Tiling and projection mirror the server's
// rules exactly so the preview never disagrees with a submitted session.

import type { MarkKind, SegmentLabel } from "./types.js";

export const SNAP_RESOLUTION_S = 0.1;
export const SEGMENT_LEN_S = 5.0;
export const MERGE_TAIL_BELOW_S = 1.0;

export interface SegmentSpan {
  index: number;
  startS: number;
  endS: number;
}

export interface MarkSpan {
  startS: number;
  endS: number;
  kind: MarkKind;
}

/** Snap a time to the 0.1 s annotation resolution. */
export function snapTime(t: number): number {
  return Math.round(t * 10) / 10;
}

export function clamp(t: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, t));
}

/** Format seconds as m:ss.t for timeline tick labels. */
export function formatTime(seconds: number): string {
  const whole = Math.floor(seconds);
  const tenths = Math.round((seconds - whole) * 10) % 10;
  const m = Math.floor(whole / 60);
  const s = whole % 60;
  return `${m}:${String(s).padStart(2, "0")}.${tenths}`;
}

/**
 * Tile [0, durationS) into half-open 5 s segments.
 *
 * A trailing remainder shorter than 1 s folds into the previous segment, and
 * a video shorter than 5 s is a single segment of its full duration.
 */
export function tileSegments(durationS: number): SegmentSpan[] {
  if (!(durationS > 0)) {
    throw new Error(`duration must be positive, got ${durationS}`);
  }
  const nFull = Math.floor(durationS / SEGMENT_LEN_S);
  const remainder = durationS - nFull * SEGMENT_LEN_S;

  let count: number;
  if (nFull === 0) count = 1;
  else if (remainder === 0) count = nFull;
  else if (remainder < MERGE_TAIL_BELOW_S) count = nFull;
  else count = nFull + 1;

  const segments: SegmentSpan[] = [];
  for (let i = 0; i < count; i += 1) {
    segments.push({
      index: i,
      startS: i * SEGMENT_LEN_S,
      endS: i < count - 1 ? (i + 1) * SEGMENT_LEN_S : durationS,
    });
  }
  return segments;
}

function overlap(segStart: number, segEnd: number, markStart: number, markEnd: number): number {
  return Math.max(0, Math.min(segEnd, markEnd) - Math.max(segStart, markStart));
}

/**
 * Project marks onto segments the way the server does: per segment, the mark
 * kind with the larger total overlap wins, and a tie (including no overlap at
 * all) is Moderate.
 */
export function projectLabels(marks: readonly MarkSpan[], segments: readonly SegmentSpan[]): SegmentLabel[] {
  return segments.map((seg) => {
    let strong = 0;
    let poor = 0;
    for (const mark of marks) {
      const o = overlap(seg.startS, seg.endS, mark.startS, mark.endS);
      if (mark.kind === "Strong") strong += o;
      else poor += o;
    }
    if (strong > poor) return "Strong";
    if (poor > strong) return "Poor";
    return "Moderate";
  });
}
