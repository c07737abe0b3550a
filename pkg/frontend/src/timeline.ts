// Timeline view model: the single source of truth the DOM renders from.
//
// All state transitions are synchronous and deterministic, so replaying the
// same sequence of operations on a fresh model always reproduces the same
// marks. Pixel coordinates are derived from time and zoom only.

import {
  clamp,
  projectLabels,
  snapTime,
  tileSegments,
  type MarkSpan,
  type SegmentSpan,
} from "./time.js";
import type { IntervalPayload, MarkKind, SegmentLabel } from "./types.js";

export interface TimelineMark {
  id: number;
  startS: number;
  endS: number;
  kind: MarkKind;
  note: string;
}

export type DragResult =
  | { ok: true; mark: TimelineMark }
  | { ok: false; reason: "zero-width" | "overlap" | "sealed"; message: string };

function marksFingerprint(marks: readonly TimelineMark[]): string {
  return JSON.stringify(marks.map((m) => [m.startS, m.endS, m.kind, m.note]));
}

export class TimelineViewModel {
  readonly durationS: number;
  readonly segments: SegmentSpan[];

  pxPerSecond = 8;
  playheadS = 0;
  version = 0;
  sealed = false;

  private marks: TimelineMark[] = [];
  private nextId = 1;
  private ackedFingerprint = marksFingerprint([]);

  constructor(durationS: number) {
    this.durationS = durationS;
    this.segments = tileSegments(durationS);
  }

  /** True iff local marks diverge from the last state the server acknowledged. */
  get dirty(): boolean {
    return marksFingerprint(this.marks) !== this.ackedFingerprint;
  }

  get widthPx(): number {
    return this.durationS * this.pxPerSecond;
  }

  listMarks(): readonly TimelineMark[] {
    return this.marks;
  }

  timeToPx(t: number): number {
    return t * this.pxPerSecond;
  }

  pxToTime(px: number): number {
    return px / this.pxPerSecond;
  }

  setZoom(pxPerSecond: number): void {
    if (pxPerSecond > 0) this.pxPerSecond = pxPerSecond;
  }

  setPlayhead(t: number): void {
    this.playheadS = clamp(t, 0, this.durationS);
  }

  private overlapsExisting(startS: number, endS: number, ignoreId?: number): TimelineMark | null {
    for (const m of this.marks) {
      if (m.id === ignoreId) continue;
      if (startS < m.endS && m.startS < endS) return m;
    }
    return null;
  }

  /**
   * Create a mark from a drag gesture. The extent snaps to 0.1 s and is
   * clamped to the video; zero-width drags are ignored and overlaps with an
   * existing mark are rejected before anything reaches the server.
   */
  dragCreateInterval(startPx: number, endPx: number, kind: MarkKind): DragResult {
    if (this.sealed) {
      return { ok: false, reason: "sealed", message: "session is submitted and read-only" };
    }
    const a = snapTime(clamp(this.pxToTime(Math.min(startPx, endPx)), 0, this.durationS));
    const b = snapTime(clamp(this.pxToTime(Math.max(startPx, endPx)), 0, this.durationS));
    if (!(b > a)) {
      return { ok: false, reason: "zero-width", message: "drag has no duration" };
    }
    const hit = this.overlapsExisting(a, b);
    if (hit) {
      return {
        ok: false,
        reason: "overlap",
        message: `overlaps the ${hit.kind} mark at [${hit.startS}, ${hit.endS})`,
      };
    }
    const mark: TimelineMark = { id: this.nextId, startS: a, endS: b, kind, note: "" };
    this.nextId += 1;
    this.marks.push(mark);
    this.marks.sort((x, y) => x.startS - y.startS);
    return { ok: true, mark };
  }

  removeMark(id: number): boolean {
    if (this.sealed) return false;
    const before = this.marks.length;
    this.marks = this.marks.filter((m) => m.id !== id);
    return this.marks.length < before;
  }

  setNote(id: number, note: string): boolean {
    if (this.sealed) return false;
    const mark = this.marks.find((m) => m.id === id);
    if (!mark) return false;
    mark.note = note;
    return true;
  }

  /** Marks in the wire format the PUT endpoint expects. */
  marksPayload(): IntervalPayload[] {
    return this.marks.map((m) => ({
      start_s: m.startS,
      end_s: m.endS,
      mark: m.kind,
      note: m.note,
    }));
  }

  /**
   * Replace local state with what the server acknowledged. Clears the dirty
   * flag by construction.
   */
  acknowledge(version: number, intervals: readonly IntervalPayload[], sealed: boolean): void {
    this.version = version;
    this.sealed = sealed;
    this.marks = intervals.map((iv, i) => ({
      id: this.nextId + i,
      startS: iv.start_s,
      endS: iv.end_s,
      kind: iv.mark,
      note: iv.note,
    }));
    this.nextId += intervals.length;
    this.marks.sort((x, y) => x.startS - y.startS);
    this.ackedFingerprint = marksFingerprint(this.marks);
  }

  /** Per-segment labels for the current marks; unmarked time reads Moderate. */
  projectionPreview(): SegmentLabel[] {
    const spans: MarkSpan[] = this.marks.map((m) => ({
      startS: m.startS,
      endS: m.endS,
      kind: m.kind,
    }));
    return projectLabels(spans, this.segments);
  }
}
