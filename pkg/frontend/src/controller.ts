// Session lifecycle around the view model: load, save, submit, and the
// optimistic-concurrency conflict flow.

import { ApiError, type AnnotationClient } from "./api.js";
import { TimelineViewModel } from "./timeline.js";
import type { IntervalsPayload, SessionInfo } from "./types.js";

export type Banner =
  | { kind: "info"; message: string }
  | { kind: "error"; message: string; canRetry: boolean }
  | { kind: "conflict"; message: string; serverState: IntervalsPayload };

export class SessionController {
  vm: TimelineViewModel | null = null;
  session: SessionInfo | null = null;
  banner: Banner | null = null;
  busy = false;

  private listeners: Array<() => void> = [];

  constructor(readonly api: AnnotationClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const l of this.listeners) l();
  }

  private setBanner(banner: Banner | null): void {
    this.banner = banner;
    this.notify();
  }

  /** Open (or resume) the session for one rater and video. */
  async load(raterId: string, videoId: string): Promise<void> {
    this.busy = true;
    this.notify();
    try {
      const session = await this.api.openSession(raterId, videoId);
      const segments = await this.api.segments(videoId);
      const last = segments[segments.length - 1];
      if (!last) throw new Error(`video ${videoId} has no segments`);

      const vm = new TimelineViewModel(last.end_s);
      const state = await this.api.getIntervals(session.session_id);
      vm.acknowledge(state.version, state.intervals, state.sealed);

      this.session = session;
      this.vm = vm;
      this.banner = state.sealed
        ? { kind: "info", message: "session already submitted; read-only" }
        : null;
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  /**
   * Push local marks to the server. On success the server's acknowledgement
   * replaces local state and the dirty flag clears. A version conflict keeps
   * the local marks and surfaces a merge prompt; a network failure keeps them
   * and offers a retry.
   */
  async save(): Promise<boolean> {
    const vm = this.vm;
    const session = this.session;
    if (!vm || !session) return false;
    if (vm.sealed) {
      this.setBanner({ kind: "info", message: "session is submitted and read-only" });
      return false;
    }

    this.busy = true;
    this.notify();
    try {
      const acked = await this.api.putIntervals(session.session_id, vm.version, vm.marksPayload());
      vm.acknowledge(acked.version, acked.intervals, acked.sealed);
      this.setBanner({ kind: "info", message: `saved (version ${acked.version})` });
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        const serverState = await this.api.getIntervals(session.session_id);
        this.setBanner({
          kind: "conflict",
          message:
            `the server has version ${serverState.version}, you were editing ` +
            `version ${vm.version}: keep your marks or take the server's`,
          serverState,
        });
      } else if (err instanceof ApiError) {
        this.setBanner({ kind: "error", message: err.message, canRetry: false });
      } else {
        this.setBanner({
          kind: "error",
          message: "could not reach the server; your marks are kept locally",
          canRetry: true,
        });
      }
      return false;
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  /** Save any pending edits, then seal the session server-side. */
  async submit(): Promise<boolean> {
    const vm = this.vm;
    const session = this.session;
    if (!vm || !session) return false;
    if (vm.dirty) {
      const saved = await this.save();
      if (!saved) return false;
    }

    this.busy = true;
    this.notify();
    try {
      const sealed = await this.api.submit(session.session_id, vm.version);
      this.session = sealed;
      vm.acknowledge(sealed.version, vm.marksPayload(), true);
      this.setBanner({ kind: "info", message: "submitted; session is now read-only" });
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        const serverState = await this.api.getIntervals(session.session_id);
        this.setBanner({
          kind: "conflict",
          message: "submit rejected: the session changed elsewhere",
          serverState,
        });
      } else if (err instanceof ApiError) {
        this.setBanner({ kind: "error", message: err.message, canRetry: false });
      } else {
        this.setBanner({
          kind: "error",
          message: "could not reach the server; submit not completed",
          canRetry: true,
        });
      }
      return false;
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  /** Conflict resolution: discard local edits and adopt the server state. */
  resolveConflictTakeServer(): void {
    if (!this.vm || this.banner?.kind !== "conflict") return;
    const state = this.banner.serverState;
    this.vm.acknowledge(state.version, state.intervals, state.sealed);
    this.setBanner({ kind: "info", message: `reloaded server version ${state.version}` });
  }

  /** Conflict resolution: rebase local marks onto the server's version and retry. */
  async resolveConflictKeepMine(): Promise<boolean> {
    if (!this.vm || this.banner?.kind !== "conflict") return false;
    const state = this.banner.serverState;
    if (state.sealed) {
      this.setBanner({
        kind: "info",
        message: "session was submitted elsewhere; it is read-only now",
      });
      this.vm.acknowledge(state.version, state.intervals, true);
      return false;
    }
    this.vm.version = state.version;
    this.banner = null;
    return this.save();
  }
}
