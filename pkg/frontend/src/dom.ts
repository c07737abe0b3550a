// DOM layer. The static chrome (video element, panes) is built once; the
// dynamic panes are re-rendered from scratch on every state change, so what
// is on screen is a pure function of the view model plus UI state.

import { formatTime } from "./time.js";
import type { SessionController } from "./controller.js";
import type { TimelineViewModel } from "./timeline.js";
import type { MarkKind } from "./types.js";

export interface UiState {
  markKind: MarkKind;
  selectedMarkId: number | null;
  rejection: string | null;
  drag: { startPx: number; currentPx: number } | null;
}

export function initialUiState(): UiState {
  return { markKind: "Strong", selectedMarkId: null, rejection: null, drag: null };
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Timeline pane: segment grid, marks, projection strip, playhead, drag ghost. */
export function renderTimeline(el: HTMLElement, vm: TimelineViewModel, ui: UiState): void {
  const parts: string[] = [];
  const width = vm.widthPx;

  parts.push(`<div class="track" style="width:${width}px">`);
  for (const seg of vm.segments) {
    const left = vm.timeToPx(seg.startS);
    const w = vm.timeToPx(seg.endS) - left;
    parts.push(
      `<div class="segment" data-index="${seg.index}" style="left:${left}px;width:${w}px">` +
        `<span class="tick">${formatTime(seg.startS)}</span></div>`,
    );
  }
  for (const mark of vm.listMarks()) {
    const left = vm.timeToPx(mark.startS);
    const w = vm.timeToPx(mark.endS) - left;
    const selected = mark.id === ui.selectedMarkId ? " selected" : "";
    parts.push(
      `<div class="mark kind-${mark.kind.toLowerCase()}${selected}" data-mark-id="${mark.id}"` +
        ` style="left:${left}px;width:${w}px" title="${escapeHtml(mark.note)}">` +
        `${mark.kind} [${mark.startS}, ${mark.endS})</div>`,
    );
  }
  if (ui.drag) {
    const left = Math.min(ui.drag.startPx, ui.drag.currentPx);
    const w = Math.abs(ui.drag.currentPx - ui.drag.startPx);
    parts.push(
      `<div class="mark ghost kind-${ui.markKind.toLowerCase()}"` +
        ` style="left:${left}px;width:${w}px"></div>`,
    );
  }
  parts.push(`<div class="playhead" style="left:${vm.timeToPx(vm.playheadS)}px"></div>`);
  parts.push(`</div>`);

  parts.push(`<div class="projection" style="width:${width}px">`);
  const labels = vm.projectionPreview();
  for (const seg of vm.segments) {
    const left = vm.timeToPx(seg.startS);
    const w = vm.timeToPx(seg.endS) - left;
    const label = labels[seg.index] ?? "Moderate";
    parts.push(
      `<div class="cell label-${label.toLowerCase()}" data-index="${seg.index}"` +
        ` style="left:${left}px;width:${w}px" title="segment ${seg.index}: ${label}"></div>`,
    );
  }
  parts.push(`</div>`);

  if (ui.rejection) {
    parts.push(`<p class="rejection">${escapeHtml(ui.rejection)}</p>`);
  }
  el.innerHTML = parts.join("");
}

export function renderControls(el: HTMLElement, vm: TimelineViewModel, ui: UiState): void {
  const sealed = vm.sealed;
  const kindButton = (kind: MarkKind) =>
    `<button data-action="kind" data-kind="${kind}" class="kind-${kind.toLowerCase()}` +
    `${ui.markKind === kind ? " active" : ""}"${sealed ? " disabled" : ""}>${kind}</button>`;
  el.innerHTML =
    `<span class="hint">drag on the timeline to mark; unmarked time is Moderate</span>` +
    kindButton("Strong") +
    kindButton("Poor") +
    `<button data-action="save"${sealed || !vm.dirty ? " disabled" : ""}>Save</button>` +
    `<button data-action="submit"${sealed ? " disabled" : ""}>Submit</button>` +
    `<span class="status">${sealed ? "read-only" : vm.dirty ? "unsaved changes" : "saved"}` +
    ` (v${vm.version})</span>`;
}

export function renderBanner(el: HTMLElement, ctrl: SessionController): void {
  const banner = ctrl.banner;
  if (!banner) {
    el.innerHTML = "";
    return;
  }
  if (banner.kind === "conflict") {
    el.innerHTML =
      `<div class="banner conflict"><span>${escapeHtml(banner.message)}</span>` +
      `<button data-action="keep-mine">Keep my marks</button>` +
      `<button data-action="take-server">Take server version</button></div>`;
    return;
  }
  const retry =
    banner.kind === "error" && banner.canRetry
      ? `<button data-action="retry-save">Retry</button>`
      : "";
  el.innerHTML = `<div class="banner ${banner.kind}"><span>${escapeHtml(banner.message)}</span>${retry}</div>`;
}

export function renderNotePane(el: HTMLElement, vm: TimelineViewModel, ui: UiState): void {
  const mark = vm.listMarks().find((m) => m.id === ui.selectedMarkId);
  if (!mark) {
    el.innerHTML = `<p class="hint">select a mark to attach a note</p>`;
    return;
  }
  el.innerHTML =
    `<label>note for ${mark.kind} [${mark.startS}, ${mark.endS})` +
    `<textarea data-mark-id="${mark.id}"${vm.sealed ? " disabled" : ""}>` +
    `${escapeHtml(mark.note)}</textarea></label>` +
    `<button data-action="delete-mark"${vm.sealed ? " disabled" : ""}>Delete mark</button>`;
}

export interface UiHandle {
  ui: UiState;
  refresh: () => void;
}

/** Build the page skeleton, wire events, and keep it in sync with the controller. */
export function mountAnnotationUi(
  root: HTMLElement,
  ctrl: SessionController,
  mediaUrl: string,
): UiHandle {
  root.innerHTML =
    `<div class="player"><video controls preload="metadata" src="${escapeHtml(mediaUrl)}"></video></div>` +
    `<div class="banner-area"></div>` +
    `<div class="timeline-area"></div>` +
    `<div class="controls-area"></div>` +
    `<div class="note-area"></div>`;
  const video = root.querySelector("video") as HTMLVideoElement;
  const bannerEl = root.querySelector(".banner-area") as HTMLElement;
  const timelineEl = root.querySelector(".timeline-area") as HTMLElement;
  const controlsEl = root.querySelector(".controls-area") as HTMLElement;
  const noteEl = root.querySelector(".note-area") as HTMLElement;

  const ui = initialUiState();

  const refresh = () => {
    const vm = ctrl.vm;
    renderBanner(bannerEl, ctrl);
    if (!vm) return;
    renderTimeline(timelineEl, vm, ui);
    renderControls(controlsEl, vm, ui);
    renderNotePane(noteEl, vm, ui);
  };
  ctrl.onChange(refresh);

  const trackPx = (ev: PointerEvent): number => {
    const track = timelineEl.querySelector(".track");
    if (!track) return 0;
    return ev.clientX - track.getBoundingClientRect().left;
  };

  timelineEl.addEventListener("pointerdown", (ev) => {
    const target = ev.target as HTMLElement;
    const markEl = target.closest<HTMLElement>("[data-mark-id]");
    if (markEl) {
      ui.selectedMarkId = Number(markEl.dataset.markId);
      ui.rejection = null;
      refresh();
      return;
    }
    if (ctrl.vm?.sealed) return;
    const px = trackPx(ev);
    ui.drag = { startPx: px, currentPx: px };
    refresh();
  });
  timelineEl.addEventListener("pointermove", (ev) => {
    if (!ui.drag) return;
    ui.drag.currentPx = trackPx(ev);
    refresh();
  });
  timelineEl.addEventListener("pointerup", (ev) => {
    const vm = ctrl.vm;
    if (!ui.drag || !vm) return;
    const { startPx } = ui.drag;
    const endPx = trackPx(ev);
    ui.drag = null;
    const result = vm.dragCreateInterval(startPx, endPx, ui.markKind);
    if (result.ok) {
      ui.rejection = null;
      ui.selectedMarkId = result.mark.id;
    } else if (result.reason !== "zero-width") {
      ui.rejection = result.message;
    }
    refresh();
  });

  controlsEl.addEventListener("click", (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!button) return;
    const action = button.dataset.action;
    if (action === "kind") {
      ui.markKind = button.dataset.kind as MarkKind;
      refresh();
    } else if (action === "save") {
      void ctrl.save();
    } else if (action === "submit") {
      void ctrl.submit();
    }
  });

  bannerEl.addEventListener("click", (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!button) return;
    const action = button.dataset.action;
    if (action === "take-server") ctrl.resolveConflictTakeServer();
    else if (action === "keep-mine") void ctrl.resolveConflictKeepMine();
    else if (action === "retry-save") void ctrl.save();
  });

  noteEl.addEventListener("change", (ev) => {
    const area = ev.target as HTMLTextAreaElement;
    if (area.tagName !== "TEXTAREA") return;
    ctrl.vm?.setNote(Number(area.dataset.markId), area.value);
    refresh();
  });
  noteEl.addEventListener("click", (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (button?.dataset.action === "delete-mark" && ui.selectedMarkId !== null) {
      ctrl.vm?.removeMark(ui.selectedMarkId);
      ui.selectedMarkId = null;
      refresh();
    }
  });

  document.addEventListener("keydown", (ev) => {
    if ((ev.target as HTMLElement).tagName === "TEXTAREA") return;
    if (ev.key === "t") {
      ui.markKind = ui.markKind === "Strong" ? "Poor" : "Strong";
      refresh();
    } else if (ev.key === "ArrowRight") {
      video.currentTime = Math.min(video.duration || 0, video.currentTime + 5);
    } else if (ev.key === "ArrowLeft") {
      video.currentTime = Math.max(0, video.currentTime - 5);
    } else if (ev.key === "Delete" && ui.selectedMarkId !== null) {
      ctrl.vm?.removeMark(ui.selectedMarkId);
      ui.selectedMarkId = null;
      refresh();
    }
  });

  video.addEventListener("timeupdate", () => {
    ctrl.vm?.setPlayhead(video.currentTime);
    refresh();
  });

  refresh();
  return { ui, refresh };
}
