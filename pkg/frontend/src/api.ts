// Thin fetch client for the annotation service. Paths are origin-absolute
// because the UI is mounted under /ui while the API lives at the root.

import type {
  ApiErrorBody,
  IntervalPayload,
  IntervalsPayload,
  ProjectionInfo,
  SegmentInfo,
  SessionInfo,
  VideoInfo,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly kind: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.kind = body.error;
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function toError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody = { error: "unknown", message: `HTTP ${response.status}` };
  try {
    const parsed = (await response.json()) as Partial<ApiErrorBody> & { detail?: unknown };
    if (typeof parsed.error === "string" && typeof parsed.message === "string") {
      body = { error: parsed.error, message: parsed.message };
    } else if (parsed.detail !== undefined) {
      // FastAPI's own validation errors arrive as {detail: [...]}.
      body = { error: "validation", message: JSON.stringify(parsed.detail) };
    }
  } catch {
    // non-JSON body; keep the fallback
  }
  return new ApiError(response.status, body);
}

/** What the controller needs from a client; fakes implement this in tests. */
export interface AnnotationClient {
  listVideos(): Promise<VideoInfo[]>;
  segments(videoId: string): Promise<SegmentInfo[]>;
  mediaUrl(videoId: string): string;
  openSession(raterId: string, videoId: string): Promise<SessionInfo>;
  getIntervals(sessionId: string): Promise<IntervalsPayload>;
  putIntervals(
    sessionId: string,
    expectedVersion: number,
    intervals: IntervalPayload[],
    notes?: string,
  ): Promise<IntervalsPayload>;
  submit(sessionId: string, expectedVersion: number): Promise<SessionInfo>;
  projection(sessionId: string): Promise<ProjectionInfo>;
}

export class AnnotationApi implements AnnotationClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) throw await toError(response);
    return (await response.json()) as T;
  }

  listVideos(): Promise<VideoInfo[]> {
    return this.request("/videos");
  }

  segments(videoId: string): Promise<SegmentInfo[]> {
    return this.request(`/videos/${encodeURIComponent(videoId)}/segments`);
  }

  mediaUrl(videoId: string): string {
    return `${this.baseUrl}/videos/${encodeURIComponent(videoId)}/media`;
  }

  openSession(raterId: string, videoId: string): Promise<SessionInfo> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ rater_id: raterId, video_id: videoId }),
    });
  }

  getIntervals(sessionId: string): Promise<IntervalsPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/intervals`);
  }

  putIntervals(
    sessionId: string,
    expectedVersion: number,
    intervals: IntervalPayload[],
    notes?: string,
  ): Promise<IntervalsPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/intervals`, {
      method: "PUT",
      body: JSON.stringify({
        expected_version: expectedVersion,
        intervals,
        ...(notes === undefined ? {} : { notes }),
      }),
    });
  }

  submit(sessionId: string, expectedVersion: number): Promise<SessionInfo> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/submit`, {
      method: "POST",
      body: JSON.stringify({ expected_version: expectedVersion }),
    });
  }

  projection(sessionId: string): Promise<ProjectionInfo> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/projection`);
  }
}
