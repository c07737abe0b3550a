// Payload shapes for the annotation service API.

export type MarkKind = "Strong" | "Poor";
export type SegmentLabel = "Strong" | "Moderate" | "Poor";

export interface VideoInfo {
  video_id: string;
  uri: string;
  duration_s: number;
  age_band: string;
  category: string;
  title: string;
  segment_count: number;
}

export interface SegmentInfo {
  segment_id: string;
  video_id: string;
  index: number;
  start_s: number;
  end_s: number;
}

export interface IntervalPayload {
  start_s: number;
  end_s: number;
  mark: MarkKind;
  note: string;
}

export interface SessionInfo {
  session_id: string;
  rater_id: string;
  video_id: string;
  version: number;
  sealed: boolean;
  notes: string;
  interval_count: number;
}

export interface IntervalsPayload {
  session_id: string;
  version: number;
  sealed: boolean;
  intervals: IntervalPayload[];
  notes: string;
}

export interface SegmentLabelInfo {
  index: number;
  start_s: number;
  end_s: number;
  label: SegmentLabel;
}

export interface ProjectionInfo {
  session_id: string;
  video_id: string;
  rater_id: string;
  labels: SegmentLabelInfo[];
}

export interface ApiErrorBody {
  error: string;
  message: string;
}
