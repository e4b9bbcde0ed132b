// Wire protocol types for the voice/1 duplex session channel.

export const PROTO_VERSION = 'voice/1';

export type Component = 'facial' | 'arm';

export interface Envelope {
  type: string;
  session_id: string | null;
  seq: number;
  payload: Record<string, unknown>;
}

export type ClientMessageType =
  | 'session.start'
  | 'ptt.begin'
  | 'audio.frame'
  | 'ptt.end'
  | 'text.turn'
  | 'video.complete'
  | 'video.skip'
  | 'session.end';

export type ServerMessageType =
  | 'session.accepted'
  | 'transcript.user'
  | 'assistant.text'
  | 'assistant.audio.frame'
  | 'video.request'
  | 'state.phase'
  | 'report.final'
  | 'error';

export interface ReportScores {
  facial: number | null;
  arm: number | null;
  speech: number | null;
  eye: number | null;
  neglect: number | null;
  total: number | null;
  partial_total: number;
  incomplete: boolean;
}

export interface ReportVideo {
  component: Component;
  video_id: string;
  duration_s: number;
  uri: string;
}

export interface ReportTurn {
  speaker: 'user' | 'assistant' | 'system';
  text: string;
  at: string;
}

export interface ReportDoc {
  schema: string;
  session_id: string;
  session: {
    started_at: string;
    ended_at: string;
    duration_s: number;
    aborted: boolean;
  };
  demographics: { age: number | null; sex: string };
  times: {
    last_known_well: string | null;
    symptom_onset: string | null;
    onset_witnessed: boolean | null;
  };
  scores: ReportScores;
  classification: { stroke_likely: boolean | null; lvo_likely: boolean | null };
  ancillary: {
    anticoagulants: string[] | null;
    last_dose_time: string | null;
    prior_stroke: string | null;
    prior_stroke_detail: string | null;
    glucose_mg_dl: number | null;
    glucose_unmeasurable: boolean;
  };
  videos: ReportVideo[];
  discrepancies: { kind: string; detail: string; resolution: string }[];
  completeness: { missing: string[] };
  summary_narrative: string | null;
  transcript: ReportTurn[];
}

export function parseEnvelope(raw: string): Envelope {
  const doc = JSON.parse(raw) as Partial<Envelope>;
  if (typeof doc.type !== 'string' || typeof doc.seq !== 'number') {
    throw new Error('malformed envelope');
  }
  return {
    type: doc.type,
    session_id: doc.session_id ?? null,
    seq: doc.seq,
    payload: (doc.payload ?? {}) as Record<string, unknown>,
  };
}
