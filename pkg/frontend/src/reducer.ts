// UI session state as a pure projection of the server message stream.
//
// `reduce` consumes server envelopes only; replaying a recorded log yields
// the same state every time. Local interactions (mic up/down) are separate
// transitions so the projection stays replayable headless.

import type { Component, Envelope, ReportDoc } from './protocol.js';

export interface Turn {
  speaker: 'user' | 'assistant';
  text: string;
}

export interface UiError {
  code: string;
  detail: string;
}

export interface UiSessionState {
  connection: 'idle' | 'connecting' | 'live' | 'ended';
  mic: 'closed' | 'open';
  sessionId: string | null;
  agent: string | null;
  phase: string | null;
  pendingVideo: Component | null;
  pendingClarification: string | null;
  transcript: Turn[];
  report: ReportDoc | null;
  reportRaw: string | null;
  errors: UiError[];
  lastServerSeq: number | null;
}

export const initialState: UiSessionState = {
  connection: 'idle',
  mic: 'closed',
  sessionId: null,
  agent: null,
  phase: null,
  pendingVideo: null,
  pendingClarification: null,
  transcript: [],
  report: null,
  reportRaw: null,
  errors: [],
  lastServerSeq: null,
};

export function reduce(state: UiSessionState, envelope: Envelope): UiSessionState {
  const next: UiSessionState = { ...state, lastServerSeq: envelope.seq };
  if (state.lastServerSeq !== null && envelope.seq <= state.lastServerSeq) {
    return {
      ...next,
      errors: [
        ...state.errors,
        { code: 'BAD_SERVER_SEQ', detail: `server seq ${envelope.seq} regressed` },
      ],
    };
  }
  const payload = envelope.payload;
  switch (envelope.type) {
    case 'session.accepted':
      return {
        ...next,
        connection: 'live',
        sessionId: (payload.session_id as string) ?? null,
      };
    case 'transcript.user':
      return {
        ...next,
        transcript: [
          ...state.transcript,
          { speaker: 'user', text: (payload.text as string) ?? '' },
        ],
      };
    case 'assistant.text':
      return {
        ...next,
        transcript: [
          ...state.transcript,
          { speaker: 'assistant', text: (payload.text as string) ?? '' },
        ],
      };
    case 'video.request':
      return { ...next, pendingVideo: (payload.component as Component) ?? null };
    case 'state.phase': {
      const status = (payload.status as string) ?? null;
      return {
        ...next,
        agent: (payload.agent_id as string) ?? state.agent,
        phase: status,
        // video.request/complete lifecycle: leaving the gate clears it
        pendingVideo: status === 'awaiting_video' ? state.pendingVideo : null,
        pendingClarification:
          status === 'awaiting_clarification'
            ? ((payload.detail as string) ?? 'unknown')
            : null,
      };
    }
    case 'report.final': {
      const raw = (payload.report_json as string) ?? '';
      let report: ReportDoc | null = null;
      try {
        report = JSON.parse(raw) as ReportDoc;
      } catch {
        report = null;
      }
      return {
        ...next,
        connection: 'ended',
        mic: 'closed',
        pendingVideo: null,
        pendingClarification: null,
        report,
        reportRaw: raw,
      };
    }
    case 'error':
      return {
        ...next,
        errors: [
          ...state.errors,
          {
            code: (payload.code as string) ?? 'UNKNOWN',
            detail: (payload.detail as string) ?? '',
          },
        ],
      };
    case 'assistant.audio.frame':
      return next; // playback only; no state carried
    default:
      return {
        ...next,
        errors: [
          ...state.errors,
          { code: 'UNKNOWN_SERVER_TYPE', detail: envelope.type },
        ],
      };
  }
}

// -- local transitions (not part of the server projection) -----------------

export function micDown(state: UiSessionState): UiSessionState {
  if (state.connection !== 'live' || state.pendingVideo !== null) {
    return state;
  }
  return { ...state, mic: 'open' };
}

export function micUp(state: UiSessionState): UiSessionState {
  return state.mic === 'open' ? { ...state, mic: 'closed' } : state;
}

export function markConnecting(state: UiSessionState): UiSessionState {
  return { ...state, connection: 'connecting' };
}

export function markClosed(state: UiSessionState): UiSessionState {
  return { ...state, connection: 'ended', mic: 'closed' };
}

// -- outbound preconditions -------------------------------------------------

export function validateOutbound(state: UiSessionState, type: string): string | null {
  switch (type) {
    case 'session.start':
      return state.connection === 'idle' ? null : 'session already started';
    case 'ptt.begin':
      if (state.connection !== 'live') return 'not connected';
      if (state.pendingVideo !== null) return 'video modal open';
      if (state.mic === 'open') return 'mic already open';
      return null;
    case 'audio.frame':
      return state.mic === 'open' ? null : 'mic closed';
    case 'ptt.end':
      return state.mic === 'open' ? null : 'mic was not open';
    case 'text.turn':
      if (state.connection !== 'live') return 'not connected';
      if (state.pendingVideo !== null) return 'video modal open';
      if (state.mic === 'open') return 'mic is open';
      return null;
    case 'video.complete':
    case 'video.skip':
      return state.pendingVideo !== null ? null : 'no pending video';
    case 'session.end':
      return state.connection === 'live' ? null : 'not connected';
    default:
      return `unknown client message ${type}`;
  }
}
