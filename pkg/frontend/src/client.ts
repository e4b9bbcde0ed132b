// Session client: numbers outbound envelopes, enforces protocol
// preconditions before anything leaves the browser, and folds every
// server message into the state reducer.

import { PROTO_VERSION } from './protocol.js';
import type { Envelope } from './protocol.js';
import {
  initialState,
  markClosed,
  markConnecting,
  micDown,
  micUp,
  reduce,
  validateOutbound,
} from './reducer.js';
import type { UiSessionState } from './reducer.js';

export interface Transport {
  send(data: string): void;
}

export interface LogEntry {
  dir: 'in' | 'out';
  envelope: Envelope;
}

export class SessionClient {
  state: UiSessionState = initialState;
  /** Attempts refused by the precondition gate (no-op + UI hint). */
  readonly blocked: string[] = [];
  /** Ordered record of every message in either direction. */
  readonly log: LogEntry[] = [];
  onState: ((state: UiSessionState) => void) | null = null;
  onBlocked: ((hint: string) => void) | null = null;

  private seq = 0;

  constructor(private readonly transport: Transport) {}

  // -- inbound ---------------------------------------------------------

  receive(envelope: Envelope): UiSessionState {
    this.log.push({ dir: 'in', envelope });
    this.setState(reduce(this.state, envelope));
    return this.state;
  }

  connectionClosed(): void {
    this.setState(markClosed(this.state));
  }

  // -- outbound --------------------------------------------------------

  start(mode: 'voice' | 'text' = 'voice'): boolean {
    const ok = this.emit('session.start', { proto: PROTO_VERSION, mode });
    if (ok) this.setState(markConnecting(this.state));
    return ok;
  }

  pttDown(): boolean {
    const ok = this.emit('ptt.begin', {});
    if (ok) this.setState(micDown(this.state));
    return ok;
  }

  sendAudioFrame(pcm16B64: string, samples: number): boolean {
    return this.emit('audio.frame', { pcm16_b64: pcm16B64, samples });
  }

  pttUp(): boolean {
    const ok = this.emit('ptt.end', {});
    if (ok) this.setState(micUp(this.state));
    return ok;
  }

  sendText(text: string): boolean {
    return this.emit('text.turn', { text });
  }

  completeVideo(videoId: string): boolean {
    return this.emit('video.complete', { video_id: videoId });
  }

  skipVideo(): boolean {
    return this.emit('video.skip', {});
  }

  end(): boolean {
    return this.emit('session.end', {});
  }

  // -- internals ---------------------------------------------------------

  private emit(type: string, payload: Record<string, unknown>): boolean {
    const problem = validateOutbound(this.state, type);
    if (problem !== null) {
      this.blocked.push(`${type}: ${problem}`);
      this.onBlocked?.(`${type}: ${problem}`);
      return false;
    }
    this.seq += 1;
    const envelope: Envelope = {
      type,
      session_id: this.state.sessionId,
      seq: this.seq,
      payload,
    };
    this.log.push({ dir: 'out', envelope });
    this.transport.send(JSON.stringify(envelope));
    return true;
  }

  private setState(state: UiSessionState): void {
    this.state = state;
    this.onState?.(state);
  }
}

/**
 * Replay a recorded message log and return every outbound message that
 * violated the protocol preconditions at its send time. An empty result
 * means the client never emitted an invalid message.
 */
export function auditOutbound(log: LogEntry[]): string[] {
  let state: UiSessionState = initialState;
  const violations: string[] = [];
  for (const entry of log) {
    if (entry.dir === 'in') {
      state = reduce(state, entry.envelope);
      continue;
    }
    const type = entry.envelope.type;
    const problem = validateOutbound(state, type);
    if (problem !== null) {
      violations.push(`${type}: ${problem}`);
    }
    // mirror the client-side transitions that accompany valid sends
    if (type === 'session.start') state = markConnecting(state);
    if (type === 'ptt.begin') state = micDown(state);
    if (type === 'ptt.end') state = micUp(state);
  }
  return violations;
}
