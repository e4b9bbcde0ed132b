// Reducer determinism: replaying the recorded canonical-scenario server
// log yields the final report state, twice over, with no outbound
// precondition violations.

import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { auditOutbound, SessionClient } from '../src/client.js';
import type { Envelope } from '../src/protocol.js';
import { initialState, reduce } from '../src/reducer.js';
import type { UiSessionState } from '../src/reducer.js';

const wireLog = JSON.parse(
  readFileSync(new URL('../fixtures/table1_wire.json', import.meta.url), 'utf-8'),
) as Envelope[];

function replay(): UiSessionState {
  let state = initialState;
  for (const envelope of wireLog) {
    state = reduce(state, envelope);
  }
  return state;
}

describe('reducer replay of the recorded table1 log', () => {
  it('ends with the report rendered and the session closed', () => {
    const state = replay();
    expect(state.connection).toBe('ended');
    expect(state.report).not.toBeNull();
    expect(state.reportRaw).not.toBeNull();
    expect(state.report!.scores).toMatchObject({
      facial: 1,
      arm: 2,
      speech: 1,
      eye: 0,
      neglect: 2,
      total: 6,
    });
    expect(state.report!.classification).toEqual({
      stroke_likely: true,
      lvo_likely: true,
    });
    expect(state.report!.videos.map((v) => v.component)).toEqual(['facial', 'arm']);
    expect(state.pendingVideo).toBeNull();
    expect(state.errors).toEqual([]);
  });

  it('is deterministic: two replays produce identical state', () => {
    expect(replay()).toEqual(replay());
  });

  it('tracks the video gate lifecycle from the stream', () => {
    let state = initialState;
    let sawFacialGate = false;
    for (const envelope of wireLog) {
      state = reduce(state, envelope);
      if (state.pendingVideo === 'facial') sawFacialGate = true;
    }
    expect(sawFacialGate).toBe(true);
    expect(state.pendingVideo).toBeNull();
  });

  it('surfaces the clarification phase and clears it on resolution', () => {
    let state = initialState;
    let sawClarification: string | null = null;
    for (const envelope of wireLog) {
      state = reduce(state, envelope);
      if (state.pendingClarification !== null) {
        sawClarification = state.pendingClarification;
      }
    }
    expect(sawClarification).toBe('demographics.sex');
    expect(state.pendingClarification).toBeNull();
  });

  it('emits zero precondition violations while consuming the log', () => {
    const sent: string[] = [];
    const client = new SessionClient({ send: (data) => sent.push(data) });
    client.start('text');
    for (const envelope of wireLog) {
      client.receive(envelope);
      // opportunistic misuse at every point must be refused, not sent
      if (client.state.pendingVideo !== null) {
        expect(client.pttDown()).toBe(false);
        expect(client.sendText('can you hear me?')).toBe(false);
      }
      if (client.state.connection === 'ended') {
        expect(client.pttDown()).toBe(false);
      }
    }
    expect(auditOutbound(client.log)).toEqual([]);
  });
});
