// Page wiring: connect to the gateway named by ?server=, hold-to-talk,
// guided video modal, live transcript, final report.

import { MicCapture } from './audio.js';
import { SessionClient } from './client.js';
import { parseEnvelope } from './protocol.js';
import type { Component } from './protocol.js';
import { renderReportHtml } from './report.js';
import { startCameraRecording, uploadVideo } from './video.js';
import type { RecordingHandle } from './video.js';

const params = new URLSearchParams(location.search);
const server = params.get('server') ?? location.host;

const el = {
  connect: document.getElementById('connect') as HTMLButtonElement,
  endSession: document.getElementById('end-session') as HTMLButtonElement,
  ptt: document.getElementById('ptt') as HTMLButtonElement,
  micState: document.getElementById('mic-state') as HTMLElement,
  phase: document.getElementById('phase') as HTMLElement,
  hint: document.getElementById('hint') as HTMLElement,
  transcript: document.getElementById('transcript') as HTMLElement,
  textForm: document.getElementById('text-form') as HTMLFormElement,
  textInput: document.getElementById('text-input') as HTMLInputElement,
  modal: document.getElementById('video-modal') as HTMLElement,
  modalTitle: document.getElementById('video-title') as HTMLElement,
  modalStatus: document.getElementById('video-status') as HTMLElement,
  record: document.getElementById('video-record') as HTMLButtonElement,
  stop: document.getElementById('video-stop') as HTMLButtonElement,
  skip: document.getElementById('video-skip') as HTMLButtonElement,
  report: document.getElementById('report') as HTMLElement,
};

let socket: WebSocket | null = null;
let client: SessionClient | null = null;
const mic = new MicCapture();
let micLive = false;
let recording: RecordingHandle | null = null;
let uploadFailedOnce = false;

function hint(text: string): void {
  el.hint.textContent = text;
  if (text) setTimeout(() => (el.hint.textContent = ''), 2500);
}

function render(): void {
  if (!client) return;
  const state = client.state;
  el.phase.textContent = `${state.connection}${state.agent ? ' / ' + state.agent : ''}${
    state.phase ? ' / ' + state.phase : ''
  }`;
  el.micState.textContent = state.mic === 'open' ? 'mic open' : 'mic closed';
  el.micState.classList.toggle('live', state.mic === 'open');
  el.ptt.disabled = state.connection !== 'live' || state.pendingVideo !== null;

  el.transcript.innerHTML = state.transcript
    .map((turn) => `<li class="${turn.speaker}">${turn.text}</li>`)
    .join('');
  el.transcript.scrollTop = el.transcript.scrollHeight;

  if (state.pendingVideo !== null) {
    // initialize the modal only on the hidden -> shown transition so a
    // re-render cannot reset an in-progress recording
    if (el.modal.classList.contains('hidden')) {
      openModal(state.pendingVideo);
    }
  } else {
    el.modal.classList.add('hidden');
  }

  if (state.reportRaw !== null) {
    el.report.innerHTML = renderReportHtml(
      state.report,
      state.reportRaw,
      `http://${server}`,
    );
  }
}

function connect(): void {
  socket = new WebSocket(`ws://${server}/session`);
  client = new SessionClient({ send: (data) => socket?.send(data) });
  client.onState = render;
  client.onBlocked = hint;
  socket.onopen = () => client?.start('voice');
  socket.onmessage = (event) => client?.receive(parseEnvelope(String(event.data)));
  socket.onclose = () => client?.connectionClosed();
}

el.connect.addEventListener('click', () => {
  if (!client || client.state.connection === 'ended') connect();
});

el.endSession.addEventListener('click', () => client?.end());

// Hold-to-talk: mic is open exactly while the button is held.
el.ptt.addEventListener('pointerdown', () => {
  if (!client?.pttDown()) return;
  micLive = true;
  void mic.start((b64, samples) => {
    if (micLive) client?.sendAudioFrame(b64, samples);
  });
});

function releasePtt(): void {
  if (!client || client.state.mic !== 'open') return;
  micLive = false;
  mic.stop((b64, samples) => client?.sendAudioFrame(b64, samples));
  client.pttUp();
}

el.ptt.addEventListener('pointerup', releasePtt);
el.ptt.addEventListener('pointerleave', releasePtt);

// Text fallback for environments without a microphone.
el.textForm.addEventListener('submit', (event) => {
  event.preventDefault();
  const text = el.textInput.value.trim();
  if (text && client?.sendText(text)) {
    el.textInput.value = '';
  }
});

function openModal(component: Component): void {
  el.modal.classList.remove('hidden');
  el.modalTitle.textContent =
    component === 'facial'
      ? 'Record the facial movement exam'
      : 'Record the arm strength exam';
  el.record.disabled = false;
  el.stop.disabled = true;
}

el.record.addEventListener('click', async () => {
  if (!client) return;
  try {
    recording = await startCameraRecording();
    el.record.disabled = true;
    el.stop.disabled = false;
    el.modalStatus.textContent = 'recording...';
  } catch {
    el.modalStatus.textContent = 'camera unavailable; you can skip';
  }
});

el.stop.addEventListener('click', async () => {
  if (!client || !recording) return;
  el.stop.disabled = true;
  recording.stop();
  const { blob, durationS } = await recording.done;
  recording = null;
  const component = client.state.pendingVideo;
  const sessionId = client.state.sessionId;
  if (component === null || sessionId === null) return;
  el.modalStatus.textContent = 'uploading...';
  const outcome = await uploadVideo(server, sessionId, component, blob, durationS);
  if (outcome.ok && outcome.videoId) {
    client.completeVideo(outcome.videoId);
    el.modalStatus.textContent = '';
    uploadFailedOnce = false;
  } else if (!uploadFailedOnce) {
    uploadFailedOnce = true;
    el.modalStatus.textContent = `upload failed (${outcome.code}); try again or skip`;
    el.record.disabled = false;
  } else {
    el.modalStatus.textContent = 'upload failed again; skipping';
    client.skipVideo();
    uploadFailedOnce = false;
  }
});

el.skip.addEventListener('click', () => client?.skipVideo());
