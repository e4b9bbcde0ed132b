// Guided video capture: MediaRecorder modal flow plus the upload call.
// The upload itself is transport-only and injectable for tests.

import type { Component } from './protocol.js';

export const MAX_RECORD_SECONDS = 60;

export interface UploadOutcome {
  ok: boolean;
  videoId?: string;
  code?: string;
  detail?: string;
}

export async function uploadVideo(
  serverBase: string,
  sessionId: string,
  component: Component,
  data: Blob | Uint8Array,
  durationS: number,
  fetchImpl: typeof fetch = fetch,
): Promise<UploadOutcome> {
  const url = `http://${serverBase}/sessions/${encodeURIComponent(sessionId)}/videos/${component}`;
  try {
    const body =
      data instanceof Uint8Array
        ? // copy into a fresh buffer so the BodyInit type is exact
          new Uint8Array(data).buffer
        : data;
    const response = await fetchImpl(url, {
      method: 'PUT',
      headers: {
        'content-type': 'video/webm',
        'x-video-duration-s': String(durationS),
      },
      body,
    });
    const doc = (await response.json()) as Record<string, string>;
    if (!response.ok) {
      return { ok: false, code: doc.code ?? String(response.status), detail: doc.detail };
    }
    return { ok: true, videoId: doc.video_id };
  } catch (err) {
    return { ok: false, code: 'NETWORK', detail: String(err) };
  }
}

export interface RecordingHandle {
  stop(): void;
  done: Promise<{ blob: Blob; durationS: number }>;
}

/** Record from the device camera until stop() or the 60 s cap. */
export async function startCameraRecording(): Promise<RecordingHandle> {
  const stream = await navigator.mediaDevices.getUserMedia({ video: true, audio: false });
  const recorder = new MediaRecorder(stream, { mimeType: 'video/webm' });
  const chunks: Blob[] = [];
  const startedAt = Date.now();

  recorder.ondataavailable = (event) => {
    if (event.data && event.data.size > 0) chunks.push(event.data);
  };

  const done = new Promise<{ blob: Blob; durationS: number }>((resolve) => {
    recorder.onstop = () => {
      stream.getTracks().forEach((track) => track.stop());
      resolve({
        blob: new Blob(chunks, { type: 'video/webm' }),
        durationS: Math.min((Date.now() - startedAt) / 1000, MAX_RECORD_SECONDS),
      });
    };
  });

  recorder.start();
  const capTimer = setTimeout(() => {
    if (recorder.state === 'recording') recorder.stop();
  }, MAX_RECORD_SECONDS * 1000);

  return {
    stop() {
      clearTimeout(capTimer);
      if (recorder.state === 'recording') recorder.stop();
    },
    done,
  };
}
