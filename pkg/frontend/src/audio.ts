// Push-to-talk microphone capture: 24 kHz mono PCM16, base64 frames of
// at most 4096 samples, delivered while the mic is held open.

export const SAMPLE_RATE = 24000;
export const FRAME_SAMPLES = 4096;

export function floatToPcm16(samples: Float32Array): Int16Array {
  const out = new Int16Array(samples.length);
  for (let i = 0; i < samples.length; i++) {
    const clamped = Math.max(-1, Math.min(1, samples[i]));
    out[i] = Math.round(clamped < 0 ? clamped * 32768 : clamped * 32767);
  }
  return out;
}

export function pcm16ToBase64(pcm: Int16Array): string {
  const bytes = new Uint8Array(pcm.buffer, pcm.byteOffset, pcm.byteLength);
  let binary = '';
  for (let i = 0; i < bytes.length; i++) {
    binary += String.fromCharCode(bytes[i]);
  }
  return btoa(binary);
}

export type FrameSink = (pcm16B64: string, samples: number) => void;

export class MicCapture {
  private context: AudioContext | null = null;
  private stream: MediaStream | null = null;
  private processor: ScriptProcessorNode | null = null;
  private buffer: Float32Array = new Float32Array(0);

  async start(onFrame: FrameSink): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({
      audio: { echoCancellation: true, noiseSuppression: true },
    });
    this.context = new AudioContext({ sampleRate: SAMPLE_RATE });
    const source = this.context.createMediaStreamSource(this.stream);
    this.processor = this.context.createScriptProcessor(FRAME_SAMPLES, 1, 1);
    this.processor.onaudioprocess = (event) => {
      const chunk = event.inputBuffer.getChannelData(0);
      const merged = new Float32Array(this.buffer.length + chunk.length);
      merged.set(this.buffer);
      merged.set(chunk, this.buffer.length);
      this.buffer = merged;
      while (this.buffer.length >= FRAME_SAMPLES) {
        const frame = this.buffer.subarray(0, FRAME_SAMPLES);
        onFrame(pcm16ToBase64(floatToPcm16(frame)), FRAME_SAMPLES);
        this.buffer = this.buffer.slice(FRAME_SAMPLES);
      }
    };
    source.connect(this.processor);
    this.processor.connect(this.context.destination);
  }

  stop(onFrame?: FrameSink): void {
    if (this.buffer.length > 0 && onFrame) {
      onFrame(pcm16ToBase64(floatToPcm16(this.buffer)), this.buffer.length);
    }
    this.buffer = new Float32Array(0);
    this.processor?.disconnect();
    this.processor = null;
    this.stream?.getTracks().forEach((track) => track.stop());
    this.stream = null;
    void this.context?.close();
    this.context = null;
  }
}
