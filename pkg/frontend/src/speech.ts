/** Minimal typings for the browser speech recognition API (prefixed on WebKit). */
export interface RecognitionResultEvent {
  results: ArrayLike<ArrayLike<{ transcript: string }>>;
}

export interface Recognition {
  lang: string;
  continuous: boolean;
  interimResults: boolean;
  onresult: ((event: RecognitionResultEvent) => void) | null;
  onerror: ((event: unknown) => void) | null;
  onend: (() => void) | null;
  start(): void;
  stop(): void;
}

type RecognitionConstructor = new () => Recognition;

function constructor(scope: typeof globalThis): RecognitionConstructor | null {
  const candidate =
    (scope as Record<string, unknown>).SpeechRecognition ??
    (scope as Record<string, unknown>).webkitSpeechRecognition;
  return typeof candidate === "function" ? (candidate as RecognitionConstructor) : null;
}

export function isSpeechSupported(scope: typeof globalThis = globalThis): boolean {
  return constructor(scope) !== null;
}

/** Build a one-shot recognizer, or null when the browser has no support. */
export function createRecognition(
  scope: typeof globalThis = globalThis,
): Recognition | null {
  const Ctor = constructor(scope);
  if (!Ctor) return null;
  const recognition = new Ctor();
  recognition.continuous = false;
  recognition.interimResults = false;
  recognition.lang = "en-US";
  return recognition;
}

/** Final transcript of a recognition result, or "" when empty. */
export function finalTranscript(event: RecognitionResultEvent): string {
  const last = event.results[event.results.length - 1];
  if (!last || !last[0]) return "";
  return last[0].transcript.trim();
}
