/** Wire types for the session service HTTP/JSON protocol. */

export interface StageRecord {
  stage: string;
  detail: Record<string, unknown>;
}

export interface VisualPayload {
  title: string;
  body: string;
  emphasis: [number, number][];
  kind: string; // "response" | "clarify"
}

export interface RenderedOutput {
  text: string;
  modality: string; // "text" | "visual-text"
  trace: StageRecord[];
  payload?: VisualPayload;
}

export interface SessionOpened {
  session_id: string;
  phase: string;
}

export interface UtteranceReply {
  response: RenderedOutput;
  phase: string;
}

export interface SessionSnapshot {
  phase: string;
  history: { utterance: string; response: RenderedOutput }[];
  closed: boolean;
}

export interface WireError {
  error_code: string;
  message: string;
  stage?: string;
}

export interface SessionOverrides {
  backend?: string;
  seed?: number;
  modality?: string;
  noise?: Record<string, number>;
}

/** One transcript line: what was sent and exactly what came back. */
export interface TranscriptEntry {
  utterance: string;
  responseText: string;
  payload: VisualPayload | null;
  errorCode?: string;
  stage?: string;
}

export const PHASES = ["intake", "induction", "deepening", "exercise", "closing"] as const;
export type Phase = (typeof PHASES)[number];

/** Client-side session mirror; every displayed string comes off the wire. */
export interface SessionView {
  sessionId: string | null;
  phase: string;
  transcript: TranscriptEntry[];
  pending: boolean;
  closed: boolean;
  banner: string | null;
}
