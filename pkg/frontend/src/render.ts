/** DOM-free rendering helpers: they turn view state into plain data that the
 * DOM layer (or a test) consumes. Text content is passed through untouched. */

import { PHASES } from "./types.js";
import type { TranscriptEntry, VisualPayload } from "./types.js";

export interface TextSegment {
  text: string;
  emphasized: boolean;
}

/** Split a payload body into plain/emphasized segments using wire spans. */
export function emphasisSegments(payload: VisualPayload): TextSegment[] {
  const segments: TextSegment[] = [];
  let cursor = 0;
  for (const [start, end] of payload.emphasis) {
    if (start > cursor) segments.push({ text: payload.body.slice(cursor, start), emphasized: false });
    segments.push({ text: payload.body.slice(start, end), emphasized: true });
    cursor = end;
  }
  if (cursor < payload.body.length) {
    segments.push({ text: payload.body.slice(cursor), emphasized: false });
  }
  return segments;
}

export interface PhaseStep {
  name: string;
  state: "done" | "current" | "upcoming";
}

/** Five-step progress strip driven purely by the wire phase field. */
export function phaseSteps(phase: string): PhaseStep[] {
  const at = PHASES.indexOf(phase as (typeof PHASES)[number]);
  return PHASES.map((name, idx) => ({
    name,
    state: idx < at ? "done" : idx === at ? "current" : "upcoming",
  }));
}

export type RowStyle = "response" | "clarify" | "error";

/** Styling class for a transcript row, decided by wire payload kind only. */
export function rowStyle(entry: TranscriptEntry): RowStyle {
  if (entry.errorCode) return "error";
  if (entry.payload && entry.payload.kind === "clarify") return "clarify";
  return "response";
}
