/** Session view state machine. No inference happens here: the store copies
 * wire fields verbatim into the view and only tracks request bookkeeping
 * (pending flag, closed flag, error banner). */

import { ApiError, SessionApi } from "./api.js";
import type { SessionOverrides, SessionView } from "./types.js";

export type Listener = (view: SessionView) => void;

function emptyView(): SessionView {
  return {
    sessionId: null,
    phase: "intake",
    transcript: [],
    pending: false,
    closed: false,
    banner: null,
  };
}

export class SessionStore {
  private view: SessionView = emptyView();
  private readonly listeners: Listener[] = [];

  constructor(private readonly api: SessionApi) {}

  snapshot(): SessionView {
    return {
      ...this.view,
      transcript: this.view.transcript.map((entry) => ({ ...entry })),
    };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.snapshot());
    return () => {
      const at = this.listeners.indexOf(listener);
      if (at >= 0) this.listeners.splice(at, 1);
    };
  }

  private commit(patch: Partial<SessionView>): void {
    this.view = { ...this.view, ...patch };
    for (const listener of this.listeners) listener(this.snapshot());
  }

  /** Input is legal exactly when a session is open, idle, and not closed. */
  canSend(): boolean {
    return this.view.sessionId !== null && !this.view.pending && !this.view.closed;
  }

  async start(overrides: SessionOverrides = {}): Promise<SessionView> {
    this.commit({ ...emptyView(), pending: true });
    try {
      const opened = await this.api.startSession(overrides);
      this.commit({
        sessionId: opened.session_id,
        phase: opened.phase,
        pending: false,
        banner: null,
      });
    } catch (err) {
      this.commit({ pending: false, banner: bannerText(err) });
    }
    return this.snapshot();
  }

  async send(text: string): Promise<SessionView> {
    if (text.trim() === "") return this.snapshot(); // rejected client-side, no request
    if (!this.canSend()) return this.snapshot();
    const sessionId = this.view.sessionId as string;
    this.commit({ pending: true });
    try {
      const reply = await this.api.sendUtterance(sessionId, text);
      this.commit({
        pending: false,
        phase: reply.phase,
        transcript: [
          ...this.view.transcript,
          {
            utterance: text,
            responseText: reply.response.text,
            payload: reply.response.payload ?? null,
          },
        ],
      });
    } catch (err) {
      if (err instanceof ApiError && err.errorCode === "session_closed") {
        this.commit({ pending: false, closed: true, banner: "session closed" });
      } else if (err instanceof ApiError) {
        // stage-tagged engine errors become an inline diagnostic row
        this.commit({
          pending: false,
          transcript: [
            ...this.view.transcript,
            {
              utterance: text,
              responseText: err.message,
              payload: null,
              errorCode: err.errorCode,
              stage: err.stage,
            },
          ],
        });
      } else {
        this.commit({ pending: false, banner: bannerText(err) });
      }
    }
    return this.snapshot();
  }
}

function bannerText(err: unknown): string {
  if (err instanceof ApiError) return `${err.errorCode}: ${err.message}`;
  return "connection failed";
}
