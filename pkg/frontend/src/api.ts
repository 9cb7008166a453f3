/** Thin fetch client for the session service; the wire format is the contract. */

import type {
  SessionOpened,
  SessionOverrides,
  SessionSnapshot,
  UtteranceReply,
  WireError,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly errorCode: string;
  readonly stage?: string;

  constructor(status: number, body: WireError) {
    super(body.message);
    this.status = status;
    this.errorCode = body.error_code;
    this.stage = body.stage;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: WireError;
  try {
    body = (await response.json()) as WireError;
  } catch {
    body = { error_code: "bad_response", message: `HTTP ${response.status}` };
  }
  return new ApiError(response.status, body);
}

export class SessionApi {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  startSession(overrides: SessionOverrides = {}): Promise<SessionOpened> {
    return this.post<SessionOpened>("/sessions", overrides);
  }

  sendUtterance(sessionId: string, text: string): Promise<UtteranceReply> {
    return this.post<UtteranceReply>(`/sessions/${sessionId}/utterances`, { text });
  }

  async getSession(sessionId: string): Promise<SessionSnapshot> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as SessionSnapshot;
  }

  async closeSession(sessionId: string): Promise<void> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}`, {
      method: "DELETE",
    });
    if (!response.ok && response.status !== 204) throw await parseError(response);
  }
}
