// Thin client for the taskcl session protocol. One method per endpoint;
// every call resolves to the server's view of the session state.

export interface PendingBranch {
  site: string;
  kind: "choose_branch";
  arity: number;
  options: string[];
}

export interface PendingTerm {
  site: string;
  kind: "choose_term";
  binder: string;
}

export type Pending = PendingBranch | PendingTerm;

export interface TranscriptMove {
  who: "machine" | "env";
  site: string;
  move: string;
}

export type Status =
  | "awaiting_env"
  | "succeeded"
  | "failed"
  | "budget_exhausted";

export interface SessionState {
  status: Status;
  transcript: TranscriptMove[];
  pending?: Pending;
  bindings?: Record<string, string>;
}

export type Move = { pick: number } | { term: string };

export class ProtocolError extends Error {
  constructor(public status: number, public detail: string) {
    super(`server returned ${status}: ${detail}`);
  }
}

async function unwrap(response: Response): Promise<any> {
  if (response.status === 204) {
    return null;
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail = typeof body.detail === "string"
      ? body.detail
      : JSON.stringify(body.detail ?? body);
    throw new ProtocolError(response.status, detail);
  }
  return body;
}

export class SessionClient {
  constructor(private base: string = "") {}

  async create(
    program: string,
    query: string,
    maxSteps?: number,
  ): Promise<{ id: string; state: SessionState }> {
    const payload: Record<string, unknown> = { program, query };
    if (maxSteps !== undefined) {
      payload.max_steps = maxSteps;
    }
    const response = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return unwrap(response);
  }

  async get(id: string): Promise<SessionState> {
    const response = await fetch(`${this.base}/sessions/${id}`);
    return (await unwrap(response)).state;
  }

  async move(id: string, move: Move): Promise<SessionState> {
    const response = await fetch(`${this.base}/sessions/${id}/moves`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(move),
    });
    return (await unwrap(response)).state;
  }

  async close(id: string): Promise<void> {
    const response = await fetch(`${this.base}/sessions/${id}`, {
      method: "DELETE",
    });
    await unwrap(response);
  }
}
