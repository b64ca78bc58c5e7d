// Console state machine, independent of the DOM so it can be tested
// headless: it drives a SessionClient, remembers the live session, and
// renders transcripts in the same shape the batch runner prints.

import {
  Move,
  Pending,
  SessionClient,
  SessionState,
  Status,
} from "./client.js";

export interface Example {
  name: string;
  program: string;
  query: string;
  description: string;
}

// Bundled gallery; the programs mirror the interpreter's corpus.
export const EXAMPLES: Example[] = [
  {
    name: "lottery",
    description:
      "The environment decides whether the ticket pays 0 or 1000000; " +
      "the machine reports the payout.",
    program: "t: t(0) + t(1000000).\n",
    query: "exists X. t(X)",
  },
  {
    name: "factorial",
    description:
      "Pick a number Y when asked; the machine answers Z = Y! by " +
      "running the step rule backwards.",
    program:
      "c: fact(0, 1) * " +
      "!(forall X. forall Y. (fact(X, Y) -> fact(X + 1, X * Y + Y))).\n",
    query: "exists Z. (forall Y. fact(Y, Z))",
  },
];

export function transcriptLines(state: SessionState): string[] {
  return state.transcript.map(
    (m, i) => `${i + 1}. ${m.who} @ ${m.site}: ${m.move}`,
  );
}

export function bindingLines(state: SessionState): string[] {
  const bindings = state.bindings ?? {};
  return Object.keys(bindings).map((name) => `${name} = ${bindings[name]}`);
}

export class ConsoleController {
  private sessionId: string | null = null;
  state: SessionState | null = null;

  constructor(private client: SessionClient) {}

  get status(): Status | null {
    return this.state ? this.state.status : null;
  }

  get pending(): Pending | null {
    return this.state && this.state.pending ? this.state.pending : null;
  }

  get finished(): boolean {
    return this.state !== null && this.state.status !== "awaiting_env";
  }

  async start(program: string, query: string): Promise<SessionState> {
    if (this.sessionId !== null) {
      await this.client.close(this.sessionId).catch(() => {});
    }
    const created = await this.client.create(program, query);
    this.sessionId = created.id;
    this.state = created.state;
    return this.state;
  }

  async submit(move: Move): Promise<SessionState> {
    if (this.sessionId === null || this.state === null) {
      throw new Error("no session in progress");
    }
    if (this.state.status !== "awaiting_env") {
      throw new Error(`game already over (${this.state.status})`);
    }
    this.state = await this.client.move(this.sessionId, move);
    // pick up any machine moves appended after ours
    this.state = await this.client.get(this.sessionId);
    return this.state;
  }

  async pick(index: number): Promise<SessionState> {
    return this.submit({ pick: index });
  }

  async witness(term: string): Promise<SessionState> {
    return this.submit({ term });
  }

  /** Play a whole scripted game; used by tests and the gallery demo. */
  async play(
    program: string,
    query: string,
    moves: Move[],
  ): Promise<SessionState> {
    let state = await this.start(program, query);
    for (const move of moves) {
      if (state.status !== "awaiting_env") {
        break;
      }
      state = await this.submit(move);
    }
    return state;
  }
}
