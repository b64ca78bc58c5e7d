import { Move, Pending, SessionClient, SessionState, Status } from "./client.js";
export interface Example {
    name: string;
    program: string;
    query: string;
    description: string;
}
export declare const EXAMPLES: Example[];
export declare function transcriptLines(state: SessionState): string[];
export declare function bindingLines(state: SessionState): string[];
export declare class ConsoleController {
    private client;
    private sessionId;
    state: SessionState | null;
    constructor(client: SessionClient);
    get status(): Status | null;
    get pending(): Pending | null;
    get finished(): boolean;
    start(program: string, query: string): Promise<SessionState>;
    submit(move: Move): Promise<SessionState>;
    pick(index: number): Promise<SessionState>;
    witness(term: string): Promise<SessionState>;
    /** Play a whole scripted game; used by tests and the gallery demo. */
    play(program: string, query: string, moves: Move[]): Promise<SessionState>;
}
