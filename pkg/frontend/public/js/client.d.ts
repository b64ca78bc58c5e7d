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
export type Status = "awaiting_env" | "succeeded" | "failed" | "budget_exhausted";
export interface SessionState {
    status: Status;
    transcript: TranscriptMove[];
    pending?: Pending;
    bindings?: Record<string, string>;
}
export type Move = {
    pick: number;
} | {
    term: string;
};
export declare class ProtocolError extends Error {
    status: number;
    detail: string;
    constructor(status: number, detail: string);
}
export declare class SessionClient {
    private base;
    constructor(base?: string);
    create(program: string, query: string, maxSteps?: number): Promise<{
        id: string;
        state: SessionState;
    }>;
    get(id: string): Promise<SessionState>;
    move(id: string, move: Move): Promise<SessionState>;
    close(id: string): Promise<void>;
}
