// Thin client for the taskcl session protocol. One method per endpoint;
// every call resolves to the server's view of the session state.
export class ProtocolError extends Error {
    constructor(status, detail) {
        super(`server returned ${status}: ${detail}`);
        this.status = status;
        this.detail = detail;
    }
}
async function unwrap(response) {
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
    constructor(base = "") {
        this.base = base;
    }
    async create(program, query, maxSteps) {
        const payload = { program, query };
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
    async get(id) {
        const response = await fetch(`${this.base}/sessions/${id}`);
        return (await unwrap(response)).state;
    }
    async move(id, move) {
        const response = await fetch(`${this.base}/sessions/${id}/moves`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(move),
        });
        return (await unwrap(response)).state;
    }
    async close(id) {
        const response = await fetch(`${this.base}/sessions/${id}`, {
            method: "DELETE",
        });
        await unwrap(response);
    }
}
//# sourceMappingURL=client.js.map