import { afterEach, describe, expect, it, vi } from "vitest";

import { ProtocolError, SessionClient } from "../src/client.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("SessionClient", () => {
  it("posts program and query on create", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(201, {
        id: "abc",
        state: { status: "succeeded", transcript: [], bindings: {} },
      }),
    );
    vi.stubGlobal("fetch", fetchMock);

    const client = new SessionClient("http://host");
    const created = await client.create("t: t(0).", "t(0)", 500);
    expect(created.id).toBe("abc");

    const [url, options] = fetchMock.mock.calls[0] as any;
    expect(url).toBe("http://host/sessions");
    expect(options.method).toBe("POST");
    expect(JSON.parse(options.body)).toEqual({
      program: "t: t(0).",
      query: "t(0)",
      max_steps: 500,
    });
  });

  it("unwraps the state envelope on get and move", async () => {
    const state = { status: "awaiting_env", transcript: [] };
    const fetchMock = vi.fn(async () => jsonResponse(200, { state }));
    vi.stubGlobal("fetch", fetchMock);

    const client = new SessionClient("");
    expect(await client.get("abc")).toEqual(state);
    expect(await client.move("abc", { pick: 0 })).toEqual(state);
    expect((fetchMock.mock.calls[0] as any)[0]).toBe("/sessions/abc");
    expect((fetchMock.mock.calls[1] as any)[0]).toBe("/sessions/abc/moves");
  });

  it("turns protocol errors into ProtocolError with the detail", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse(422, { detail: "pick 7 out of range" })),
    );
    const client = new SessionClient("");
    await expect(client.move("abc", { pick: 7 })).rejects.toThrow(
      ProtocolError,
    );
    await expect(client.move("abc", { pick: 7 })).rejects.toThrow(
      "pick 7 out of range",
    );
  });

  it("accepts 204 from delete", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response(null, { status: 204 })),
    );
    await new SessionClient("").close("abc");
  });
});
