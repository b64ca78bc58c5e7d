// End-to-end equivalence: playing a game through the web console's
// controller against a live server must reproduce, byte for byte, the
// transcript the batch CLI prints for the same move script.

import { execFile, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Move } from "../src/client.js";
import {
  ConsoleController,
  EXAMPLES,
  bindingLines,
  transcriptLines,
} from "../src/controller.js";
import { SessionClient } from "../src/client.js";

const execFileP = promisify(execFile);
const HERE = dirname(fileURLToPath(import.meta.url));
const REPO = resolve(HERE, "..", "..");
const PORT = 7891;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/sessions/none`);
      if (response.status === 404) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "taskcl.cli", "serve", "--port", String(PORT)],
    { cwd: REPO, stdio: "ignore" },
  );
  await waitForServer();
}, 30000);

afterAll(() => {
  server.kill();
});

async function batchLines(
  program: string,
  query: string,
  moves: Move[],
): Promise<string[]> {
  const dir = mkdtempSync(join(tmpdir(), "taskcl-"));
  const programPath = join(dir, "program.taskcl");
  const movesPath = join(dir, "moves.json");
  writeFileSync(programPath, program);
  writeFileSync(movesPath, JSON.stringify({ moves }));
  const { stdout } = await execFileP(
    "python3",
    [
      "-m",
      "taskcl.cli",
      "run",
      programPath,
      "-q",
      query,
      "--moves",
      movesPath,
      "--trace",
    ],
    { cwd: REPO },
  );
  return stdout.split("\n").filter((line) => line.length > 0);
}

function consoleLines(controller: ConsoleController): string[] {
  const state = controller.state!;
  const lines = transcriptLines(state);
  if (state.status === "succeeded") {
    lines.push("success", ...bindingLines(state));
  } else {
    lines.push("failure");
  }
  return lines;
}

const GAMES: { example: string; moves: Move[] }[] = [
  { example: "lottery", moves: [{ pick: 0 }] },
  { example: "lottery", moves: [{ pick: 1 }] },
  { example: "factorial", moves: [{ term: "5" }] },
  { example: "factorial", moves: [{ term: "0" }] },
];

describe("console vs batch equivalence", () => {
  for (const game of GAMES) {
    it(`${game.example} ${JSON.stringify(game.moves)}`, async () => {
      const example = EXAMPLES.find((e) => e.name === game.example)!;
      const controller = new ConsoleController(new SessionClient(BASE));
      const state = await controller.play(
        example.program,
        example.query,
        game.moves,
      );
      expect(state.status).toBe("succeeded");
      expect(consoleLines(controller)).toEqual(
        await batchLines(example.program, example.query, game.moves),
      );
    }, 20000);
  }

  it("rejects an out-of-range pick without ending the game", async () => {
    const example = EXAMPLES.find((e) => e.name === "lottery")!;
    const controller = new ConsoleController(new SessionClient(BASE));
    await controller.start(example.program, example.query);
    await expect(controller.pick(9)).rejects.toThrow("out of range");
    const state = await controller.pick(0);
    expect(state.status).toBe("succeeded");
  });
});
