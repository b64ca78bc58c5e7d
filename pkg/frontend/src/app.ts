// DOM wiring for the console page.

import { SessionClient, ProtocolError } from "./client.js";
import {
  ConsoleController,
  EXAMPLES,
  bindingLines,
  transcriptLines,
} from "./controller.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function init(): void {
  const controller = new ConsoleController(new SessionClient(""));

  const programBox = el<HTMLTextAreaElement>("program");
  const queryBox = el<HTMLInputElement>("query");
  const gallery = el<HTMLSelectElement>("gallery");
  const startButton = el<HTMLButtonElement>("start");
  const statusLine = el<HTMLDivElement>("status");
  const transcriptBox = el<HTMLPreElement>("transcript");
  const pendingBox = el<HTMLDivElement>("pending");

  for (const example of EXAMPLES) {
    const option = document.createElement("option");
    option.value = example.name;
    option.textContent = example.name;
    gallery.appendChild(option);
  }

  function loadExample(name: string): void {
    const example = EXAMPLES.find((e) => e.name === name);
    if (example) {
      programBox.value = example.program;
      queryBox.value = example.query;
      statusLine.textContent = example.description;
    }
  }
  gallery.addEventListener("change", () => loadExample(gallery.value));
  loadExample(EXAMPLES[0].name);

  function render(): void {
    const state = controller.state;
    pendingBox.innerHTML = "";
    if (!state) {
      return;
    }
    statusLine.textContent = `status: ${state.status}`;
    const lines = transcriptLines(state);
    if (state.status === "succeeded") {
      lines.push("", "success", ...bindingLines(state));
    } else if (state.status === "failed") {
      lines.push("", "failure");
    } else if (state.status === "budget_exhausted") {
      lines.push("", "budget exhausted");
    }
    transcriptBox.textContent = lines.join("\n");

    const pending = controller.pending;
    if (!pending) {
      return;
    }
    const label = document.createElement("div");
    label.textContent = `your move at ${pending.site}:`;
    pendingBox.appendChild(label);
    if (pending.kind === "choose_branch") {
      pending.options.forEach((option, i) => {
        const button = document.createElement("button");
        button.textContent = `[${i}] ${option}`;
        button.addEventListener("click", () => {
          run(() => controller.pick(i));
        });
        pendingBox.appendChild(button);
      });
    } else {
      const input = document.createElement("input");
      input.placeholder = `term for ${pending.binder}`;
      const button = document.createElement("button");
      button.textContent = "play term";
      const submit = () => run(() => controller.witness(input.value));
      button.addEventListener("click", submit);
      input.addEventListener("keydown", (event) => {
        if (event.key === "Enter") {
          submit();
        }
      });
      pendingBox.appendChild(input);
      pendingBox.appendChild(button);
      input.focus();
    }
  }

  function run(action: () => Promise<unknown>): void {
    action()
      .then(render)
      .catch((error) => {
        if (error instanceof ProtocolError) {
          statusLine.textContent = error.message;
        } else {
          statusLine.textContent = String(error);
        }
      });
  }

  startButton.addEventListener("click", () => {
    run(() => controller.start(programBox.value, queryBox.value));
  });
}

document.addEventListener("DOMContentLoaded", init);
