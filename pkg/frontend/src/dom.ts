/** Browser glue: renders a SessionView into the page and wires the input box.
 * Everything textual comes verbatim from the view (and thus from the wire). */

import { emphasisSegments, phaseSteps, rowStyle } from "./render.js";
import type { SessionStore } from "./store.js";
import type { SessionView } from "./types.js";

export function mount(root: HTMLElement, store: SessionStore): void {
  root.innerHTML = `
    <div class="banner" hidden></div>
    <ol class="phases"></ol>
    <ul class="transcript"></ul>
    <form class="composer">
      <input name="utterance" autocomplete="off" placeholder="say something..." />
      <button type="submit">send</button>
    </form>
    <button class="start">new session</button>
  `;
  const banner = root.querySelector(".banner") as HTMLElement;
  const phases = root.querySelector(".phases") as HTMLOListElement;
  const transcript = root.querySelector(".transcript") as HTMLUListElement;
  const form = root.querySelector(".composer") as HTMLFormElement;
  const input = form.querySelector("input") as HTMLInputElement;
  const sendButton = form.querySelector("button") as HTMLButtonElement;
  const startButton = root.querySelector(".start") as HTMLButtonElement;

  function render(view: SessionView): void {
    banner.hidden = view.banner === null;
    banner.textContent = view.banner ?? "";

    phases.replaceChildren(
      ...phaseSteps(view.phase).map((step) => {
        const item = document.createElement("li");
        item.className = `phase ${step.state}`;
        item.textContent = step.name;
        return item;
      })
    );

    transcript.replaceChildren(
      ...view.transcript.map((entry) => {
        const item = document.createElement("li");
        item.className = `row ${rowStyle(entry)}`;
        const sent = document.createElement("div");
        sent.className = "sent";
        sent.textContent = entry.utterance;
        const got = document.createElement("div");
        got.className = "got";
        if (entry.payload) {
          for (const segment of emphasisSegments(entry.payload)) {
            const span = document.createElement(segment.emphasized ? "em" : "span");
            span.textContent = segment.text;
            got.appendChild(span);
          }
        } else {
          got.textContent = entry.responseText;
        }
        if (entry.stage) {
          const stage = document.createElement("span");
          stage.className = "stage";
          stage.textContent = ` [stage: ${entry.stage}]`;
          got.appendChild(stage);
        }
        item.append(sent, got);
        return item;
      })
    );

    const sendable = view.sessionId !== null && !view.pending && !view.closed;
    input.disabled = !sendable;
    sendButton.disabled = !sendable;
    startButton.disabled = view.pending;
  }

  store.subscribe(render);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value;
    if (text.trim() === "") return;
    input.value = "";
    void store.send(text);
  });

  startButton.addEventListener("click", () => {
    void store.start();
  });
}
