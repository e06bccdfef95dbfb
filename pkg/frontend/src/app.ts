// Chat interface: ask questions, switch pipeline mode and cutoff, inspect
// retrieved-passage provenance. One ask in flight at a time; every service
// error is rendered inline with a retry button, and "no answer available"
// responses get their own style distinct from errors.

import { AskRequest, AskResponse, Client } from "./api.js";

export interface UiSettings {
  mode: string;
  cutoff: number;
  showProvenance: boolean;
}

export interface App {
  settings: UiSettings;
  submit(question: string): Promise<void>;
  root: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderProvenance(response: AskResponse): HTMLElement {
  const panel = el("div", "provenance");
  const heading = el("div", "provenance-title", `Passages (${response.passages.length})`);
  panel.appendChild(heading);
  for (const passage of response.passages) {
    const row = el("div", "provenance-row");
    row.appendChild(el("span", "provenance-rank", `#${passage.rank}`));
    row.appendChild(el("span", "provenance-score", passage.score.toFixed(4)));
    row.appendChild(el("span", "provenance-id", passage.id));
    row.appendChild(el("span", "provenance-text", passage.text));
    panel.appendChild(row);
  }
  return panel;
}

export function createApp(root: HTMLElement, client: Client, modes: { modes: string[]; cutoffs: number[] }): App {
  const settings: UiSettings = {
    mode: modes.modes[0] ?? "ib",
    cutoff: modes.cutoffs.includes(3) ? 3 : modes.cutoffs[0] ?? 1,
    showProvenance: true,
  };

  root.innerHTML = "";
  const controls = el("div", "controls");

  const modeSelect = el("select", "mode-select");
  for (const mode of modes.modes) {
    const option = el("option", undefined, mode);
    option.value = mode;
    modeSelect.appendChild(option);
  }
  modeSelect.value = settings.mode;
  modeSelect.onchange = () => {
    settings.mode = modeSelect.value;
  };

  const cutoffSelect = el("select", "cutoff-select");
  for (const cutoff of modes.cutoffs) {
    const option = el("option", undefined, String(cutoff));
    option.value = String(cutoff);
    cutoffSelect.appendChild(option);
  }
  cutoffSelect.value = String(settings.cutoff);
  cutoffSelect.onchange = () => {
    settings.cutoff = Number(cutoffSelect.value);
  };

  const provenanceToggle = el("input", "provenance-toggle");
  provenanceToggle.type = "checkbox";
  provenanceToggle.checked = settings.showProvenance;
  provenanceToggle.onchange = () => {
    settings.showProvenance = provenanceToggle.checked;
  };

  controls.appendChild(el("label", "control-label", "mode"));
  controls.appendChild(modeSelect);
  controls.appendChild(el("label", "control-label", "cutoff"));
  controls.appendChild(cutoffSelect);
  controls.appendChild(el("label", "control-label", "show passages"));
  controls.appendChild(provenanceToggle);

  const log = el("div", "chat-log");
  const form = el("form", "ask-form");
  const input = el("input", "question-input");
  input.type = "text";
  input.placeholder = "Ask about the program…";
  const submitButton = el("button", "submit-button", "Ask");
  submitButton.type = "submit";
  submitButton.disabled = true;
  form.appendChild(input);
  form.appendChild(submitButton);

  root.appendChild(controls);
  root.appendChild(log);
  root.appendChild(form);

  let pending = false;

  function refreshSubmitState() {
    submitButton.disabled = pending || input.value.trim() === "";
  }
  input.oninput = refreshSubmitState;

  function renderAnswer(turn: HTMLElement, response: AskResponse) {
    const bubble = el(
      "div",
      response.answered ? "bubble answer" : "bubble answer unanswered",
      response.answer,
    );
    turn.appendChild(bubble);
    if (!response.answered) {
      turn.appendChild(el("div", "unanswered-note", "no answer available"));
    }
    const meta = `${response.mode} · ${response.timings.retrieval_ms.toFixed(0)}+${response.timings.generation_ms.toFixed(0)} ms`;
    turn.appendChild(el("div", "turn-meta", meta));
    if (settings.showProvenance && response.passages.length > 0) {
      turn.appendChild(renderProvenance(response));
    }
  }

  function renderError(turn: HTMLElement, message: string, request: AskRequest) {
    const bubble = el("div", "bubble error", `request failed: ${message}`);
    const retry = el("button", "retry-button", "retry");
    retry.type = "button";
    retry.onclick = () => {
      turn.remove();
      void send(request);
    };
    bubble.appendChild(retry);
    turn.appendChild(bubble);
  }

  async function send(request: AskRequest): Promise<void> {
    if (pending) return;
    pending = true;
    refreshSubmitState();
    const turn = el("div", "turn");
    turn.appendChild(el("div", "bubble question", request.question));
    log.appendChild(turn);
    try {
      const response = await client.ask(request);
      renderAnswer(turn, response);
    } catch (err) {
      renderError(turn, err instanceof Error ? err.message : String(err), request);
    } finally {
      pending = false;
      refreshSubmitState();
      log.scrollTop = log.scrollHeight;
    }
  }

  async function submit(question: string): Promise<void> {
    const trimmed = question.trim();
    if (trimmed === "") return;
    await send({ question: trimmed, mode: settings.mode, cutoff: settings.cutoff });
  }

  form.onsubmit = (event) => {
    event.preventDefault();
    const question = input.value;
    input.value = "";
    refreshSubmitState();
    void submit(question);
  };

  return { settings, submit, root };
}
