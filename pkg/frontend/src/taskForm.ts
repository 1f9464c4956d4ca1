/**
 * Authoring view: one MR stimulus, a textarea, live rule hints, a timer and
 * a submit control.
 *
 * The submit button stays disabled until the page timer reaches the server's
 * minimum AND every mirrored check passes.  The mirrored checks are hints
 * only: a submission is treated as accepted solely on a server "accepted"
 * response, and server verdicts are displayed verbatim on rejection.
 */

import { Api, ServiceUnreachable, Task, Verdict } from "./api";
import {
  DEFAULT_LEGAL_SYMBOLS,
  illegalCharacters,
  liveVerdicts,
  missingRequiredElements,
  utteranceLength,
} from "./validation";

export interface TaskFormOptions {
  api: Api;
  worker: string;
  batch: string;
  /** Clock in milliseconds; injectable for tests. */
  now?: () => number;
  symbols?: readonly string[];
  onAccepted?: (utteranceId: string) => void;
}

const RULE_LABELS: Record<string, string> = {
  legal_characters: "only letters, numbers and , . : ; £ ' \"",
  min_length: "long enough for this task",
  required_elements: "mentions every required name",
  timing: "enough time spent on the page",
};

export class TaskForm {
  readonly root: HTMLElement;
  private api: Api;
  private worker: string;
  private batch: string;
  private now: () => number;
  private symbols: readonly string[];
  private onAccepted?: (utteranceId: string) => void;

  private task: Task | null = null;
  private startedAt = 0;
  private timerId: ReturnType<typeof setInterval> | null = null;

  private stimulus!: HTMLElement;
  private textarea!: HTMLTextAreaElement;
  private hints!: HTMLUListElement;
  private remaining!: HTMLElement;
  private timerLabel!: HTMLElement;
  private submitButton!: HTMLButtonElement;
  private status!: HTMLElement;

  constructor(container: HTMLElement, options: TaskFormOptions) {
    this.api = options.api;
    this.worker = options.worker;
    this.batch = options.batch;
    this.now = options.now ?? (() => Date.now());
    this.symbols = options.symbols ?? DEFAULT_LEGAL_SYMBOLS;
    this.onAccepted = options.onAccepted;
    this.root = container;
    this.render();
  }

  private render(): void {
    this.root.innerHTML = `
      <section class="task-form">
        <div class="stimulus" data-role="stimulus"></div>
        <textarea data-role="utterance" rows="5"
          placeholder="Describe the venue in your own words"></textarea>
        <div class="meta">
          <span data-role="remaining"></span>
          <span data-role="timer"></span>
        </div>
        <ul class="hints" data-role="hints"></ul>
        <button type="button" data-role="submit" disabled>Submit</button>
        <div class="status" data-role="status" aria-live="polite"></div>
      </section>`;
    this.stimulus = this.query("[data-role=stimulus]");
    this.textarea = this.query("[data-role=utterance]");
    this.hints = this.query("[data-role=hints]");
    this.remaining = this.query("[data-role=remaining]");
    this.timerLabel = this.query("[data-role=timer]");
    this.submitButton = this.query("[data-role=submit]");
    this.status = this.query("[data-role=status]");
    this.textarea.addEventListener("input", () => this.refresh());
    this.submitButton.addEventListener("click", () => {
      void this.submit();
    });
  }

  private query<T extends HTMLElement>(selector: string): T {
    const el = this.root.querySelector<T>(selector);
    if (!el) {
      throw new Error(`missing element ${selector}`);
    }
    return el;
  }

  /** Fetch and show the next task; the page timer starts now. */
  async loadNextTask(): Promise<Task | null> {
    let task: Task;
    try {
      task = await this.api.nextTask(this.batch, this.worker);
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.blockingBanner(err.message);
        return null;
      }
      throw err;
    }
    if (task.exhausted) {
      this.status.textContent = "No more pages available for you in this batch. Thank you!";
      this.submitButton.disabled = true;
      return null;
    }
    this.task = task;
    this.startedAt = this.now();
    try {
      if (task.modality === "pictorial") {
        this.stimulus.innerHTML = await this.api.stimulusSvg(task.mr_svg_url);
      } else {
        const text = await this.api.stimulusText(task.mr_text_url);
        const pre = document.createElement("pre");
        pre.className = "mr-text";
        pre.textContent = text;
        this.stimulus.replaceChildren(pre);
      }
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.blockingBanner(err.message);
        return null;
      }
      throw err;
    }
    this.textarea.value = "";
    this.status.textContent = "";
    if (this.timerId !== null) {
      clearInterval(this.timerId);
    }
    this.timerId = setInterval(() => this.refresh(), 250);
    this.refresh();
    return task;
  }

  elapsedSeconds(): number {
    return (this.now() - this.startedAt) / 1000;
  }

  /** Recompute hints and the submit gate from the current text and clock. */
  refresh(): void {
    if (!this.task) {
      return;
    }
    const text = this.textarea.value;
    const verdicts = liveVerdicts(
      text,
      this.task.min_length,
      this.task.required_elements,
      this.elapsedSeconds(),
      this.task.min_page_seconds,
      this.symbols,
    );

    const items: string[] = [];
    for (const [rule, passed] of Object.entries(verdicts)) {
      let detail = "";
      if (!passed && rule === "legal_characters") {
        const bad = illegalCharacters(text, this.symbols)
          .slice(0, 5)
          .map((o) => `"${o.ch}"`)
          .join(" ");
        detail = ` (${bad})`;
      }
      if (!passed && rule === "required_elements") {
        detail = ` (missing: ${missingRequiredElements(text, this.task.required_elements).join(", ")})`;
      }
      items.push(
        `<li class="${passed ? "ok" : "bad"}" data-rule="${rule}">` +
          `${passed ? "✓" : "✗"} ${RULE_LABELS[rule]}${detail}</li>`,
      );
    }
    this.hints.innerHTML = items.join("");

    const shortBy = this.task.min_length - utteranceLength(text);
    this.remaining.textContent =
      shortBy > 0 ? `${shortBy} more characters needed` : "length ok";
    const wait = Math.ceil(this.task.min_page_seconds - this.elapsedSeconds());
    this.timerLabel.textContent =
      wait > 0 ? `please keep working: ${wait}s before you can submit` : "";

    this.submitButton.disabled = !Object.values(verdicts).every(Boolean);
  }

  async submit(): Promise<void> {
    if (!this.task || this.submitButton.disabled) {
      return;
    }
    let reply;
    try {
      reply = await this.api.submit(this.task.task_id, this.worker, this.textarea.value);
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.blockingBanner(err.message);
        return;
      }
      throw err;
    }
    if (reply.status === "accepted" && reply.utterance_id) {
      this.status.textContent = `Accepted (${reply.utterance_id}). Loading the next page…`;
      this.onAccepted?.(reply.utterance_id);
      await this.loadNextTask();
      return;
    }
    // Show the server's verdicts verbatim; the task stays open for a retry.
    const verdicts = reply.report?.verdicts ?? {};
    const failures = Object.entries(verdicts).filter(([, v]) => !(v as Verdict).passed);
    const lines = failures.map(
      ([rule, v]) => `<li data-server-rule="${rule}">${(v as Verdict).detail ?? rule}</li>`,
    );
    this.status.innerHTML =
      `<div class="rejected">The server rejected this submission:</div>` +
      `<ul class="server-verdicts">${lines.join("")}</ul>`;
  }

  private blockingBanner(message: string): void {
    this.root.innerHTML =
      `<div class="banner-error" role="alert">` +
      `The collection service is unreachable. Please try again later.<br>` +
      `<small></small></div>`;
    const small = this.root.querySelector("small");
    if (small) {
      small.textContent = message;
    }
    if (this.timerId !== null) {
      clearInterval(this.timerId);
      this.timerId = null;
    }
  }

  dispose(): void {
    if (this.timerId !== null) {
      clearInterval(this.timerId);
      this.timerId = null;
    }
  }
}
