/**
 * Evaluation view: one utterance at a time with the three quality questions
 * and a grammaticality judgement.
 *
 * Crowd mode shows 1..6 scales; self mode shows the three coarse levels a
 * worker uses on their own utterances.  Submit stays disabled until all four
 * inputs are chosen; duplicate-rating answers from the server are shown
 * inline and the view moves on.
 */

import { Api, RatingBody, ServiceUnreachable } from "./api";

export type RaterKind = "crowd" | "self";

const QUESTIONS: { key: "informativeness" | "naturalness" | "phrasing"; prompt: string }[] = [
  { key: "informativeness", prompt: "Is this utterance informative?" },
  { key: "naturalness", prompt: "Is this utterance natural?" },
  { key: "phrasing", prompt: "Is this utterance well phrased?" },
];

export const SELF_LEVELS = ["lower_than_average", "average", "higher_than_average"];

export interface RatingFormOptions {
  api: Api;
  raterId: string;
  kind: RaterKind;
  onDone?: () => void;
}

interface Item {
  utterance_id: string;
  ref: string;
}

export class RatingForm {
  readonly root: HTMLElement;
  private api: Api;
  private raterId: string;
  private kind: RaterKind;
  private onDone?: () => void;
  private queue: Item[] = [];
  private current: Item | null = null;

  private utterance!: HTMLElement;
  private form!: HTMLElement;
  private submitButton!: HTMLButtonElement;
  private status!: HTMLElement;

  constructor(container: HTMLElement, options: RatingFormOptions) {
    this.root = container;
    this.api = options.api;
    this.raterId = options.raterId;
    this.kind = options.kind;
    this.onDone = options.onDone;
    this.render();
  }

  private render(): void {
    const scales = QUESTIONS.map((q) => {
      const choices =
        this.kind === "crowd"
          ? [1, 2, 3, 4, 5, 6]
              .map(
                (v) =>
                  `<label><input type="radio" name="${q.key}" value="${v}">${v}</label>`,
              )
              .join("")
          : SELF_LEVELS.map(
              (v) =>
                `<label><input type="radio" name="${q.key}" value="${v}">` +
                `${v.replace(/_/g, " ")}</label>`,
            ).join("");
      return `<fieldset data-question="${q.key}"><legend>${q.prompt}</legend>${choices}</fieldset>`;
    }).join("");
    this.root.innerHTML = `
      <section class="rating-form">
        <blockquote data-role="utterance"></blockquote>
        <div data-role="questions">
          ${scales}
          <fieldset data-question="grammatical">
            <legend>Is this utterance grammatically correct?</legend>
            <label><input type="radio" name="grammatical" value="yes">yes</label>
            <label><input type="radio" name="grammatical" value="no">no</label>
          </fieldset>
        </div>
        <button type="button" data-role="submit" disabled>Submit rating</button>
        <div class="status" data-role="status" aria-live="polite"></div>
      </section>`;
    this.utterance = this.query("[data-role=utterance]");
    this.form = this.query("[data-role=questions]");
    this.submitButton = this.query("[data-role=submit]");
    this.status = this.query("[data-role=status]");
    this.form.addEventListener("change", () => this.refresh());
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

  async start(): Promise<void> {
    try {
      const entries = await this.api.exportEntries();
      this.queue = entries.map((e) => ({ utterance_id: e.utterance_id, ref: e.ref }));
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.root.innerHTML =
          `<div class="banner-error" role="alert">The collection service is unreachable.</div>`;
        return;
      }
      throw err;
    }
    this.advance();
  }

  private advance(): void {
    this.current = this.queue.shift() ?? null;
    if (!this.current) {
      this.status.textContent = "Nothing left to rate. Thank you!";
      this.submitButton.disabled = true;
      this.onDone?.();
      return;
    }
    this.utterance.textContent = this.current.ref;
    for (const input of this.form.querySelectorAll<HTMLInputElement>("input[type=radio]")) {
      input.checked = false;
    }
    this.refresh();
  }

  selection(): Partial<Record<string, string>> {
    const out: Partial<Record<string, string>> = {};
    for (const q of [...QUESTIONS.map((q) => q.key), "grammatical"]) {
      const chosen = this.form.querySelector<HTMLInputElement>(
        `input[name="${q}"]:checked`,
      );
      if (chosen) {
        out[q] = chosen.value;
      }
    }
    return out;
  }

  refresh(): void {
    const chosen = this.selection();
    const complete = [...QUESTIONS.map((q) => q.key), "grammatical"].every(
      (key) => chosen[key] !== undefined,
    );
    this.submitButton.disabled = !complete || !this.current;
    this.status.textContent = "";
  }

  async submit(): Promise<void> {
    if (!this.current || this.submitButton.disabled) {
      return;
    }
    const chosen = this.selection();
    const value = (key: string): number | string =>
      this.kind === "crowd" ? Number(chosen[key]) : String(chosen[key]);
    const body: RatingBody = {
      utterance_id: this.current.utterance_id,
      rater_id: this.raterId,
      rater_kind: this.kind,
      informativeness: value("informativeness"),
      naturalness: value("naturalness"),
      phrasing: value("phrasing"),
      grammatical: chosen["grammatical"] === "yes",
    };
    let result;
    try {
      result = await this.api.rate(body);
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.status.textContent = "The service is unreachable; your rating was not saved.";
        return;
      }
      throw err;
    }
    if (result.ok) {
      this.advance();
      return;
    }
    // Duplicate ratings (and any other refusal) are surfaced inline; the
    // message survives the advance to the next utterance.
    this.advance();
    this.status.textContent = `Not recorded: ${result.detail}. ${this.status.textContent}`;
  }
}
