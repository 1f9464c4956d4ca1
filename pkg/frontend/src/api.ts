/** Typed client for the collection service's documented HTTP endpoints. */

export interface Task {
  exhausted: boolean;
  task_id: string;
  mr_id: string;
  batch_id: string;
  modality: "textual" | "pictorial";
  issued_at: number;
  min_length: number;
  required_elements: string[];
  min_page_seconds: number;
  mr_text_url: string;
  mr_svg_url: string;
}

export interface Verdict {
  passed: boolean;
  detail: string | null;
}

export interface SubmissionReply {
  status: "accepted" | "rejected";
  utterance_id?: string;
  report?: { overall: string; verdicts: Record<string, Verdict> };
}

export interface RatingBody {
  utterance_id: string;
  rater_id: string;
  rater_kind: "crowd" | "self";
  informativeness: number | string;
  naturalness: number | string;
  phrasing: number | string;
  grammatical: boolean;
}

export interface ExportEntry {
  mr: string;
  ref: string;
  modality: string;
  attr_count: number;
  worker: string;
}

/** Raised when the service cannot be reached; callers show a blocking banner. */
export class ServiceUnreachable extends Error {}

export interface Api {
  nextTask(batch: string, worker: string): Promise<Task>;
  stimulusText(url: string): Promise<string>;
  stimulusSvg(url: string): Promise<string>;
  submit(taskId: string, worker: string, text: string): Promise<SubmissionReply>;
  rate(body: RatingBody): Promise<{ ok: true } | { ok: false; detail: string }>;
  exportEntries(): Promise<(ExportEntry & { utterance_id: string })[]>;
}

async function request(base: string, path: string, init?: RequestInit): Promise<Response> {
  let resp: Response;
  try {
    resp = await fetch(base + path, init);
  } catch (err) {
    throw new ServiceUnreachable(`cannot reach the collection service: ${err}`);
  }
  return resp;
}

export function httpApi(base = ""): Api {
  return {
    async nextTask(batch, worker) {
      const resp = await request(
        base,
        `/batches/${encodeURIComponent(batch)}/next-task?worker=${encodeURIComponent(worker)}`,
      );
      if (!resp.ok) {
        throw new ServiceUnreachable(`next-task failed: ${resp.status}`);
      }
      return (await resp.json()) as Task;
    },

    async stimulusText(url) {
      const resp = await request(base, url);
      if (!resp.ok) {
        throw new ServiceUnreachable(`stimulus failed: ${resp.status}`);
      }
      return resp.text();
    },

    async stimulusSvg(url) {
      const resp = await request(base, url);
      if (!resp.ok) {
        throw new ServiceUnreachable(`stimulus failed: ${resp.status}`);
      }
      return resp.text();
    },

    async submit(taskId, worker, text) {
      const resp = await request(base, "/submissions", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ task_id: taskId, worker, text }),
      });
      if (!resp.ok) {
        throw new ServiceUnreachable(`submission failed: ${resp.status}`);
      }
      return (await resp.json()) as SubmissionReply;
    },

    async rate(body) {
      const resp = await request(base, "/ratings", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
      if (resp.ok) {
        return { ok: true };
      }
      const doc = await resp.json().catch(() => ({ detail: `status ${resp.status}` }));
      return { ok: false, detail: String(doc.detail ?? resp.status) };
    },

    async exportEntries() {
      const resp = await request(base, "/export?include_ids=true");
      if (!resp.ok) {
        throw new ServiceUnreachable(`export failed: ${resp.status}`);
      }
      const text = await resp.text();
      return text
        .split("\n")
        .filter((line) => line.trim())
        .map((line) => JSON.parse(line) as ExportEntry & { utterance_id: string });
    },
  };
}
