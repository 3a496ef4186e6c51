/**
 * Typed client for the annotation service JSON API.
 *
 * The client is a pure wrapper over `fetch`; tests inject a scripted fetch
 * implementation, the browser build uses the real one.
 */

export type LabelValue = "positive" | "negative" | "uncertain" | "none";

export interface Highlight {
  class: string;
  classification: "positive" | "negative" | "uncertain";
  span: [number, number];
  phrase: string;
}

export interface StoredAnnotation {
  report_id: string;
  annotator_id: string;
  labels: Record<string, LabelValue>;
  marked: boolean;
  comment: string | null;
  revision: number;
  saved_at: string;
}

export interface ReportPayload {
  report_id: string;
  view_position: string | null;
  text: string;
  highlights: Highlight[];
  index: number;
  prev_id: string | null;
  next_id: string | null;
  annotation?: StoredAnnotation | null;
}

export interface Progress {
  completed: number;
  total: number;
}

export interface SaveConflict {
  kind: "recognized_but_none" | "selected_but_unrecognized";
  class: string;
  evidence: [number, number][];
}

export type SaveOutcome =
  | { status: "saved"; revision: number }
  | { status: "conflicts"; conflicts: SaveConflict[] }
  | { status: "stale"; storedRevision: number }
  | { status: "done" };

export interface AnnotationBody {
  labels: Record<string, LabelValue>;
  marked: boolean;
  comment: string | null;
  revision: number;
  confirm: boolean;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly annotator: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = "",
  ) {}

  private async json<T>(response: Response): Promise<T> {
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as T;
  }

  async progress(): Promise<Progress> {
    const response = await this.fetchImpl(
      `${this.base}/api/progress?annotator=${encodeURIComponent(this.annotator)}`,
    );
    return this.json<Progress>(response);
  }

  /** Next unannotated report, or null when everything is done. */
  async nextReport(): Promise<ReportPayload | null> {
    const response = await this.fetchImpl(
      `${this.base}/api/reports?annotator=${encodeURIComponent(this.annotator)}`,
    );
    if (response.status === 404) return null;
    return this.json<ReportPayload>(response);
  }

  /** One report with this annotator's stored annotation, for PREVIOUS. */
  async getReport(reportId: string): Promise<ReportPayload> {
    const response = await this.fetchImpl(
      `${this.base}/api/reports/${encodeURIComponent(reportId)}` +
        `?annotator=${encodeURIComponent(this.annotator)}`,
    );
    return this.json<ReportPayload>(response);
  }

  async save(reportId: string, body: AnnotationBody): Promise<SaveOutcome> {
    const response = await this.fetchImpl(
      `${this.base}/api/reports/${encodeURIComponent(reportId)}/annotation`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ annotator_id: this.annotator, ...body }),
      },
    );
    if (response.status === 409) {
      const payload = (await response.json()) as
        | { kind: "save_conflicts"; conflicts: SaveConflict[] }
        | { kind: "stale_revision"; stored_revision: number };
      if (payload.kind === "save_conflicts") {
        return { status: "conflicts", conflicts: payload.conflicts };
      }
      return { status: "stale", storedRevision: payload.stored_revision };
    }
    const saved = await this.json<{ revision: number }>(response);
    return { status: "saved", revision: saved.revision };
  }

  /** True when the phrase was already present. */
  async addPhrase(
    cls: string,
    polarity: "positive" | "negative" | "uncertain",
    surface: string,
  ): Promise<boolean> {
    const response = await this.fetchImpl(`${this.base}/api/phrases`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        annotator_id: this.annotator,
        class: cls,
        polarity,
        surface,
      }),
    });
    const body = await this.json<{ status: string }>(response);
    return body.status === "already_present";
  }
}
