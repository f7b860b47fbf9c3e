/** Wire types and a thin client for the review service HTTP API. */

export type Criterion = "interesting" | "no_prior_precedent" | "not_petition_origin";
export type Verdict = "asp" | "not_asp" | "unsure";

export interface Highlight {
  start: number;
  end: number;
}

export interface CardSide {
  doc_id: string;
  title: string;
  date: string;
  role: string;
  context: string;
  highlight: Highlight;
}

export interface Card {
  candidate_id: string;
  docket_id: string;
  bracket: "top" | "random";
  snippet: string;
  length: number;
  exactness: number;
  prior_count: number;
  later_count: number;
  same_day_count: number;
  petition_overlap: boolean;
  conditions: { c1: boolean; c2: boolean; c3: boolean; c4: boolean; c5: boolean };
  opinion: CardSide;
  source: CardSide;
  labels?: StoredLabel[];
}

export interface StoredLabel {
  candidate_id: string;
  criteria: Record<Criterion, boolean>;
  verdict: Verdict;
  notes: string;
  annotator: string;
  labeled_at: string;
}

export interface Progress {
  labeled: number;
  total: number;
}

export interface CandidatePage {
  total: number;
  page: number;
  page_size: number;
  cards: Card[];
  progress: Progress;
}

export interface LabelBody {
  criteria: Record<Criterion, boolean>;
  verdict: Verdict;
  notes?: string;
}

export interface LabelResponse {
  label: StoredLabel;
  progress: Progress;
}

export interface Tallies {
  by_verdict: Record<Verdict, number>;
  asp_by_bracket: { top: number; random: number; unranked: number };
}

export interface ExportPayload {
  labels: StoredLabel[];
  tallies: Tallies;
  disagreements: string[];
}

export interface Summary {
  progress: Progress;
  brackets: { top: number; random: number };
  tallies: Tallies;
  log_entries: number;
}

export interface ListFilters {
  status?: "all" | "labeled" | "unlabeled";
  bracket?: "all" | "top" | "random";
  page?: number;
}

/** One round trip. Reject only for transport-level failure; HTTP errors resolve. */
export interface Transport {
  request(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
    headers?: Record<string, string>,
  ): Promise<{ status: number; body: unknown }>;
}

/** The request never reached the service (or the response never came back). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${cause instanceof Error ? cause.message : String(cause)}`);
    this.name = "NetworkError";
  }
}

/** The service answered with a non-2xx status. */
export class HttpError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "HttpError";
  }
}

function detailOf(body: unknown): string {
  if (typeof body === "object" && body !== null && "detail" in body) {
    return String((body as { detail: unknown }).detail);
  }
  return JSON.stringify(body);
}

export function fetchTransport(baseUrl: string): Transport {
  return {
    async request(method, path, body, headers) {
      let response: Response;
      try {
        response = await fetch(baseUrl + path, {
          method,
          headers: { "content-type": "application/json", ...headers },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (cause) {
        throw new NetworkError(cause);
      }
      return { status: response.status, body: await response.json() };
    },
  };
}

export class ReviewApi {
  constructor(
    private readonly transport: Transport,
    readonly annotator: string,
  ) {}

  private async call<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    let result;
    try {
      result = await this.transport.request(method, path, body, {
        "x-annotator": this.annotator,
      });
    } catch (cause) {
      if (cause instanceof NetworkError) throw cause;
      throw new NetworkError(cause);
    }
    if (result.status < 200 || result.status >= 300) {
      throw new HttpError(result.status, detailOf(result.body));
    }
    return result.body as T;
  }

  listCandidates(filters: ListFilters = {}): Promise<CandidatePage> {
    const query = new URLSearchParams();
    if (filters.status) query.set("status", filters.status);
    if (filters.bracket) query.set("bracket", filters.bracket);
    if (filters.page !== undefined) query.set("page", String(filters.page));
    const suffix = query.size > 0 ? `?${query.toString()}` : "";
    return this.call("GET", `/api/candidates${suffix}`);
  }

  getCandidate(candidateId: string): Promise<Card> {
    return this.call("GET", `/api/candidates/${candidateId}`);
  }

  submitLabel(candidateId: string, body: LabelBody): Promise<LabelResponse> {
    return this.call("POST", `/api/candidates/${candidateId}/label`, body);
  }

  exportLabels(): Promise<ExportPayload> {
    return this.call("GET", "/api/export");
  }

  summary(): Promise<Summary> {
    return this.call("GET", "/api/summary");
  }
}
