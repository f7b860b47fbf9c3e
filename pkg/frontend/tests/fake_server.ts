/** In-memory double of the review service, speaking the Transport interface.
 *
 * Mirrors the server's validation rules and append-only label log so the
 * client can be exercised end to end without a Python process. Requests are
 * recorded for assertions, and network failures can be injected.
 */

import type {
  Card,
  CardSide,
  Criterion,
  StoredLabel,
  Tallies,
  Transport,
  Verdict,
} from "../src/api.js";

const PAGE_SIZE = 20;
const CRITERIA: readonly Criterion[] = [
  "interesting",
  "no_prior_precedent",
  "not_petition_origin",
];
const PHRASES: Record<Criterion, string> = {
  interesting: "substantively interesting",
  no_prior_precedent: "no prior precedent",
  not_petition_origin: "not of petition origin",
};
const VERDICTS: readonly Verdict[] = ["asp", "not_asp", "unsure"];

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
  headers: Record<string, string>;
}

function side(docId: string, lead: string, snippet: string, tail: string): CardSide {
  const context = `${lead} ${snippet} ${tail}`;
  return {
    doc_id: docId,
    title: `title of ${docId}`,
    date: "2011-06-20",
    role: docId.startsWith("op") ? "opinion" : "amicus",
    context,
    highlight: { start: lead.length + 1, end: lead.length + 1 + snippet.length },
  };
}

export function makeCards(count: number): Card[] {
  const cards: Card[] = [];
  const topCount = Math.ceil(count / 2);
  for (let i = 0; i < count; i += 1) {
    const snippet = `planted phrase number ${i} that the opinion lifted from its amicus brief`;
    cards.push({
      candidate_id: `cand-${String(i).padStart(3, "0")}`,
      docket_id: `10-${100 + i}`,
      bracket: i < topCount ? "top" : "random",
      snippet,
      length: 12,
      exactness: 1.0,
      prior_count: 0,
      later_count: i < topCount ? 50 - i : 3,
      same_day_count: 0,
      petition_overlap: i % 5 === 4,
      conditions: { c1: true, c2: true, c3: true, c4: true, c5: true },
      opinion: side(`op-${i}`, `opinion lead ${i}`, snippet, `opinion tail ${i}`),
      source: side(`am-${i}`, `brief lead text ${i}`, snippet, `brief tail ${i}`),
    });
  }
  return cards;
}

export class FakeServer implements Transport {
  readonly requests: RecordedRequest[] = [];
  readonly log: StoredLabel[] = [];
  private readonly current = new Map<string, StoredLabel>();
  private readonly byId = new Map<string, Card>();
  private failuresLeft = 0;
  private tick = 0;

  constructor(readonly cards: Card[]) {
    for (const card of cards) this.byId.set(card.candidate_id, card);
  }

  failNextRequests(n: number): void {
    this.failuresLeft = n;
  }

  async request(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
    headers: Record<string, string> = {},
  ): Promise<{ status: number; body: unknown }> {
    this.requests.push({ method, path, body, headers });
    if (this.failuresLeft > 0) {
      this.failuresLeft -= 1;
      throw new Error("connection refused");
    }
    const url = new URL(path, "http://fake");
    if (method === "GET" && url.pathname === "/api/candidates") {
      return this.list(url.searchParams);
    }
    if (method === "GET" && url.pathname === "/api/export") {
      return { status: 200, body: this.exportPayload() };
    }
    if (method === "GET" && url.pathname === "/api/summary") {
      return { status: 200, body: this.summary() };
    }
    const labelMatch = /^\/api\/candidates\/([^/]+)\/label$/.exec(url.pathname);
    if (method === "POST" && labelMatch !== null) {
      return this.label(labelMatch[1] as string, body, headers);
    }
    const cardMatch = /^\/api\/candidates\/([^/]+)$/.exec(url.pathname);
    if (method === "GET" && cardMatch !== null) {
      const card = this.byId.get(cardMatch[1] as string);
      if (card === undefined) return this.error(404, `no candidate '${cardMatch[1]}' in the review set`);
      return { status: 200, body: this.withLabels(card) };
    }
    return this.error(404, `no route for ${method} ${url.pathname}`);
  }

  private error(status: number, detail: string): { status: number; body: unknown } {
    return { status, body: { detail } };
  }

  private withLabels(card: Card): Card {
    const labels = [...this.current.values()]
      .filter((l) => l.candidate_id === card.candidate_id)
      .sort((a, b) => a.annotator.localeCompare(b.annotator));
    return { ...card, labels };
  }

  private progress(): { labeled: number; total: number } {
    const labeled = new Set([...this.current.values()].map((l) => l.candidate_id));
    return { labeled: labeled.size, total: this.cards.length };
  }

  private list(params: URLSearchParams): { status: number; body: unknown } {
    const status = params.get("status") ?? "all";
    const bracket = params.get("bracket") ?? "all";
    const page = Number(params.get("page") ?? "1");
    if (!["all", "labeled", "unlabeled"].includes(status)) {
      return this.error(400, `unknown status '${status}'`);
    }
    if (!["all", "top", "random"].includes(bracket)) {
      return this.error(400, `unknown bracket '${bracket}'`);
    }
    if (!Number.isInteger(page) || page < 1) return this.error(400, "page starts at 1");
    const labeledIds = new Set([...this.current.values()].map((l) => l.candidate_id));
    const selected = this.cards.filter((card) => {
      if (bracket !== "all" && card.bracket !== bracket) return false;
      const isLabeled = labeledIds.has(card.candidate_id);
      if (status === "labeled") return isLabeled;
      if (status === "unlabeled") return !isLabeled;
      return true;
    });
    const lo = (page - 1) * PAGE_SIZE;
    return {
      status: 200,
      body: {
        total: selected.length,
        page,
        page_size: PAGE_SIZE,
        cards: selected.slice(lo, lo + PAGE_SIZE).map((c) => this.withLabels(c)),
        progress: this.progress(),
      },
    };
  }

  private label(
    candidateId: string,
    rawBody: unknown,
    headers: Record<string, string>,
  ): { status: number; body: unknown } {
    if (!this.byId.has(candidateId)) {
      return this.error(404, `no candidate '${candidateId}' in the review set`);
    }
    const body = (rawBody ?? {}) as Record<string, unknown>;
    const criteria = body["criteria"];
    if (typeof criteria !== "object" || criteria === null) {
      return this.error(400, "body must carry a 'criteria' object");
    }
    const crit = criteria as Record<string, unknown>;
    const missing = CRITERIA.filter((c) => !(c in crit));
    if (missing.length > 0) return this.error(400, `criteria missing: ${missing.join(", ")}`);
    const verdict = body["verdict"];
    if (typeof verdict !== "string" || !VERDICTS.includes(verdict as Verdict)) {
      return this.error(400, `unknown verdict ${JSON.stringify(verdict)}`);
    }
    if (verdict === "asp") {
      const failing = CRITERIA.filter((c) => crit[c] !== true);
      if (failing.length > 0) {
        const phrases = failing.map((c) => PHRASES[c]).join(", ");
        return this.error(400, `verdict 'asp' requires every criterion; failing: ${phrases}`);
      }
    }
    this.tick += 1;
    const annotator = headers["x-annotator"] ?? "anonymous";
    const stored: StoredLabel = {
      candidate_id: candidateId,
      criteria: {
        interesting: crit["interesting"] === true,
        no_prior_precedent: crit["no_prior_precedent"] === true,
        not_petition_origin: crit["not_petition_origin"] === true,
      },
      verdict: verdict as Verdict,
      notes: typeof body["notes"] === "string" ? body["notes"] : "",
      annotator,
      labeled_at: new Date(Date.UTC(2026, 0, 1, 0, 0, this.tick)).toISOString(),
    };
    this.log.push(stored);
    this.current.set(`${candidateId}|${annotator}`, stored);
    return { status: 200, body: { label: stored, progress: this.progress() } };
  }

  private tallies(): Tallies {
    const byVerdict: Record<Verdict, number> = { asp: 0, not_asp: 0, unsure: 0 };
    const aspByBracket = { top: 0, random: 0, unranked: 0 };
    for (const label of this.current.values()) {
      byVerdict[label.verdict] += 1;
      if (label.verdict === "asp") {
        const card = this.byId.get(label.candidate_id);
        aspByBracket[card === undefined ? "unranked" : card.bracket] += 1;
      }
    }
    return { by_verdict: byVerdict, asp_by_bracket: aspByBracket };
  }

  private exportPayload(): unknown {
    const labels = [...this.current.values()].sort((a, b) =>
      a.candidate_id === b.candidate_id
        ? a.annotator.localeCompare(b.annotator)
        : a.candidate_id.localeCompare(b.candidate_id),
    );
    const verdictsPer = new Map<string, Set<Verdict>>();
    for (const label of this.current.values()) {
      const seen = verdictsPer.get(label.candidate_id) ?? new Set<Verdict>();
      seen.add(label.verdict);
      verdictsPer.set(label.candidate_id, seen);
    }
    const disagreements = [...verdictsPer.entries()]
      .filter(([, vs]) => vs.size > 1)
      .map(([cid]) => cid)
      .sort();
    return { labels, tallies: this.tallies(), disagreements };
  }

  private summary(): unknown {
    return {
      progress: this.progress(),
      brackets: {
        top: this.cards.filter((c) => c.bracket === "top").length,
        random: this.cards.filter((c) => c.bracket === "random").length,
      },
      tallies: this.tallies(),
      log_entries: this.log.length,
    };
  }
}
