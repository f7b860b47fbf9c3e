/** Review session controller, UI-framework free.
 *
 * Keyboard and pointer input converge here: both end up mutating the same
 * draft through the same functions, so a label submitted by keystrokes is
 * byte-identical to one clicked together. Failed submissions keep the
 * draft; a network failure additionally arms a retry that resends the
 * exact body that failed.
 */

import {
  Card,
  HttpError,
  ListFilters,
  NetworkError,
  Progress,
  ReviewApi,
  StoredLabel,
  Verdict,
} from "./api.js";
import {
  CRITERIA,
  Draft,
  canSubmit,
  emptyDraft,
  setCriterion,
  setNotes,
  setVerdict,
  submitBlockReason,
  toRequestBody,
  toggleCriterion,
} from "./state.js";
import type { Criterion, LabelBody } from "./api.js";

export interface PendingRetry {
  candidateId: string;
  body: LabelBody;
}

export class Workbench {
  cards: Card[] = [];
  cursor = 0;
  progress: Progress | null = null;
  lastError: string | null = null;
  pendingRetry: PendingRetry | null = null;

  private drafts = new Map<string, Draft>();
  private listeners: Array<() => void> = [];

  constructor(private readonly api: ReviewApi) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    for (const listener of this.listeners) listener();
  }

  /** Load every page matching the filters into one flat card list. */
  async load(filters: Omit<ListFilters, "page"> = {}): Promise<void> {
    const cards: Card[] = [];
    let page = 1;
    for (;;) {
      const batch = await this.api.listCandidates({ ...filters, page });
      cards.push(...batch.cards);
      this.progress = batch.progress;
      if (cards.length >= batch.total || batch.cards.length === 0) break;
      page += 1;
    }
    this.cards = cards;
    this.cursor = 0;
    this.lastError = null;
    this.changed();
  }

  currentCard(): Card | null {
    return this.cards[this.cursor] ?? null;
  }

  draft(): Draft {
    const card = this.currentCard();
    if (card === null) return emptyDraft();
    return this.drafts.get(card.candidate_id) ?? emptyDraft();
  }

  private putDraft(draft: Draft): void {
    const card = this.currentCard();
    if (card !== null) this.drafts.set(card.candidate_id, draft);
    this.changed();
  }

  next(): void {
    if (this.cursor + 1 < this.cards.length) this.cursor += 1;
    this.changed();
  }

  prev(): void {
    if (this.cursor > 0) this.cursor -= 1;
    this.changed();
  }

  setCriterion(criterion: Criterion, value: boolean): void {
    this.lastError = null;
    this.putDraft(setCriterion(this.draft(), criterion, value));
  }

  toggleCriterion(criterion: Criterion): void {
    this.lastError = null;
    this.putDraft(toggleCriterion(this.draft(), criterion));
  }

  setVerdict(verdict: Verdict): boolean {
    const change = setVerdict(this.draft(), verdict);
    this.lastError = change.error;
    this.putDraft(change.draft);
    return change.error === null;
  }

  setNotes(notes: string): void {
    this.putDraft(setNotes(this.draft(), notes));
  }

  /** Returns true when the key was a shortcut and got handled. */
  handleKey(key: string): boolean {
    switch (key) {
      case "1":
      case "2":
      case "3": {
        const criterion = CRITERIA[Number(key) - 1];
        if (criterion === undefined) return false;
        this.toggleCriterion(criterion);
        return true;
      }
      case "a":
        this.setVerdict("asp");
        return true;
      case "n":
        this.setVerdict("not_asp");
        return true;
      case "u":
        this.setVerdict("unsure");
        return true;
      case "Enter":
        void this.submit();
        return true;
      case "ArrowRight":
        this.next();
        return true;
      case "ArrowLeft":
        this.prev();
        return true;
      default:
        return false;
    }
  }

  canSubmit(): boolean {
    return this.currentCard() !== null && canSubmit(this.draft());
  }

  async submit(): Promise<boolean> {
    const card = this.currentCard();
    if (card === null) return false;
    const draft = this.draft();
    const reason = submitBlockReason(draft);
    if (reason !== null) {
      this.lastError = reason;
      this.changed();
      return false;
    }
    return this.send(card.candidate_id, toRequestBody(draft));
  }

  async retry(): Promise<boolean> {
    const pending = this.pendingRetry;
    if (pending === null) return false;
    return this.send(pending.candidateId, pending.body);
  }

  private async send(candidateId: string, body: LabelBody): Promise<boolean> {
    try {
      const response = await this.api.submitLabel(candidateId, body);
      this.accept(candidateId, response.label);
      this.progress = response.progress;
      this.pendingRetry = null;
      this.lastError = null;
      this.changed();
      return true;
    } catch (error) {
      if (error instanceof NetworkError) {
        // the draft stays; arm a retry with the exact body that failed
        this.pendingRetry = { candidateId, body };
        this.lastError = "network failure; label kept as draft, retry when back online";
      } else if (error instanceof HttpError) {
        this.lastError = error.detail;
      } else {
        throw error;
      }
      this.changed();
      return false;
    }
  }

  private accept(candidateId: string, label: StoredLabel): void {
    this.drafts.delete(candidateId);
    const card = this.cards.find((c) => c.candidate_id === candidateId);
    if (card !== undefined) {
      const others = (card.labels ?? []).filter((l) => l.annotator !== label.annotator);
      card.labels = [...others, label].sort((a, b) =>
        a.annotator < b.annotator ? -1 : a.annotator > b.annotator ? 1 : 0,
      );
    }
  }
}
