/** Draft label state and its invariants.
 *
 * A draft keeps each criterion tri-state: null means the reviewer has not
 * decided yet. Submission requires an explicit answer to all three plus a
 * verdict, and the asp verdict is only reachable while every criterion is
 * true. These rules mirror the service's own validation so a conforming
 * client never sends a request the service would reject.
 */

import type { Criterion, LabelBody, Verdict } from "./api.js";

export const CRITERIA: readonly Criterion[] = [
  "interesting",
  "no_prior_precedent",
  "not_petition_origin",
];

export const CRITERION_PHRASES: Record<Criterion, string> = {
  interesting: "substantively interesting",
  no_prior_precedent: "no prior precedent",
  not_petition_origin: "not of petition origin",
};

export type TriState = boolean | null;

export interface Draft {
  criteria: Record<Criterion, TriState>;
  verdict: Verdict | null;
  notes: string;
}

export function emptyDraft(): Draft {
  return {
    criteria: { interesting: null, no_prior_precedent: null, not_petition_origin: null },
    verdict: null,
    notes: "",
  };
}

/** Criteria that stand in the way of an asp verdict: false or still unset. */
export function failingCriteria(draft: Draft): Criterion[] {
  return CRITERIA.filter((c) => draft.criteria[c] !== true);
}

export function aspBlockMessage(draft: Draft): string | null {
  const failing = failingCriteria(draft);
  if (failing.length === 0) return null;
  const phrases = failing.map((c) => CRITERION_PHRASES[c]).join(", ");
  return `verdict 'asp' requires every criterion; failing: ${phrases}`;
}

export function setCriterion(draft: Draft, criterion: Criterion, value: boolean): Draft {
  const criteria = { ...draft.criteria, [criterion]: value };
  // an asp verdict cannot outlive the criteria that justified it
  const verdict =
    draft.verdict === "asp" && CRITERIA.some((c) => criteria[c] !== true)
      ? null
      : draft.verdict;
  return { ...draft, criteria, verdict };
}

/** Keyboard path: unset goes to true, afterwards flips between true and false. */
export function toggleCriterion(draft: Draft, criterion: Criterion): Draft {
  const current = draft.criteria[criterion];
  return setCriterion(draft, criterion, current === null ? true : !current);
}

export interface VerdictChange {
  draft: Draft;
  error: string | null;
}

export function setVerdict(draft: Draft, verdict: Verdict): VerdictChange {
  if (verdict === "asp") {
    const blocked = aspBlockMessage(draft);
    if (blocked !== null) return { draft, error: blocked };
  }
  return { draft: { ...draft, verdict }, error: null };
}

export function setNotes(draft: Draft, notes: string): Draft {
  return { ...draft, notes };
}

export function submitBlockReason(draft: Draft): string | null {
  const unset = CRITERIA.filter((c) => draft.criteria[c] === null);
  if (unset.length > 0) {
    return `answer every criterion first: ${unset.map((c) => CRITERION_PHRASES[c]).join(", ")}`;
  }
  if (draft.verdict === null) return "pick a verdict";
  return null;
}

export function canSubmit(draft: Draft): boolean {
  return submitBlockReason(draft) === null;
}

export function toRequestBody(draft: Draft): LabelBody {
  if (!canSubmit(draft)) throw new Error("draft is not submittable");
  const body: LabelBody = {
    criteria: {
      interesting: draft.criteria.interesting === true,
      no_prior_precedent: draft.criteria.no_prior_precedent === true,
      not_petition_origin: draft.criteria.not_petition_origin === true,
    },
    verdict: draft.verdict as Verdict,
  };
  if (draft.notes !== "") body.notes = draft.notes;
  return body;
}
