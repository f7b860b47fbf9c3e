/** DOM shell around the Workbench controller. */

import { Card, ReviewApi, fetchTransport } from "./api.js";
import { Workbench } from "./controller.js";
import { sliceHighlight } from "./highlight.js";
import { CRITERIA, CRITERION_PHRASES } from "./state.js";
import type { CardSide, Verdict } from "./api.js";

const VERDICT_LABELS: Record<Verdict, string> = {
  asp: "asp (all three hold)",
  not_asp: "not asp",
  unsure: "unsure",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== undefined) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderSide(label: string, side: CardSide): HTMLElement {
  const box = el("section", "side");
  box.append(el("h3", undefined, `${label}: ${side.title} (${side.date})`));
  const slices = sliceHighlight(side.context, side.highlight);
  const body = el("p", "context");
  const mark = el("mark", undefined, slices.mark);
  body.append(document.createTextNode(slices.before), mark, document.createTextNode(slices.after));
  box.append(body);
  return box;
}

function renderMeta(card: Card): HTMLElement {
  const meta = el("p", "meta");
  meta.textContent =
    `docket ${card.docket_id} · ${card.bracket} bracket · ` +
    `${card.length} words at ${(card.exactness * 100).toFixed(0)}% · ` +
    `${card.later_count} later, ${card.prior_count} prior, ${card.same_day_count} same-day` +
    (card.petition_overlap ? " · also in the petition" : "");
  return meta;
}

function mount(root: HTMLElement, workbench: Workbench, annotator: string): void {
  const render = (): void => {
    root.replaceChildren();
    const card = workbench.currentCard();
    const header = el("header");
    const progress = workbench.progress;
    header.append(
      el("h1", undefined, "review workbench"),
      el(
        "p",
        "progress",
        progress === null
          ? "loading"
          : `${progress.labeled}/${progress.total} labeled · card ${workbench.cursor + 1} of ${workbench.cards.length} · annotator ${annotator}`,
      ),
    );
    root.append(header);
    if (card === null) {
      root.append(el("p", undefined, "no candidates to review"));
      return;
    }

    root.append(renderMeta(card), renderSide("opinion", card.opinion), renderSide("brief", card.source));

    const draft = workbench.draft();
    const form = el("div", "label-form");
    CRITERIA.forEach((criterion, i) => {
      const row = el("label", "criterion");
      const box = el("input");
      box.type = "checkbox";
      const value = draft.criteria[criterion];
      box.checked = value === true;
      box.indeterminate = value === null;
      box.addEventListener("change", () => workbench.setCriterion(criterion, box.checked));
      row.append(box, document.createTextNode(` [${i + 1}] ${CRITERION_PHRASES[criterion]}`));
      form.append(row);
    });

    const verdicts = el("div", "verdicts");
    (Object.keys(VERDICT_LABELS) as Verdict[]).forEach((verdict) => {
      const row = el("label");
      const radio = el("input");
      radio.type = "radio";
      radio.name = "verdict";
      radio.checked = draft.verdict === verdict;
      radio.addEventListener("change", () => workbench.setVerdict(verdict));
      row.append(radio, document.createTextNode(` ${VERDICT_LABELS[verdict]}`));
      verdicts.append(row);
    });
    form.append(verdicts);

    const notes = el("textarea");
    notes.placeholder = "notes";
    notes.value = draft.notes;
    notes.addEventListener("change", () => workbench.setNotes(notes.value));
    form.append(notes);

    const controls = el("div", "controls");
    const prev = el("button", undefined, "← prev");
    prev.addEventListener("click", () => workbench.prev());
    const submit = el("button", "submit", "submit (Enter)");
    submit.disabled = !workbench.canSubmit();
    submit.addEventListener("click", () => void workbench.submit());
    const next = el("button", undefined, "next →");
    next.addEventListener("click", () => workbench.next());
    controls.append(prev, submit, next);
    form.append(controls);

    if (workbench.lastError !== null) {
      form.append(el("p", "error", workbench.lastError));
      if (workbench.pendingRetry !== null) {
        const retry = el("button", undefined, "retry");
        retry.addEventListener("click", () => void workbench.retry());
        form.append(retry);
      }
    }
    const labels = card.labels ?? [];
    if (labels.length > 0) {
      form.append(
        el(
          "p",
          "labeled",
          labels.map((l) => `${l.annotator}: ${l.verdict}`).join(" · "),
        ),
      );
    }
    root.append(form);
  };

  workbench.onChange(render);
  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLTextAreaElement) return;
    if (workbench.handleKey(event.key)) event.preventDefault();
  });
  render();
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root !== null) {
    const annotator =
      new URLSearchParams(window.location.search).get("annotator") ?? "anonymous";
    const api = new ReviewApi(fetchTransport(""), annotator);
    const workbench = new Workbench(api);
    void workbench.load().then(
      () => undefined,
      (error: unknown) => {
        root.textContent = `failed to load candidates: ${String(error)}`;
      },
    );
    mount(root, workbench, annotator);
  }
}
