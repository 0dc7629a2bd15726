// Pairwise judging view: a funding prompt, a toggle between the two
// reports, a winner choice, and an explanation box with a live word count.
// Submit stays disabled until a winner is chosen and the explanation is
// within 10 to 100 words.

import { JudgePair, ReportView } from "./api.js";
import { voteReady, wordCount } from "./state.js";

export const FUNDING_PROMPT =
  "Two predictive modeling projects are in front of you. You have $1,000 " +
  "to fund one of them. Which do you choose?";

function reportCard(doc: Document, report: ReportView, side: "a" | "b"): HTMLElement {
  const card = doc.createElement("article");
  card.className = "report";
  card.dataset.side = side;
  const sentence = doc.createElement("h3");
  sentence.textContent = report.sentence;
  card.appendChild(sentence);
  const narrative = doc.createElement("p");
  narrative.className = "narrative";
  narrative.textContent = report.narrative;
  card.appendChild(narrative);
  const metrics = doc.createElement("p");
  metrics.className = "metrics";
  metrics.textContent =
    `Accuracy ${report.metrics.accuracy.toFixed(3)} / ` +
    `AUC ${report.metrics.auc.toFixed(3)} / F1 ${report.metrics.f1.toFixed(3)}`;
  card.appendChild(metrics);
  if (report.top_features && report.top_features.length > 0) {
    const list = doc.createElement("ol");
    list.className = "top-features";
    for (const [feature, weight] of report.top_features.slice(0, 10)) {
      const item = doc.createElement("li");
      item.textContent = `${feature} (${weight.toFixed(4)})`;
      list.appendChild(item);
    }
    card.appendChild(list);
  }
  return card;
}

export interface JudgingHandle {
  element: HTMLElement;
  toggle(): void;
  visibleSide(): "a" | "b";
  chooseWinner(side: "a" | "b"): void;
  setExplanation(text: string): void;
  submitEnabled(): boolean;
  submit(): void;
}

export function renderJudgingView(
  doc: Document,
  pair: JudgePair,
  onSubmit: (winner: "a" | "b", explanation: string) => void,
): JudgingHandle {
  const view = doc.createElement("section");
  view.className = "judging";

  const prompt = doc.createElement("p");
  prompt.className = "prompt";
  prompt.textContent = FUNDING_PROMPT;
  view.appendChild(prompt);

  const cardA = reportCard(doc, pair.report_a, "a");
  const cardB = reportCard(doc, pair.report_b, "b");
  cardB.style.display = "none";
  view.appendChild(cardA);
  view.appendChild(cardB);

  const toggle = doc.createElement("button");
  toggle.type = "button";
  toggle.dataset.action = "toggle";
  toggle.textContent = "View the other report";
  view.appendChild(toggle);

  let winner: "a" | "b" | null = null;
  let explanation = "";

  const pickA = doc.createElement("button");
  pickA.type = "button";
  pickA.dataset.action = "fund-a";
  pickA.textContent = "Fund this project";
  const pickB = doc.createElement("button");
  pickB.type = "button";
  pickB.dataset.action = "fund-b";
  pickB.textContent = "Fund this project";
  cardA.appendChild(pickA);
  cardB.appendChild(pickB);

  const box = doc.createElement("textarea");
  box.dataset.field = "explanation";
  view.appendChild(box);

  const counter = doc.createElement("span");
  counter.className = "word-count";
  counter.textContent = "0 words (need 10-100)";
  view.appendChild(counter);

  const submit = doc.createElement("button");
  submit.type = "button";
  submit.dataset.action = "submit-vote";
  submit.textContent = "Submit vote";
  submit.disabled = true;
  view.appendChild(submit);

  function refresh() {
    counter.textContent = `${wordCount(explanation)} words (need 10-100)`;
    submit.disabled = !voteReady(winner, explanation);
  }

  function setWinner(side: "a" | "b") {
    winner = side;
    cardA.classList.toggle("chosen", side === "a");
    cardB.classList.toggle("chosen", side === "b");
    refresh();
  }

  pickA.addEventListener("click", () => setWinner("a"));
  pickB.addEventListener("click", () => setWinner("b"));
  box.addEventListener("input", () => {
    explanation = box.value;
    refresh();
  });

  const handle: JudgingHandle = {
    element: view,
    toggle() {
      const showingA = cardB.style.display === "none";
      cardA.style.display = showingA ? "none" : "";
      cardB.style.display = showingA ? "" : "none";
    },
    visibleSide() {
      return cardB.style.display === "none" ? "a" : "b";
    },
    chooseWinner(side) {
      setWinner(side);
    },
    setExplanation(text) {
      explanation = text;
      box.value = text;
      refresh();
    },
    submitEnabled() {
      return !submit.disabled;
    },
    submit() {
      if (submit.disabled || winner === null) return;
      onSubmit(winner, explanation);
    },
  };
  toggle.addEventListener("click", () => handle.toggle());
  submit.addEventListener("click", () => handle.submit());
  return handle;
}

export function renderExhausted(doc: Document): HTMLElement {
  const done = doc.createElement("section");
  done.className = "judging-done";
  const note = doc.createElement("p");
  note.textContent = "No more report pairs to judge. Thank you!";
  done.appendChild(note);
  return done;
}
