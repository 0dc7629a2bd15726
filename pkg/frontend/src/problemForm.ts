// The problem specification form: the template sentence rendered with one
// dropdown per slot. Choosing options rewrites the current problem id.

import { TemplateGrammar } from "./api.js";
import { problemIdFor } from "./state.js";

export interface ProblemFormHandle {
  element: HTMLElement;
  currentChoices(): number[];
  currentProblemId(): string;
}

export function renderProblemForm(
  doc: Document,
  template: TemplateGrammar,
  onChange?: (problemId: string) => void,
): ProblemFormHandle {
  const container = doc.createElement("form");
  container.className = "problem-form";
  container.dataset.template = template.id;

  const selects: HTMLSelectElement[] = [];
  const parts = template.sentence.split(/(\{[A-Z]+\})/);
  for (const part of parts) {
    const slotMatch = part.match(/^\{([A-Z]+)\}$/);
    if (!slotMatch) {
      container.appendChild(doc.createTextNode(part));
      continue;
    }
    const slot = template.slots.find((s) => s.name === slotMatch[1]);
    if (!slot) {
      throw new Error(`sentence references unknown slot ${slotMatch[1]}`);
    }
    const select = doc.createElement("select");
    select.name = slot.name;
    select.dataset.slot = slot.name;
    for (let i = 0; i < slot.options.length; i++) {
      const option = doc.createElement("option");
      option.value = String(i);
      option.textContent = slot.options[i];
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      onChange?.(handle.currentProblemId());
    });
    selects.push(select);
    container.appendChild(select);
  }

  // keep slot order aligned with the grammar, not sentence position
  selects.sort(
    (a, b) =>
      template.slots.findIndex((s) => s.name === a.name) -
      template.slots.findIndex((s) => s.name === b.name),
  );

  const handle: ProblemFormHandle = {
    element: container,
    currentChoices: () => selects.map((s) => Number(s.value)),
    currentProblemId: () => problemIdFor(template.id, handle.currentChoices()),
  };
  return handle;
}
