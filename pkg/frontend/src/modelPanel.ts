// Model selection and results panel. What it offers depends on the group:
// A picks family and hyperparameters by hand, B only has the automatic
// model button, C gets both. Metrics always show; the ranked feature list
// shows only when the scored model carries one.

import { ScoredModelView } from "./api.js";

export const GRID_CONTROLS: Record<string, Record<string, (string | number | null)[]>> = {
  random_forest: {
    n_estimators: [10, 100, 500],
    max_depth: [3, 10, null],
  },
  linear_svm: {
    C: [1, 0.1, 0.01],
    loss: ["hinge", "squared_hinge"],
  },
  mlp: {
    solver: ["adam", "sgd"],
    activation: ["relu", "tanh", "logistic"],
    hidden_layer_sizes: ["50x50", "50x100x10", "50x50x20"],
    alpha: [0.01, 0.001, 0.0001, 0.00001],
  },
};

function formatOption(value: string | number | null): string {
  if (value === null) return "none";
  return String(value);
}

export function specIdFrom(family: string, picks: Record<string, string>): string {
  const names = Object.keys(GRID_CONTROLS[family]);
  return `${family}:` + names.map((n) => picks[n]).join("-");
}

function manualControls(doc: Document): HTMLElement {
  const wrap = doc.createElement("div");
  wrap.className = "hyperparameters";
  const familySelect = doc.createElement("select");
  familySelect.dataset.control = "family";
  for (const family of Object.keys(GRID_CONTROLS)) {
    const option = doc.createElement("option");
    option.value = family;
    option.textContent = family;
    familySelect.appendChild(option);
  }
  wrap.appendChild(familySelect);
  for (const [family, params] of Object.entries(GRID_CONTROLS)) {
    const group = doc.createElement("fieldset");
    group.dataset.family = family;
    for (const [name, values] of Object.entries(params)) {
      const label = doc.createElement("label");
      label.textContent = name;
      const select = doc.createElement("select");
      select.dataset.control = "hyperparameter";
      select.dataset.param = name;
      for (const value of values) {
        const option = doc.createElement("option");
        option.value = formatOption(value);
        option.textContent = formatOption(value);
        select.appendChild(option);
      }
      label.appendChild(select);
      group.appendChild(label);
    }
    wrap.appendChild(group);
  }
  return wrap;
}

export interface ModelPanelHandle {
  element: HTMLElement;
  showResult(model: ScoredModelView): void;
  showError(message: string): void;
}

export function renderModelPanel(
  doc: Document,
  group: string,
  hooks?: { onAuto?: () => void; onLearn?: () => void },
): ModelPanelHandle {
  const panel = doc.createElement("section");
  panel.className = "model-panel";
  panel.dataset.group = group;

  if (group === "A" || group === "C") {
    panel.appendChild(manualControls(doc));
    const learn = doc.createElement("button");
    learn.type = "button";
    learn.dataset.action = "learn";
    learn.textContent = "Learn and evaluate";
    learn.addEventListener("click", () => hooks?.onLearn?.());
    panel.appendChild(learn);
  }
  if (group === "B" || group === "C") {
    const auto = doc.createElement("button");
    auto.type = "button";
    auto.dataset.action = "auto";
    auto.textContent = "Use the automatic model";
    auto.addEventListener("click", () => hooks?.onAuto?.());
    panel.appendChild(auto);
  }

  const results = doc.createElement("div");
  results.className = "results";
  panel.appendChild(results);

  return {
    element: panel,
    showResult(model: ScoredModelView) {
      results.innerHTML = "";
      const metrics = doc.createElement("dl");
      metrics.className = "metrics";
      for (const [name, value] of Object.entries(model.metrics)) {
        const dt = doc.createElement("dt");
        dt.textContent = name;
        const dd = doc.createElement("dd");
        dd.dataset.metric = name;
        dd.textContent = value.toFixed(3);
        metrics.appendChild(dt);
        metrics.appendChild(dd);
      }
      results.appendChild(metrics);
      if (model.importances && model.importances.length > 0) {
        const list = doc.createElement("ol");
        list.className = "top-features";
        for (const [feature, weight] of model.importances.slice(0, 10)) {
          const item = doc.createElement("li");
          item.textContent = `${feature} (${weight.toFixed(4)})`;
          list.appendChild(item);
        }
        results.appendChild(list);
      }
    },
    showError(message: string) {
      results.innerHTML = "";
      const note = doc.createElement("p");
      note.className = "inline-error";
      note.textContent = message;
      results.appendChild(note);
    },
  };
}
