import { describe, expect, it } from "vitest";
import { renderModelPanel, specIdFrom } from "../src/modelPanel.js";
import { ScoredModelView } from "../src/api.js";

const RF_RESULT: ScoredModelView = {
  problem_id: "users-0-0-0",
  spec_id: "random_forest:10-3",
  family: "random_forest",
  hyperparameters: { n_estimators: 10, max_depth: 3 },
  metrics: { f1: 0.61, auc: 0.7, accuracy: 0.72 },
  importances: [
    ["orders.count", 0.5],
    ["orders.mean(n_items)", 0.3],
  ],
};

const MLP_RESULT: ScoredModelView = {
  ...RF_RESULT,
  spec_id: "mlp:adam-relu-50x50-0.01",
  family: "mlp",
  importances: null,
};

describe("model panel", () => {
  it("group A exposes manual controls but no auto button", () => {
    const panel = renderModelPanel(document, "A");
    expect(panel.element.querySelector("[data-control=family]")).not.toBeNull();
    expect(panel.element.querySelector("[data-action=auto]")).toBeNull();
  });

  it("group B exposes only the auto button, no hyperparameter controls", () => {
    const panel = renderModelPanel(document, "B");
    expect(panel.element.querySelector("[data-control=family]")).toBeNull();
    expect(panel.element.querySelector("[data-control=hyperparameter]")).toBeNull();
    expect(panel.element.querySelector("[data-action=auto]")).not.toBeNull();
  });

  it("group C exposes both manual controls and the auto button", () => {
    const panel = renderModelPanel(document, "C");
    expect(panel.element.querySelector("[data-control=family]")).not.toBeNull();
    expect(panel.element.querySelector("[data-action=auto]")).not.toBeNull();
  });

  it("shows the three metrics", () => {
    const panel = renderModelPanel(document, "C");
    panel.showResult(RF_RESULT);
    const auc = panel.element.querySelector("[data-metric=auc]");
    expect(auc?.textContent).toBe("0.700");
    expect(panel.element.querySelector("[data-metric=f1]")).not.toBeNull();
    expect(panel.element.querySelector("[data-metric=accuracy]")).not.toBeNull();
  });

  it("renders a ranked feature list when present, none for MLP results", () => {
    const panel = renderModelPanel(document, "C");
    panel.showResult(RF_RESULT);
    expect(panel.element.querySelectorAll(".top-features li").length).toBe(2);
    panel.showResult(MLP_RESULT);
    expect(panel.element.querySelector(".top-features")).toBeNull();
  });

  it("caps the feature list at ten entries", () => {
    const panel = renderModelPanel(document, "A");
    panel.showResult({
      ...RF_RESULT,
      importances: Array.from({ length: 15 }, (_, i) => [`f${i}`, 1 / (i + 1)]),
    });
    expect(panel.element.querySelectorAll(".top-features li").length).toBe(10);
  });

  it("shows inline errors for missing precomputed cells", () => {
    const panel = renderModelPanel(document, "B");
    panel.showError("no precomputed grid for problem 'users-9-9-9'");
    expect(panel.element.querySelector(".inline-error")?.textContent).toContain(
      "users-9-9-9",
    );
  });

  it("builds spec ids in the server's canonical parameter order", () => {
    expect(
      specIdFrom("random_forest", { n_estimators: "10", max_depth: "3" }),
    ).toBe("random_forest:10-3");
    expect(
      specIdFrom("mlp", {
        solver: "adam",
        activation: "relu",
        hidden_layer_sizes: "50x50",
        alpha: "0.01",
      }),
    ).toBe("mlp:adam-relu-50x50-0.01");
  });
});
