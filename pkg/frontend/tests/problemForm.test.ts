import { describe, expect, it } from "vitest";
import { renderProblemForm } from "../src/problemForm.js";
import { TemplateGrammar } from "../src/api.js";

const USERS_TEMPLATE: TemplateGrammar = {
  id: "users",
  entity: "users",
  sentence: "Predict if a user will make {XX} of {YY} items in {ZZ} days.",
  slots: [
    { name: "XX", options: ["more than 3 orders", "an order", "more than 1 orders"] },
    { name: "YY", options: ["any number of", "more than 5", "more than 10", "more than 15"] },
    { name: "ZZ", options: ["any number of", "the next 30"] },
  ],
};

describe("problem form", () => {
  it("renders one dropdown per slot with the grammar's option counts", () => {
    const form = renderProblemForm(document, USERS_TEMPLATE);
    const selects = form.element.querySelectorAll("select");
    expect(selects.length).toBe(3);
    const counts = Array.from(selects).map((s) => s.querySelectorAll("option").length);
    expect(counts).toEqual([3, 4, 2]);
  });

  it("default selection yields the template's first enumerated problem", () => {
    const form = renderProblemForm(document, USERS_TEMPLATE);
    expect(form.currentProblemId()).toBe("users-0-0-0");
  });

  it("embeds dropdowns inside the sentence text", () => {
    const form = renderProblemForm(document, USERS_TEMPLATE);
    const text = form.element.textContent ?? "";
    expect(text).toContain("Predict if a user will make");
    expect(text).toContain("items in");
    expect(text.endsWith("days.")).toBe(true);
  });

  it("changing a slot updates the problem id and fires the callback", () => {
    let latest = "";
    const form = renderProblemForm(document, USERS_TEMPLATE, (id) => {
      latest = id;
    });
    const yy = form.element.querySelector("select[data-slot=YY]") as HTMLSelectElement;
    yy.value = "1";
    yy.dispatchEvent(new Event("change"));
    expect(form.currentProblemId()).toBe("users-0-1-0");
    expect(latest).toBe("users-0-1-0");
  });

  it("renders a complete sentence for the default selection", () => {
    const form = renderProblemForm(document, USERS_TEMPLATE);
    const selected = Array.from(form.element.querySelectorAll("select")).map(
      (s) => (s as HTMLSelectElement).selectedOptions[0].textContent,
    );
    expect(selected).toEqual(["more than 3 orders", "any number of", "any number of"]);
  });
});
