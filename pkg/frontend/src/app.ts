// Single-page app wiring: role choice, survey, the three-task creation flow
// (specify, learn, write), and the judging loop. No client-side persistence
// beyond the session id; the server is the system of record.

import { ApiError, ProblemCatalog, ScoredModelView, ServiceClient, SessionView } from "./api.js";
import { renderExhausted, renderJudgingView } from "./judging.js";
import { renderModelPanel, specIdFrom } from "./modelPanel.js";
import { renderProblemForm } from "./problemForm.js";
import { Task, canTransition } from "./state.js";
import { ActivityEmitter } from "./telemetry.js";

export class App {
  session: SessionView | null = null;
  catalog: ProblemCatalog | null = null;
  emitter: ActivityEmitter | null = null;
  currentModel: ScoredModelView | null = null;
  problemId: string | null = null;

  constructor(
    private doc: Document,
    private root: HTMLElement,
    private client: ServiceClient,
  ) {}

  private clear(): void {
    this.root.innerHTML = "";
  }

  async start(): Promise<void> {
    this.session = await this.client.createSession();
    this.catalog = await this.client.problems();
    this.renderRoleChoice();
  }

  renderRoleChoice(): void {
    this.clear();
    const heading = this.doc.createElement("h2");
    heading.textContent = "Choose your role";
    this.root.appendChild(heading);
    for (const role of ["create", "judge"] as const) {
      const button = this.doc.createElement("button");
      button.dataset.role = role;
      button.textContent = role === "create" ? "Create models" : "Judge reports";
      button.addEventListener("click", () => void this.pickRole(role));
      this.root.appendChild(button);
    }
  }

  async pickRole(role: "create" | "judge"): Promise<void> {
    if (!this.session) return;
    this.session = await this.client.assignRole(this.session.id, role);
    this.renderSurvey(role);
  }

  renderSurvey(role: "create" | "judge"): void {
    this.clear();
    const form = this.doc.createElement("form");
    form.dataset.view = "survey";
    const label = this.doc.createElement("label");
    label.textContent = "What is the primary focus of your current job?";
    const input = this.doc.createElement("input");
    input.name = "job_focus";
    label.appendChild(input);
    form.appendChild(label);
    const done = this.doc.createElement("button");
    done.type = "button";
    done.dataset.action = "survey-done";
    done.textContent = "Continue";
    done.addEventListener("click", () => {
      void (async () => {
        if (this.session) {
          await this.client.submitSurvey(this.session.id, { job_focus: input.value });
        }
        if (role === "create") {
          await this.enterCreate();
        } else {
          await this.enterJudge();
        }
      })();
    });
    form.appendChild(done);
    this.root.appendChild(form);
  }

  // --- create flow ---

  async enterCreate(): Promise<void> {
    if (!this.session || !this.catalog) return;
    this.emitter = new ActivityEmitter((task, ts) =>
      this.client.recordActivity(this.session!.id, task, ts),
    );
    this.renderCreate("S");
  }

  private switchTask(to: Task): boolean {
    if (!this.session || !this.emitter) return false;
    if (!canTransition(this.session.group, this.emitter.task() as Task, to)) {
      return false;
    }
    this.emitter.setTask(to);
    return true;
  }

  renderCreate(task: Task): void {
    if (!this.session || !this.catalog) return;
    this.clear();
    const nav = this.doc.createElement("nav");
    for (const target of ["S", "L", "W"] as Task[]) {
      const button = this.doc.createElement("button");
      button.dataset.task = target;
      button.textContent = { S: "Specify", L: "Learn", W: "Write" }[target];
      button.disabled = !canTransition(
        this.session.group,
        (this.emitter?.task() ?? "S") as Task,
        target,
      );
      button.addEventListener("click", () => {
        if (this.switchTask(target)) this.renderCreate(target);
      });
      nav.appendChild(button);
    }
    this.root.appendChild(nav);

    if (task === "S") this.renderSpecify();
    if (task === "L") this.renderLearn();
    if (task === "W") this.renderWrite();
  }

  renderSpecify(): void {
    if (!this.catalog) return;
    const section = this.doc.createElement("section");
    section.dataset.view = "specify";
    const entityPicker = this.doc.createElement("select");
    entityPicker.dataset.control = "entity";
    for (const template of this.catalog.templates) {
      const option = this.doc.createElement("option");
      option.value = template.id;
      option.textContent = template.entity;
      entityPicker.appendChild(option);
    }
    section.appendChild(entityPicker);

    const slot = this.doc.createElement("div");
    section.appendChild(slot);
    const mount = (templateId: string) => {
      slot.innerHTML = "";
      const template = this.catalog!.templates.find((t) => t.id === templateId)!;
      const form = renderProblemForm(this.doc, template, (problemId) => {
        this.problemId = problemId;
      });
      this.problemId = form.currentProblemId();
      slot.appendChild(form.element);
    };
    entityPicker.addEventListener("change", () => mount(entityPicker.value));
    mount(this.catalog.templates[0].id);
    this.root.appendChild(section);
    this.emitter?.activity();
  }

  renderLearn(): void {
    if (!this.session) return;
    const panel = renderModelPanel(this.doc, this.session.group, {
      onAuto: () => void this.lookupModel(true),
      onLearn: () => void this.lookupModel(false),
    });
    panel.element.dataset.view = "learn";
    this.root.appendChild(panel.element);
    this.panelHandle = panel;
  }

  private panelHandle: ReturnType<typeof renderModelPanel> | null = null;

  async lookupModel(auto: boolean, specId?: string): Promise<void> {
    if (!this.problemId || !this.panelHandle) return;
    try {
      this.currentModel = auto
        ? await this.client.autoModel(this.problemId)
        : await this.client.model(this.problemId, specId ?? this.readSpecFromControls());
      this.lastAuto = auto;
      this.panelHandle.showResult(this.currentModel);
    } catch (err) {
      if (err instanceof ApiError) {
        this.panelHandle.showError(err.message);
      } else {
        throw err;
      }
    }
    this.emitter?.activity();
  }

  private readSpecFromControls(): string {
    const family =
      (this.root.querySelector("[data-control=family]") as HTMLSelectElement | null)?.value ??
      "random_forest";
    const picks: Record<string, string> = {};
    const fieldset = this.root.querySelector(`fieldset[data-family="${family}"]`);
    fieldset?.querySelectorAll("select[data-control=hyperparameter]").forEach((el) => {
      const select = el as HTMLSelectElement;
      picks[select.dataset.param!] = select.value;
    });
    return specIdFrom(family, picks);
  }

  renderWrite(): void {
    const section = this.doc.createElement("section");
    section.dataset.view = "write";
    const box = this.doc.createElement("textarea");
    box.dataset.field = "narrative";
    box.addEventListener("input", () => this.emitter?.activity());
    section.appendChild(box);
    const submit = this.doc.createElement("button");
    submit.dataset.action = "submit-report";
    submit.textContent = "Submit report";
    submit.addEventListener("click", () => void this.submitReport(box.value));
    section.appendChild(submit);
    const status = this.doc.createElement("p");
    status.dataset.field = "report-status";
    section.appendChild(status);
    this.root.appendChild(section);
  }

  async submitReport(narrative: string): Promise<void> {
    if (!this.session || !this.problemId || !this.currentModel) return;
    await this.emitter?.flush();
    const usedAuto = this.session.group === "B" ? true : this.lastLookupWasAuto();
    const body: Parameters<ServiceClient["submitReport"]>[0] = {
      session: this.session.id,
      problem_id: this.problemId,
      narrative,
    };
    if (usedAuto) {
      body.auto = true;
    } else {
      body.spec_id = this.currentModel.spec_id;
    }
    const report = await this.client.submitReport(body);
    const status = this.root.querySelector("[data-field=report-status]");
    if (status) status.textContent = `Submitted report ${(report as { id: string }).id}`;
  }

  private lastAuto = false;

  private lastLookupWasAuto(): boolean {
    return this.lastAuto;
  }

  // --- judge flow ---

  async enterJudge(): Promise<void> {
    await this.nextPair();
  }

  async nextPair(): Promise<void> {
    if (!this.session) return;
    this.clear();
    try {
      const pair = await this.client.judgeNext(this.session.id);
      const view = renderJudgingView(this.doc, pair, (winner, explanation) => {
        void (async () => {
          await this.client.submitVote({
            session: this.session!.id,
            report_a: pair.report_a.id,
            report_b: pair.report_b.id,
            winner,
            explanation,
          });
          await this.nextPair();
        })();
      });
      this.root.appendChild(view.element);
    } catch (err) {
      if (err instanceof ApiError && err.code === "Exhausted") {
        this.root.appendChild(renderExhausted(this.doc));
      } else {
        throw err;
      }
    }
  }
}

export function bootstrap(doc: Document, base: string): App {
  const root = doc.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  return new App(doc, root as HTMLElement, new ServiceClient(base));
}
