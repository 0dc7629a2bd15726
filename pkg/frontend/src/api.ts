// Typed client for the prediction service JSON API. All truth lives
// server-side; this module only shuttles JSON.

export interface SlotGrammar {
  name: string;
  options: string[];
}

export interface TemplateGrammar {
  id: string;
  entity: string;
  sentence: string;
  slots: SlotGrammar[];
}

export interface ProblemEntry {
  id: string;
  entity: string;
  template: string;
  choices: number[];
  sentence: string;
}

export interface ProblemCatalog {
  templates: TemplateGrammar[];
  problems: ProblemEntry[];
}

export interface ScoredModelView {
  problem_id: string;
  spec_id: string;
  family: string;
  hyperparameters: Record<string, unknown>;
  metrics: { f1: number; auc: number; accuracy: number };
  importances: [string, number][] | null;
}

export interface SessionView {
  id: string;
  role: string;
  group: string;
  submissions: number;
  current_task: string;
  timers: Record<string, number>;
}

export interface ReportView {
  id: string;
  author: string;
  group: string;
  sentence: string;
  narrative: string;
  metrics: { f1: number; auc: number; accuracy: number };
  top_features: [string, number][] | null;
  used_auto_model: boolean;
}

export interface JudgePair {
  report_a: ReportView;
  report_b: ReportView;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parse<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body.code ?? "unknown", body.message ?? "request failed");
  }
  return body as T;
}

export class ServiceClient {
  constructor(private base: string) {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return parse<T>(resp);
  }

  private async get<T>(path: string): Promise<T> {
    return parse<T>(await fetch(this.url(path)));
  }

  createSession(): Promise<SessionView> {
    return this.post("/session", {});
  }

  assignRole(session: string, role: "create" | "judge"): Promise<SessionView> {
    return this.post(`/session/${session}/role`, { role });
  }

  submitSurvey(session: string, answers: Record<string, string>): Promise<SessionView> {
    return this.post(`/session/${session}/survey`, { answers });
  }

  problems(): Promise<ProblemCatalog> {
    return this.get("/problems");
  }

  autoModel(problemId: string): Promise<ScoredModelView> {
    return this.get(`/models/${problemId}/auto`);
  }

  model(problemId: string, specId: string): Promise<ScoredModelView> {
    return this.get(`/models/${problemId}?spec=${encodeURIComponent(specId)}`);
  }

  submitReport(body: {
    session: string;
    problem_id: string;
    narrative: string;
    spec_id?: string;
    auto?: boolean;
  }): Promise<ReportView> {
    return this.post("/reports", body);
  }

  judgeNext(session: string): Promise<JudgePair> {
    return this.get(`/judge/next?session=${encodeURIComponent(session)}`);
  }

  submitVote(body: {
    session: string;
    report_a: string;
    report_b: string;
    winner: "a" | "b";
    explanation: string;
  }): Promise<unknown> {
    return this.post("/votes", body);
  }

  rankings(): Promise<{ ratings: Record<string, number> }> {
    return this.get("/rankings");
  }

  recordActivity(session: string, task: string, timestamp: number): Promise<unknown> {
    return this.post("/telemetry/activity", { session, task, timestamp });
  }
}
