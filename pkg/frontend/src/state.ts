// Client-side view state. Mirrors the server's task state machine so the UI
// never offers a move the server would reject; the server stays
// authoritative.

export type Task = "S" | "L" | "W";
export type RoleView = "create" | "judge";

const GROUP_A_EDGES = new Set(["S>L", "L>W", "W>L"]);

export function canTransition(group: string, from: Task, to: Task): boolean {
  if (from === to) return true;
  if (group === "A") return GROUP_A_EDGES.has(`${from}>${to}`);
  return true;
}

export interface ViewState {
  roleView: RoleView;
  group: string;
  task: Task;
  problemId: string | null;
  specId: string | null;
  usedAuto: boolean;
  narrative: string;
}

export function initialViewState(roleView: RoleView, group: string): ViewState {
  return {
    roleView,
    group,
    task: "S",
    problemId: null,
    specId: null,
    usedAuto: false,
    narrative: "",
  };
}

export function moveTask(state: ViewState, to: Task): ViewState {
  if (!canTransition(state.group, state.task, to)) {
    return state;
  }
  return { ...state, task: to };
}

export function problemIdFor(template: string, choices: number[]): string {
  return `${template}-${choices.join("-")}`;
}

export function wordCount(text: string): number {
  const words = text.trim().split(/\s+/).filter((w) => w.length > 0);
  return words.length;
}

export function voteReady(winner: "a" | "b" | null, explanation: string): boolean {
  const words = wordCount(explanation);
  return winner !== null && words >= 10 && words <= 100;
}
