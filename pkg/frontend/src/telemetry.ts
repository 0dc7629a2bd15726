// Activity telemetry: user input events are debounced and posted with the
// current task tag. Failed posts are buffered and retried in order, so the
// server always sees a nondecreasing timestamp sequence.

export type PostActivity = (task: string, timestamp: number) => Promise<unknown>;

export class ActivityEmitter {
  private buffer: { task: string; timestamp: number }[] = [];
  private timer: ReturnType<typeof setTimeout> | null = null;
  private draining = false;
  private currentTask: string;

  constructor(
    private post: PostActivity,
    initialTask = "S",
    private debounceMs = 400,
    private now: () => number = Date.now,
  ) {
    this.currentTask = initialTask;
  }

  setTask(task: string): void {
    this.currentTask = task;
    this.enqueue();  // a task switch is itself activity
  }

  task(): string {
    return this.currentTask;
  }

  activity(): void {
    if (this.timer !== null) return;
    this.timer = setTimeout(() => {
      this.timer = null;
    }, this.debounceMs);
    this.enqueue();
  }

  pending(): number {
    return this.buffer.length;
  }

  private enqueue(): void {
    this.buffer.push({ task: this.currentTask, timestamp: this.now() });
    void this.drain();
  }

  async drain(): Promise<void> {
    if (this.draining) return;
    this.draining = true;
    try {
      while (this.buffer.length > 0) {
        const head = this.buffer[0];
        try {
          await this.post(head.task, head.timestamp);
        } catch {
          break;  // keep the event; retry on the next drain
        }
        this.buffer.shift();
      }
    } finally {
      this.draining = false;
    }
  }

  async flush(): Promise<void> {
    await this.drain();
  }
}
