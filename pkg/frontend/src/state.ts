/** Session view-model: everything panels render comes from here.
 *
 * The controller is stateless beyond the session id: refresh() rebuilds the
 * whole view from /state and /next, so a page reload loses nothing. Stale
 * submissions (another tab answered first) surface as a "conflict" event
 * followed by an automatic resync.
 */

import { ApiClient, ApiError } from "./api.js";
import type { NextQuery, SessionState } from "./types.js";

export type ControllerEvent =
  | { kind: "updated" }
  | { kind: "conflict"; message: string }
  | { kind: "complete" }
  | { kind: "error"; message: string };

export class SessionController {
  state: SessionState | null = null;
  current: NextQuery | null = null;
  private listeners: ((event: ControllerEvent) => void)[] = [];

  constructor(
    readonly api: ApiClient,
    readonly sessionId: string,
  ) {}

  subscribe(listener: (event: ControllerEvent) => void): void {
    this.listeners.push(listener);
  }

  private emit(event: ControllerEvent): void {
    for (const listener of this.listeners) {
      listener(event);
    }
  }

  get labeledCount(): number {
    return this.state ? this.state.query_log.length : 0;
  }

  get complete(): boolean {
    return this.state?.status === "complete";
  }

  async refresh(): Promise<void> {
    this.state = await this.api.state(this.sessionId);
    if (this.state.status === "complete") {
      this.current = null;
      this.emit({ kind: "updated" });
      this.emit({ kind: "complete" });
      return;
    }
    try {
      this.current = await this.api.next(this.sessionId);
    } catch (err) {
      if (err instanceof ApiError && err.status === 410) {
        this.current = null;
        this.emit({ kind: "complete" });
      } else {
        throw err;
      }
    }
    this.emit({ kind: "updated" });
  }

  /** Label the query this view currently shows (may be stale). */
  async submit(cls: number): Promise<void> {
    if (!this.current) {
      this.emit({ kind: "error", message: "no query to label" });
      return;
    }
    await this.submitFor(this.current.point, cls);
  }

  /** Label an explicit point; used by submit() and by stale-tab replays. */
  async submitFor(point: number, cls: number): Promise<void> {
    try {
      await this.api.postLabel(this.sessionId, point, cls);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.emit({ kind: "conflict", message: err.message });
        await this.refresh();
        return;
      }
      if (err instanceof ApiError) {
        this.emit({ kind: "error", message: err.message });
        return;
      }
      throw err;
    }
    await this.refresh();
  }
}

export function classLabels(state: SessionState): string[] {
  if (state.class_names && state.class_names.length === state.class_count) {
    return state.class_names;
  }
  return Array.from({ length: state.class_count }, (_, i) => `class ${i}`);
}
