/**
 * Session controller: the single mutable piece of the client.
 *
 * Holds the last authoritative state received from the service plus a
 * transient notice. Every mutation awaits the server's answer before the
 * view model changes (no optimistic updates); a rejected decision leaves the
 * state exactly as it was and surfaces a conflict notice instead.
 */

import { ConflictError, PropagationClient, SessionState } from "./api.js";
import { deriveCounts, deriveRows, FeatureRow, rowFor, SessionCounts } from "./rows.js";

export type Direction = "select" | "exclude";

export interface Notice {
  kind: "conflict" | "info" | "error";
  message: string;
}

export class SessionController {
  private state: SessionState;
  notice: Notice | null = null;

  constructor(
    private readonly client: PropagationClient,
    initial: SessionState,
  ) {
    this.state = initial;
  }

  static async create(client: PropagationClient, modelId: string): Promise<SessionController> {
    return new SessionController(client, await client.createSession(modelId));
  }

  get sessionState(): SessionState {
    return this.state;
  }

  get rows(): FeatureRow[] {
    return deriveRows(this.state);
  }

  get counts(): SessionCounts {
    return deriveCounts(this.state);
  }

  /**
   * Toggle a feature. Free rows get a new decision; clicking a user decision
   * in its current direction retracts it; the opposite direction retracts
   * then re-decides. Implied rows are refused locally: the causing decisions
   * must be retracted instead.
   */
  async toggle(variable: number, direction: Direction): Promise<void> {
    const row = rowFor(this.rows, variable);
    if (row === undefined) {
      this.notice = { kind: "error", message: `unknown feature ${variable}` };
      return;
    }
    if (!row.toggleable) {
      // The engine already proved this polarity is forced: overriding it
      // would conflict with the current decisions. No server round-trip
      // needed, and the view stays as it is apart from the banner.
      this.notice = {
        kind: "conflict",
        message:
          `${row.label} is ${row.state === "implied-excluded" ? "excluded" : "selected"} ` +
          "by your current decisions; retract the causing decisions to change it",
      };
      return;
    }
    const literal = direction === "select" ? variable : -variable;
    try {
      if (row.state === "free") {
        this.state = await this.client.decide(this.state.session_id, literal);
      } else if (
        (row.state === "user-selected" && direction === "select") ||
        (row.state === "user-excluded" && direction === "exclude")
      ) {
        this.state = await this.client.retract(this.state.session_id, variable);
      } else {
        this.state = await this.client.retract(this.state.session_id, variable);
        this.state = await this.client.decide(this.state.session_id, literal);
      }
      this.notice = null;
    } catch (err) {
      if (err instanceof ConflictError) {
        this.notice = { kind: "conflict", message: err.message };
        return; // state intentionally untouched
      }
      throw err;
    }
  }

  async retract(variable: number): Promise<void> {
    this.state = await this.client.retract(this.state.session_id, variable);
    this.notice = null;
  }

  async refresh(): Promise<void> {
    this.state = await this.client.getSession(this.state.session_id);
  }
}
