/**
 * View-model derivation: a session state from the service becomes one row
 * per variable. Pure functions only; the engine's answer is never second-
 * guessed client-side.
 */

import type { SessionState } from "./api.js";

export type RowState =
  | "user-selected"
  | "user-excluded"
  | "implied-selected"
  | "implied-excluded"
  | "free";

export interface FeatureRow {
  variable: number;
  /** Feature name when a name map was uploaded, otherwise the index. */
  label: string;
  state: RowState;
  origin: "decision" | "propagation" | null;
  /** Only free and user-decided rows may be toggled directly. */
  toggleable: boolean;
}

export interface SessionCounts {
  decided: number;
  implied: number;
  free: number;
}

export function deriveRows(state: SessionState): FeatureRow[] {
  const rows: FeatureRow[] = [];
  const push = (variable: number, rowState: RowState) => {
    const origin =
      rowState === "free" ? null
      : rowState.startsWith("user-") ? ("decision" as const)
      : ("propagation" as const);
    rows.push({
      variable,
      label: state.names[String(variable)] ?? String(variable),
      state: rowState,
      origin,
      toggleable: origin !== "propagation",
    });
  };
  for (const literal of state.decided) {
    push(Math.abs(literal), literal > 0 ? "user-selected" : "user-excluded");
  }
  for (const variable of state.implied_true) {
    push(variable, "implied-selected");
  }
  for (const variable of state.implied_false) {
    push(variable, "implied-excluded");
  }
  for (const variable of state.free) {
    push(variable, "free");
  }
  rows.sort((a, b) => a.variable - b.variable);
  return rows;
}

export function deriveCounts(state: SessionState): SessionCounts {
  return {
    decided: state.decided.length,
    implied: state.implied_true.length + state.implied_false.length,
    free: state.free.length,
  };
}

export function rowFor(rows: FeatureRow[], variable: number): FeatureRow | undefined {
  return rows.find((row) => row.variable === variable);
}
