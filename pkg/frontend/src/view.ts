/**
 * HTML rendering: pure string templates over the derived view model, so the
 * view is a function of the last session state and nothing else.
 */

import type { Notice } from "./controller.js";
import type { FeatureRow, SessionCounts } from "./rows.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const STATE_BADGES: Record<FeatureRow["state"], string> = {
  "user-selected": "selected by you",
  "user-excluded": "excluded by you",
  "implied-selected": "implied selection",
  "implied-excluded": "implied exclusion",
  free: "free",
};

export function renderRow(row: FeatureRow): string {
  const badge = STATE_BADGES[row.state];
  const buttons = row.toggleable
    ? `<button data-action="select" data-var="${row.variable}">select</button>` +
      `<button data-action="exclude" data-var="${row.variable}">exclude</button>`
    : "";
  const retract = row.origin === "decision"
    ? `<button data-action="retract" data-var="${row.variable}">retract</button>`
    : "";
  return (
    `<li class="feature ${row.state}" data-var="${row.variable}">` +
    `<span class="name">${escapeHtml(row.label)}</span>` +
    `<span class="badge">${badge}</span>${buttons}${retract}</li>`
  );
}

export function renderNotice(notice: Notice | null): string {
  if (notice === null) {
    return "";
  }
  return `<div class="notice ${notice.kind}">${escapeHtml(notice.message)}</div>`;
}

export function renderSession(rows: FeatureRow[], counts: SessionCounts, notice: Notice | null): string {
  const summary =
    `<p class="summary">${counts.decided} decided, ` +
    `${counts.implied} implied, ${counts.free} free</p>`;
  const items = rows.map(renderRow).join("");
  return `${renderNotice(notice)}${summary}<ul class="features">${items}</ul>`;
}
