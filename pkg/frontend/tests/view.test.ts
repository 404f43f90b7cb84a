import { describe, expect, it } from "vitest";

import { renderNotice, renderRow, renderSession } from "../src/view.js";
import { parseNameMap } from "../src/names.js";
import type { FeatureRow } from "../src/rows.js";

const free: FeatureRow = {
  variable: 3,
  label: "FEATURE_PREFER_APPLETS",
  state: "free",
  origin: null,
  toggleable: true,
};

const implied: FeatureRow = {
  variable: 2,
  label: "PIE",
  state: "implied-excluded",
  origin: "propagation",
  toggleable: false,
};

describe("renderRow", () => {
  it("gives toggle buttons to free rows", () => {
    const html = renderRow(free);
    expect(html).toContain('data-action="select"');
    expect(html).toContain('data-action="exclude"');
    expect(html).not.toContain('data-action="retract"');
  });

  it("renders implied rows without any toggle controls", () => {
    const html = renderRow(implied);
    expect(html).toContain("implied-excluded");
    expect(html).toContain("implied exclusion");
    expect(html).not.toContain("<button");
  });

  it("offers retraction only on user decisions", () => {
    const html = renderRow({ ...free, state: "user-selected", origin: "decision" });
    expect(html).toContain('data-action="retract"');
  });

  it("escapes feature names", () => {
    const html = renderRow({ ...free, label: "<b>&pwn</b>" });
    expect(html).toContain("&lt;b&gt;&amp;pwn&lt;/b&gt;");
  });
});

describe("renderSession", () => {
  it("includes the counts summary and one list item per row", () => {
    const html = renderSession([implied, free], { decided: 0, implied: 1, free: 1 }, null);
    expect(html).toContain("0 decided, 1 implied, 1 free");
    expect(html.match(/<li/g)).toHaveLength(2);
  });

  it("shows a conflict banner only when a notice is present", () => {
    expect(renderNotice(null)).toBe("");
    const html = renderNotice({ kind: "conflict", message: "PIE conflicts" });
    expect(html).toContain('class="notice conflict"');
    expect(html).toContain("PIE conflicts");
  });
});

describe("parseNameMap", () => {
  it("parses index/name lines and ignores blanks and comments", () => {
    const names = parseNameMap("1 STATIC\n\n# comment\n2 PIE\n");
    expect(names).toEqual({ 1: "STATIC", 2: "PIE" });
  });

  it("rejects malformed lines", () => {
    expect(() => parseNameMap("STATIC 1")).toThrow(/line 1/);
  });
});
