/** Parse a sidecar name-map file: one `<index> <name>` pair per line. */

export function parseNameMap(text: string): Record<number, string> {
  const names: Record<number, string> = {};
  for (const [lineNumber, raw] of text.split(/\r?\n/).entries()) {
    const line = raw.trim();
    if (line === "" || line.startsWith("#")) {
      continue;
    }
    const match = /^(\d+)\s+(\S.*)$/.exec(line);
    if (match === null) {
      throw new Error(`name map line ${lineNumber + 1}: expected "<index> <name>"`);
    }
    names[Number(match[1])] = match[2]!.trim();
  }
  return names;
}
