import { readFileSync } from "fs";
import { Pair } from "./types";

const COLUMNS = [
  "pair_id",
  "kind",
  "argument_lemma",
  "metaphorical_verb",
  "literal_verb",
  "metaphorical_count",
  "literal_count",
] as const;

function parseCount(value: string, line: number, path: string): number {
  const n = Number(value);
  if (!Number.isInteger(n) || n < 0) {
    throw new Error(`${path}:${line}: count "${value}" is not a non-negative integer`);
  }
  return n;
}

/**
 * Read the expression pair table. Comma separated, header row, same columns
 * the core pipeline expects. Values are plain lemmas so no quoting is needed.
 */
export function loadPairs(path: string): Map<string, Pair> {
  const lines = readFileSync(path, "utf8").split("\n").filter((l) => l.trim() !== "");
  if (lines.length === 0) throw new Error(`${path}: empty pair table`);
  const header = lines[0].split(",").map((c) => c.trim());
  for (const col of COLUMNS) {
    if (!header.includes(col)) throw new Error(`${path}: missing column ${col}`);
  }
  const idx = (col: string) => header.indexOf(col);
  const pairs = new Map<string, Pair>();
  lines.slice(1).forEach((line, i) => {
    const lineNo = i + 2;
    const cells = line.split(",").map((c) => c.trim());
    if (cells.length !== header.length) {
      throw new Error(`${path}:${lineNo}: expected ${header.length} cells, got ${cells.length}`);
    }
    const kind = cells[idx("kind")];
    if (kind !== "SV" && kind !== "VO") {
      throw new Error(`${path}:${lineNo}: kind must be SV or VO`);
    }
    const pair: Pair = {
      pairId: cells[idx("pair_id")],
      kind,
      argumentLemma: cells[idx("argument_lemma")].toLowerCase(),
      metaphoricalVerb: cells[idx("metaphorical_verb")].toLowerCase(),
      literalVerb: cells[idx("literal_verb")].toLowerCase(),
      metaphoricalCount: parseCount(cells[idx("metaphorical_count")], lineNo, path),
      literalCount: parseCount(cells[idx("literal_count")], lineNo, path),
    };
    if (pair.metaphoricalVerb === pair.literalVerb) {
      throw new Error(`${path}:${lineNo}: pair ${pair.pairId} lists the same verb twice`);
    }
    if (pairs.has(pair.pairId)) {
      throw new Error(`${path}:${lineNo}: duplicate pair ${pair.pairId}`);
    }
    pairs.set(pair.pairId, pair);
  });
  return pairs;
}
