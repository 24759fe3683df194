import { readFileSync } from "fs";
import { CorpusRecord, VARIANTS } from "./types";

/** Read back an annotated corpus file for the artifact exporters. */
export function loadCorpus(path: string): CorpusRecord[] {
  const lines = readFileSync(path, "utf8").split("\n");
  const out: CorpusRecord[] = [];
  lines.forEach((line, i) => {
    if (line.trim() === "") return;
    const lineNo = i + 1;
    let obj: CorpusRecord;
    try {
      obj = JSON.parse(line);
    } catch {
      throw new Error(`${path}:${lineNo}: not valid JSON`);
    }
    if (
      typeof obj.id !== "string" ||
      typeof obj.pair_id !== "string" ||
      !Array.isArray(obj.sentences) ||
      !Number.isInteger(obj.final_sentence_index) ||
      !Number.isInteger(obj.slot_token_index) ||
      !VARIANTS.includes(obj.original_label)
    ) {
      throw new Error(`${path}:${lineNo}: not a corpus record`);
    }
    if (obj.final_sentence_index !== obj.sentences.length - 1) {
      throw new Error(`${path}:${lineNo}: final sentence index out of place`);
    }
    out.push(obj);
  });
  if (out.length === 0) throw new Error(`${path}: empty corpus`);
  return out;
}
