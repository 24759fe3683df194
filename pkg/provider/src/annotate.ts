import { readFileSync } from "fs";
import { ItemSentence, ItemToken, ItsFunction } from "wink-nlp";
import { CorpusRecord, Pair, RawDiscourse, Token, UPOS_TAGS, VARIANTS, verbFor } from "./types";
import { nlp } from "./nlp";

/** Parse the raw discourse file: one JSON object per line. */
export function loadRaw(path: string): RawDiscourse[] {
  const lines = readFileSync(path, "utf8").split("\n");
  const out: RawDiscourse[] = [];
  const seen = new Set<string>();
  lines.forEach((line, i) => {
    if (line.trim() === "") return;
    const lineNo = i + 1;
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line);
    } catch {
      throw new Error(`${path}:${lineNo}: not valid JSON`);
    }
    for (const field of ["id", "pair_id", "label", "text"]) {
      if (typeof obj[field] !== "string" || obj[field] === "") {
        throw new Error(`${path}:${lineNo}: missing or empty field ${field}`);
      }
    }
    const rec = obj as unknown as RawDiscourse;
    if (!VARIANTS.includes(rec.label)) {
      throw new Error(`${path}:${lineNo}: label must be one of ${VARIANTS.join(", ")}`);
    }
    if (seen.has(rec.id)) throw new Error(`${path}:${lineNo}: duplicate discourse ${rec.id}`);
    seen.add(rec.id);
    out.push({ id: rec.id, pair_id: rec.pair_id, label: rec.label, text: rec.text });
  });
  if (out.length === 0) throw new Error(`${path}: no discourse records`);
  return out;
}

function tokenize(text: string): Token[][] {
  const doc = nlp().readDoc(text);
  const its = nlp().its;
  // the lemma accessor's declared arity disagrees with ItsFunction; wink's
  // own type tests cast around it the same way
  const itsLemma = its.lemma as unknown as ItsFunction<string>;
  const sentences: Token[][] = [];
  doc.sentences().each((sentence: ItemSentence) => {
    const tokens: Token[] = [];
    sentence.tokens().each((token: ItemToken) => {
      const pos = token.out(its.pos) as string;
      tokens.push({
        surface: token.out(),
        lemma: (token.out(itsLemma) as string).toLowerCase(),
        upos: UPOS_TAGS.has(pos) ? pos : "X",
      });
    });
    if (tokens.length > 0) sentences.push(tokens);
  });
  return sentences;
}

/**
 * Turn one raw passage into a corpus record. The slot is the first token of
 * the last sentence whose lemma matches the verb the original author used,
 * so inflected surface forms resolve through the lemmatizer.
 */
export function annotateDiscourse(raw: RawDiscourse, pair: Pair): CorpusRecord {
  const sentences = tokenize(raw.text);
  if (sentences.length === 0) {
    throw new Error(`discourse ${raw.id}: no sentences found in the text`);
  }
  const finalIndex = sentences.length - 1;
  const wanted = verbFor(pair, raw.label);
  const slot = sentences[finalIndex].findIndex((t) => t.lemma === wanted);
  if (slot < 0) {
    throw new Error(
      `discourse ${raw.id}: the final sentence has no token with lemma "${wanted}"`,
    );
  }
  return {
    id: raw.id,
    pair_id: raw.pair_id,
    sentences,
    final_sentence_index: finalIndex,
    slot_token_index: slot,
    original_label: raw.label,
  };
}

export function annotateCorpus(raws: RawDiscourse[], pairs: Map<string, Pair>): CorpusRecord[] {
  return raws.map((raw) => {
    const pair = pairs.get(raw.pair_id);
    if (pair === undefined) {
      throw new Error(`discourse ${raw.id}: unknown pair "${raw.pair_id}"`);
    }
    return annotateDiscourse(raw, pair);
  });
}

export function corpusLines(records: CorpusRecord[]): string {
  return records.map((r) => JSON.stringify(r)).join("\n") + "\n";
}
