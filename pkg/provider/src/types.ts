export type Variant = "metaphorical" | "literal";

export const VARIANTS: readonly Variant[] = ["metaphorical", "literal"];

/** One raw input record: a short passage whose last sentence used one verb of a pair. */
export interface RawDiscourse {
  id: string;
  pair_id: string;
  label: Variant;
  text: string;
}

export interface Pair {
  pairId: string;
  kind: "SV" | "VO";
  argumentLemma: string;
  metaphoricalVerb: string;
  literalVerb: string;
  metaphoricalCount: number;
  literalCount: number;
}

export interface Token {
  surface: string;
  lemma: string;
  upos: string;
}

/** Mirrors the corpus line format the core pipeline reads. */
export interface CorpusRecord {
  id: string;
  pair_id: string;
  sentences: Token[][];
  final_sentence_index: number;
  slot_token_index: number;
  original_label: Variant;
}

/** First line of every artifact file. Extra keys are tolerated downstream. */
export interface Manifest {
  model: string;
  version: string;
  layer: string;
  pooling: string;
  context_mode: string;
  created_at: string;
  corpus_digest: string;
  dim?: number;
  truncated?: string[];
}

export interface ContextRef {
  kind: "context";
  sentence: number;
  token: number;
}

export interface ComponentRef {
  kind: "component";
  role: "verb" | "argument";
  variant: Variant;
}

export interface EmbeddingRecord {
  discourse_id: string;
  ref: ContextRef | ComponentRef;
  vector: number[];
}

export interface ClozeRecord {
  discourse_id: string;
  candidate: Variant;
  logprob: number;
  n_subtokens: number;
}

// Tag set accepted by the core corpus reader; anything else is mapped to X.
export const UPOS_TAGS = new Set([
  "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ",
  "PART", "PUNCT", "X", "INTJ", "PROPN", "AUX", "SCONJ", "CCONJ", "SYM",
]);

export function verbFor(pair: Pair, variant: Variant): string {
  return variant === "metaphorical" ? pair.metaphoricalVerb : pair.literalVerb;
}
