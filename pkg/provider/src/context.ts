import { CorpusRecord, Token } from "./types";
import { lemmaVector } from "./nlp";
import { mean, norm } from "./vectors";

// Budget on how many trailing context tokens feed the discourse mean. Mirrors
// the input-length cap a sequence model would impose; truncation drops tokens
// from the start of the discourse and is reported in the artifact manifest.
export const MAX_CONTEXT_TOKENS = 512;

export interface PrecedingToken {
  sentence: number;
  token: number;
  lemma: string;
  upos: string;
}

export function precedingTokens(record: CorpusRecord): PrecedingToken[] {
  const out: PrecedingToken[] = [];
  for (let s = 0; s < record.final_sentence_index; s++) {
    record.sentences[s].forEach((tok, t) => {
      out.push({ sentence: s, token: t, lemma: tok.lemma, upos: tok.upos });
    });
  }
  return out;
}

function isContent(upos: string): boolean {
  return upos !== "PUNCT" && upos !== "SYM";
}

export interface ContextProfile {
  vector: number[] | null;
  truncated: boolean;
}

/**
 * Mean vector over the content tokens of the preceding discourse, or null
 * when there is nothing usable to average. The budget keeps only the most
 * recent tokens, matching how an encoder would see an overlong input.
 */
export function contextMean(record: CorpusRecord): ContextProfile {
  const content = precedingTokens(record).filter((t) => isContent(t.upos));
  const kept = content.slice(Math.max(0, content.length - MAX_CONTEXT_TOKENS));
  if (kept.length === 0) return { vector: null, truncated: false };
  const avg = mean(kept.map((t) => lemmaVector(t.lemma)));
  // a degenerate average is useless as context; treat it as absent
  const vector = norm(avg) < 1e-12 ? null : avg;
  return { vector, truncated: kept.length < content.length };
}

/** Same averaging over one sentence's tokens, given as plain lemmas. */
export function sentenceMean(tokens: Token[], slot: number, slotLemma: string): number[] | null {
  const lemmas = tokens
    .map((tok, i) => ({ lemma: i === slot ? slotLemma : tok.lemma, upos: tok.upos }))
    .filter((t) => isContent(t.upos))
    .map((t) => t.lemma);
  if (lemmas.length === 0) return null;
  const avg = mean(lemmas.map((l) => lemmaVector(l)));
  return norm(avg) < 1e-12 ? null : avg;
}
