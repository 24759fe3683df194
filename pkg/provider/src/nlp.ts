import winkNLP, { WinkMethods } from "wink-nlp";
import model from "wink-eng-lite-web-model";
import { wordEmbeddings } from "./embedding-table";
import { pseudoVector } from "./vectors";

// Pinned in package.json without a range so reruns see identical weights.
export const EMBEDDING_MODEL = "wink-embeddings-sg-100d";
export const EMBEDDING_VERSION = "1.1.0";
export const DIM = 100;

let instance: WinkMethods | null = null;

/** Lazily built shared pipeline: sentence boundaries, POS, word vectors. */
export function nlp(): WinkMethods {
  if (instance === null) {
    instance = winkNLP(model, ["sbd", "pos"], wordEmbeddings());
  }
  return instance;
}

/**
 * 100-dim vector for a lemma. The lookup returns the trailing l2 norm as an
 * extra entry, which is dropped. Out-of-vocabulary lemmas come back as all
 * zeros and are replaced with a deterministic stand-in so consumers never see
 * a zero-norm vector.
 */
export function lemmaVector(lemma: string): number[] {
  const raw = nlp().vectorOf(lemma).slice(0, DIM);
  if (raw.every((x) => x === 0)) return pseudoVector(lemma, DIM);
  return raw;
}

/** True when the lemma has a real (in-vocabulary) embedding. */
export function inVocabulary(lemma: string): boolean {
  return !nlp().vectorOf(lemma).slice(0, DIM).every((x) => x === 0);
}
