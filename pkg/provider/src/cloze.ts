import { ClozeRecord, CorpusRecord, Manifest, Pair, VARIANTS, verbFor } from "./types";
import { EMBEDDING_MODEL, EMBEDDING_VERSION, inVocabulary, lemmaVector } from "./nlp";
import { cosine, logSoftmax } from "./vectors";
import { contextMean } from "./context";

/**
 * Score both candidate verbs of each discourse against its preceding context
 * and emit one record per candidate: the log-probability under a softmax over
 * the pair, and the number of scored pieces (always one, the scorer works on
 * whole lemmas). Identical candidates would come out with identical scores.
 */
export function exportCloze(
  corpus: CorpusRecord[],
  pairs: Map<string, Pair>,
  corpusDigest: string,
  createdAt: string,
): string {
  const records: ClozeRecord[] = [];
  const truncated: string[] = [];
  for (const disc of corpus) {
    const pair = pairs.get(disc.pair_id);
    if (pair === undefined) throw new Error(`discourse ${disc.id}: unknown pair "${disc.pair_id}"`);
    const candidates = VARIANTS.map((variant) => verbFor(pair, variant));
    for (const lemma of candidates) {
      if (!inVocabulary(lemma)) {
        throw new Error(`discourse ${disc.id}: candidate verb "${lemma}" is outside the scoring vocabulary`);
      }
    }
    const ctx = contextMean(disc);
    if (ctx.truncated) truncated.push(disc.id);
    const scores = candidates.map((lemma) =>
      ctx.vector === null ? 0 : cosine(lemmaVector(lemma), ctx.vector),
    );
    const logprobs = logSoftmax(scores);
    VARIANTS.forEach((variant, i) => {
      records.push({
        discourse_id: disc.id,
        candidate: variant,
        logprob: logprobs[i],
        n_subtokens: 1,
      });
    });
  }
  const manifest: Manifest = {
    model: EMBEDDING_MODEL,
    version: EMBEDDING_VERSION,
    layer: "static",
    pooling: "cosine-log-softmax",
    context_mode: "preceding-sentences",
    created_at: createdAt,
    corpus_digest: corpusDigest,
  };
  if (truncated.length > 0) manifest.truncated = truncated;
  const lines = [JSON.stringify(manifest), ...records.map((r) => JSON.stringify(r))];
  return lines.join("\n") + "\n";
}
