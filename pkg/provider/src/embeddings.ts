import { CorpusRecord, EmbeddingRecord, Manifest, Pair, VARIANTS, verbFor } from "./types";
import { DIM, EMBEDDING_MODEL, EMBEDDING_VERSION, lemmaVector } from "./nlp";
import { blend } from "./vectors";
import { contextMean, precedingTokens, sentenceMean } from "./context";

/**
 * Build the embedding artifact: one contextualized vector per token of the
 * preceding discourse, plus verb and argument vectors for both variants of
 * the expression, grounded in the final sentence with that variant filling
 * the slot.
 */
export function exportEmbeddings(
  corpus: CorpusRecord[],
  pairs: Map<string, Pair>,
  corpusDigest: string,
  createdAt: string,
): string {
  const records: EmbeddingRecord[] = [];
  const truncated: string[] = [];
  for (const disc of corpus) {
    const pair = pairs.get(disc.pair_id);
    if (pair === undefined) throw new Error(`discourse ${disc.id}: unknown pair "${disc.pair_id}"`);
    const ctx = contextMean(disc);
    if (ctx.truncated) truncated.push(disc.id);
    for (const tok of precedingTokens(disc)) {
      records.push({
        discourse_id: disc.id,
        ref: { kind: "context", sentence: tok.sentence, token: tok.token },
        vector: blend(lemmaVector(tok.lemma), ctx.vector),
      });
    }
    const final = disc.sentences[disc.final_sentence_index];
    for (const variant of VARIANTS) {
      const verb = verbFor(pair, variant);
      const ground = sentenceMean(final, disc.slot_token_index, verb);
      records.push({
        discourse_id: disc.id,
        ref: { kind: "component", role: "verb", variant },
        vector: blend(lemmaVector(verb), ground),
      });
      records.push({
        discourse_id: disc.id,
        ref: { kind: "component", role: "argument", variant },
        vector: blend(lemmaVector(pair.argumentLemma), ground),
      });
    }
  }
  const manifest: Manifest = {
    model: EMBEDDING_MODEL,
    version: EMBEDDING_VERSION,
    layer: "static",
    pooling: "blend(lemma,context-mean)",
    context_mode: "preceding-sentences",
    created_at: createdAt,
    corpus_digest: corpusDigest,
    dim: DIM,
  };
  if (truncated.length > 0) manifest.truncated = truncated;
  const lines = [JSON.stringify(manifest), ...records.map((r) => JSON.stringify(r))];
  return lines.join("\n") + "\n";
}
