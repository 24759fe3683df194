export { annotateCorpus, annotateDiscourse, corpusLines, loadRaw } from "./annotate";
export { loadCorpus } from "./corpus";
export { loadPairs } from "./pairs";
export { exportEmbeddings } from "./embeddings";
export { exportCloze } from "./cloze";
export { contextMean, precedingTokens, sentenceMean, MAX_CONTEXT_TOKENS } from "./context";
export { DIM, EMBEDDING_MODEL, EMBEDDING_VERSION, inVocabulary, lemmaVector, nlp } from "./nlp";
export { blend, cosine, logSoftmax, mean, norm, pseudoVector } from "./vectors";
export { sha256Bytes, sha256File } from "./digest";
export * from "./types";
