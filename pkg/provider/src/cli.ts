import { mkdirSync, writeFileSync } from "fs";
import { join } from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { annotateCorpus, corpusLines, loadRaw } from "./annotate";
import { loadCorpus } from "./corpus";
import { loadPairs } from "./pairs";
import { exportEmbeddings } from "./embeddings";
import { exportCloze } from "./cloze";
import { sha256Bytes, sha256File } from "./digest";

// Wall-clock stamps would break byte-level reruns, so the manifest timestamp
// is pinned and only changes when the artifact format does. Override with
// --created-at when provenance of a particular run matters more than replay.
export const PINNED_CREATED_AT = "2026-08-01T00:00:00Z";

interface AnnotateArgs {
  raw: string;
  pairs: string;
  out: string;
}

interface ExportArgs {
  corpus: string;
  pairs: string;
  out: string;
  createdAt: string;
}

interface PipelineArgs {
  raw: string;
  pairs: string;
  out: string;
  createdAt: string;
}

function cmdAnnotate(args: AnnotateArgs): void {
  const pairs = loadPairs(args.pairs);
  const corpus = annotateCorpus(loadRaw(args.raw), pairs);
  writeFileSync(args.out, corpusLines(corpus), "utf8");
  console.log(`annotated ${corpus.length} discourses -> ${args.out}`);
}

function cmdEmbed(args: ExportArgs): void {
  const pairs = loadPairs(args.pairs);
  const corpus = loadCorpus(args.corpus);
  const digest = sha256File(args.corpus);
  writeFileSync(args.out, exportEmbeddings(corpus, pairs, digest, args.createdAt), "utf8");
  console.log(`embeddings for ${corpus.length} discourses -> ${args.out}`);
}

function cmdCloze(args: ExportArgs): void {
  const pairs = loadPairs(args.pairs);
  const corpus = loadCorpus(args.corpus);
  const digest = sha256File(args.corpus);
  writeFileSync(args.out, exportCloze(corpus, pairs, digest, args.createdAt), "utf8");
  console.log(`cloze scores for ${corpus.length} discourses -> ${args.out}`);
}

/** Annotate and export everything into one directory the core can consume. */
function cmdPipeline(args: PipelineArgs): void {
  const pairs = loadPairs(args.pairs);
  const corpus = annotateCorpus(loadRaw(args.raw), pairs);
  mkdirSync(args.out, { recursive: true });
  const corpusText = corpusLines(corpus);
  const digest = sha256Bytes(corpusText);
  writeFileSync(join(args.out, "corpus.jsonl"), corpusText, "utf8");
  writeFileSync(
    join(args.out, "embeddings.jsonl"),
    exportEmbeddings(corpus, pairs, digest, args.createdAt),
    "utf8",
  );
  writeFileSync(
    join(args.out, "cloze.jsonl"),
    exportCloze(corpus, pairs, digest, args.createdAt),
    "utf8",
  );
  console.log(`wrote corpus.jsonl, embeddings.jsonl, cloze.jsonl to ${args.out}`);
}

function run(handler: () => void): void {
  try {
    handler();
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exitCode = 1;
  }
}

yargs(hideBin(process.argv))
  .scriptName("metlit-provider")
  .command<AnnotateArgs>(
    "annotate",
    "tokenize, tag and locate the slot in raw discourses",
    (y) =>
      y
        .option("raw", { type: "string", demandOption: true, describe: "raw discourse jsonl" })
        .option("pairs", { type: "string", demandOption: true, describe: "expression pair csv" })
        .option("out", { type: "string", demandOption: true, describe: "corpus file to write" }),
    (args) => run(() => cmdAnnotate(args)),
  )
  .command<ExportArgs>(
    "embed",
    "export context and component vectors for a corpus",
    (y) =>
      y
        .option("corpus", { type: "string", demandOption: true, describe: "annotated corpus jsonl" })
        .option("pairs", { type: "string", demandOption: true, describe: "expression pair csv" })
        .option("out", { type: "string", demandOption: true, describe: "artifact file to write" })
        .option("created-at", { type: "string", default: PINNED_CREATED_AT }),
    (args) => run(() => cmdEmbed(args)),
  )
  .command<ExportArgs>(
    "cloze",
    "export candidate log-probabilities for a corpus",
    (y) =>
      y
        .option("corpus", { type: "string", demandOption: true, describe: "annotated corpus jsonl" })
        .option("pairs", { type: "string", demandOption: true, describe: "expression pair csv" })
        .option("out", { type: "string", demandOption: true, describe: "artifact file to write" })
        .option("created-at", { type: "string", default: PINNED_CREATED_AT }),
    (args) => run(() => cmdCloze(args)),
  )
  .command<PipelineArgs>(
    "pipeline",
    "annotate raw discourses and export both artifacts",
    (y) =>
      y
        .option("raw", { type: "string", demandOption: true, describe: "raw discourse jsonl" })
        .option("pairs", { type: "string", demandOption: true, describe: "expression pair csv" })
        .option("out", { type: "string", demandOption: true, describe: "output directory" })
        .option("created-at", { type: "string", default: PINNED_CREATED_AT }),
    (args) => run(() => cmdPipeline(args)),
  )
  .demandCommand(1, "pick a command")
  .strict()
  .help()
  .parse();
