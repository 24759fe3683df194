import { readFileSync } from "fs";
import { createRequire } from "module";
import { join } from "path";
import winkNLP from "wink-nlp";

type WordEmbedding = NonNullable<Parameters<typeof winkNLP>[2]>;

const PACKAGE = "wink-embeddings-sg-100d";

// The table ships as one ~300MB JSON file that is also the package main.
// Reading it straight from disk keeps module loaders and test runners from
// trying to parse it as a module, which exhausts memory.
function resolveTable(): string {
  const anchors: string[] = [];
  if (typeof __filename === "string") anchors.push(__filename);
  anchors.push(join(process.cwd(), "package.json"));
  for (const anchor of anchors) {
    try {
      return createRequire(anchor).resolve(PACKAGE);
    } catch {
      // try the next anchor
    }
  }
  throw new Error(`cannot resolve ${PACKAGE}; is it installed?`);
}

let table: WordEmbedding | null = null;

export function wordEmbeddings(): WordEmbedding {
  if (table === null) {
    table = JSON.parse(readFileSync(resolveTable(), "utf8")) as WordEmbedding;
  }
  return table;
}
