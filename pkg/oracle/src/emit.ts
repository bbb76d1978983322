/**
 * Write the golden files the main package's differential tests read:
 *
 * - `goldens/chunks_golden.jsonl` — this implementation's noun phrases
 *   for every caption in `../tests/fixtures/captions.txt`;
 * - `goldens/wordnet_pairs_golden.jsonl` — synonym / hierarchical /
 *   part-of judgements for every pair in
 *   `../tests/goldens/wordnet_pairs.txt`.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { createRequire } from "node:module";

import { chunkCaption } from "./chunker.js";
import { loadDatabase } from "./wndb.js";
import { relationsOf } from "./relations.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const packageRoot = path.resolve(here, "..");
const repoRoot = path.resolve(packageRoot, "..");
const goldens = path.join(packageRoot, "goldens");

export function emitChunks(captionsPath: string, outPath: string): number {
  const lines = fs.readFileSync(captionsPath, "utf-8").split("\n");
  const records: string[] = [];
  lines.forEach((line, i) => {
    const caption = line.trim();
    if (caption.length === 0) return;
    records.push(
      JSON.stringify({ line: i + 1, caption, phrases: chunkCaption(caption) }),
    );
  });
  fs.writeFileSync(outPath, records.join("\n") + "\n");
  return records.length;
}

export function emitWordPairs(dictDir: string, pairsPath: string, outPath: string): number {
  const db = loadDatabase(
    path.join(dictDir, "index.noun"),
    path.join(dictDir, "data.noun"),
  );
  const records: string[] = [];
  for (const line of fs.readFileSync(pairsPath, "utf-8").split("\n")) {
    if (line.trim().length === 0) continue;
    const [a, b] = line.split("\t");
    records.push(JSON.stringify({ a, b, ...relationsOf(db, a, b) }));
  }
  fs.writeFileSync(outPath, records.join("\n") + "\n");
  return records.length;
}

function main(): void {
  const require = createRequire(import.meta.url);
  const wndb = require("wndb-with-exceptions") as { path: string };
  fs.mkdirSync(goldens, { recursive: true });

  const nCaptions = emitChunks(
    path.join(repoRoot, "tests", "fixtures", "captions.txt"),
    path.join(goldens, "chunks_golden.jsonl"),
  );
  console.log(`chunked ${nCaptions} captions -> goldens/chunks_golden.jsonl`);

  const nPairs = emitWordPairs(
    wndb.path,
    path.join(repoRoot, "tests", "goldens", "wordnet_pairs.txt"),
    path.join(goldens, "wordnet_pairs_golden.jsonl"),
  );
  console.log(`judged ${nPairs} word pairs -> goldens/wordnet_pairs_golden.jsonl`);
}

if (process.argv[1] && path.resolve(process.argv[1]) === fileURLToPath(import.meta.url)) {
  main();
}
