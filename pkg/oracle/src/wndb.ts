/**
 * Minimal reader for the plain-text WordNet database format (noun part
 * of speech only): `index.noun` maps lemmas to synset offsets,
 * `data.noun` holds one synset per line with its lemmas and typed
 * pointers to other synsets.
 */

import * as fs from "node:fs";

export interface Synset {
  offset: number;
  lemmas: string[];
  /** direct hypernyms, including instance hypernyms */
  hypernyms: number[];
  /** direct part/member/substance meronyms */
  meronyms: number[];
}

export interface Database {
  /** lowercase lemma with underscores -> synset offsets */
  index: Map<string, number[]>;
  synsets: Map<number, Synset>;
}

const HYPERNYM_SYMBOLS = new Set(["@", "@i"]);
const MERONYM_SYMBOLS = new Set(["%p", "%m", "%s"]);

/** Parse one `data.noun` line (callers skip the two-space license header). */
export function parseDataLine(line: string): Synset {
  const fields = line.split(" ");
  const offset = parseInt(fields[0], 10);
  const wCnt = parseInt(fields[3], 16);
  if (!Number.isFinite(offset) || !Number.isFinite(wCnt) || wCnt < 1) {
    throw new Error(`malformed synset line: ${line.slice(0, 40)}...`);
  }
  const lemmas: string[] = [];
  for (let i = 0; i < wCnt; i++) {
    lemmas.push(fields[4 + 2 * i].toLowerCase());
  }
  const pBase = 4 + 2 * wCnt;
  const pCnt = parseInt(fields[pBase], 10);
  const hypernyms: number[] = [];
  const meronyms: number[] = [];
  for (let i = 0; i < pCnt; i++) {
    const symbol = fields[pBase + 1 + 4 * i];
    const target = parseInt(fields[pBase + 2 + 4 * i], 10);
    const pos = fields[pBase + 3 + 4 * i];
    if (pos !== "n") continue;
    if (HYPERNYM_SYMBOLS.has(symbol)) hypernyms.push(target);
    else if (MERONYM_SYMBOLS.has(symbol)) meronyms.push(target);
  }
  return { offset, lemmas, hypernyms, meronyms };
}

/** Parse one `index.noun` line into its lemma and synset offsets. */
export function parseIndexLine(line: string): [string, number[]] {
  const fields = line.split(" ").filter((f) => f.length > 0);
  const lemma = fields[0];
  const synsetCnt = parseInt(fields[2], 10);
  const offsets = fields.slice(fields.length - synsetCnt).map((f) => parseInt(f, 10));
  return [lemma, offsets];
}

export function loadDatabase(indexPath: string, dataPath: string): Database {
  const synsets = new Map<number, Synset>();
  for (const line of fs.readFileSync(dataPath, "utf-8").split("\n")) {
    if (line.length === 0 || line.startsWith("  ")) continue;
    const synset = parseDataLine(line);
    synsets.set(synset.offset, synset);
  }
  const index = new Map<string, number[]>();
  for (const line of fs.readFileSync(indexPath, "utf-8").split("\n")) {
    if (line.length === 0 || line.startsWith("  ")) continue;
    const [lemma, offsets] = parseIndexLine(line);
    for (const offset of offsets) {
      if (!synsets.has(offset)) {
        throw new Error(`index entry ${lemma} points at unknown synset ${offset}`);
      }
    }
    index.set(lemma, offsets);
  }
  if (index.size === 0 || synsets.size === 0) {
    throw new Error("empty database");
  }
  return { index, synsets };
}
