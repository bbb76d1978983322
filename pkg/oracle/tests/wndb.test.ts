import { describe, expect, it } from "vitest";
import * as path from "node:path";
import { createRequire } from "node:module";

import { loadDatabase, parseDataLine, parseIndexLine } from "../src/wndb.js";
import { hypernymClosure, lookup, relationsOf } from "../src/relations.js";

const require = createRequire(import.meta.url);
const dict = (require("wndb-with-exceptions") as { path: string }).path;

const db = loadDatabase(path.join(dict, "index.noun"), path.join(dict, "data.noun"));

describe("data line parsing", () => {
  it("reads lemmas, hex word count and noun pointers", () => {
    const synset = parseDataLine(
      "00001000 03 n 0a word0 0 word1 0 word2 0 word3 0 word4 0 word5 0 " +
        "word6 0 word7 0 word8 0 word9 0 003 @ 00002000 n 0000 ~ 00003000 n 0000 " +
        "%p 00004000 n 0000 | ten words",
    );
    expect(synset.offset).toBe(1000);
    expect(synset.lemmas).toHaveLength(10);
    expect(synset.hypernyms).toEqual([2000]);
    expect(synset.meronyms).toEqual([4000]);
  });

  it("keeps only pointers into the noun part of speech", () => {
    const synset = parseDataLine(
      "00001000 03 n 01 word 0 002 @ 00002000 v 0000 @i 00003000 n 0000 | x",
    );
    expect(synset.hypernyms).toEqual([3000]);
  });

  it("rejects malformed lines", () => {
    expect(() => parseDataLine("garbage line")).toThrow(/malformed/);
  });

  it("reads index lines from the synset-count field", () => {
    const [lemma, offsets] = parseIndexLine("car n 5 3 @ ~ %p 5 2 02958343 02959942 1 2 3");
    expect(lemma).toBe("car");
    expect(offsets).toEqual([2958343, 2959942, 1, 2, 3]);
  });
});

describe("full database", () => {
  it("loads the complete noun inventory", () => {
    expect(db.index.size).toBe(117798);
    expect(db.synsets.size).toBe(82115);
  });

  it("resolves multi-sense lemmas", () => {
    expect(lookup(db, "car").length).toBeGreaterThanOrEqual(5);
    expect(lookup(db, "no_such_lemma_xyz")).toEqual([]);
  });

  it("builds transitive hypernym closures", () => {
    const offsets = lookup(db, "dog");
    const closure = new Set<number>();
    for (const o of offsets) for (const h of hypernymClosure(db, o)) closure.add(h);
    const animalOffsets = lookup(db, "animal");
    expect(animalOffsets.some((o) => closure.has(o))).toBe(true);
  });
});

describe("relation anchors", () => {
  const cases: Array<[string, string, boolean, boolean, boolean]> = [
    // a, b, synonym, hierarchical, part_of(a in b)
    ["car", "automobile", true, false, false],
    ["car", "vehicle", false, true, false],
    ["vehicle", "car", false, true, false],
    ["dog", "animal", false, true, false],
    ["finger", "hand", false, false, true],
    ["keyboard", "computer", false, false, true],
    ["dog", "cat", false, false, false],
    // meronymy is direct, not transitive
    ["wheel", "car", false, false, false],
  ];
  it.each(cases)("%s / %s", (a, b, synonym, hierarchical, partOf) => {
    expect(relationsOf(db, a, b)).toEqual({
      synonym,
      hierarchical,
      part_of: partOf,
    });
  });
});
