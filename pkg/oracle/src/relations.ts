/**
 * Word-relation queries over the database: the three judgements the
 * golden file records for each word pair.  All lookups are exact index
 * lemmas — no case folding, no singularization — so that two
 * implementations comparing answers exercise only database parsing and
 * closure logic.
 */

import type { Database } from "./wndb.js";

export interface Relations {
  synonym: boolean;
  hierarchical: boolean;
  part_of: boolean;
}

export function lookup(db: Database, lemma: string): number[] {
  return db.index.get(lemma) ?? [];
}

/** All ancestors of `offset` via hypernym pointers, excluding itself. */
export function hypernymClosure(db: Database, offset: number): Set<number> {
  const seen = new Set<number>();
  const stack = [...(db.synsets.get(offset)?.hypernyms ?? [])];
  while (stack.length > 0) {
    const current = stack.pop()!;
    if (seen.has(current)) continue;
    seen.add(current);
    for (const parent of db.synsets.get(current)?.hypernyms ?? []) {
      if (!seen.has(parent)) stack.push(parent);
    }
  }
  seen.delete(offset);
  return seen;
}

export function meronymsOf(db: Database, offset: number): number[] {
  return db.synsets.get(offset)?.meronyms ?? [];
}

/**
 * Judge the pair (a, b): do they share a synset, is either an ancestor
 * of the other, and is a a direct part/member/substance of b.
 */
export function relationsOf(db: Database, a: string, b: string): Relations {
  const sa = new Set(lookup(db, a));
  const sb = new Set(lookup(db, b));
  const upA = new Set<number>();
  for (const offset of sa) for (const o of hypernymClosure(db, offset)) upA.add(o);
  const upB = new Set<number>();
  for (const offset of sb) for (const o of hypernymClosure(db, offset)) upB.add(o);
  const partsB = new Set<number>();
  for (const offset of sb) for (const o of meronymsOf(db, offset)) partsB.add(o);

  const intersects = (xs: Set<number>, ys: Set<number>) => {
    for (const x of xs) if (ys.has(x)) return true;
    return false;
  };
  return {
    synonym: intersects(sa, sb),
    hierarchical: intersects(sa, upB) || intersects(sb, upA),
    part_of: intersects(sa, partsB),
  };
}
