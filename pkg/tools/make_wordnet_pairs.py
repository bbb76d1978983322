#!/usr/bin/env python3
"""Regenerate tests/goldens/wordnet_pairs.txt.

Samples 500 word pairs from the vendored noun database under
data/wordnet30/ with a fixed seed: a mix of hierarchically related pairs,
same-synset pairs, part/whole pairs, and unrelated random pairs.  The
oracle package answers relation queries over this list and the
differential test requires both implementations to agree on every pair.

Every sampled word is an exact index lemma (lowercase, underscores kept),
so the comparison is independent of any normalisation heuristics.
"""

from __future__ import annotations

import random
from pathlib import Path

from tracelink.wordnet import load_wordnet_dir

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "goldens" / "wordnet_pairs.txt"


def main() -> None:
    wn = load_wordnet_dir(ROOT / "data" / "wordnet30")
    rng = random.Random(20240817)

    lemmas = sorted(wn.index)
    offsets = sorted(wn.synsets)

    def lemma_of(offset: int) -> str | None:
        syn = wn.synsets[offset]
        word = rng.choice(syn.lemmas)
        return word if wn.lookup(word) else None

    pairs: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()

    def add(a: str | None, b: str | None) -> bool:
        if not a or not b or a == b or (a, b) in seen or (b, a) in seen:
            return False
        seen.add((a, b))
        pairs.append((a, b))
        return True

    # hierarchically related pairs (both directions)
    want = 150
    while want > 0:
        off = rng.choice(offsets)
        closure = sorted(wn.hypernym_closure(off))
        if not closure:
            continue
        a = lemma_of(off)
        b = lemma_of(rng.choice(closure))
        if rng.random() < 0.5:
            a, b = b, a
        if add(a, b):
            want -= 1

    # same-synset pairs
    multi = [off for off in offsets if len(wn.synsets[off].lemmas) >= 2]
    want = 50
    while want > 0:
        syn = wn.synsets[rng.choice(multi)]
        a, b = rng.sample(list(syn.lemmas), 2)
        if wn.lookup(a) and wn.lookup(b) and add(a, b):
            want -= 1

    # part / whole pairs: a is a one-hop part of b
    wholes = [off for off in offsets if wn.synsets[off].meronyms]
    want = 50
    while want > 0:
        whole = rng.choice(wholes)
        part = rng.choice(sorted(wn.meronyms_of(whole)))
        if part not in wn.synsets:
            continue
        if add(lemma_of(part), lemma_of(whole)):
            want -= 1

    # random pairs, mostly unrelated
    want = 500 - len(pairs)
    while want > 0:
        if add(rng.choice(lemmas), rng.choice(lemmas)):
            want -= 1

    rng.shuffle(pairs)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        for a, b in pairs:
            fh.write(f"{a}\t{b}\n")
    print(f"wrote {len(pairs)} pairs -> {OUT}")


if __name__ == "__main__":
    main()
