"""Noun ontology loaded from WordNet-style database files, plus the
semantic agreement test between a caption phrase and a region category.

The loader reads the plain-text ``index.noun`` / ``data.noun`` pair (the
classic WNDB layout; gzipped copies are read transparently).  Only noun
pointers are kept and only three relations matter here:

* ``@`` / ``@i``  -> hypernym (is-a, towards the more general synset)
* ``~`` / ``~i``  -> hyponym  (is-a, towards the more specific synset)
* ``%p`` / ``%m`` / ``%s`` -> meronym (part / member / substance of)

A phrase agrees with a category at the strongest applicable rank:

1. ``exact``        phrase text equals the category name
2. ``synonym``      they share a synset in any sense
3. ``hierarchical`` one lies in the transitive hypernym closure of the other
4. ``meronym``      a phrase noun is a one-hop part of the category
5. ``manual``       a curated word -> category table vouches for the pair

Lower rank numbers are stronger; ``None`` means no agreement.  Every
candidate word of the phrase (full text plus each composing noun) is
tried at each rank before falling through to the next, so an exact hit
by any word beats a synonym hit by another.
"""

from __future__ import annotations

import enum
import gzip
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .chunker import NounPhrase
from .errors import ConfigError, IntegrityError, ParseError
from .panoptic import CategoryRecord


class MatchRank(enum.IntEnum):
    """Agreement strength; smaller values are stronger."""

    EXACT = 1
    SYNONYM = 2
    HIERARCHICAL = 3
    MERONYM = 4
    MANUAL = 5

    @property
    def label(self) -> str:
        return self.name.lower()


RANK_BY_LABEL = {rank.label: rank for rank in MatchRank}


@dataclass(frozen=True)
class Synset:
    offset: int
    lemmas: tuple[str, ...]
    hypernyms: tuple[int, ...]
    hyponyms: tuple[int, ...]
    meronyms: tuple[int, ...]
    gloss: str


def _open_maybe_gz(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def _parse_data_line(line: str, path) -> Synset:
    head, _, gloss = line.partition("|")
    fields = head.split()
    try:
        offset = int(fields[0])
        w_cnt = int(fields[3], 16)
        pos = 4
        lemmas = []
        for _ in range(w_cnt):
            lemmas.append(fields[pos].lower())
            pos += 2  # skip the lex_id digit
        p_cnt = int(fields[pos])
        pos += 1
        hyper: list[int] = []
        hypo: list[int] = []
        mero: list[int] = []
        for _ in range(p_cnt):
            symbol, target, target_pos, _source = fields[pos : pos + 4]
            pos += 4
            if target_pos != "n":
                continue
            if symbol in ("@", "@i"):
                hyper.append(int(target))
            elif symbol in ("~", "~i"):
                hypo.append(int(target))
            elif symbol in ("%p", "%m", "%s"):
                mero.append(int(target))
    except (IndexError, ValueError) as exc:
        raise ParseError(f"{path}: malformed data line {line[:60]!r}") from exc
    return Synset(
        offset, tuple(lemmas), tuple(hyper), tuple(hypo), tuple(mero), gloss.strip()
    )


class WordNet:
    """Parsed noun database with lemma index and closure caching."""

    def __init__(self, synsets: dict[int, Synset], index: dict[str, tuple[int, ...]]):
        self.synsets = synsets
        self.index = index
        self._closure_cache: dict[int, frozenset[int]] = {}
        self._sense_cache: dict[str, tuple[Synset, ...]] = {}

    # ------------------------------------------------------------------
    # lookups

    def lookup(self, lemma: str) -> tuple[Synset, ...]:
        """Synsets of an exact lemma (underscore form), in index order."""
        offsets = self.index.get(lemma.strip().lower(), ())
        return tuple(self.synsets[o] for o in offsets)

    def senses_of(self, word: str) -> tuple[Synset, ...]:
        """Synsets of a free-form word.

        Tries the space->underscore form and the fully underscored form
        (hyphens folded too), then falls back to the singularised word.
        Results keep index order and are deduplicated.
        """
        key = word.strip().lower()
        cached = self._sense_cache.get(key)
        if cached is not None:
            return cached
        variants = [key.replace(" ", "_")]
        folded = variants[0].replace("-", "_")
        if folded != variants[0]:
            variants.append(folded)
        seen: set[int] = set()
        out: list[Synset] = []
        for variant in variants:
            for syn in self.lookup(variant):
                if syn.offset not in seen:
                    seen.add(syn.offset)
                    out.append(syn)
        if not out:
            singular = singularize(key)
            if singular != key:
                result = self.senses_of(singular)
                self._sense_cache[key] = result
                return result
        result = tuple(out)
        self._sense_cache[key] = result
        return result

    def hypernym_closure(self, offset: int) -> frozenset[int]:
        """All transitive hypernym offsets of a synset (self excluded)."""
        cached = self._closure_cache.get(offset)
        if cached is not None:
            return cached
        out: set[int] = set()
        stack = [offset]
        while stack:
            syn = self.synsets.get(stack.pop())
            if syn is None:
                continue
            for parent in syn.hypernyms:
                if parent not in out and parent != offset:
                    out.add(parent)
                    stack.append(parent)
        result = frozenset(out)
        self._closure_cache[offset] = result
        return result

    def meronyms_of(self, offset: int) -> frozenset[int]:
        syn = self.synsets.get(offset)
        return frozenset(syn.meronyms) if syn else frozenset()


def load_wordnet(index_path, data_path) -> WordNet:
    """Parse an ``index.noun`` / ``data.noun`` pair (either may be .gz)."""
    synsets: dict[int, Synset] = {}
    with _open_maybe_gz(data_path) as fh:
        for line in fh:
            if line.startswith(" ") or not line.strip():
                continue  # license header
            syn = _parse_data_line(line, data_path)
            synsets[syn.offset] = syn

    index: dict[str, tuple[int, ...]] = {}
    with _open_maybe_gz(index_path) as fh:
        for line in fh:
            if line.startswith(" ") or not line.strip():
                continue
            fields = line.split()
            try:
                lemma = fields[0].lower()
                synset_cnt = int(fields[2])
                p_cnt = int(fields[3])
                offsets = tuple(
                    int(x) for x in fields[4 + p_cnt + 2 : 4 + p_cnt + 2 + synset_cnt]
                )
            except (IndexError, ValueError) as exc:
                raise ParseError(
                    f"{index_path}: malformed index line {line[:60]!r}"
                ) from exc
            if len(offsets) != synset_cnt:
                raise ParseError(
                    f"{index_path}: lemma {lemma!r} declares {synset_cnt} senses"
                    f" but lists {len(offsets)}"
                )
            for off in offsets:
                if off not in synsets:
                    raise IntegrityError(
                        f"{index_path}: lemma {lemma!r} references missing synset {off}"
                    )
            index[lemma] = offsets

    if not synsets or not index:
        raise IntegrityError(f"word database {data_path} is empty")
    return WordNet(synsets, index)


def load_wordnet_dir(directory) -> WordNet:
    """Find ``index.noun[.gz]`` and ``data.noun[.gz]`` inside a directory."""
    directory = Path(directory)
    paths = []
    for stem in ("index.noun", "data.noun"):
        plain = directory / stem
        gz = directory / (stem + ".gz")
        if plain.exists():
            paths.append(plain)
        elif gz.exists():
            paths.append(gz)
        else:
            raise ConfigError(f"word database directory {directory} lacks {stem}(.gz)")
    return load_wordnet(paths[0], paths[1])


# ----------------------------------------------------------------------
# singularisation


_IRREGULAR_PLURALS = {
    "people": "person",
    "children": "child",
    "men": "man",
    "women": "woman",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "oxen": "ox",
    "knives": "knife",
    "wives": "wife",
    "lives": "life",
    "loaves": "loaf",
    "shoes": "shoe",
    "canoes": "canoe",
    "toes": "toe",
    "buses": "bus",
    "gases": "gas",
    "lenses": "lens",
    "viruses": "virus",
    "cactuses": "cactus",
    "clothes": "clothes",
}


def singularize(word: str) -> str:
    """Best-effort singular form of an English noun (pure string rules)."""
    w = word.strip().lower()
    if w in _IRREGULAR_PLURALS:
        return _IRREGULAR_PLURALS[w]
    if len(w) > 4 and w.endswith("ies"):
        return w[:-3] + "y"
    if len(w) > 3 and w.endswith("ves"):
        return w[:-3] + "f"
    for suffix in ("ches", "shes", "xes", "zes", "sses"):
        if w.endswith(suffix):
            return w[:-2]
    if len(w) > 3 and w.endswith("oes"):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


# ----------------------------------------------------------------------
# manual word -> category table


def load_manual_table(path) -> dict[str, frozenset[str]]:
    """Read ``word<TAB>category[,category...]`` override entries."""
    out: dict[str, set[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split(None, 1)
            if len(parts) != 2:
                raise ParseError(
                    f"manual table {path} line {lineno}: expected 'word categories'"
                )
            word = parts[0].strip().lower()
            names = {n.strip().lower() for n in parts[1].split(",") if n.strip()}
            if not names:
                raise ParseError(f"manual table {path} line {lineno}: no categories")
            out.setdefault(word, set()).update(names)
    return {w: frozenset(names) for w, names in out.items()}


def default_manual_table() -> dict[str, frozenset[str]]:
    """The override table shipped with the package."""
    path = resources.files("tracelink").joinpath("data/manual_table.txt")
    with resources.as_file(path) as real:
        return load_manual_table(real)


# ----------------------------------------------------------------------
# agreement ranking


def category_name_variants(name: str) -> tuple[str, ...]:
    """Lookup variants of a category name.

    Dataset category names often carry bookkeeping suffixes joined by
    hyphens (``sky-other-merged``, ``door-stuff``).  Variants are the raw
    lowercased name, the name with such suffix words dropped (hyphens
    becoming spaces), and the first remaining word.
    """
    raw = name.strip().lower()
    variants = [raw]
    if "-" in raw:
        parts = [p for p in raw.split("-") if p]
        while parts and parts[-1] in ("merged", "other", "stuff"):
            parts.pop()
        if parts:
            joined = " ".join(parts)
            if joined not in variants:
                variants.append(joined)
            if parts[0] not in variants:
                variants.append(parts[0])
    return tuple(variants)


def match_rank(
    phrase: NounPhrase,
    category: CategoryRecord,
    wordnet: WordNet,
    manual: dict[str, frozenset[str]] | None = None,
) -> MatchRank | None:
    """Strongest agreement rank between a phrase and a category, or None.

    Candidates are the full phrase text plus each composing noun; each
    rank is tried over all candidates before weakening.  Synset matching
    is any-sense on both sides.
    """
    candidates: list[str] = []
    for cand in (phrase.text, *phrase.nouns):
        cand = cand.strip().lower()
        if cand and cand not in candidates:
            candidates.append(cand)
    if not candidates:
        return None

    variants = category_name_variants(category.name)

    # exact: raw string equality against any name variant
    for cand in candidates:
        if cand in variants:
            return MatchRank.EXACT

    cat_offsets: set[int] = set()
    for variant in variants:
        cat_offsets.update(s.offset for s in wordnet.senses_of(variant))

    cand_offsets: dict[str, set[int]] = {
        cand: {s.offset for s in wordnet.senses_of(cand)} for cand in candidates
    }

    if cat_offsets:
        for cand in candidates:
            if cand_offsets[cand] & cat_offsets:
                return MatchRank.SYNONYM

        cat_up: set[int] = set()
        for off in cat_offsets:
            cat_up.update(wordnet.hypernym_closure(off))
        for cand in candidates:
            offsets = cand_offsets[cand]
            if offsets & cat_up:
                return MatchRank.HIERARCHICAL
            for off in offsets:
                if wordnet.hypernym_closure(off) & cat_offsets:
                    return MatchRank.HIERARCHICAL

        cat_parts: set[int] = set()
        for off in cat_offsets:
            cat_parts.update(wordnet.meronyms_of(off))
        for cand in candidates:
            if cand_offsets[cand] & cat_parts:
                return MatchRank.MERONYM

    if manual:
        targets = set(variants)
        for cand in candidates:
            names = manual.get(cand) or manual.get(singularize(cand))
            if names and names & targets:
                return MatchRank.MANUAL

    return None
