"""Rule-based noun phrase extraction for caption tokens.

Tokens get one of five part-of-speech classes (noun, plural noun,
adjective, cardinal, other) from a deterministic cascade:

1. exception lexicon -- explicit ``word<TAB>tag`` entries win outright;
2. hyphenated words take the class of their final component;
3. closed-class word lists (articles, pronouns, prepositions,
   conjunctions, auxiliaries, common adverbs) are ``other``;
4. number words and digit strings are ``cardinal``;
5. suffix rules: adjective endings, then ``-s`` plurals (with built-in
   escapes for ``-ss`` / ``-us`` / ``-is``), then verb-ish ``-ing`` /
   ``-ed`` forms;
6. anything left is a singular noun.

Phrases are then the maximal, left-to-right, non-overlapping token spans
matching ``(adjective | cardinal)? (noun | plural noun)+``.  A phrase is
plural when at least one of its nouns is plural.  The cascade has no
notion of context, so a curated lexicon shipped with the package
(``data/lexicon.txt``) carries the common caption words the suffix rules
would misclassify; callers may substitute their own.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from importlib import resources

from .errors import ParseError


class Tag(enum.Enum):
    NOUN = "noun"
    PLURAL = "plural"
    ADJECTIVE = "adjective"
    CARDINAL = "cardinal"
    OTHER = "other"


_NOUNISH = (Tag.NOUN, Tag.PLURAL)
_MODIFIERS = (Tag.ADJECTIVE, Tag.CARDINAL)

_ARTICLES = frozenset(
    """a an the this that these those some any no every each either neither all
    both half much many more most few fewer little less least several such what
    which whose another other same own""".split()
)

_PRONOUNS = frozenset(
    """i you he she it we they me him her us them my your his its our their mine
    yours hers ours theirs myself yourself himself herself itself ourselves
    themselves someone anyone everyone something anything everything nothing
    somebody anybody everybody nobody who whom it's""".split()
)

_PREPOSITIONS = frozenset(
    """in on at by for with about against between into through during before
    after above below to from up down of off over under again behind beside
    besides near around among along across onto upon within without toward
    towards underneath beneath inside outside next past till until per via amid
    amidst atop""".split()
)

_CONJUNCTIONS = frozenset(
    """and or but nor so yet if because as while when where than whether though
    although since unless whereas""".split()
)

_AUXILIARIES = frozenset(
    """am is are was were be been being have has had having do does did doing
    will would shall should may might must can could cannot cant dont doesnt
    didnt isnt arent wasnt werent havent hasnt hadnt wont wouldnt shouldnt
    couldnt mustnt lets im ive id ill youre youve theyre theyve weve hes shes
    thats theres heres whats not""".split()
)

_ADVERBS = frozenset(
    """here there very really also just only now then too well still even away
    far quite rather somewhere anywhere everywhere maybe perhaps almost already
    yes probably mostly partially partly completely clearly likely together
    respectively""".split()
)

_CLOSED_CLASS = _ARTICLES | _PRONOUNS | _PREPOSITIONS | _CONJUNCTIONS | _AUXILIARIES | _ADVERBS

_NUMBER_WORDS = frozenset(
    """one two three four five six seven eight nine ten eleven twelve thirteen
    fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty
    fifty sixty seventy eighty ninety hundred thousand million""".split()
)

_DIGITS_RE = re.compile(r"^\d+$")

_ADJECTIVE_SUFFIXES = ("ful", "ous", "ish", "ive", "less", "al")
_NON_PLURAL_ENDINGS = ("ss", "us", "is")


@dataclass(frozen=True)
class NounPhrase:
    """A chunked span of caption tokens.

    ``first_token`` / ``last_token`` are inclusive indices into the token
    stream the phrase was chunked from.  ``text`` is the normalised span
    text; ``nouns`` lists the normalised noun tokens of the span (with a
    hyphenated noun contributing both its full form and its head word),
    which downstream matching uses as lookup candidates.
    """

    first_token: int
    last_token: int
    text: str
    is_plural: bool
    nouns: tuple[str, ...] = ()


def normalize_token(text: str) -> str:
    """Lowercase a raw token and strip punctuation.

    Edge punctuation is dropped, a possessive ``'s`` is removed, and any
    remaining apostrophes vanish; internal hyphens survive.  May return
    an empty string (for pure punctuation tokens).
    """
    word = text.lower().strip()
    word = word.strip("".join(c for c in set(word) if not (c.isalnum() or c in "-'")))
    if word.endswith("'s"):
        word = word[:-2]
    return word.replace("'", "")


def load_lexicon(path) -> dict[str, Tag]:
    """Read ``word<TAB>tag`` exception entries; blank lines and # comments ok."""
    out: dict[str, Tag] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2:
                raise ParseError(f"lexicon {path} line {lineno}: expected 'word tag'")
            word, tag_name = parts
            try:
                tag = Tag(tag_name.strip().lower())
            except ValueError as exc:
                raise ParseError(
                    f"lexicon {path} line {lineno}: unknown tag {tag_name!r}"
                ) from exc
            out[normalize_token(word)] = tag
    return out


def default_lexicon() -> dict[str, Tag]:
    """The exception lexicon shipped with the package."""
    path = resources.files("tracelink").joinpath("data/lexicon.txt")
    with resources.as_file(path) as real:
        return load_lexicon(real)


def tag_token(word: str, lexicon: dict[str, Tag]) -> Tag:
    """Classify one already-normalised token."""
    if not word:
        return Tag.OTHER
    if word in lexicon:
        return lexicon[word]
    if "-" in word:
        head = word.rsplit("-", 1)[1]
        if head:
            return tag_token(head, lexicon)
    if word in _CLOSED_CLASS:
        return Tag.OTHER
    if word in _NUMBER_WORDS or _DIGITS_RE.match(word):
        return Tag.CARDINAL
    for suffix in _ADJECTIVE_SUFFIXES:
        if word.endswith(suffix) and len(word) > len(suffix) + 1:
            return Tag.ADJECTIVE
    if word.endswith("s") and not word.endswith(_NON_PLURAL_ENDINGS):
        return Tag.PLURAL
    if word.endswith("ing") and len(word) >= 6:
        return Tag.OTHER
    if word.endswith("ed") and len(word) >= 5:
        return Tag.OTHER
    return Tag.NOUN


def tag_tokens(texts: list[str], lexicon: dict[str, Tag] | None = None) -> list[Tag]:
    """Normalise and classify a full token stream."""
    if lexicon is None:
        lexicon = default_lexicon()
    return [tag_token(normalize_token(t), lexicon) for t in texts]


def _noun_candidates(word: str) -> list[str]:
    """Lookup candidates a noun token contributes: itself, plus its head
    word when hyphenated."""
    out = [word]
    if "-" in word:
        head = word.rsplit("-", 1)[1]
        if head and head != word:
            out.append(head)
    return out


def chunk_tokens(
    texts: list[str], lexicon: dict[str, Tag] | None = None
) -> list[NounPhrase]:
    """Extract noun phrases from an ordered token stream.

    Scans left to right for maximal runs of nouns, attaching at most one
    immediately preceding adjective or cardinal.  Runs never overlap.
    """
    if lexicon is None:
        lexicon = default_lexicon()
    words = [normalize_token(t) for t in texts]
    tags = [tag_token(w, lexicon) for w in words]
    phrases: list[NounPhrase] = []
    i = 0
    n = len(tags)
    while i < n:
        if tags[i] not in _NOUNISH:
            i += 1
            continue
        j = i
        while j + 1 < n and tags[j + 1] in _NOUNISH:
            j += 1
        start = i
        if i > 0 and tags[i - 1] in _MODIFIERS:
            start = i - 1
        span_words = words[start : j + 1]
        nouns: list[str] = []
        plural = False
        for k in range(i, j + 1):
            nouns.extend(_noun_candidates(words[k]))
            if tags[k] is Tag.PLURAL:
                plural = True
        phrases.append(
            NounPhrase(
                first_token=start,
                last_token=j,
                text=" ".join(w for w in span_words if w),
                is_plural=plural,
                nouns=tuple(nouns),
            )
        )
        i = j + 1
    return phrases


def chunk_caption(caption: str, lexicon: dict[str, Tag] | None = None) -> list[NounPhrase]:
    """Chunk a plain text caption by whitespace-splitting it first."""
    return chunk_tokens(caption.split(), lexicon)
