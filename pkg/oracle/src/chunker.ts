/**
 * Noun-phrase extraction over whitespace tokens, with part-of-speech
 * judgements delegated to the `compromise` NLP library.  The span
 * grammar mirrors the contract of the main package's `chunk` output:
 * per caption, maximal non-overlapping spans of
 * `(adjective | cardinal)? (noun | plural-noun)+`, scanned left to
 * right over the caption's whitespace tokens.
 *
 * The closed-class inventory below is part of the shared token-class
 * taxonomy (function words are never phrase members), not of the
 * open-class judgement this implementation exists to cross-check.
 */

import nlp from "compromise";

const CLOSED_CLASS = new Set(
  `a an the this that these those some any no every each either neither all
   both half much many more most few fewer little less least several such what
   which whose another other same own
   i you he she it we they me him her us them my your his its our their mine
   yours hers ours theirs myself yourself himself herself itself ourselves
   themselves someone anyone everyone something anything everything nothing
   somebody anybody everybody nobody who whom
   in on at by for with about against between into through during before after
   above below to from up down of off over under again behind beside besides
   near around among along across onto upon within without toward towards
   underneath beneath inside outside next past till until per via amid amidst
   atop
   and or but nor so yet if because as while when where than whether though
   although since unless whereas
   am is are was were be been being have has had having do does did doing will
   would shall should may might must can could cannot
   here there very really also just only now then too well still even away far
   quite rather almost already together`
    .split(/\s+/)
    .filter((w) => w.length > 0),
);

export type TokenClass = "noun" | "plural" | "adjective" | "cardinal" | "other";

export interface Phrase {
  first_token: number;
  last_token: number;
  text: string;
  is_plural: boolean;
}

interface Span {
  text: string;
  start: number;
  end: number;
}

function whitespaceTokens(caption: string): Span[] {
  const out: Span[] = [];
  const re = /\S+/g;
  let match: RegExpExecArray | null;
  while ((match = re.exec(caption)) !== null) {
    out.push({ text: match[0], start: match.index, end: match.index + match[0].length });
  }
  return out;
}

/** Lowercase, strip edge punctuation, drop possessive 's and apostrophes. */
export function normalizeToken(raw: string): string {
  let word = raw.toLowerCase();
  word = word.replace(/^[^a-z0-9]+/, "").replace(/[^a-z0-9]+$/, "");
  if (word.endsWith("'s")) word = word.slice(0, -2);
  return word.replace(/'/g, "");
}

const IRREGULAR_PLURALS = new Set([
  "men",
  "women",
  "children",
  "people",
  "feet",
  "teeth",
  "mice",
  "geese",
  "oxen",
]);

/**
 * The shared record contract defines plurality morphologically: a
 * surface `-s` form (not `-ss`) or a standard irregular plural.
 */
function morphologicallyPlural(word: string): boolean {
  return IRREGULAR_PLURALS.has(word) || (word.endsWith("s") && !word.endsWith("ss"));
}

function classify(tags: Set<string>, normalized: string): TokenClass {
  if (tags.has("Value") || tags.has("Cardinal")) return "cardinal";
  if (tags.has("Pronoun")) return "other";
  if (tags.has("Verb") || tags.has("Gerund") || tags.has("Copula")) return "other";
  if (tags.has("Plural") && morphologicallyPlural(normalized)) return "plural";
  if (tags.has("Noun")) return "noun";
  // present participles are never phrase modifiers in this taxonomy
  if (tags.has("Adjective") && !normalized.endsWith("ing")) return "adjective";
  return "other";
}

/** Part-of-speech class for each whitespace token of the caption. */
export function classifyTokens(caption: string): TokenClass[] {
  const tokens = whitespaceTokens(caption);
  const doc = nlp(caption);
  const sentences = doc.json({ offset: true }) as Array<{
    terms: Array<{ tags?: string[]; offset?: { start: number; length: number } }>;
  }>;
  const terms = sentences.flatMap((s) => s.terms);

  return tokens.map((token) => {
    const normalized = normalizeToken(token.text);
    if (normalized.length === 0 || CLOSED_CLASS.has(normalized)) return "other";
    const tags = new Set<string>();
    for (const term of terms) {
      if (!term.offset) continue;
      const termStart = term.offset.start;
      const termEnd = term.offset.start + term.offset.length;
      if (termStart < token.end && termEnd > token.start) {
        for (const tag of term.tags ?? []) tags.add(tag);
      }
    }
    return classify(tags, normalized);
  });
}

const NOUN_CLASSES: ReadonlySet<TokenClass> = new Set(["noun", "plural"]);
const MODIFIER_CLASSES: ReadonlySet<TokenClass> = new Set(["adjective", "cardinal"]);

/** Extract maximal noun phrases from one caption. */
export function chunkCaption(caption: string): Phrase[] {
  const tokens = whitespaceTokens(caption);
  const classes = classifyTokens(caption);
  const phrases: Phrase[] = [];
  let i = 0;
  while (i < tokens.length) {
    let first = -1;
    if (
      MODIFIER_CLASSES.has(classes[i]) &&
      i + 1 < tokens.length &&
      NOUN_CLASSES.has(classes[i + 1])
    ) {
      first = i;
      i += 1;
    } else if (NOUN_CLASSES.has(classes[i])) {
      first = i;
    } else {
      i += 1;
      continue;
    }
    let last = i;
    let plural = classes[i] === "plural";
    while (last + 1 < tokens.length && NOUN_CLASSES.has(classes[last + 1])) {
      last += 1;
      if (classes[last] === "plural") plural = true;
    }
    const words = tokens
      .slice(first, last + 1)
      .map((t) => normalizeToken(t.text))
      .filter((w) => w.length > 0);
    phrases.push({
      first_token: first,
      last_token: last,
      text: words.join(" "),
      is_plural: plural,
    });
    i = last + 1;
  }
  return phrases;
}
