"""Transfer of narrated phrases onto panoptic regions.

For each noun phrase of a narrative:

1. collect the trace points that fall inside the phrase's spoken time
   window (inclusive on both ends); no points -> the phrase is dropped
   with reason ``no trace``;
2. take the centre of mass of those points, map it to a pixel, and read
   the region under it;
3. if that centre region's category agrees with the phrase (see
   :mod:`tracelink.wordnet`), ground there;
4. otherwise rank every other region by single-linkage distance to the
   centre region (or to the centre pixel itself when it lies on void)
   and ground to the nearest agreeing one -- ties prefer the stronger
   agreement rank, then the smaller region id; nothing agrees -> the
   phrase is dropped with reason ``no agreement``;
5. plural phrases grow from the seed region to every other region of the
   same category lying fully inside the tight pixel bounding box of the
   phrase's trace points (the seed itself is exempt from the box test).

Narratives whose phrases all drop are omitted from the output.  Results
are deterministic: each narrative is processed independently of every
other, and batch output is sorted by (image_id, narrative_id), so worker
count cannot change a single output byte.
"""

from __future__ import annotations

import json
import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path

from .chunker import NounPhrase, Tag, chunk_tokens
from .errors import IntegrityError, ParseError, TracelinkError
from .narrative import Narrative, TracePoint, load_narratives
from .panoptic import VOID_ID, CategoryRecord, ImageCache, PanopticImage
from .wordnet import MatchRank, RANK_BY_LABEL, WordNet, match_rank


@dataclass
class GroundedPhrase:
    """One phrase successfully attached to one or more regions."""

    text: str
    first_token: int
    last_token: int
    is_plural: bool
    match_rank: MatchRank
    via_vicinity: bool
    vicinity_distance: float | None
    com: tuple[int, int]
    segment_ids: list[int]

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "first_token": self.first_token,
            "last_token": self.last_token,
            "is_plural": self.is_plural,
            "match_rank": self.match_rank.label,
            "via_vicinity": self.via_vicinity,
            "vicinity_distance": self.vicinity_distance,
            "com": [self.com[0], self.com[1]],
            "segment_ids": list(self.segment_ids),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "GroundedPhrase":
        try:
            rank = RANK_BY_LABEL[obj["match_rank"]]
            return cls(
                text=str(obj["text"]),
                first_token=int(obj["first_token"]),
                last_token=int(obj["last_token"]),
                is_plural=bool(obj["is_plural"]),
                match_rank=rank,
                via_vicinity=bool(obj["via_vicinity"]),
                vicinity_distance=(
                    None
                    if obj.get("vicinity_distance") is None
                    else float(obj["vicinity_distance"])
                ),
                com=(int(obj["com"][0]), int(obj["com"][1])),
                segment_ids=[int(s) for s in obj["segment_ids"]],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad grounded phrase record: {obj!r}") from exc


@dataclass
class GroundedNarrative:
    narrative_id: str
    image_id: int
    caption: str
    phrases: list[GroundedPhrase] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "narrative_id": self.narrative_id,
            "image_id": self.image_id,
            "caption": self.caption,
            "phrases": [p.to_dict() for p in self.phrases],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "GroundedNarrative":
        try:
            return cls(
                narrative_id=str(obj["narrative_id"]),
                image_id=int(obj["image_id"]),
                caption=str(obj.get("caption", "")),
                phrases=[GroundedPhrase.from_dict(p) for p in obj["phrases"]],
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad grounded narrative record: {obj!r}") from exc


@dataclass(frozen=True)
class DroppedPhrase:
    """A phrase that could not be grounded, with the reason why."""

    narrative_id: str
    text: str
    reason: str  # "no trace" | "no agreement"


# ----------------------------------------------------------------------
# geometry helpers


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def point_to_pixel(x: float, y: float, width: int, height: int) -> tuple[int, int]:
    """Map a normalised trace coordinate to a pixel, clamped to the image."""
    px = min(max(_round_half_up(x * width), 0), width - 1)
    py = min(max(_round_half_up(y * height), 0), height - 1)
    return px, py


def center_of_mass(
    points: list[TracePoint], width: int, height: int
) -> tuple[int, int]:
    """Pixel under the mean of the normalised trace coordinates."""
    if not points:
        raise IntegrityError("centre of mass of an empty point set")
    mx = sum(p.x for p in points) / len(points)
    my = sum(p.y for p in points) / len(points)
    return point_to_pixel(mx, my, width, height)


def trace_bbox_pixels(
    points: list[TracePoint], width: int, height: int
) -> tuple[int, int, int, int]:
    """Tight inclusive pixel box (x0, y0, x1, y1) over the trace points."""
    pixels = [point_to_pixel(p.x, p.y, width, height) for p in points]
    xs = [px for px, _ in pixels]
    ys = [py for _, py in pixels]
    return min(xs), min(ys), max(xs), max(ys)


def expand_plural(
    image: PanopticImage, seed_id: int, points: list[TracePoint]
) -> list[int]:
    """Regions a plural phrase covers: the seed plus every same-category
    region whose pixels lie fully inside the trace's tight pixel box."""
    x0, y0, x1, y1 = trace_bbox_pixels(points, image.width, image.height)
    category = image.segments[seed_id].category_id
    extra = []
    for sid in image.segment_ids:
        if sid == seed_id:
            continue
        seg = image.segments[sid]
        if seg.category_id != category:
            continue
        tx, ty, tw, th = seg.tight_bbox
        if tx >= x0 and ty >= y0 and tx + tw - 1 <= x1 and ty + th - 1 <= y1:
            extra.append(sid)
    return [seed_id] + sorted(extra)


# ----------------------------------------------------------------------
# grounding


class _RankCache:
    """Memoises phrase/category agreement within one narrative."""

    def __init__(self, wordnet: WordNet, manual, categories):
        self.wordnet = wordnet
        self.manual = manual
        self.categories = categories
        self._hits: dict[tuple, MatchRank | None] = {}

    def rank(self, phrase: NounPhrase, category_id: int) -> MatchRank | None:
        key = (phrase.text, phrase.nouns, category_id)
        if key not in self._hits:
            self._hits[key] = match_rank(
                phrase, self.categories[category_id], self.wordnet, self.manual
            )
        return self._hits[key]


def ground_phrase(
    narrative: Narrative,
    phrase: NounPhrase,
    image: PanopticImage,
    ranks: _RankCache,
    *,
    max_vicinity_distance: float | None = None,
) -> GroundedPhrase | DroppedPhrase:
    """Attach one phrase to regions of its image, or report why not."""
    t0, t1 = narrative.time_window(phrase.first_token, phrase.last_token)
    points = narrative.points_between(t0, t1)
    if not points:
        return DroppedPhrase(narrative.narrative_id, phrase.text, "no trace")

    com = center_of_mass(points, image.width, image.height)
    center_id = image.region_at(*com)

    seed_id = None
    rank = None
    via_vicinity = False
    distance = None

    if center_id != VOID_ID:
        rank = ranks.rank(phrase, image.segments[center_id].category_id)
        if rank is not None:
            seed_id = center_id

    if seed_id is None:
        if center_id != VOID_ID:
            distances = image.region_distances(from_segment=center_id)
        else:
            distances = image.region_distances(from_point=com)
        best = None
        for sid in image.segment_ids:
            if sid == center_id:
                continue
            d = distances[sid]
            if max_vicinity_distance is not None and d > max_vicinity_distance:
                continue
            r = ranks.rank(phrase, image.segments[sid].category_id)
            if r is None:
                continue
            key = (d, int(r), sid)
            if best is None or key < best:
                best = key
        if best is None:
            return DroppedPhrase(narrative.narrative_id, phrase.text, "no agreement")
        distance, rank_value, seed_id = best
        rank = MatchRank(rank_value)
        via_vicinity = True

    if phrase.is_plural:
        segment_ids = expand_plural(image, seed_id, points)
    else:
        segment_ids = [seed_id]

    return GroundedPhrase(
        text=phrase.text,
        first_token=phrase.first_token,
        last_token=phrase.last_token,
        is_plural=phrase.is_plural,
        match_rank=rank,
        via_vicinity=via_vicinity,
        vicinity_distance=distance,
        com=com,
        segment_ids=segment_ids,
    )


def transfer_narrative(
    narrative: Narrative,
    image: PanopticImage,
    wordnet: WordNet,
    manual,
    categories: dict[int, CategoryRecord],
    lexicon: dict[str, Tag] | None = None,
    *,
    max_vicinity_distance: float | None = None,
) -> tuple[GroundedNarrative | None, list[DroppedPhrase]]:
    """Ground every phrase of one narrative.

    Returns the grounded narrative (or None when nothing grounded) and
    the list of dropped phrases.
    """
    phrases = chunk_tokens([t.text for t in narrative.tokens], lexicon)
    ranks = _RankCache(wordnet, manual, categories)
    grounded: list[GroundedPhrase] = []
    dropped: list[DroppedPhrase] = []
    for phrase in phrases:
        result = ground_phrase(
            narrative,
            phrase,
            image,
            ranks,
            max_vicinity_distance=max_vicinity_distance,
        )
        if isinstance(result, DroppedPhrase):
            dropped.append(result)
        else:
            grounded.append(result)
    if not grounded:
        return None, dropped
    return (
        GroundedNarrative(
            narrative.narrative_id, narrative.image_id, narrative.caption, grounded
        ),
        dropped,
    )


# ----------------------------------------------------------------------
# batch driver

# Worker-side state, populated in the parent before forking so children
# inherit the parsed ontology and annotations without re-reading them.
_WORKER: dict = {}


def _init_worker(context: dict) -> None:
    _WORKER.update(context)
    _WORKER["images"] = ImageCache(
        context["annotations"], context["raster_dir"], context["categories"]
    )


def _run_one(narrative: Narrative):
    """Process one narrative inside a worker; never raises."""
    diags: list[str] = []
    try:
        image = _WORKER["images"].get(narrative.image_id)
        grounded, dropped = transfer_narrative(
            narrative,
            image,
            _WORKER["wordnet"],
            _WORKER["manual"],
            _WORKER["categories"],
            _WORKER["lexicon"],
            max_vicinity_distance=_WORKER["max_vicinity_distance"],
        )
    except TracelinkError as exc:
        return ("error", narrative.narrative_id, f"{exc.code}: {exc}")
    for d in dropped:
        diags.append(f"narrative {d.narrative_id}: phrase {d.text!r} dropped ({d.reason})")
    if grounded is None:
        diags.append(
            f"narrative {narrative.narrative_id}: no phrase grounded, narrative dropped"
        )
        return ("skip", narrative.narrative_id, diags)
    return ("ok", grounded, diags)


def transfer_dataset(
    narratives_path,
    annotations: dict[int, dict],
    raster_dir,
    categories: dict[int, CategoryRecord],
    wordnet: WordNet,
    manual,
    lexicon: dict[str, Tag] | None = None,
    *,
    workers: int = 1,
    strict: bool = False,
    max_vicinity_distance: float | None = None,
) -> tuple[list[GroundedNarrative], list[str]]:
    """Ground a whole narrative file against a panoptic dataset.

    Returns grounded narratives sorted by (image_id, narrative_id) plus
    diagnostic lines for everything skipped or dropped.  With
    ``strict=True`` any malformed narrative or processing error aborts
    the run; otherwise it becomes a diagnostic.
    """
    diagnostics: list[str] = []

    def note_bad_line(lineno, exc):
        diagnostics.append(f"line {lineno}: {exc.code}: {exc}")

    narratives = list(
        load_narratives(narratives_path, on_error=None if strict else note_bad_line)
    )

    context = {
        "annotations": annotations,
        "raster_dir": str(raster_dir),
        "categories": categories,
        "wordnet": wordnet,
        "manual": manual,
        "lexicon": lexicon,
        "max_vicinity_distance": max_vicinity_distance,
    }

    results = []
    if workers <= 1:
        _init_worker(context)
        for narrative in narratives:
            results.append(_run_one(narrative))
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(
            processes=workers, initializer=_init_worker, initargs=(context,)
        ) as pool:
            results = pool.map(_run_one, narratives, chunksize=1)

    grounded: list[GroundedNarrative] = []
    for outcome in results:
        if outcome[0] == "ok":
            grounded.append(outcome[1])
            diagnostics.extend(outcome[2])
        elif outcome[0] == "skip":
            diagnostics.extend(outcome[2])
        else:
            message = f"narrative {outcome[1]}: {outcome[2]}"
            if strict:
                raise IntegrityError(message)
            diagnostics.append(message)

    grounded.sort(key=lambda g: (g.image_id, g.narrative_id))
    return grounded, diagnostics


# ----------------------------------------------------------------------
# persistence


def write_grounded(path, grounded: list[GroundedNarrative]) -> None:
    """Write grounded narratives as JSON Lines (UTF-8, one per line)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for g in grounded:
            fh.write(json.dumps(g.to_dict(), ensure_ascii=False))
            fh.write("\n")


def load_grounded(path) -> list[GroundedNarrative]:
    """Read a grounded narrative JSON Lines file."""
    out: list[GroundedNarrative] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path} line {lineno}: invalid JSON ({exc})") from exc
            out.append(GroundedNarrative.from_dict(obj))
    return out
