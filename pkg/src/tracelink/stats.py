"""Descriptive statistics over a grounding run.

Answers, for a narrative source plus its grounded output: how many
narratives survived, how many phrases were chunked versus grounded, how
much of the region inventory and the pixel area the grounding touches,
and how the matches break down by agreement rank, plurality, thing/stuff
and vicinity use.

Counts come from three places and are cross-checked on the way in:
phrase counts from re-chunking the source narratives, region identity
and areas from the annotation records, and image dimensions from the
raster PNG headers (header reads only -- no raster is decoded here).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from PIL import Image

from .chunker import Tag, chunk_tokens
from .errors import IntegrityError
from .transfer import GroundedNarrative
from .narrative import load_narratives
from .wordnet import MatchRank


@dataclass
class StatsReport:
    narratives_total: int = 0
    narratives_grounded: int = 0
    phrases_chunked_total: int = 0
    phrases_grounded_total: int = 0
    phrases_chunked_per_narrative: float = 0.0
    phrases_grounded_per_narrative: float = 0.0
    phrase_coverage: float = 0.0
    segment_links_total: int = 0
    segments_unique: int = 0
    segments_total: int = 0
    segment_coverage: float = 0.0
    pixels_matched: int = 0
    pixels_total: int = 0
    pixels_annotated: int = 0
    pixel_coverage_total: float = 0.0
    pixel_coverage_annotated: float = 0.0
    things_fraction: float = 0.0
    stuff_fraction: float = 0.0
    plural_fraction: float = 0.0
    vicinity_fraction: float = 0.0
    rank_fractions: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        return out

    def to_rows(self) -> list[tuple[str, str]]:
        """(name, value) rows for the delimited text report.

        Fractions render as percentages with one decimal, counts as
        plain integers, means with two decimals.
        """

        def pct(v: float) -> str:
            return f"{100.0 * v:.1f}%"

        rows = [
            ("narratives_total", str(self.narratives_total)),
            ("narratives_grounded", str(self.narratives_grounded)),
            ("phrases_chunked_total", str(self.phrases_chunked_total)),
            ("phrases_grounded_total", str(self.phrases_grounded_total)),
            ("phrases_chunked_per_narrative", f"{self.phrases_chunked_per_narrative:.2f}"),
            ("phrases_grounded_per_narrative", f"{self.phrases_grounded_per_narrative:.2f}"),
            ("phrase_coverage", pct(self.phrase_coverage)),
            ("segment_links_total", str(self.segment_links_total)),
            ("segments_unique", str(self.segments_unique)),
            ("segments_total", str(self.segments_total)),
            ("segment_coverage", pct(self.segment_coverage)),
            ("pixels_matched", str(self.pixels_matched)),
            ("pixels_total", str(self.pixels_total)),
            ("pixels_annotated", str(self.pixels_annotated)),
            ("pixel_coverage_total", pct(self.pixel_coverage_total)),
            ("pixel_coverage_annotated", pct(self.pixel_coverage_annotated)),
            ("things_fraction", pct(self.things_fraction)),
            ("stuff_fraction", pct(self.stuff_fraction)),
            ("plural_fraction", pct(self.plural_fraction)),
            ("vicinity_fraction", pct(self.vicinity_fraction)),
        ]
        for rank in MatchRank:
            rows.append(
                (f"rank_{rank.label}_fraction", pct(self.rank_fractions.get(rank.label, 0.0)))
            )
        return rows


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def compute_stats(
    narratives_path,
    grounded: list[GroundedNarrative],
    annotations: dict[int, dict],
    raster_dir,
    categories,
    lexicon: dict[str, Tag] | None = None,
) -> StatsReport:
    """Aggregate a full statistics report; see the module docstring."""
    report = StatsReport()

    # chunking pass over the raw narratives
    skipped = 0

    def drop(lineno, exc):
        nonlocal skipped
        skipped += 1

    for narrative in load_narratives(narratives_path, on_error=drop):
        report.narratives_total += 1
        report.phrases_chunked_total += len(
            chunk_tokens([t.text for t in narrative.tokens], lexicon)
        )

    # grounded side
    report.narratives_grounded = len(grounded)
    unique_segments: set[tuple[int, int]] = set()
    rank_counts: dict[str, int] = {r.label: 0 for r in MatchRank}
    plural = 0
    vicinity = 0
    for narrative in grounded:
        record = annotations.get(narrative.image_id)
        if record is None:
            raise IntegrityError(
                f"grounded narrative {narrative.narrative_id} references image "
                f"{narrative.image_id} absent from the annotations"
            )
        declared = {int(info["id"]) for info in record["segments_info"]}
        for phrase in narrative.phrases:
            report.phrases_grounded_total += 1
            report.segment_links_total += len(phrase.segment_ids)
            rank_counts[phrase.match_rank.label] += 1
            if phrase.is_plural:
                plural += 1
            if phrase.via_vicinity:
                vicinity += 1
            for sid in phrase.segment_ids:
                if sid not in declared:
                    raise IntegrityError(
                        f"grounded phrase {phrase.text!r} references region {sid} "
                        f"absent from image {narrative.image_id}"
                    )
                unique_segments.add((narrative.image_id, sid))

    # annotation-side inventory
    area_of: dict[tuple[int, int], int] = {}
    thing_of: dict[tuple[int, int], bool] = {}
    for image_id, record in annotations.items():
        for info in record["segments_info"]:
            key = (image_id, int(info["id"]))
            area_of[key] = int(info["area"])
            thing_of[key] = categories[int(info["category_id"])].is_thing
            report.segments_total += 1
            report.pixels_annotated += int(info["area"])
        with Image.open(Path(raster_dir) / record["file_name"]) as im:
            width, height = im.size
        report.pixels_total += width * height

    report.segments_unique = len(unique_segments)
    report.pixels_matched = sum(area_of[key] for key in unique_segments)
    things = sum(1 for key in unique_segments if thing_of[key])

    n_grounded_phrases = report.phrases_grounded_total
    report.phrases_chunked_per_narrative = _safe_div(
        report.phrases_chunked_total, report.narratives_total
    )
    report.phrases_grounded_per_narrative = _safe_div(
        n_grounded_phrases, report.narratives_grounded
    )
    report.phrase_coverage = _safe_div(n_grounded_phrases, report.phrases_chunked_total)
    report.segment_coverage = _safe_div(report.segments_unique, report.segments_total)
    report.pixel_coverage_total = _safe_div(report.pixels_matched, report.pixels_total)
    report.pixel_coverage_annotated = _safe_div(
        report.pixels_matched, report.pixels_annotated
    )
    report.things_fraction = _safe_div(things, report.segments_unique)
    report.stuff_fraction = _safe_div(
        report.segments_unique - things, report.segments_unique
    )
    report.plural_fraction = _safe_div(plural, n_grounded_phrases)
    report.vicinity_fraction = _safe_div(vicinity, n_grounded_phrases)
    report.rank_fractions = {
        label: _safe_div(count, n_grounded_phrases)
        for label, count in rank_counts.items()
    }
    return report


def write_stats(path_json, path_text, report: StatsReport) -> None:
    """Write the JSON and tab-delimited forms of a report."""
    for p in (path_json, path_text):
        Path(p).parent.mkdir(parents=True, exist_ok=True)
    with open(path_json, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    with open(path_text, "w", encoding="utf-8") as fh:
        for name, value in report.to_rows():
            fh.write(f"{name}\t{value}\n")
