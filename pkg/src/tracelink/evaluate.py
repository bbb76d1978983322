"""Scoring grounded phrases with Average Recall over an IoU threshold grid.

Each grounded phrase contributes one IoU: its ground-truth mask (the
union of its regions -- plural phrases are scored as a single union, no
per-instance matching) against the predicted mask for the same phrase.
A phrase with no prediction scores 0.  Recall at threshold ``t`` is the
fraction of phrases with IoU >= t; Average Recall (AR) is the plain mean
of recall over the grid, which by default is 0.01, 0.02, ..., 1.00.

``oracle_assign`` scores the ceiling of a proposal set instead: for each
phrase it picks the single proposal region with the highest IoU against
the ground-truth mask (ties to the smaller region id).

Reports carry the overall curve plus the same numbers disaggregated by
thing/stuff category and singular/plural phrasing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IntegrityError, ParseError
from .masks import BinaryMask, iou
from .panoptic import ImageCache, PanopticImage
from .transfer import GroundedNarrative


def default_thresholds(count: int = 100) -> list[float]:
    """An evenly spaced IoU grid: i/count for i = 1..count."""
    if count < 1:
        raise IntegrityError("threshold grid needs at least one point")
    return [i / count for i in range(1, count + 1)]


def parse_thresholds(text: str) -> list[float]:
    """CLI form of a grid: an integer count, or comma-separated values."""
    text = text.strip()
    if not text:
        raise ParseError("empty threshold specification")
    if "," not in text and "." not in text:
        try:
            return default_thresholds(int(text))
        except ValueError as exc:
            raise ParseError(f"bad threshold count {text!r}") from exc
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"bad threshold list {text!r}") from exc
    if not values:
        raise ParseError("empty threshold specification")
    if any(not (0.0 < v <= 1.0) for v in values):
        raise ParseError("thresholds must lie in (0, 1]")
    if sorted(values) != values:
        raise ParseError("thresholds must be ascending")
    return values


def recall_curve(ious: list[float], thresholds: list[float]) -> list[float]:
    """Fraction of IoUs meeting each threshold.  Non-increasing in t."""
    if not ious:
        return [0.0 for _ in thresholds]
    n = len(ious)
    return [sum(1 for v in ious if v >= t) / n for t in thresholds]


def average_recall(ious: list[float], thresholds: list[float] | None = None) -> float:
    """Mean recall over the threshold grid."""
    if thresholds is None:
        thresholds = default_thresholds()
    curve = recall_curve(ious, thresholds)
    return sum(curve) / len(curve)


def oracle_assign(
    gt_mask: BinaryMask, proposals: PanopticImage
) -> tuple[int | None, float]:
    """Best single proposal region for a ground-truth mask.

    Returns (segment_id, iou); scans ids in ascending order so ties keep
    the smaller id.  (None, 0.0) when the proposal image has no regions.
    """
    best_id = None
    best_iou = 0.0
    for sid in proposals.segment_ids:
        value = iou(gt_mask, proposals.mask_of(sid))
        if best_id is None or value > best_iou:
            best_id = sid
            best_iou = value
    return best_id, best_iou


# ----------------------------------------------------------------------
# per-phrase records and reports


@dataclass(frozen=True)
class PhraseEval:
    """One scored phrase."""

    narrative_id: str
    image_id: int
    text: str
    first_token: int
    last_token: int
    is_plural: bool
    is_thing: bool
    iou: float


@dataclass
class ARReport:
    thresholds: list[float]
    recall: list[float]
    average_recall: float
    count: int
    groups: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "average_recall": self.average_recall,
            "count": self.count,
            "thresholds": self.thresholds,
            "recall": self.recall,
            "groups": self.groups,
        }


def disaggregate(evals: list[PhraseEval]) -> dict[str, list[float]]:
    """IoUs split by thing/stuff category and singular/plural phrasing."""
    return {
        "things": [e.iou for e in evals if e.is_thing],
        "stuff": [e.iou for e in evals if not e.is_thing],
        "singulars": [e.iou for e in evals if not e.is_plural],
        "plurals": [e.iou for e in evals if e.is_plural],
    }


def build_report(evals: list[PhraseEval], thresholds: list[float]) -> ARReport:
    ious = [e.iou for e in evals]
    curve = recall_curve(ious, thresholds)
    report = ARReport(
        thresholds=list(thresholds),
        recall=curve,
        average_recall=sum(curve) / len(curve),
        count=len(ious),
    )
    for name, group_ious in disaggregate(evals).items():
        group_curve = recall_curve(group_ious, thresholds)
        report.groups[name] = {
            "average_recall": sum(group_curve) / len(group_curve),
            "count": len(group_ious),
        }
    return report


def write_report(path, report: ARReport) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")


# ----------------------------------------------------------------------
# prediction files


def load_predictions(path) -> dict[tuple[str, int, int], str]:
    """Read predicted masks keyed by (narrative_id, first_token, last_token).

    JSON Lines; each record is ``{"narrative_id": ..., "phrases":
    [{"first_token": ..., "last_token": ..., "mask": "W H c0 c1 ..."}]}``.
    """
    out: dict[tuple[str, int, int], str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path} line {lineno}: invalid JSON ({exc})") from exc
            try:
                nid = str(obj["narrative_id"])
                for ph in obj["phrases"]:
                    key = (nid, int(ph["first_token"]), int(ph["last_token"]))
                    if key in out:
                        raise IntegrityError(
                            f"{path} line {lineno}: duplicate prediction for {key}"
                        )
                    out[key] = str(ph["mask"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path} line {lineno}: bad prediction record") from exc
    return out


def gt_phrase_mask(image: PanopticImage, segment_ids: list[int]) -> BinaryMask:
    return image.mask_of(segment_ids)


def _phrase_is_thing(image: PanopticImage, segment_ids, categories) -> bool:
    cids = {image.segments[s].category_id for s in segment_ids}
    return all(categories[c].is_thing for c in cids)


def evaluate_predictions(
    grounded: list[GroundedNarrative],
    gt_images: ImageCache,
    predictions: dict[tuple[str, int, int], str],
    categories,
) -> list[PhraseEval]:
    """Score a prediction table against grounded ground truth.

    Predictions are matched by narrative id and token span; a phrase
    without one scores 0.  Predicted masks must share the image's
    dimensions.
    """
    evals: list[PhraseEval] = []
    for narrative in grounded:
        image = gt_images.get(narrative.image_id)
        for phrase in narrative.phrases:
            gt = gt_phrase_mask(image, phrase.segment_ids)
            key = (narrative.narrative_id, phrase.first_token, phrase.last_token)
            rle = predictions.get(key)
            if rle is None:
                value = 0.0
            else:
                pred = BinaryMask.from_rle(rle)
                if (pred.width, pred.height) != (image.width, image.height):
                    raise IntegrityError(
                        f"prediction for {key} is {pred.width}x{pred.height},"
                        f" image {narrative.image_id} is {image.width}x{image.height}"
                    )
                value = iou(gt, pred)
            evals.append(
                PhraseEval(
                    narrative_id=narrative.narrative_id,
                    image_id=narrative.image_id,
                    text=phrase.text,
                    first_token=phrase.first_token,
                    last_token=phrase.last_token,
                    is_plural=phrase.is_plural,
                    is_thing=_phrase_is_thing(image, phrase.segment_ids, categories),
                    iou=value,
                )
            )
    return evals


def oracle_evaluate(
    grounded: list[GroundedNarrative],
    gt_images: ImageCache,
    proposal_images: ImageCache,
    categories,
) -> tuple[list[PhraseEval], dict[tuple[str, int, int], int | None]]:
    """Score the best-possible single-region assignment from a proposal set.

    Returns the per-phrase evaluations plus the chosen proposal id per
    phrase (None when the proposal image is empty).
    """
    evals: list[PhraseEval] = []
    selections: dict[tuple[str, int, int], int | None] = {}
    for narrative in grounded:
        image = gt_images.get(narrative.image_id)
        proposals = proposal_images.get(narrative.image_id)
        if (proposals.width, proposals.height) != (image.width, image.height):
            raise IntegrityError(
                f"proposal raster for image {narrative.image_id} has different size"
            )
        for phrase in narrative.phrases:
            gt = gt_phrase_mask(image, phrase.segment_ids)
            best_id, best_iou = oracle_assign(gt, proposals)
            key = (narrative.narrative_id, phrase.first_token, phrase.last_token)
            selections[key] = best_id
            evals.append(
                PhraseEval(
                    narrative_id=narrative.narrative_id,
                    image_id=narrative.image_id,
                    text=phrase.text,
                    first_token=phrase.first_token,
                    last_token=phrase.last_token,
                    is_plural=phrase.is_plural,
                    is_thing=_phrase_is_thing(image, phrase.segment_ids, categories),
                    iou=best_iou,
                )
            )
    return evals, selections
