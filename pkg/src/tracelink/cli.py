"""Command line front end.

Subcommands:

* ``transfer``  ground a narrative file against a panoptic dataset
* ``evaluate``  score predicted masks against a grounded file
* ``oracle``    score the best single-region assignment from a proposal set
* ``stats``     descriptive statistics of a grounding run
* ``render``    overlay images for grounded narratives
* ``chunk``     noun-phrase chunking only (no grounding), for inspection
                and cross-implementation comparison

Every option can also come from a ``key = value`` config file given with
``--config``; explicit command line flags win over the file.  Paths in
the config file resolve relative to the file itself.  Failures print one
``error[CODE]: message`` line and exit with a code specific to the error
class (3 config, 4 parse, 5 integrity, 6 missing input).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import evaluate as ev
from . import render, stats
from .chunker import chunk_tokens, default_lexicon, load_lexicon
from .errors import ConfigError, TracelinkError
from .narrative import load_narratives
from .panoptic import ImageCache, load_annotations, load_category_index
from .transfer import load_grounded, transfer_dataset, write_grounded
from .wordnet import default_manual_table, load_manual_table, load_wordnet_dir

log = logging.getLogger("tracelink")

_CONFIG_KEYS = frozenset(
    """narratives panoptic rasters categories wordnet lexicon manual grounded
    predictions proposals proposal_rasters captions workers strict thresholds
    out max_vicinity_distance narrative""".split()
)

_PATH_KEYS = frozenset(
    """narratives panoptic rasters categories wordnet lexicon manual grounded
    predictions proposals proposal_rasters captions out""".split()
)


def parse_config_file(path) -> dict[str, str]:
    """Read ``key = value`` lines; # comments and blank lines are skipped."""
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path} line {lineno}: expected 'key = value'")
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path} line {lineno}: unknown key {key!r}")
                out[key] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return out


class Settings:
    """Merged view over command line arguments and a config file."""

    def __init__(self, args: argparse.Namespace):
        self.args = vars(args)
        config_path = self.args.get("config")
        self.config = parse_config_file(config_path) if config_path else {}
        self.config_dir = Path(config_path).parent if config_path else None

    def _raw(self, key: str):
        cli = self.args.get(key)
        if cli is not None:
            return cli, False
        if key in self.config:
            return self.config[key], True
        return None, False

    def path(self, key: str, *, required: bool = False, default=None) -> Path | None:
        value, from_config = self._raw(key)
        if value is None:
            if default is not None:
                return Path(default)
            if required:
                raise ConfigError(f"missing required setting {key!r}")
            return None
        p = Path(value)
        if from_config and self.config_dir is not None and not p.is_absolute():
            p = self.config_dir / p
        return p

    def value(self, key: str, *, default=None, cast=str):
        value, _ = self._raw(key)
        if value is None:
            return default
        if cast is bool and isinstance(value, str):
            lowered = value.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ConfigError(f"setting {key!r} is not a boolean: {value!r}")
        try:
            return cast(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"setting {key!r} has a bad value {value!r}") from exc


def _require_exists(path: Path, what: str) -> Path:
    if not path.exists():
        raise ConfigError(f"{what} not found: {path}")
    return path


def _load_common(settings: Settings):
    """Categories, annotations and raster dir shared by most commands."""
    categories = load_category_index(
        _require_exists(settings.path("categories", required=True), "category index")
    )
    annotations = load_annotations(
        _require_exists(settings.path("panoptic", required=True), "annotation file")
    )
    rasters = _require_exists(settings.path("rasters", required=True), "raster directory")
    return categories, annotations, rasters


def _load_lexicon(settings: Settings):
    path = settings.path("lexicon")
    if path is None:
        return default_lexicon()
    return load_lexicon(_require_exists(path, "lexicon file"))


def _load_manual(settings: Settings):
    path = settings.path("manual")
    if path is None:
        return default_manual_table()
    return load_manual_table(_require_exists(path, "manual table"))


def _out_dir(settings: Settings) -> Path:
    out = settings.path("out", default="out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _thresholds(settings: Settings) -> list[float]:
    spec = settings.value("thresholds")
    if spec is None:
        return ev.default_thresholds()
    return ev.parse_thresholds(str(spec))


# ----------------------------------------------------------------------
# subcommands


def cmd_transfer(settings: Settings) -> int:
    categories, annotations, rasters = _load_common(settings)
    narratives = _require_exists(
        settings.path("narratives", required=True), "narrative file"
    )
    wordnet = load_wordnet_dir(
        _require_exists(settings.path("wordnet", required=True), "word database")
    )
    log.info("loaded %d lemmas, %d synsets", len(wordnet.index), len(wordnet.synsets))
    lexicon = _load_lexicon(settings)
    manual = _load_manual(settings)
    workers = settings.value("workers", default=1, cast=int)
    strict = settings.value("strict", default=False, cast=bool)
    cap = settings.value("max_vicinity_distance", default=None, cast=float)

    grounded, diagnostics = transfer_dataset(
        narratives,
        annotations,
        rasters,
        categories,
        wordnet,
        manual,
        lexicon,
        workers=workers,
        strict=strict,
        max_vicinity_distance=cap,
    )

    out = _out_dir(settings)
    write_grounded(out / "grounded.jsonl", grounded)
    with open(out / "diagnostics.log", "w", encoding="utf-8") as fh:
        for line in diagnostics:
            fh.write(line + "\n")
    n_phrases = sum(len(g.phrases) for g in grounded)
    print(
        f"grounded {n_phrases} phrases across {len(grounded)} narratives"
        f" -> {out / 'grounded.jsonl'} ({len(diagnostics)} diagnostics)"
    )
    return 0


def _print_report(report: ev.ARReport) -> None:
    print(f"average recall\t{report.average_recall:.4f}\t({report.count} phrases)")
    for name, group in report.groups.items():
        print(f"  {name}\t{group['average_recall']:.4f}\t({group['count']} phrases)")


def cmd_evaluate(settings: Settings) -> int:
    categories, annotations, rasters = _load_common(settings)
    grounded = load_grounded(
        _require_exists(settings.path("grounded", required=True), "grounded file")
    )
    predictions = ev.load_predictions(
        _require_exists(settings.path("predictions", required=True), "prediction file")
    )
    thresholds = _thresholds(settings)
    images = ImageCache(annotations, rasters, categories)
    evals = ev.evaluate_predictions(grounded, images, predictions, categories)
    report = ev.build_report(evals, thresholds)

    out = _out_dir(settings)
    ev.write_report(out / "report.json", report)
    render.save_recall_figure(report, out / "recall.png")
    _print_report(report)
    return 0


def cmd_oracle(settings: Settings) -> int:
    categories, annotations, rasters = _load_common(settings)
    grounded = load_grounded(
        _require_exists(settings.path("grounded", required=True), "grounded file")
    )
    proposals = load_annotations(
        _require_exists(settings.path("proposals", required=True), "proposal file")
    )
    proposal_rasters = _require_exists(
        settings.path("proposal_rasters", required=True), "proposal raster directory"
    )
    thresholds = _thresholds(settings)
    gt_images = ImageCache(annotations, rasters, categories)
    prop_images = ImageCache(proposals, proposal_rasters, None)
    evals, selections = ev.oracle_evaluate(grounded, gt_images, prop_images, categories)
    report = ev.build_report(evals, thresholds)

    out = _out_dir(settings)
    ev.write_report(out / "report.json", report)
    render.save_recall_figure(report, out / "recall.png", title="oracle recall")
    with open(out / "selections.tsv", "w", encoding="utf-8") as fh:
        fh.write("narrative_id\tfirst_token\tlast_token\tsegment_id\tiou\n")
        for e in evals:
            chosen = selections[(e.narrative_id, e.first_token, e.last_token)]
            fh.write(
                f"{e.narrative_id}\t{e.first_token}\t{e.last_token}"
                f"\t{'' if chosen is None else chosen}\t{e.iou:.6f}\n"
            )
    _print_report(report)
    return 0


def cmd_stats(settings: Settings) -> int:
    categories, annotations, rasters = _load_common(settings)
    narratives = _require_exists(
        settings.path("narratives", required=True), "narrative file"
    )
    grounded = load_grounded(
        _require_exists(settings.path("grounded", required=True), "grounded file")
    )
    lexicon = _load_lexicon(settings)
    report = stats.compute_stats(
        narratives, grounded, annotations, rasters, categories, lexicon
    )
    out = _out_dir(settings)
    stats.write_stats(out / "stats.json", out / "stats.txt", report)
    render.save_rank_figure(report, out / "ranks.png")
    for name, value in report.to_rows():
        print(f"{name}\t{value}")
    return 0


def cmd_render(settings: Settings) -> int:
    categories, annotations, rasters = _load_common(settings)
    grounded = load_grounded(
        _require_exists(settings.path("grounded", required=True), "grounded file")
    )
    wanted = settings.args.get("narrative") or None
    if wanted is None and "narrative" in settings.config:
        wanted = [settings.config["narrative"]]
    if wanted:
        missing = set(wanted) - {g.narrative_id for g in grounded}
        if missing:
            raise ConfigError(f"narratives not in grounded file: {sorted(missing)}")
        grounded = [g for g in grounded if g.narrative_id in set(wanted)]
    images = ImageCache(annotations, rasters, categories)
    out = _out_dir(settings)
    for g in grounded:
        image = images.get(g.image_id)
        render.save_overlay_png(image, g, out / f"{g.narrative_id}.png")
        render.save_overlay_figure(image, g, out / f"{g.narrative_id}_figure.png")
    print(f"rendered {len(grounded)} narratives -> {out}")
    return 0


def cmd_chunk(settings: Settings) -> int:
    lexicon = _load_lexicon(settings)
    narratives_path = settings.path("narratives")
    captions_path = settings.path("captions")
    if (narratives_path is None) == (captions_path is None):
        raise ConfigError("chunk needs exactly one of --narratives / --captions")
    out = _out_dir(settings)
    records = []
    if narratives_path is not None:
        _require_exists(narratives_path, "narrative file")
        for narrative in load_narratives(narratives_path):
            phrases = chunk_tokens([t.text for t in narrative.tokens], lexicon)
            records.append(
                {
                    "narrative_id": narrative.narrative_id,
                    "caption": narrative.caption,
                    "phrases": [
                        {
                            "first_token": p.first_token,
                            "last_token": p.last_token,
                            "text": p.text,
                            "is_plural": p.is_plural,
                        }
                        for p in phrases
                    ],
                }
            )
    else:
        _require_exists(captions_path, "caption file")
        with open(captions_path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                caption = line.strip()
                if not caption:
                    continue
                phrases = chunk_tokens(caption.split(), lexicon)
                records.append(
                    {
                        "line": lineno,
                        "caption": caption,
                        "phrases": [
                            {
                                "first_token": p.first_token,
                                "last_token": p.last_token,
                                "text": p.text,
                                "is_plural": p.is_plural,
                            }
                            for p in phrases
                        ],
                    }
                )
    with open(out / "chunks.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"chunked {len(records)} captions -> {out / 'chunks.jsonl'}")
    return 0


# ----------------------------------------------------------------------
# parser wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracelink",
        description="Ground narrated captions with mouse traces onto "
        "panoptic segmentation regions; evaluate and inspect the result.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="more logging (-vv for debug)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--out", help="output directory (default: out)")
        return p

    p = add("transfer", cmd_transfer, "ground narratives onto regions")
    p.add_argument("--narratives", help="narrative JSONL file")
    p.add_argument("--panoptic", help="panoptic annotation JSON")
    p.add_argument("--rasters", help="directory of id-raster PNGs")
    p.add_argument("--categories", help="category index JSON")
    p.add_argument("--wordnet", help="directory with index.noun / data.noun")
    p.add_argument("--lexicon", help="tagger exception lexicon (optional)")
    p.add_argument("--manual", help="manual word->category table (optional)")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--strict", action="store_true", default=None,
                   help="abort on any malformed narrative instead of skipping")
    p.add_argument("--max-vicinity-distance", dest="max_vicinity_distance", type=float,
                   help="ignore vicinity candidates farther than this many pixels")

    p = add("evaluate", cmd_evaluate, "score predicted masks against a grounded file")
    p.add_argument("--grounded", help="grounded JSONL (ground truth)")
    p.add_argument("--panoptic", help="panoptic annotation JSON")
    p.add_argument("--rasters", help="directory of id-raster PNGs")
    p.add_argument("--categories", help="category index JSON")
    p.add_argument("--predictions", help="predicted masks JSONL")
    p.add_argument("--thresholds", help="IoU grid: a count or comma list")

    p = add("oracle", cmd_oracle, "score the best assignment from a proposal set")
    p.add_argument("--grounded", help="grounded JSONL (ground truth)")
    p.add_argument("--panoptic", help="panoptic annotation JSON")
    p.add_argument("--rasters", help="directory of id-raster PNGs")
    p.add_argument("--categories", help="category index JSON")
    p.add_argument("--proposals", help="proposal annotation JSON")
    p.add_argument("--proposal-rasters", dest="proposal_rasters",
                   help="directory of proposal id-raster PNGs")
    p.add_argument("--thresholds", help="IoU grid: a count or comma list")

    p = add("stats", cmd_stats, "statistics of a grounding run")
    p.add_argument("--narratives", help="narrative JSONL file")
    p.add_argument("--grounded", help="grounded JSONL")
    p.add_argument("--panoptic", help="panoptic annotation JSON")
    p.add_argument("--rasters", help="directory of id-raster PNGs")
    p.add_argument("--categories", help="category index JSON")
    p.add_argument("--lexicon", help="tagger exception lexicon (optional)")

    p = add("render", cmd_render, "write overlay images for grounded narratives")
    p.add_argument("--grounded", help="grounded JSONL")
    p.add_argument("--panoptic", help="panoptic annotation JSON")
    p.add_argument("--rasters", help="directory of id-raster PNGs")
    p.add_argument("--categories", help="category index JSON")
    p.add_argument("--narrative", action="append",
                   help="narrative id to render (repeatable; default: all)")

    p = add("chunk", cmd_chunk, "extract noun phrases without grounding")
    p.add_argument("--narratives", help="narrative JSONL file")
    p.add_argument("--captions", help="plain text file, one caption per line")
    p.add_argument("--lexicon", help="tagger exception lexicon (optional)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        settings = Settings(args)
        return args.func(settings)
    except TracelinkError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
