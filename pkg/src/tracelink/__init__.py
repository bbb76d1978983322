"""tracelink: ground narrated captions with mouse traces onto panoptic
segmentation regions, score the result with Average Recall, and report
dataset statistics."""

from .chunker import NounPhrase, Tag, chunk_caption, chunk_tokens
from .errors import (
    ConfigError,
    IntegrityError,
    MissingInputError,
    ParseError,
    TracelinkError,
)
from .evaluate import average_recall, oracle_assign, recall_curve
from .masks import BinaryMask, iou, rle_iou
from .narrative import Narrative, TimedToken, TracePoint, load_narratives
from .panoptic import (
    CategoryRecord,
    PanopticImage,
    SegmentRecord,
    load_annotations,
    load_category_index,
    load_panoptic_image,
)
from .transfer import (
    GroundedNarrative,
    GroundedPhrase,
    ground_phrase,
    transfer_dataset,
    transfer_narrative,
)
from .wordnet import MatchRank, WordNet, load_wordnet, load_wordnet_dir, match_rank

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "CategoryRecord",
    "ConfigError",
    "GroundedNarrative",
    "GroundedPhrase",
    "IntegrityError",
    "MatchRank",
    "MissingInputError",
    "Narrative",
    "NounPhrase",
    "PanopticImage",
    "ParseError",
    "SegmentRecord",
    "Tag",
    "TimedToken",
    "TracePoint",
    "TracelinkError",
    "WordNet",
    "average_recall",
    "chunk_caption",
    "chunk_tokens",
    "ground_phrase",
    "iou",
    "load_annotations",
    "load_category_index",
    "load_narratives",
    "load_panoptic_image",
    "load_wordnet",
    "load_wordnet_dir",
    "match_rank",
    "oracle_assign",
    "recall_curve",
    "rle_iou",
    "transfer_dataset",
    "transfer_narrative",
    "__version__",
]
