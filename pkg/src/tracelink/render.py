"""Visual output: region overlays for grounded narratives and report figures.

The overlay itself is computed as an exact uint8 array (deterministic
palette, integer blending) so tests can assert on pixels; the figure
writers wrap matplotlib with the Agg backend and add legends, curves and
titles around those arrays.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.patches as mpatches  # noqa: E402  (backend must be set first)
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from PIL import Image  # noqa: E402

from .evaluate import ARReport  # noqa: E402
from .panoptic import PanopticImage  # noqa: E402
from .stats import StatsReport  # noqa: E402
from .transfer import GroundedNarrative  # noqa: E402

# Distinct fill colours cycled over phrases, in grounding order.
PALETTE: list[tuple[int, int, int]] = [
    (230, 25, 75),
    (60, 180, 75),
    (255, 225, 25),
    (0, 130, 200),
    (245, 130, 48),
    (145, 30, 180),
    (70, 240, 240),
    (240, 50, 230),
    (210, 245, 60),
    (0, 128, 128),
    (220, 190, 255),
    (170, 110, 40),
]

BACKGROUND = (64, 64, 64)
UNMATCHED = (160, 160, 160)
COM_MARK = (255, 255, 255)


def phrase_color(index: int) -> tuple[int, int, int]:
    return PALETTE[index % len(PALETTE)]


def overlay_array(image: PanopticImage, grounded: GroundedNarrative) -> np.ndarray:
    """Exact uint8 (H, W, 3) overlay: void dark, unmatched regions grey,
    each phrase's regions in its palette colour, centres marked white.

    When phrases share a region the later phrase paints over the earlier
    one, mirroring reading order.
    """
    out = np.zeros((image.height, image.width, 3), dtype=np.uint8)
    out[:, :] = BACKGROUND
    unmatched = image.raster > 0
    out[unmatched] = UNMATCHED
    for idx, phrase in enumerate(grounded.phrases):
        color = phrase_color(idx)
        region = np.isin(image.raster, phrase.segment_ids)
        out[region] = color
    for phrase in grounded.phrases:
        cx, cy = phrase.com
        x0, x1 = max(cx - 1, 0), min(cx + 2, image.width)
        y0, y1 = max(cy - 1, 0), min(cy + 2, image.height)
        out[cy, x0:x1] = COM_MARK
        out[y0:y1, cx] = COM_MARK
    return out


def save_overlay_png(image: PanopticImage, grounded: GroundedNarrative, path) -> None:
    """Write the raw overlay array as a PNG (no axes, pixel exact)."""
    arr = overlay_array(image, grounded)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr).save(path)


def save_overlay_figure(image: PanopticImage, grounded: GroundedNarrative, path) -> None:
    """Write the overlay wrapped in a matplotlib figure with a phrase legend."""
    arr = overlay_array(image, grounded)
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.imshow(arr, interpolation="nearest")
    ax.set_title(f"image {grounded.image_id} / narrative {grounded.narrative_id}")
    ax.set_xticks([])
    ax.set_yticks([])
    handles = []
    for idx, phrase in enumerate(grounded.phrases):
        rgb = tuple(c / 255.0 for c in phrase_color(idx))
        label = phrase.text
        if phrase.is_plural:
            label += " (plural)"
        handles.append(mpatches.Patch(color=rgb, label=label))
    if handles:
        ax.legend(handles=handles, loc="center left", bbox_to_anchor=(1.0, 0.5), fontsize=8)
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_recall_figure(report: ARReport, path, *, title: str = "recall vs IoU threshold") -> None:
    """Plot the recall curve of a report, annotated with its AR."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(report.thresholds, report.recall, drawstyle="steps-post", color="#0082c8")
    ax.set_xlabel("IoU threshold")
    ax.set_ylabel("recall")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.set_title(f"{title}  (AR = {report.average_recall:.3f}, n = {report.count})")
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_rank_figure(report: StatsReport, path) -> None:
    """Bar chart of the agreement-rank mix of grounded phrases."""
    labels = list(report.rank_fractions)
    values = [100.0 * report.rank_fractions[k] for k in labels]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, values, color="#3cb44b")
    ax.set_ylabel("share of grounded phrases [%]")
    ax.set_title("agreement ranks")
    for i, v in enumerate(values):
        ax.text(i, v, f"{v:.1f}", ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
