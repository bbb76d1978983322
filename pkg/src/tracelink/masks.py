"""Binary pixel masks with a dense array form and a run-length text form.

The text form is ``"W H c0 c1 c2 ..."``: image width, image height, then
run counts over the column-major (Fortran order) flattening of the pixel
grid.  Counts alternate between runs of zeros and runs of ones and always
start with a zero run, so a mask whose first pixel is set starts with an
explicit ``0``.  Counts must be non-negative and sum to ``W * H``.

Set arithmetic (intersection, union, IoU) is available through two
independent routes: dense boolean arrays and run-length interval sweeps
that never materialise pixels.  Both routes must agree exactly; the test
suite checks them against each other.
"""

from __future__ import annotations

import numpy as np

from .errors import IntegrityError, ParseError


class BinaryMask:
    """A width x height binary mask backed by a boolean array of shape (H, W)."""

    __slots__ = ("width", "height", "data")

    def __init__(self, data: np.ndarray):
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise IntegrityError(f"mask array must be 2-D, got shape {arr.shape}")
        self.data = arr.astype(bool, copy=False)
        self.height, self.width = arr.shape

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def empty(cls, width: int, height: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def from_rle(cls, text: str) -> "BinaryMask":
        width, height, counts = parse_rle(text)
        flat = np.zeros(width * height, dtype=bool)
        pos = 0
        value = False
        for count in counts:
            if value:
                flat[pos : pos + count] = True
            pos += count
            value = not value
        return cls(flat.reshape((height, width), order="F"))

    # ------------------------------------------------------------------
    # conversion

    def to_rle(self) -> str:
        flat = self.data.flatten(order="F")
        counts = _runs_of(flat)
        body = " ".join(str(c) for c in counts)
        return f"{self.width} {self.height} {body}".rstrip()

    # ------------------------------------------------------------------
    # queries

    def count(self) -> int:
        """Number of set pixels."""
        return int(self.data.sum())

    def tight_bbox(self) -> tuple[int, int, int, int] | None:
        """Tightest enclosing (x, y, w, h) of the set pixels, or None if empty."""
        ys, xs = np.nonzero(self.data)
        if ys.size == 0:
            return None
        x0, x1 = int(xs.min()), int(xs.max())
        y0, y1 = int(ys.min()), int(ys.max())
        return (x0, y0, x1 - x0 + 1, y1 - y0 + 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"BinaryMask({self.width}x{self.height}, {self.count()} px)"


# ----------------------------------------------------------------------
# run-length text plumbing


def parse_rle(text: str) -> tuple[int, int, list[int]]:
    """Split an RLE string into (width, height, counts) with validation."""
    parts = text.split()
    if len(parts) < 2:
        raise ParseError(f"run-length text needs at least width and height: {text!r}")
    try:
        numbers = [int(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"run-length text contains a non-integer token: {text!r}") from exc
    width, height = numbers[0], numbers[1]
    counts = numbers[2:]
    if width < 0 or height < 0:
        raise ParseError(f"run-length dimensions must be non-negative: {width}x{height}")
    if any(c < 0 for c in counts):
        raise ParseError("run-length counts must be non-negative")
    if sum(counts) != width * height:
        raise ParseError(
            f"run-length counts sum to {sum(counts)}, expected {width * height}"
        )
    return width, height, counts


def _runs_of(flat: np.ndarray) -> list[int]:
    """Alternating run counts of a flat boolean array, starting with zeros."""
    n = flat.size
    if n == 0:
        return []
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], changes, [n]))
    counts = np.diff(bounds).tolist()
    if flat[0]:
        counts.insert(0, 0)
    return [int(c) for c in counts]


def _one_intervals(counts: list[int]) -> list[tuple[int, int]]:
    """Half-open [start, end) index intervals covered by one-runs."""
    intervals = []
    pos = 0
    value = False
    for count in counts:
        if value and count:
            intervals.append((pos, pos + count))
        pos += count
        value = not value
    return intervals


# ----------------------------------------------------------------------
# set arithmetic, dense route


def _check_same_shape(a: BinaryMask, b: BinaryMask) -> None:
    if a.width != b.width or a.height != b.height:
        raise IntegrityError(
            f"mask dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )


def intersection(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    _check_same_shape(a, b)
    return BinaryMask(a.data & b.data)


def union(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    _check_same_shape(a, b)
    return BinaryMask(a.data | b.data)


def merge(masks: list[BinaryMask]) -> BinaryMask:
    """Union of one or more masks of identical dimensions."""
    if not masks:
        raise IntegrityError("merge() needs at least one mask")
    out = masks[0]
    for m in masks[1:]:
        out = union(out, m)
    return out


def iou(a: BinaryMask, b: BinaryMask) -> float:
    """Intersection over union; 0.0 when both masks are empty."""
    _check_same_shape(a, b)
    inter = int((a.data & b.data).sum())
    uni = int((a.data | b.data).sum())
    if uni == 0:
        return 0.0
    return inter / uni


# ----------------------------------------------------------------------
# set arithmetic, run-length route


def rle_iou(text_a: str, text_b: str) -> float:
    """IoU computed directly on run-length texts, without densifying.

    One-runs are turned into half-open index intervals over the flattened
    grid and intersected with a two-pointer sweep.  Must agree exactly
    with the dense route for equal inputs.
    """
    wa, ha, counts_a = parse_rle(text_a)
    wb, hb, counts_b = parse_rle(text_b)
    if (wa, ha) != (wb, hb):
        raise IntegrityError(f"mask dimensions differ: {wa}x{ha} vs {wb}x{hb}")
    ones_a = _one_intervals(counts_a)
    ones_b = _one_intervals(counts_b)
    count_a = sum(end - start for start, end in ones_a)
    count_b = sum(end - start for start, end in ones_b)
    inter = 0
    i = j = 0
    while i < len(ones_a) and j < len(ones_b):
        a_start, a_end = ones_a[i]
        b_start, b_end = ones_b[j]
        lo = max(a_start, b_start)
        hi = min(a_end, b_end)
        if lo < hi:
            inter += hi - lo
        if a_end <= b_end:
            i += 1
        else:
            j += 1
    uni = count_a + count_b - inter
    if uni == 0:
        return 0.0
    return inter / uni
