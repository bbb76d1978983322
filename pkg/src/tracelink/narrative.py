"""Spoken image narratives: timed caption tokens and mouse trace streams.

Input is JSON Lines, one narrative per line::

    {"narrative_id": "...", "image_id": 17, "caption": "...",
     "timed_caption": [{"utterance": "sky", "start_time": 0.0, "end_time": 0.4}, ...],
     "traces": [[{"x": 0.5, "y": 0.25, "t": 0.1}, ...], ...]}

Trace coordinates are normalised to [0, 1] relative to the image and are
clamped into that range on load; times are seconds.  An utterance holding
several whitespace-separated words is split into one token per word, each
inheriting the utterance's time window (``Narrative.split_utterances``
records that this happened, for diagnostics).

Time windows are inclusive on both ends: a trace point whose timestamp
equals a window boundary belongs to the window.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import IntegrityError, ParseError


@dataclass(frozen=True)
class TimedToken:
    """One caption word with the time span in which it was spoken."""

    text: str
    start_time: float
    end_time: float


@dataclass(frozen=True)
class TracePoint:
    """One mouse sample: normalised position and timestamp in seconds."""

    x: float
    y: float
    t: float


@dataclass
class Narrative:
    narrative_id: str
    image_id: int
    caption: str
    tokens: list[TimedToken]
    traces: list[list[TracePoint]]
    split_utterances: bool = field(default=False, compare=False)

    def time_window(self, first_token: int, last_token: int) -> tuple[float, float]:
        """Spoken time span of tokens ``first_token..last_token`` inclusive."""
        if not (0 <= first_token <= last_token < len(self.tokens)):
            raise IntegrityError(
                f"narrative {self.narrative_id}: token span "
                f"[{first_token}, {last_token}] outside 0..{len(self.tokens) - 1}"
            )
        return (self.tokens[first_token].start_time, self.tokens[last_token].end_time)

    def points_between(self, t0: float, t1: float) -> list[TracePoint]:
        """All trace points with t0 <= t <= t1, in stream order."""
        return [p for seg in self.traces for p in seg if t0 <= p.t <= t1]


def _clean_time(value, what: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what} is not a number: {value!r}") from exc
    if math.isnan(out) or math.isinf(out):
        raise ParseError(f"{what} is not finite: {value!r}")
    return out


def parse_narrative(obj: dict) -> Narrative:
    """Build one Narrative from a decoded JSON object, validating as we go."""
    try:
        narrative_id = str(obj["narrative_id"])
        image_id = int(obj["image_id"])
        caption = str(obj.get("caption", ""))
        timed = obj["timed_caption"]
        traces = obj.get("traces", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"narrative record missing required field: {exc}") from exc

    tokens: list[TimedToken] = []
    split = False
    for entry in timed:
        try:
            utterance = str(entry["utterance"])
            start = _clean_time(entry["start_time"], "token start_time")
            end = _clean_time(entry["end_time"], "token end_time")
        except (KeyError, TypeError) as exc:
            raise ParseError(
                f"narrative {narrative_id}: bad timed_caption entry {entry!r}"
            ) from exc
        if end < start:
            raise IntegrityError(
                f"narrative {narrative_id}: token {utterance!r} ends before it starts"
            )
        words = utterance.split()
        if len(words) > 1:
            split = True
        for word in words:
            tokens.append(TimedToken(word, start, end))

    streams: list[list[TracePoint]] = []
    for seg in traces:
        stream: list[TracePoint] = []
        for point in seg:
            try:
                x = float(point["x"])
                y = float(point["y"])
                t = _clean_time(point["t"], "trace point t")
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(
                    f"narrative {narrative_id}: bad trace point {point!r}"
                ) from exc
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ParseError(f"narrative {narrative_id}: trace point is not finite")
            stream.append(TracePoint(min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0), t))
        streams.append(stream)

    return Narrative(narrative_id, image_id, caption, tokens, streams, split)


def load_narratives(path, *, on_error=None):
    """Yield narratives from a JSON Lines file.

    Malformed lines raise; pass ``on_error(lineno, exc)`` to log and skip
    instead (used by the batch driver when not running strict).
    """
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"line {lineno}: invalid JSON ({exc})") from exc
                if not isinstance(obj, dict):
                    raise ParseError(f"line {lineno}: expected a JSON object")
                yield parse_narrative(obj)
            except (ParseError, IntegrityError) as exc:
                if on_error is None:
                    raise
                on_error(lineno, exc)
