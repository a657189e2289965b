"""Cutting recordings into per-stimulus sample ranges via message events."""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import NoStimulusError
from .ingest import RawRecording, RawSample

log = logging.getLogger(__name__)

STIMULUS_NAMES = ("rectangle", "vehicle")
LANGUAGES = ("java", "scala")


@dataclass(frozen=True)
class StimulusKind:
    name: str
    language: str

    @property
    def key(self) -> str:
        return f"{self.name}_{self.language}"


@dataclass(frozen=True)
class MatchRule:
    """Case-insensitive substring by default, full regex when is_regex is set."""

    pattern: str
    is_regex: bool = False

    def matches(self, text: str) -> bool:
        if self.is_regex:
            return re.search(self.pattern, text, re.IGNORECASE) is not None
        return self.pattern.lower() in text.lower()


def default_patterns() -> dict[str, MatchRule]:
    return {name: MatchRule(name) for name in STIMULUS_NAMES}


def load_patterns(path: str | Path) -> dict[str, MatchRule]:
    """Read stimulus match rules from a JSON config file.

    Format: {"stimulus": "substring"} or {"stimulus": {"pattern": "...",
    "regex": true}}. Stimuli absent from the file keep their defaults.
    """
    rules = default_patterns()
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    for name, value in raw.items():
        if isinstance(value, str):
            rules[name] = MatchRule(value)
        else:
            rules[name] = MatchRule(value["pattern"], bool(value.get("regex", False)))
    return rules


@dataclass(frozen=True)
class StimulusSegment:
    """The contiguous sample run while one code stimulus was on screen."""

    stimulus: StimulusKind
    start_index: int
    end_index: int
    start_time: int
    end_time: int
    samples: tuple[RawSample, ...]


def _infer_language(text: str) -> str:
    lowered = text.lower()
    for lang in LANGUAGES:
        if lang in lowered:
            return lang
    return LANGUAGES[0]


def extract_segments(
    recording: RawRecording,
    patterns: dict[str, MatchRule] | None = None,
    skipped: list[tuple[str, str]] | None = None,
) -> list[StimulusSegment]:
    """Return one segment per stimulus whose onset message matches its rule.

    A segment runs from the matching message's time up to the next message of
    any kind (or end of recording). If the same stimulus onset appears twice,
    the first occurrence wins and the repeat is reported. Raises
    NoStimulusError when nothing matches.
    """
    if patterns is None:
        patterns = default_patterns()
    messages = recording.messages
    samples = recording.samples

    segments: list[StimulusSegment] = []
    seen: set[str] = set()
    for mi, msg in enumerate(messages):
        matched = [name for name in sorted(patterns) if patterns[name].matches(msg.text)]
        if not matched:
            continue
        name = matched[0]
        if name in seen:
            log.warning("%s: repeated onset for %s at t=%d ignored",
                        recording.ref.file_name, name, msg.time)
            if skipped is not None:
                skipped.append((recording.ref.file_name, f"repeated onset for {name}"))
            continue
        seen.add(name)

        start_time = msg.time
        if mi + 1 < len(messages):
            end_time = messages[mi + 1].time
        elif samples:
            end_time = samples[-1].time + 1
        else:
            end_time = start_time
        kind = StimulusKind(name=name, language=_infer_language(msg.text))

        start_index = _bisect_time(samples, start_time)
        end_index = _bisect_time(samples, end_time)
        if end_index <= start_index:
            log.warning("%s: no samples inside %s segment", recording.ref.file_name, name)
            if skipped is not None:
                skipped.append((recording.ref.file_name, f"empty segment for {name}"))
            continue
        segments.append(
            StimulusSegment(
                stimulus=kind,
                start_index=start_index,
                end_index=end_index,
                start_time=start_time,
                end_time=end_time,
                samples=samples[start_index:end_index],
            )
        )
    if not segments:
        raise NoStimulusError(f"{recording.ref.file_name}: no stimulus onset message matched")
    segments.sort(key=lambda s: s.start_index)
    return segments


def _bisect_time(samples: tuple[RawSample, ...], t: int) -> int:
    """Index of the first sample with time >= t."""
    lo, hi = 0, len(samples)
    while lo < hi:
        mid = (lo + hi) // 2
        if samples[mid].time < t:
            lo = mid + 1
        else:
            hi = mid
    return lo


def segment_duration_seconds(segment: StimulusSegment, tick_rate: float) -> float:
    """Segment span in seconds given the tracker clock rate (ticks per second)."""
    if tick_rate <= 0:
        raise ValueError("tick_rate must be positive")
    return (segment.end_time - segment.start_time) / tick_rate
