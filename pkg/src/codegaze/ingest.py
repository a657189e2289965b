"""Discovery and parsing of raw eye-tracker TSV recordings.

One recording file per participant: an optional "##"-prefixed converter
header block, a column-header row (first field "Time"), then tab-separated
rows typed SMP/SAMPLE or MSG/MESSAGE. Column order is taken from the header
row, never assumed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    CorpusError,
    MalformedFilenameError,
    RecordingSchemaError,
    UnparseableRecordingError,
)

log = logging.getLogger(__name__)

HEADER_SIGIL = "##"
HEADER_FIRST_FIELD = "Time"

REQUIRED_COLUMNS = (
    "Time",
    "Type",
    "L POR X [px]",
    "L POR Y [px]",
    "R POR X [px]",
    "R POR Y [px]",
)
RAW_COLUMNS = ("L Raw X [px]", "L Raw Y [px]", "R Raw X [px]", "R Raw Y [px]")

SAMPLE_TYPES = {"SMP", "SAMPLE"}
MESSAGE_TYPES = {"MSG", "MESSAGE"}


@dataclass(frozen=True)
class RecordingRef:
    """A discovered recording file and the participant id taken from its name."""

    path: Path
    file_name: str
    participant_id: int


@dataclass(frozen=True)
class RawSample:
    time: int
    l_raw: tuple[float, float] | None
    r_raw: tuple[float, float] | None
    l_por: tuple[float, float]
    r_por: tuple[float, float]


@dataclass(frozen=True)
class MessageEvent:
    time: int
    text: str


@dataclass(frozen=True)
class RawRecording:
    """One parsed recording: time-ordered samples and message events."""

    ref: RecordingRef
    samples: tuple[RawSample, ...]
    messages: tuple[MessageEvent, ...]
    header_lines_removed: int
    skipped_rows: tuple[int, ...] = field(default=())


def extract_participant_id(file_name: str) -> int:
    """Parse the maximal leading run of decimal digits of a filename as the id."""
    digits = []
    for ch in file_name:
        if ch.isdigit():
            digits.append(ch)
        else:
            break
    if not digits:
        raise MalformedFilenameError(f"no leading participant id in {file_name!r}")
    return int("".join(digits))


def discover_recordings(
    root: str | Path,
    extension: str = ".tsv",
    skipped: list[tuple[str, str]] | None = None,
) -> list[RecordingRef]:
    """Recursively find recording files under root, sorted by participant id.

    Files whose names carry no leading integer are skipped; each skip is
    logged and appended to `skipped` as (file_name, reason) when given.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"corpus directory missing or unreadable: {root}")
    refs = []
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        reason = None
        if not path.name.endswith(extension):
            reason = f"does not match extension {extension!r}"
        else:
            try:
                pid = extract_participant_id(path.name)
            except MalformedFilenameError as exc:
                reason = str(exc)
        if reason is not None:
            log.warning("skipping %s: %s", path, reason)
            if skipped is not None:
                skipped.append((path.name, reason))
            continue
        refs.append(RecordingRef(path=path, file_name=path.name, participant_id=pid))
    refs.sort(key=lambda r: (r.participant_id, r.file_name))
    return refs


def strip_header(lines: list[str]) -> tuple[int, list[str]]:
    """Drop converter metadata so the body starts at the column-header row.

    Removes every line before the first line whose first tab-separated field
    is "Time", plus any later "##" comment line. Returns (removed_count, body).
    """
    header_idx = None
    for i, line in enumerate(lines):
        if line.split("\t", 1)[0].strip() == HEADER_FIRST_FIELD:
            header_idx = i
            break
    if header_idx is None:
        raise UnparseableRecordingError("no column-header row (first field 'Time') found")
    removed = header_idx
    body = [lines[header_idx]]
    for line in lines[header_idx + 1 :]:
        if line.startswith(HEADER_SIGIL):
            removed += 1
        else:
            body.append(line)
    return removed, body


def _parse_point(cells: list[str], ix: int, iy: int) -> tuple[float, float]:
    x = float(cells[ix])
    y = float(cells[iy])
    if x != x or y != y or x in (float("inf"), float("-inf")) or y in (float("inf"), float("-inf")):
        raise ValueError("non-finite coordinate")
    return (x, y)


def parse_recording(ref: RecordingRef, body: list[str]) -> RawRecording:
    """Parse header-stripped body lines into typed samples and messages.

    Rows that fail numeric parsing (or run backwards in time) are skipped,
    counted, and reported; a missing required column aborts the recording.
    """
    if not body:
        raise UnparseableRecordingError(f"{ref.file_name}: empty body")
    columns = [c.strip() for c in body[0].rstrip("\n").split("\t")]
    col_index = {name: i for i, name in enumerate(columns)}
    for name in REQUIRED_COLUMNS:
        if name not in col_index:
            raise RecordingSchemaError(name, f"{ref.file_name}: required column missing: {name!r}")
    has_raw = all(name in col_index for name in RAW_COLUMNS)

    i_time = col_index["Time"]
    i_type = col_index["Type"]
    i_lpx, i_lpy = col_index["L POR X [px]"], col_index["L POR Y [px]"]
    i_rpx, i_rpy = col_index["R POR X [px]"], col_index["R POR Y [px]"]
    if has_raw:
        i_lrx, i_lry = col_index["L Raw X [px]"], col_index["L Raw Y [px]"]
        i_rrx, i_rry = col_index["R Raw X [px]"], col_index["R Raw Y [px]"]

    samples: list[RawSample] = []
    messages: list[MessageEvent] = []
    skipped: list[int] = []
    last_time = None

    for row_no, line in enumerate(body[1:], start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        cells = line.split("\t")
        try:
            time = int(float(cells[i_time]))
            if last_time is not None and time < last_time:
                raise ValueError("timestamp runs backwards")
            row_type = cells[i_type].strip().upper()
            if row_type in MESSAGE_TYPES:
                text = "\t".join(cells[i_type + 1 :]).strip()
                if not text:
                    raise ValueError("empty message payload")
                messages.append(MessageEvent(time=time, text=text))
            elif row_type in SAMPLE_TYPES:
                samples.append(
                    RawSample(
                        time=time,
                        l_raw=_parse_point(cells, i_lrx, i_lry) if has_raw else None,
                        r_raw=_parse_point(cells, i_rrx, i_rry) if has_raw else None,
                        l_por=_parse_point(cells, i_lpx, i_lpy),
                        r_por=_parse_point(cells, i_rpx, i_rpy),
                    )
                )
            else:
                raise ValueError(f"unknown row type {row_type!r}")
            last_time = time
        except (ValueError, IndexError) as exc:
            log.warning("%s row %d skipped: %s", ref.file_name, row_no, exc)
            skipped.append(row_no)

    return RawRecording(
        ref=ref,
        samples=tuple(samples),
        messages=tuple(messages),
        header_lines_removed=0,
        skipped_rows=tuple(skipped),
    )


def load_recording(ref: RecordingRef) -> RawRecording:
    """Read, strip, and parse one recording file (UTF-8, BOM tolerated)."""
    with open(ref.path, "r", encoding="utf-8-sig") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise UnparseableRecordingError(f"{ref.file_name}: empty file")
    removed, body = strip_header(lines)
    rec = parse_recording(ref, body)
    return RawRecording(
        ref=rec.ref,
        samples=rec.samples,
        messages=rec.messages,
        header_lines_removed=removed,
        skipped_rows=rec.skipped_rows,
    )


def recording_to_tsv(recording: RawRecording) -> list[str]:
    """Serialize a recording back to TSV body lines (header + rows).

    Inverse of parse_recording: re-parsing the output yields an equal
    recording. Samples and messages are merged back in time order, messages
    after samples at equal timestamps.
    """
    has_raw = any(s.l_raw is not None for s in recording.samples)
    columns = ["Time", "Type"]
    if has_raw:
        columns += ["L Raw X [px]", "L Raw Y [px]", "R Raw X [px]", "R Raw Y [px]"]
    columns += ["L POR X [px]", "L POR Y [px]", "R POR X [px]", "R POR Y [px]"]
    lines = ["\t".join(columns)]

    def sample_line(s: RawSample) -> str:
        cells = [str(s.time), "SMP"]
        if has_raw:
            lr = s.l_raw or (0.0, 0.0)
            rr = s.r_raw or (0.0, 0.0)
            cells += [repr(lr[0]), repr(lr[1]), repr(rr[0]), repr(rr[1])]
        cells += [repr(s.l_por[0]), repr(s.l_por[1]), repr(s.r_por[0]), repr(s.r_por[1])]
        return "\t".join(cells)

    si, mi = 0, 0
    while si < len(recording.samples) or mi < len(recording.messages):
        take_sample = mi >= len(recording.messages) or (
            si < len(recording.samples)
            and recording.samples[si].time <= recording.messages[mi].time
        )
        if take_sample:
            lines.append(sample_line(recording.samples[si]))
            si += 1
        else:
            m = recording.messages[mi]
            lines.append(f"{m.time}\tMSG\t{m.text}")
            mi += 1
    return lines
