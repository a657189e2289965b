"""Participant metadata table: loading, joining, canonical serialization.

The corpus ships metadata as delimited text (comma or tab, auto-detected).
Column headers are matched case-insensitively through an alias map so site
variations ("English level", "english_level", ...) land on the same field.
Blank cells stay unknown; nothing is ever fabricated.
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field

from .errors import RecordingSchemaError
from .segmentation import STIMULUS_NAMES

log = logging.getLogger(__name__)

# canonical field -> accepted header spellings (lowercased)
DEFAULT_ALIASES: dict[str, tuple[str, ...]] = {
    "id": ("id", "participant id", "participant_id", "subject"),
    "age": ("age",),
    "gender": ("gender", "sex"),
    "english_level": ("english_level", "english level", "english"),
    "visual_aid": ("visual_aid", "visual aid", "glasses"),
    "makeup": ("makeup", "eye makeup", "eye_makeup"),
    "mother_tongue": ("mother_tongue", "mother tongue", "native language"),
    "expertise": ("expertise", "programming expertise", "overall expertise"),
    "lang_rectangle": ("lang_rectangle", "rectangle language", "language rectangle"),
    "lang_vehicle": ("lang_vehicle", "vehicle language", "language vehicle"),
    "trial_order": ("trial_order", "order", "experiment order"),
    "time_programming_overall": (
        "time_programming_overall",
        "time programming",
        "time programming overall",
    ),
    "time_programming_language": (
        "time_programming_language",
        "time programming language",
    ),
    "response_rectangle": ("response_rectangle", "rectangle response", "answer rectangle"),
    "response_vehicle": ("response_vehicle", "vehicle response", "answer vehicle"),
    "correct_rectangle": ("correct_rectangle", "rectangle correct", "result rectangle"),
    "correct_vehicle": ("correct_vehicle", "vehicle correct", "result vehicle"),
}

_TRUE_WORDS = {"1", "true", "yes", "y", "correct"}
_FALSE_WORDS = {"0", "false", "no", "n", "incorrect", "wrong"}


@dataclass(frozen=True)
class ParticipantMetadata:
    id: int
    age: int | None = None
    gender: str | None = None
    english_level: str | None = None
    visual_aid: str | None = None
    makeup: str | None = None
    mother_tongue: str | None = None
    expertise: str | None = None
    experiment_languages: dict[str, str] = field(default_factory=dict)
    trial_order: tuple[str, ...] = ()
    time_programming_overall: str | None = None
    time_programming_language: str | None = None
    responses: dict[str, str] = field(default_factory=dict)
    correctness: dict[str, bool] = field(default_factory=dict)


MetadataTable = dict[int, ParticipantMetadata]


def _clean(cell: str | None) -> str | None:
    if cell is None:
        return None
    cell = cell.strip()
    return cell or None


def _parse_bool(cell: str | None) -> bool | None:
    cell = _clean(cell)
    if cell is None:
        return None
    lowered = cell.lower()
    if lowered in _TRUE_WORDS:
        return True
    if lowered in _FALSE_WORDS:
        return False
    return None


def _header_map(header: list[str], aliases: dict[str, tuple[str, ...]]) -> dict[str, int]:
    lowered = [h.strip().lower() for h in header]
    mapping = {}
    for canonical, spellings in aliases.items():
        for spelling in spellings:
            if spelling in lowered:
                mapping[canonical] = lowered.index(spelling)
                break
    return mapping


def _row_to_record(row: list[str], cols: dict[str, int]) -> ParticipantMetadata:
    def get(name: str) -> str | None:
        idx = cols.get(name)
        if idx is None or idx >= len(row):
            return None
        return _clean(row[idx])

    pid = int(get("id"))  # caller guarantees the id column exists
    age_raw = get("age")
    age = None
    if age_raw is not None:
        try:
            age = int(float(age_raw))
        except ValueError:
            age = None

    languages = {}
    responses = {}
    correctness = {}
    for stim in STIMULUS_NAMES:
        lang = get(f"lang_{stim}")
        if lang is not None:
            languages[stim] = lang.lower()
        resp = get(f"response_{stim}")
        if resp is not None:
            responses[stim] = resp
        corr = _parse_bool(get(f"correct_{stim}"))
        if corr is not None:
            if resp is None:
                log.warning("participant %d: %s correctness without a response dropped", pid, stim)
            else:
                correctness[stim] = corr

    order_raw = get("trial_order")
    trial_order = tuple(p.strip() for p in order_raw.split(";") if p.strip()) if order_raw else ()

    return ParticipantMetadata(
        id=pid,
        age=age,
        gender=get("gender"),
        english_level=get("english_level"),
        visual_aid=get("visual_aid"),
        makeup=get("makeup"),
        mother_tongue=get("mother_tongue"),
        expertise=get("expertise"),
        experiment_languages=languages,
        trial_order=trial_order,
        time_programming_overall=get("time_programming_overall"),
        time_programming_language=get("time_programming_language"),
        responses=responses,
        correctness=correctness,
    )


def load_metadata(
    path,
    aliases: dict[str, tuple[str, ...]] | None = None,
    rejected: list[tuple[int, str]] | None = None,
) -> MetadataTable:
    """Load the metadata table keyed by participant id.

    Duplicate ids keep the first row; later rows are rejected with a report.
    Raises RecordingSchemaError when no id column can be found.
    """
    with open(path, "r", encoding="utf-8-sig", newline="") as fh:
        text = fh.read()
    return parse_metadata(text, aliases=aliases, rejected=rejected)


def parse_metadata(
    text: str,
    aliases: dict[str, tuple[str, ...]] | None = None,
    rejected: list[tuple[int, str]] | None = None,
) -> MetadataTable:
    aliases = aliases or DEFAULT_ALIASES
    first_line = text.splitlines()[0] if text else ""
    delimiter = "\t" if "\t" in first_line else ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [r for r in reader if any(c.strip() for c in r)]
    if not rows:
        raise RecordingSchemaError("id", "metadata table is empty")
    cols = _header_map(rows[0], aliases)
    if "id" not in cols:
        raise RecordingSchemaError("id", "metadata table lacks an id column")

    table: MetadataTable = {}
    for line_no, row in enumerate(rows[1:], start=2):
        raw_id = _clean(row[cols["id"]] if cols["id"] < len(row) else None)
        if raw_id is None or not raw_id.lstrip("-").isdigit():
            log.warning("metadata line %d: unparseable id %r, row rejected", line_no, raw_id)
            if rejected is not None:
                rejected.append((line_no, f"unparseable id {raw_id!r}"))
            continue
        record = _row_to_record(row, cols)
        if record.id in table:
            log.warning("metadata line %d: duplicate id %d, row rejected", line_no, record.id)
            if rejected is not None:
                rejected.append((line_no, f"duplicate id {record.id}"))
            continue
        table[record.id] = record
    return table


def join(participant_id: int, table: MetadataTable) -> ParticipantMetadata:
    """The record for one participant; KeyError when the id is unknown."""
    try:
        return table[participant_id]
    except KeyError:
        raise KeyError(f"no metadata record for participant {participant_id}") from None


CANONICAL_COLUMNS = [
    "id", "age", "gender", "english_level", "visual_aid", "makeup", "mother_tongue",
    "expertise", "lang_rectangle", "lang_vehicle", "trial_order",
    "time_programming_overall", "time_programming_language",
    "response_rectangle", "response_vehicle", "correct_rectangle", "correct_vehicle",
]


def metadata_to_csv(table: MetadataTable) -> str:
    """Serialize a table to canonical comma-delimited text (id-sorted)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for pid in sorted(table):
        m = table[pid]
        row = [
            str(m.id),
            "" if m.age is None else str(m.age),
            m.gender or "", m.english_level or "", m.visual_aid or "",
            m.makeup or "", m.mother_tongue or "", m.expertise or "",
            m.experiment_languages.get("rectangle", ""),
            m.experiment_languages.get("vehicle", ""),
            ";".join(m.trial_order),
            m.time_programming_overall or "", m.time_programming_language or "",
            m.responses.get("rectangle", ""), m.responses.get("vehicle", ""),
        ]
        for stim in ("rectangle", "vehicle"):
            if stim in m.correctness:
                row.append("true" if m.correctness[stim] else "false")
            else:
                row.append("")
        writer.writerow(row)
    return buf.getvalue()
