"""The compact serving dataset: build, encode, decode.

Everything the dashboard needs from a multi-gigabyte corpus lands in one
immutable JSON document: per participant, per stimulus, one resampled
series per configured window, plus metadata and a build report. Raw samples
are deliberately not recoverable; everything stored round-trips exactly.

Encoding schema (".gaze.json", optional gzip sibling):
  {"version": "1",
   "windows": [{"label": "50", "window_len": 50}, ...],
   "stimuli": {"rectangle_java": {"image": "...", "width": 1920, "height": 1080}},
   "participants": {"<id>": {
       "metadata": {...} | null,
       "trials": {"rectangle": {
           "language": "java", "duration_s": 30.0,
           "series": {"<window_len>": {"window": 50,
               "t": [...], "x": [...], "y": [...],
               "lx": [...], "ly": [...], "rx": [...], "ry": [...],   # omitted if eye absent everywhere
               "valid": [...]                                        # omitted if all 1.0
           }}}}}},
   "build_report": {...}}
Pixel coordinates carry at most 2 decimals, seconds 3; quantization happens
at build time so encode/decode is lossless on the stored values.
"""
from __future__ import annotations

import gzip
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetFormatError, EmptyCorpusError, CorpusError
from .ingest import RecordingRef, load_recording
from .metadata import MetadataTable, ParticipantMetadata
from .resample import GazePoint, ScanpathSeries, window_average
from .segmentation import MatchRule, StimulusKind, extract_segments, segment_duration_seconds

log = logging.getLogger(__name__)

FORMAT_VERSION = "1"
PLANE_WIDTH = 1920
PLANE_HEIGHT = 1080

_PRESET_LABELS = {50: "50", 125: "150", 250: "250"}


@dataclass(frozen=True)
class StimulusInfo:
    image: str
    width: int
    height: int


@dataclass(frozen=True)
class TrialData:
    stimulus: StimulusKind
    duration_s: float
    series: dict[int, ScanpathSeries]


@dataclass(frozen=True)
class ParticipantEntry:
    metadata: ParticipantMetadata | None
    trials: dict[str, TrialData]


@dataclass(frozen=True)
class BuildReport:
    files_discovered: int = 0
    participants_ok: int = 0
    series_built: int = 0
    skipped_rows: int = 0
    skipped_files: tuple[tuple[str, str], ...] = ()
    skipped_segments: tuple[tuple[str, str], ...] = ()
    metadata_rejections: tuple[tuple[int, str], ...] = ()


@dataclass(frozen=True)
class CompactDataset:
    version: str
    windows: tuple[tuple[str, int], ...]
    stimuli: dict[str, StimulusInfo]
    participants: dict[int, ParticipantEntry]
    build_report: BuildReport


def window_label(window_len: int) -> str:
    return _PRESET_LABELS.get(window_len, str(window_len))


def _q2(v: float) -> float:
    return float(round(v, 2))


def _quantize_point(p: GazePoint) -> GazePoint:
    return GazePoint(
        t=float(round(p.t, 3)),
        l=(_q2(p.l[0]), _q2(p.l[1])) if p.l else None,
        r=(_q2(p.r[0]), _q2(p.r[1])) if p.r else None,
        fused=(_q2(p.fused[0]), _q2(p.fused[1])),
        valid_fraction=float(round(p.valid_fraction, 3)),
    )


def build_dataset(
    refs: list[RecordingRef],
    metadata_table: MetadataTable,
    windows: list[int],
    patterns: dict[str, MatchRule] | None = None,
    tick_rate: float = 1_000_000.0,
    metadata_rejections: list[tuple[int, str]] | None = None,
) -> CompactDataset:
    """Segment, resample, and join every recording into one dataset.

    Recordings that fail (unparseable, no stimulus) end up in the build
    report instead of the participants map. Output is deterministic for
    identical inputs.
    """
    if not refs:
        raise EmptyCorpusError("no recordings to process")
    if not windows:
        raise ValueError("at least one window length is required")
    windows = sorted(set(int(w) for w in windows))

    skipped_files: list[tuple[str, str]] = []
    skipped_segments: list[tuple[str, str]] = []
    skipped_rows = 0
    series_built = 0
    participants: dict[int, ParticipantEntry] = {}
    stimuli: dict[str, StimulusInfo] = {}

    seen_ids: set[int] = set()
    for ref in sorted(refs, key=lambda r: (r.participant_id, r.file_name)):
        if ref.participant_id in seen_ids:
            skipped_files.append((ref.file_name, f"duplicate participant id {ref.participant_id}"))
            continue
        seen_ids.add(ref.participant_id)
        try:
            recording = load_recording(ref)
            segments = extract_segments(recording, patterns, skipped=skipped_segments)
        except CorpusError as exc:
            log.warning("excluding %s: %s", ref.file_name, exc)
            skipped_files.append((ref.file_name, str(exc)))
            continue
        skipped_rows += len(recording.skipped_rows)

        trials: dict[str, TrialData] = {}
        for segment in segments:
            series: dict[int, ScanpathSeries] = {}
            for w in windows:
                raw = window_average(segment, w, tick_rate, participant_id=ref.participant_id)
                series[w] = ScanpathSeries(
                    participant_id=ref.participant_id,
                    stimulus=raw.stimulus,
                    window_len=w,
                    points=tuple(_quantize_point(p) for p in raw.points),
                )
                series_built += 1
            key = segment.stimulus.key
            stimuli.setdefault(key, StimulusInfo(f"{key}.png", PLANE_WIDTH, PLANE_HEIGHT))
            trials[segment.stimulus.name] = TrialData(
                stimulus=segment.stimulus,
                duration_s=float(round(segment_duration_seconds(segment, tick_rate), 3)),
                series=series,
            )
        participants[ref.participant_id] = ParticipantEntry(
            metadata=metadata_table.get(ref.participant_id),
            trials=trials,
        )

    if not participants:
        raise EmptyCorpusError("no participant survived preprocessing")

    report = BuildReport(
        files_discovered=len(refs),
        participants_ok=len(participants),
        series_built=series_built,
        skipped_rows=skipped_rows,
        skipped_files=tuple(skipped_files),
        skipped_segments=tuple(skipped_segments),
        metadata_rejections=tuple(metadata_rejections or ()),
    )
    return CompactDataset(
        version=FORMAT_VERSION,
        windows=tuple((window_label(w), w) for w in windows),
        stimuli=dict(sorted(stimuli.items())),
        participants=dict(sorted(participants.items())),
        build_report=report,
    )


# ---------------------------------------------------------------- encoding

def _metadata_to_json(m: ParticipantMetadata) -> dict:
    return {
        "id": m.id,
        "age": m.age,
        "gender": m.gender,
        "english_level": m.english_level,
        "visual_aid": m.visual_aid,
        "makeup": m.makeup,
        "mother_tongue": m.mother_tongue,
        "expertise": m.expertise,
        "experiment_languages": dict(sorted(m.experiment_languages.items())),
        "trial_order": list(m.trial_order),
        "time_programming_overall": m.time_programming_overall,
        "time_programming_language": m.time_programming_language,
        "responses": dict(sorted(m.responses.items())),
        "correctness": dict(sorted(m.correctness.items())),
    }


def _metadata_from_json(obj: dict) -> ParticipantMetadata:
    return ParticipantMetadata(
        id=int(obj["id"]),
        age=obj.get("age"),
        gender=obj.get("gender"),
        english_level=obj.get("english_level"),
        visual_aid=obj.get("visual_aid"),
        makeup=obj.get("makeup"),
        mother_tongue=obj.get("mother_tongue"),
        expertise=obj.get("expertise"),
        experiment_languages=dict(obj.get("experiment_languages") or {}),
        trial_order=tuple(obj.get("trial_order") or ()),
        time_programming_overall=obj.get("time_programming_overall"),
        time_programming_language=obj.get("time_programming_language"),
        responses=dict(obj.get("responses") or {}),
        correctness={k: bool(v) for k, v in (obj.get("correctness") or {}).items()},
    )


def _series_to_json(s: ScanpathSeries) -> dict:
    pts = s.points
    out: dict = {
        "window": s.window_len,
        "t": [p.t for p in pts],
        "x": [p.fused[0] for p in pts],
        "y": [p.fused[1] for p in pts],
    }
    if any(p.l for p in pts):
        out["lx"] = [p.l[0] if p.l else None for p in pts]
        out["ly"] = [p.l[1] if p.l else None for p in pts]
    if any(p.r for p in pts):
        out["rx"] = [p.r[0] if p.r else None for p in pts]
        out["ry"] = [p.r[1] if p.r else None for p in pts]
    if any(p.valid_fraction != 1.0 for p in pts):
        out["valid"] = [p.valid_fraction for p in pts]
    return out


def _series_from_json(obj: dict, pid: int, stimulus: StimulusKind, path: str) -> ScanpathSeries:
    window = obj.get("window")
    if not isinstance(window, int) or window < 1:
        raise DatasetFormatError(f"{path}.window", f"bad window length {window!r}")
    t, x, y = obj.get("t"), obj.get("x"), obj.get("y")
    for name, arr in (("t", t), ("x", x), ("y", y)):
        if not isinstance(arr, list):
            raise DatasetFormatError(f"{path}.{name}", "missing parallel array")
    n = len(t)
    if len(x) != n or len(y) != n:
        raise DatasetFormatError(f"{path}.x", f"length mismatch against t ({n})")
    arrays = {}
    for name in ("lx", "ly", "rx", "ry", "valid"):
        arr = obj.get(name)
        if arr is not None and len(arr) != n:
            raise DatasetFormatError(f"{path}.{name}", f"length {len(arr)} != {n}")
        arrays[name] = arr
    points = []
    for i in range(n):
        lx = arrays["lx"][i] if arrays["lx"] else None
        ly = arrays["ly"][i] if arrays["ly"] else None
        rx = arrays["rx"][i] if arrays["rx"] else None
        ry = arrays["ry"][i] if arrays["ry"] else None
        points.append(
            GazePoint(
                t=float(t[i]),
                l=(float(lx), float(ly)) if lx is not None and ly is not None else None,
                r=(float(rx), float(ry)) if rx is not None and ry is not None else None,
                fused=(float(x[i]), float(y[i])),
                valid_fraction=float(arrays["valid"][i]) if arrays["valid"] else 1.0,
            )
        )
    return ScanpathSeries(participant_id=pid, stimulus=stimulus, window_len=window, points=tuple(points))


def encode(dataset: CompactDataset) -> bytes:
    """Serialize to canonical JSON bytes (sorted keys, no whitespace)."""
    obj = {
        "version": dataset.version,
        "windows": [{"label": lab, "window_len": w} for lab, w in dataset.windows],
        "stimuli": {
            key: {"image": info.image, "width": info.width, "height": info.height}
            for key, info in dataset.stimuli.items()
        },
        "participants": {
            str(pid): {
                "metadata": _metadata_to_json(entry.metadata) if entry.metadata else None,
                "trials": {
                    name: {
                        "language": trial.stimulus.language,
                        "duration_s": trial.duration_s,
                        "series": {
                            str(w): _series_to_json(s) for w, s in sorted(trial.series.items())
                        },
                    }
                    for name, trial in sorted(entry.trials.items())
                },
            }
            for pid, entry in sorted(dataset.participants.items())
        },
        "build_report": {
            "files_discovered": dataset.build_report.files_discovered,
            "participants_ok": dataset.build_report.participants_ok,
            "series_built": dataset.build_report.series_built,
            "skipped_rows": dataset.build_report.skipped_rows,
            "skipped_files": [list(e) for e in dataset.build_report.skipped_files],
            "skipped_segments": [list(e) for e in dataset.build_report.skipped_segments],
            "metadata_rejections": [list(e) for e in dataset.build_report.metadata_rejections],
        },
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def decode(data: bytes) -> CompactDataset:
    """Parse and validate encoded bytes; DatasetFormatError names the bad node."""
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DatasetFormatError("$", f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise DatasetFormatError("$", "top level must be an object")
    version = obj.get("version")
    if version != FORMAT_VERSION:
        raise DatasetFormatError("$.version", f"unsupported version {version!r}")

    windows_json = obj.get("windows")
    if not isinstance(windows_json, list) or not windows_json:
        raise DatasetFormatError("$.windows", "missing window list")
    windows = tuple((str(w["label"]), int(w["window_len"])) for w in windows_json)
    known_windows = {w for _, w in windows}

    stimuli = {}
    for key, info in (obj.get("stimuli") or {}).items():
        try:
            stimuli[key] = StimulusInfo(str(info["image"]), int(info["width"]), int(info["height"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"$.stimuli.{key}", str(exc)) from None

    participants: dict[int, ParticipantEntry] = {}
    parts_json = obj.get("participants")
    if not isinstance(parts_json, dict):
        raise DatasetFormatError("$.participants", "missing participants map")
    for pid_str, entry in parts_json.items():
        path = f"$.participants.{pid_str}"
        try:
            pid = int(pid_str)
        except ValueError:
            raise DatasetFormatError(path, "participant key must be an integer") from None
        meta_json = entry.get("metadata")
        metadata = _metadata_from_json(meta_json) if meta_json else None
        trials: dict[str, TrialData] = {}
        for name, trial_json in (entry.get("trials") or {}).items():
            tpath = f"{path}.trials.{name}"
            language = trial_json.get("language")
            if not isinstance(language, str):
                raise DatasetFormatError(f"{tpath}.language", "missing language")
            kind = StimulusKind(name=name, language=language)
            series: dict[int, ScanpathSeries] = {}
            for w_str, series_json in (trial_json.get("series") or {}).items():
                s = _series_from_json(series_json, pid, kind, f"{tpath}.series.{w_str}")
                if s.window_len not in known_windows:
                    raise DatasetFormatError(
                        f"{tpath}.series.{w_str}.window",
                        f"window {s.window_len} not in the built window list",
                    )
                series[s.window_len] = s
            trials[name] = TrialData(
                stimulus=kind,
                duration_s=float(trial_json.get("duration_s", 0.0)),
                series=series,
            )
        participants[pid] = ParticipantEntry(metadata=metadata, trials=trials)

    report_json = obj.get("build_report") or {}
    report = BuildReport(
        files_discovered=int(report_json.get("files_discovered", 0)),
        participants_ok=int(report_json.get("participants_ok", 0)),
        series_built=int(report_json.get("series_built", 0)),
        skipped_rows=int(report_json.get("skipped_rows", 0)),
        skipped_files=tuple((str(a), str(b)) for a, b in report_json.get("skipped_files", [])),
        skipped_segments=tuple((str(a), str(b)) for a, b in report_json.get("skipped_segments", [])),
        metadata_rejections=tuple((int(a), str(b)) for a, b in report_json.get("metadata_rejections", [])),
    )
    return CompactDataset(
        version=version,
        windows=windows,
        stimuli=dict(sorted(stimuli.items())),
        participants=dict(sorted(participants.items())),
        build_report=report,
    )


def save_dataset(dataset: CompactDataset, path: str | Path, gzip_sibling: bool = False) -> Path:
    """Write encoded bytes to path; optionally a .gz sibling next to it."""
    path = Path(path)
    data = encode(dataset)
    path.write_bytes(data)
    if gzip_sibling:
        with open(f"{path}.gz", "wb") as raw:
            with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as fh:
                fh.write(data)
    return path


def load_dataset(path: str | Path) -> CompactDataset:
    path = Path(path)
    data = path.read_bytes()
    if path.suffix == ".gz":
        data = gzip.decompress(data)
    return decode(data)
