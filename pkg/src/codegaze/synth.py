"""Synthetic eye-tracking corpora in the converter TSV format.

Generates deterministic, protocol-shaped recordings (lead-in, two code
stimuli announced by messages, question screens) with a reading-like gaze
model, plus a matching metadata table and placeholder stimulus images. Used
by the test suite and by `codegaze synth` to demo the pipeline without the
real corpus.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .segmentation import LANGUAGES, STIMULUS_NAMES

HZ = 250
TICKS_PER_SAMPLE = 4000  # microsecond clock at 250 Hz
BASE_TICK = 4_300_000_000

COLUMNS = [
    "Time", "Type", "Trial",
    "L Raw X [px]", "L Raw Y [px]", "L Dia X [px]", "L Dia Y [px]",
    "L CR1 X [px]", "L CR1 Y [px]", "L POR X [px]", "L POR Y [px]",
    "R Raw X [px]", "R Raw Y [px]", "R Dia X [px]", "R Dia Y [px]",
    "R CR1 X [px]", "R CR1 Y [px]", "R POR X [px]", "R POR Y [px]",
]

HEADER_BLOCK = [
    "## [iView]",
    "## Converted from: {name}.idf",
    "## Date: 11.08.2020 10:{minute:02d}:12",
    "## Version: IDF Converter 3.0.20",
    "## Sample Rate: 250",
    "## [Run]",
    "## Subject: {name}",
    "## Description: code reading session",
    "## [Calibration]",
    "## Calibration Type: 9-point",
    "## Calibration Area: 1920 1080",
    "## [Geometry]",
    "## Stimulus Dimension [mm]: 474 297",
    "## Head Distance [mm]: 700",
    "## [Hardware]",
    "## System: RED250",
    "## Number of Samples: {n_samples}",
]

# reading area of the code stimuli
CODE_LEFT, CODE_RIGHT = 260.0, 1420.0
CODE_TOP, CODE_BOTTOM = 210.0, 940.0
LINE_HEIGHT = 44.0


@dataclass(frozen=True)
class TrialSpec:
    stimulus: str
    language: str
    duration_s: float


def default_trials(language: str, trial_s: float = 30.0) -> list[TrialSpec]:
    return [TrialSpec(name, language, trial_s) for name in STIMULUS_NAMES]


class _GazeWalk:
    """Line-by-line reading gaze: fixation targets with per-sample jitter."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.target = (960.0, 540.0)
        self.samples_left = 0
        self.line = 0

    def idle(self):
        if self.samples_left <= 0:
            self.target = (
                self.rng.uniform(700, 1200),
                self.rng.uniform(380, 700),
            )
            self.samples_left = self.rng.randint(60, 160)
        return self._emit()

    def read(self):
        if self.samples_left <= 0:
            if self.rng.random() < 0.08:  # regression to an earlier line
                self.line = max(0, self.line - self.rng.randint(1, 4))
            x = self.rng.uniform(CODE_LEFT, CODE_RIGHT)
            y = CODE_TOP + (self.line % int((CODE_BOTTOM - CODE_TOP) / LINE_HEIGHT)) * LINE_HEIGHT
            self.target = (x, y + self.rng.uniform(-4, 4))
            self.samples_left = self.rng.randint(40, 90)
            if self.rng.random() < 0.35:
                self.line += 1
        return self._emit()

    def _emit(self):
        self.samples_left -= 1
        x, y = self.target
        return (x + self.rng.gauss(0, 3.5), y + self.rng.gauss(0, 2.5))


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _sample_cells(tick: int, trial: int, gaze, valid_l: bool, valid_r: bool, rng) -> str:
    gx, gy = gaze
    lx, ly = (gx - 2.6, gy + 0.8) if valid_l else (0.0, 0.0)
    rx, ry = (gx + 2.6, gy - 0.8) if valid_r else (0.0, 0.0)
    raw_l = (lx * 0.38 + 310.0, ly * 0.31 + 260.0) if valid_l else (0.0, 0.0)
    raw_r = (rx * 0.38 + 330.0, ry * 0.31 + 262.0) if valid_r else (0.0, 0.0)
    dia_l = rng.uniform(30.0, 42.0) if valid_l else 0.0
    dia_r = rng.uniform(30.0, 42.0) if valid_r else 0.0
    cells = [
        str(tick), "SMP", str(trial),
        _fmt(raw_l[0]), _fmt(raw_l[1]), _fmt(dia_l), _fmt(dia_l * 0.98),
        _fmt(raw_l[0] - 4.7), _fmt(raw_l[1] - 3.1), _fmt(lx), _fmt(ly),
        _fmt(raw_r[0]), _fmt(raw_r[1]), _fmt(dia_r), _fmt(dia_r * 0.99),
        _fmt(raw_r[0] - 4.5), _fmt(raw_r[1] - 3.3), _fmt(rx), _fmt(ry),
    ]
    return "\t".join(cells)


def _msg_line(tick: int, trial: int, text: str) -> str:
    return f"{tick}\tMSG\t{trial}\t# Message: {text}"


class _Blinker:
    """Binocular track-loss runs targeting a given overall validity rate."""

    def __init__(self, rng: random.Random, validity_rate: float):
        self.rng = rng
        self.rate = validity_rate
        self.loss_left = 0

    def next(self) -> tuple[bool, bool]:
        if self.loss_left > 0:
            self.loss_left -= 1
            return False, False
        if self.rate < 1.0 and self.rng.random() < (1.0 - self.rate) / 45.0:
            self.loss_left = self.rng.randint(20, 70)
            return False, False
        # rare single-eye dropout
        one_eye = self.rng.random()
        return one_eye > 0.004, one_eye > 0.002 or one_eye <= 0.004


def generate_recording_lines(
    participant_id: int,
    trials: list[TrialSpec],
    seed: int = 0,
    validity_rate: float = 0.97,
    lead_in_s: float = 6.0,
    question_s: float = 8.0,
    tail_s: float = 2.0,
    with_header: bool = True,
    stimulus_message: str = "{stimulus}_{language}.jpg",
) -> list[str]:
    """Emit one recording as TSV lines (header block + column row + data)."""
    rng = random.Random(participant_id * 1_000_003 + seed)
    walk = _GazeWalk(rng)
    blink = _Blinker(rng, validity_rate)

    data: list[str] = []
    tick = BASE_TICK + participant_id * 977_000_003
    trial_no = 0

    def emit_samples(seconds: float, reading: bool):
        nonlocal tick
        for _ in range(int(round(seconds * HZ))):
            gaze = walk.read() if reading else walk.idle()
            vl, vr = blink.next()
            data.append(_sample_cells(tick, trial_no, gaze, vl, vr, rng))
            tick += TICKS_PER_SAMPLE

    emit_samples(lead_in_s / 2, reading=False)
    data.append(_msg_line(tick, trial_no, "calibration_done.jpg"))
    emit_samples(lead_in_s / 2, reading=False)

    for i, trial in enumerate(trials, start=1):
        trial_no = i
        data.append(_msg_line(tick, trial_no, stimulus_message.format(
            stimulus=trial.stimulus, language=trial.language)))
        emit_samples(trial.duration_s, reading=True)
        data.append(_msg_line(tick, trial_no, f"question{i}.jpg"))
        emit_samples(question_s, reading=False)

    data.append(_msg_line(tick, trial_no, "thank_you.jpg"))
    emit_samples(tail_s, reading=False)

    lines: list[str] = []
    if with_header:
        name = f"{participant_id}_session"
        for tpl in HEADER_BLOCK:
            lines.append(tpl.format(name=name, minute=participant_id % 60, n_samples=len(data)))
    lines.append("\t".join(COLUMNS))
    lines.extend(data)
    return lines


def write_recording(
    path: str | Path,
    participant_id: int,
    trials: list[TrialSpec],
    seed: int = 0,
    **kwargs,
) -> Path:
    path = Path(path)
    lines = generate_recording_lines(participant_id, trials, seed=seed, **kwargs)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_corpus(
    root: str | Path,
    n_participants: int = 8,
    seed: int = 0,
    trial_s: float = 30.0,
    corrupt: dict[int, str] | None = None,
) -> tuple[list[Path], Path]:
    """Write a full corpus: recordings, metadata table, stimulus images.

    `corrupt` maps participant ids to a defect mode: "headerless" (no
    column-header row) or "no_stimulus" (no matching onset messages).
    Participants alternate java/scala. Returns (recording paths, metadata path).
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    corrupt = corrupt or {}
    paths = []
    languages = {}
    for pid in range(1, n_participants + 1):
        lang = LANGUAGES[pid % len(LANGUAGES)]
        languages[pid] = lang
        mode = corrupt.get(pid)
        path = root / f"{pid}_session.tsv"
        if mode == "headerless":
            lines = generate_recording_lines(
                pid, default_trials(lang, 2.0), seed=seed, with_header=False)
            path.write_text("\n".join(lines[1:]) + "\n", encoding="utf-8")
        elif mode == "no_stimulus":
            write_recording(path, pid, default_trials(lang, 2.0), seed=seed,
                            stimulus_message="slide_{language}.bmp")
        else:
            write_recording(path, pid, default_trials(lang, trial_s), seed=seed)
        paths.append(path)

    meta_path = root / "metadata.csv"
    write_metadata_csv(meta_path, languages, seed=seed)
    return paths, meta_path


def write_metadata_csv(path: str | Path, languages: dict[int, str], seed: int = 0) -> Path:
    rng = random.Random(seed * 7919 + 13)
    path = Path(path)
    rows = ["id,age,gender,english_level,visual_aid,makeup,mother_tongue,expertise,"
            "lang_rectangle,lang_vehicle,trial_order,time_programming_overall,"
            "time_programming_language,response_rectangle,response_vehicle,"
            "correct_rectangle,correct_vehicle"]
    genders = ["male", "female", "non-binary", ""]
    levels = ["none", "low", "medium", "high"]
    tongues = ["finnish", "german", "english", "hindi", "mandarin"]
    for pid in sorted(languages):
        lang = languages[pid]
        age = str(rng.randint(19, 46)) if rng.random() > 0.1 else ""
        order = "rectangle;vehicle" if rng.random() < 0.5 else "vehicle;rectangle"
        resp_r = rng.choice(["A", "B", "C", ""])
        resp_v = rng.choice(["A", "B", "C", ""])
        corr_r = rng.choice(["true", "false"]) if resp_r else ""
        corr_v = rng.choice(["true", "false"]) if resp_v else ""
        rows.append(",".join([
            str(pid), age, rng.choice(genders), rng.choice(levels),
            rng.choice(["yes", "no", "glasses"]), rng.choice(["yes", "no"]),
            rng.choice(tongues), rng.choice(levels),
            lang, lang, order,
            f"{rng.randint(0, 14)} years", f"{rng.randint(0, 9)} years",
            resp_r, resp_v, corr_r, corr_v,
        ]))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def write_stimulus_images(directory: str | Path, width: int = 1920, height: int = 1080) -> list[Path]:
    """Placeholder code-snippet images, one per stimulus/language pair."""
    from PIL import Image, ImageDraw

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    accents = {"java": (235, 140, 52), "scala": (200, 60, 60)}
    written = []
    for name in STIMULUS_NAMES:
        for lang, accent in accents.items():
            rng = random.Random(len(name) * 101 + len(lang))
            img = Image.new("RGB", (width, height), (250, 250, 246))
            draw = ImageDraw.Draw(img)
            draw.rectangle([0, 0, width, 80], fill=accent)
            y = int(CODE_TOP)
            while y < CODE_BOTTOM:
                indent = rng.choice([0, 40, 80, 120])
                bar_w = rng.randint(220, 900)
                draw.rectangle(
                    [int(CODE_LEFT) + indent, y, int(CODE_LEFT) + indent + bar_w, y + 22],
                    fill=(90, 94, 106),
                )
                y += int(LINE_HEIGHT)
            out = directory / f"{name}_{lang}.png"
            img.save(out)
            written.append(out)
    return written
