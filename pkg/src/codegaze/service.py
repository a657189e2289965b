"""Read-only HTTP API over a decoded dataset plus stimulus images.

Everything the dashboard needs: participant listing with filters, metadata,
server-side interpolated scanpaths, density-map PNGs, and a seedable
random-participant picker. No endpoint mutates the dataset.
"""
from __future__ import annotations

import io
import json
import random
import threading
from functools import lru_cache
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.staticfiles import StaticFiles

from . import geometry
from .density import DensityGrid, GridConfig, accumulate, colorize
from .resample import ScanpathSeries
from .segmentation import LANGUAGES
from .store import CompactDataset, window_label

API_MODES = tuple(m.replace("_", "-") for m in geometry.MODES)


def _bad(param: str, detail: str):
    raise HTTPException(status_code=400, detail={"parameter": param, "error": detail})


def _missing(what: str):
    raise HTTPException(status_code=404, detail=what)


def _parse_flag(value: str | None, param: str) -> bool | None:
    if value is None:
        return None
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    _bad(param, f"expected true/false, got {value!r}")


def create_app(
    dataset: CompactDataset,
    stimuli_dir: str | Path | None = None,
    seed: int | None = None,
    ui_dir: str | Path | None = None,
    questions_path: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="codegaze", docs_url=None, redoc_url=None)
    rng = random.Random(seed)
    rng_lock = threading.Lock()
    windows_by_label = {label: w for label, w in dataset.windows}
    built_windows = {w for _, w in dataset.windows}
    finest_window = min(built_windows)
    questions: dict[str, str] = {}
    if questions_path:
        questions = json.loads(Path(questions_path).read_text(encoding="utf-8"))

    def participant_or_404(pid: int):
        entry = dataset.participants.get(pid)
        if entry is None:
            _missing(f"unknown participant {pid}")
        return entry

    def trial_or_404(pid: int, stimulus: str):
        entry = participant_or_404(pid)
        trial = entry.trials.get(stimulus)
        if trial is None:
            _missing(f"participant {pid} has no {stimulus!r} trial")
        return trial

    def resolve_window_param(value: str | None) -> int:
        if value is None:
            return finest_window
        if value in windows_by_label:
            return windows_by_label[value]
        try:
            w = int(value)
        except ValueError:
            w = -1
        if w not in built_windows:
            _bad("window", f"{value!r} is not a built window (have {sorted(windows_by_label)})")
        return w

    def resolve_mode_param(value: str) -> str:
        try:
            return geometry.parse_mode(value)
        except ValueError as exc:
            _bad("mode", str(exc))

    def filtered_ids(language: str | None, expertise: str | None,
                     correct: dict[str, bool | None]) -> list[int]:
        if language is not None and language not in LANGUAGES:
            _bad("language", f"expected one of {LANGUAGES}, got {language!r}")
        ids = []
        for pid, entry in dataset.participants.items():
            langs = {t.stimulus.language for t in entry.trials.values()}
            if language is not None and language not in langs:
                continue
            if expertise is not None:
                have = (entry.metadata.expertise or "") if entry.metadata else ""
                if have.lower() != expertise.lower():
                    continue
            meta_corr = entry.metadata.correctness if entry.metadata else {}
            if any(
                want is not None and meta_corr.get(stim) is not want
                for stim, want in correct.items()
            ):
                continue
            ids.append(pid)
        return sorted(ids)

    def path_payload(pid: int, series: ScanpathSeries, mode: str, samples: int) -> dict:
        knots = [p.fused for p in series.points]
        if not knots:
            return {"participant": pid, "vertices": [], "knot_indices": [],
                    "knot_times": [], "knot_count": 0, "path_length": 0.0}
        poly = geometry.interpolate(knots, mode, samples)
        return {
            "participant": pid,
            "vertices": [[x, y] for x, y in poly.vertices],
            "knot_indices": list(poly.knot_indices),
            "knot_times": [p.t for p in series.points],
            "knot_count": len(knots),
            "path_length": geometry.path_length(poly),
        }

    @app.get("/api/capabilities")
    def capabilities():
        languages = sorted(
            {t.stimulus.language for e in dataset.participants.values() for t in e.trials.values()}
        )
        stimulus_names = sorted(
            {name for e in dataset.participants.values() for name in e.trials}
        )
        return {
            "version": dataset.version,
            "windows": [{"label": lab, "window_len": w} for lab, w in dataset.windows],
            "modes": list(API_MODES),
            "languages": languages,
            "stimuli": stimulus_names,
            "plane": {"width": 1920, "height": 1080},
            "participant_count": len(dataset.participants),
        }

    @app.get("/api/participants")
    def participants(
        language: str | None = None,
        expertise: str | None = None,
        correct_rectangle: str | None = None,
        correct_vehicle: str | None = None,
    ):
        correct = {
            "rectangle": _parse_flag(correct_rectangle, "correct_rectangle"),
            "vehicle": _parse_flag(correct_vehicle, "correct_vehicle"),
        }
        result = []
        for pid in filtered_ids(language, expertise, correct):
            entry = dataset.participants[pid]
            meta = entry.metadata
            result.append(
                {
                    "id": pid,
                    "languages": sorted({t.stimulus.language for t in entry.trials.values()}),
                    "stimuli": sorted(entry.trials),
                    "expertise": meta.expertise if meta else None,
                    "correctness": {
                        stim: (meta.correctness.get(stim) if meta else None)
                        for stim in sorted(entry.trials)
                    },
                    "metadata_missing": meta is None,
                }
            )
        return result

    @app.get("/api/participants/random")
    def random_participant(
        language: str | None = None,
        expertise: str | None = None,
    ):
        ids = filtered_ids(language, expertise, {})
        if not ids:
            _missing("no participant matches the filter")
        with rng_lock:
            pid = ids[rng.randrange(len(ids))]
        return {"id": pid}

    @app.get("/api/scanpath/{pid}/{stimulus}")
    def scanpath(
        pid: int,
        stimulus: str,
        window: str | None = None,
        mode: str = "linear",
        benchmark: int | None = None,
        samples: int = Query(default=geometry.DEFAULT_SAMPLES_PER_SEGMENT, ge=1, le=256),
    ):
        trial = trial_or_404(pid, stimulus)
        w = resolve_window_param(window)
        mode = resolve_mode_param(mode)
        info = dataset.stimuli.get(trial.stimulus.key)
        series = trial.series.get(w)
        if series is None:
            _missing(f"window {w} not stored for participant {pid} / {stimulus}")
        payload = {
            "window": {"label": window_label(w), "window_len": w},
            "mode": mode.replace("_", "-"),
            "stimulus": {
                "name": stimulus,
                "language": trial.stimulus.language,
                "key": trial.stimulus.key,
                "width": info.width if info else 1920,
                "height": info.height if info else 1080,
            },
            "duration_s": trial.duration_s,
            "self": path_payload(pid, series, mode, samples),
            "benchmark": None,
        }
        if benchmark is not None:
            btrial = trial_or_404(benchmark, stimulus)
            bseries = btrial.series.get(w)
            if bseries is None:
                _missing(f"window {w} not stored for participant {benchmark} / {stimulus}")
            payload["benchmark"] = path_payload(benchmark, bseries, mode, samples)
        return payload

    @lru_cache(maxsize=128)
    def density_png(pid: int, stimulus: str, window: int, cell: int, sigma: float) -> bytes:
        from PIL import Image

        trial = dataset.participants[pid].trials[stimulus]
        config = GridConfig(cell_size=cell, sigma=sigma)
        grid = accumulate(trial.series[window].points, config)
        rgba = colorize(grid)
        buf = io.BytesIO()
        Image.fromarray(rgba, "RGBA").save(buf, format="PNG")
        return buf.getvalue()

    @app.get("/api/density/{pid}/{stimulus}")
    def density(
        pid: int,
        stimulus: str,
        window: str | None = None,
        cell: int = 16,
        sigma: float = 24.0,
    ):
        trial = trial_or_404(pid, stimulus)
        w = resolve_window_param(window)
        if w not in trial.series:
            _missing(f"window {w} not stored for participant {pid} / {stimulus}")
        if cell < 1 or cell > 1080:
            _bad("cell", f"cell size {cell} outside [1, 1080]")
        if sigma < 0:
            _bad("sigma", "sigma must be non-negative")
        png = density_png(pid, stimulus, w, cell, float(sigma))
        return Response(
            content=png,
            media_type="image/png",
            headers={"X-Plane-Width": "1920", "X-Plane-Height": "1080"},
        )

    @app.get("/api/metadata/{pid}")
    def metadata(pid: int):
        entry = participant_or_404(pid)
        if entry.metadata is None:
            return {"id": pid, "missing": True, "metadata": None}
        from .store import _metadata_to_json

        return {"id": pid, "missing": False, "metadata": _metadata_to_json(entry.metadata)}

    @app.get("/api/stimuli/{name}/image")
    def stimulus_image(name: str):
        info = dataset.stimuli.get(name)
        if info is None:
            _missing(f"unknown stimulus {name!r}")
        if stimuli_dir is None:
            _missing("no stimulus image directory configured")
        path = Path(stimuli_dir) / info.image
        if not path.is_file():
            _missing(f"stimulus image {info.image!r} not found")
        return Response(
            content=path.read_bytes(),
            media_type="image/png",
            headers={
                "X-Plane-Width": str(info.width),
                "X-Plane-Height": str(info.height),
            },
        )

    @app.get("/api/questions/{stimulus}")
    def question(stimulus: str):
        if stimulus not in questions:
            _missing(f"no question recorded for {stimulus!r}")
        return {"stimulus": stimulus, "question": questions[stimulus]}

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
