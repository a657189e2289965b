"""Shared fixtures: in-memory recording builders and a small served corpus."""
from __future__ import annotations

from pathlib import Path

import pytest

from codegaze import store, synth
from codegaze.ingest import MessageEvent, RawRecording, RawSample, RecordingRef, discover_recordings
from codegaze.metadata import load_metadata
from codegaze.segmentation import StimulusKind, StimulusSegment

TICK = 4000  # microseconds between samples at 250 Hz


def make_ref(pid: int = 1, name: str | None = None) -> RecordingRef:
    name = name or f"{pid}_test.tsv"
    return RecordingRef(path=Path("/nonexistent") / name, file_name=name, participant_id=pid)


def make_sample(time: int, l=(800.0, 400.0), r=(805.0, 402.0)) -> RawSample:
    return RawSample(time=time, l_raw=None, r_raw=None, l_por=l, r_por=r)


def make_recording(samples, messages, pid: int = 1) -> RawRecording:
    return RawRecording(
        ref=make_ref(pid),
        samples=tuple(samples),
        messages=tuple(messages),
        header_lines_removed=0,
    )


def make_segment(samples, kind: StimulusKind | None = None,
                 start_time: int | None = None, end_time: int | None = None) -> StimulusSegment:
    samples = tuple(samples)
    return StimulusSegment(
        stimulus=kind or StimulusKind("rectangle", "java"),
        start_index=0,
        end_index=len(samples),
        start_time=samples[0].time if start_time is None else start_time,
        end_time=samples[-1].time + TICK if end_time is None else end_time,
        samples=samples,
    )


def ramp_samples(n: int, start_time: int = 0, x0: float = 100.0, step: float = 1.0):
    """n fully valid samples with x ramping, distinct per-eye offsets."""
    return [
        make_sample(
            start_time + i * TICK,
            l=(x0 + i * step, 300.0 + 0.5 * i),
            r=(x0 + i * step + 4.0, 300.0 + 0.5 * i + 1.0),
        )
        for i in range(n)
    ]


def random_dataset(rng) -> store.CompactDataset:
    """A structurally varied, quantized dataset built straight in memory."""
    from codegaze.metadata import ParticipantMetadata
    from codegaze.resample import GazePoint, ScanpathSeries

    windows = sorted(rng.sample([25, 50, 125, 250], k=rng.randrange(1, 4)))
    stimuli = {}
    participants = {}
    for pid in sorted(rng.sample(range(1, 40), k=rng.randrange(1, 4))):
        trials = {}
        for name in rng.sample(["rectangle", "vehicle"], k=rng.randrange(1, 3)):
            lang = rng.choice(["java", "scala"])
            kind = StimulusKind(name, lang)
            stimuli[kind.key] = store.StimulusInfo(f"{kind.key}.png", 1920, 1080)
            series = {}
            for w in windows:
                points = []
                t = 0.0
                for _ in range(rng.randrange(0, 12)):
                    t += round(rng.uniform(0.05, 1.5), 3)
                    has_l, has_r = rng.random() < 0.8, rng.random() < 0.8
                    if not (has_l or has_r):
                        has_l = True
                    l = (round(rng.uniform(0, 1920), 2), round(rng.uniform(0, 1080), 2)) if has_l else None
                    r = (round(rng.uniform(0, 1920), 2), round(rng.uniform(0, 1080), 2)) if has_r else None
                    fused = l or r
                    points.append(GazePoint(
                        t=round(t, 3), l=l, r=r, fused=fused,
                        valid_fraction=round(rng.choice([1.0, rng.random()]), 3) or 0.001,
                    ))
                series[w] = ScanpathSeries(
                    participant_id=pid, stimulus=kind, window_len=w, points=tuple(points))
            trials[name] = store.TrialData(
                stimulus=kind, duration_s=round(rng.uniform(1, 90), 3), series=series)
        meta = None
        if rng.random() < 0.7:
            meta = ParticipantMetadata(
                id=pid, age=rng.choice([None, rng.randrange(18, 60)]),
                gender=rng.choice([None, "male", "female"]),
                expertise=rng.choice([None, "none", "low", "medium", "high"]),
                experiment_languages={"rectangle": "java"},
                trial_order=("rectangle", "vehicle"),
                responses={"rectangle": "A"},
                correctness={"rectangle": rng.random() < 0.5},
            )
        participants[pid] = store.ParticipantEntry(metadata=meta, trials=trials)
    report = store.BuildReport(
        files_discovered=len(participants) + 1,
        participants_ok=len(participants),
        series_built=sum(len(t.series) for p in participants.values() for t in p.trials.values()),
        skipped_rows=rng.randrange(0, 5),
        skipped_files=(("broken.tsv", "no column-header row"),) if rng.random() < 0.5 else (),
    )
    return store.CompactDataset(
        version=store.FORMAT_VERSION,
        windows=tuple((store.window_label(w), w) for w in windows),
        stimuli=dict(sorted(stimuli.items())),
        participants=participants,
        build_report=report,
    )


@pytest.fixture(scope="session")
def service_corpus(tmp_path_factory):
    """4-participant corpus (2 java, 2 scala), stimulus images, built dataset."""
    root = tmp_path_factory.mktemp("service_corpus")
    corpus_dir = root / "raw"
    paths, meta_path = synth.write_corpus(corpus_dir, n_participants=4, seed=7, trial_s=6.0)
    stimuli_dir = root / "stimuli"
    synth.write_stimulus_images(stimuli_dir)
    refs = discover_recordings(corpus_dir)
    table = load_metadata(meta_path)
    dataset = store.build_dataset(refs, table, windows=[50, 125, 250])
    return {
        "dataset": dataset,
        "stimuli_dir": stimuli_dir,
        "metadata": table,
        "corpus_dir": corpus_dir,
    }
