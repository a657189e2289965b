"""Command-line entry points: preprocess, serve, stats, synth."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import store, synth
from .ingest import discover_recordings
from .metadata import load_metadata
from .resample import resolve_window
from .segmentation import load_patterns


def _parse_windows(text: str) -> list[int]:
    return [resolve_window(part.strip()) for part in text.split(",") if part.strip()]


def cmd_preprocess(args) -> int:
    skipped_files: list[tuple[str, str]] = []
    refs = discover_recordings(args.input, extension=args.extension, skipped=skipped_files)
    rejections: list[tuple[int, str]] = []
    table = load_metadata(args.metadata, rejected=rejections) if args.metadata else {}
    patterns = load_patterns(args.patterns) if args.patterns else None
    dataset = store.build_dataset(
        refs,
        table,
        windows=_parse_windows(args.windows),
        patterns=patterns,
        metadata_rejections=rejections,
    )
    out = store.save_dataset(dataset, args.output, gzip_sibling=args.gzip)
    report = dataset.build_report
    print(f"wrote {out} ({out.stat().st_size} bytes)")
    print(f"participants: {report.participants_ok}, series: {report.series_built}")
    for name, reason in list(skipped_files) + list(report.skipped_files):
        print(f"  skipped {name}: {reason}")
    if report.skipped_rows:
        print(f"  skipped rows: {report.skipped_rows}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    dataset_path = args.dataset or os.environ.get("CODEGAZE_DATASET")
    if not dataset_path:
        print("serve: --dataset or CODEGAZE_DATASET is required", file=sys.stderr)
        return 2
    port = args.port if args.port is not None else int(os.environ.get("CODEGAZE_PORT", "8000"))
    dataset = store.load_dataset(dataset_path)
    app = create_app(
        dataset,
        stimuli_dir=args.stimuli,
        seed=args.seed,
        ui_dir=args.ui,
        questions_path=args.questions,
    )
    uvicorn.run(app, host=args.host, port=port)
    return 0


def cmd_stats(args) -> int:
    dataset = store.load_dataset(args.dataset)
    report = dataset.build_report
    print(f"dataset version {dataset.version}")
    print(f"windows: {', '.join(f'{lab} (len {w})' for lab, w in dataset.windows)}")
    print(f"participants: {len(dataset.participants)}")
    per_stim: dict[str, list[float]] = {}
    series_count = 0
    for entry in dataset.participants.values():
        for name, trial in entry.trials.items():
            per_stim.setdefault(name, []).append(trial.duration_s)
            series_count += len(trial.series)
    for name in sorted(per_stim):
        durations = per_stim[name]
        mean_s = sum(durations) / len(durations)
        print(f"  {name}: {len(durations)} trials, mean duration {mean_s:.1f}s")
    print(f"series stored: {series_count}")
    size = Path(args.dataset).stat().st_size
    print(f"encoded size: {size} bytes")
    print(
        "build report: "
        f"{report.files_discovered} files discovered, "
        f"{len(report.skipped_files)} skipped files, "
        f"{report.skipped_rows} skipped rows, "
        f"{len(report.skipped_segments)} skipped segments"
    )
    return 0


def cmd_synth(args) -> int:
    corrupt = {}
    for spec in args.corrupt or []:
        pid, _, mode = spec.partition(":")
        corrupt[int(pid)] = mode or "headerless"
    paths, meta = synth.write_corpus(
        args.output,
        n_participants=args.participants,
        seed=args.seed,
        trial_s=args.trial_seconds,
        corrupt=corrupt,
    )
    images = synth.write_stimulus_images(Path(args.output) / "stimuli")
    print(f"wrote {len(paths)} recordings, metadata at {meta}, {len(images)} stimulus images")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codegaze",
                                     description="Eye-movement analytics for code reading studies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="build a compact dataset from a raw TSV corpus")
    p.add_argument("--input", required=True, help="corpus directory (searched recursively)")
    p.add_argument("--metadata", help="participant metadata table (csv/tsv)")
    p.add_argument("--output", required=True, help="output dataset path (.gaze.json)")
    p.add_argument("--windows", default="50,150,250",
                   help="comma-separated window lengths or preset labels 50/150/250")
    p.add_argument("--patterns", help="JSON file with stimulus match rules")
    p.add_argument("--extension", default=".tsv")
    p.add_argument("--gzip", action="store_true", help="also write a .gz sibling")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("serve", help="serve the dashboard API over a dataset")
    p.add_argument("--dataset", help="dataset path (or CODEGAZE_DATASET)")
    p.add_argument("--stimuli", help="directory with stimulus images")
    p.add_argument("--ui", help="directory with the built dashboard bundle")
    p.add_argument("--questions", help="JSON sidecar with per-stimulus question text")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, help="port (or CODEGAZE_PORT, default 8000)")
    p.add_argument("--seed", type=int, help="seed the random-participant picker")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("stats", help="summarize a built dataset")
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("synth", help="generate a synthetic demo corpus")
    p.add_argument("--output", required=True, help="corpus output directory")
    p.add_argument("--participants", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial-seconds", type=float, default=30.0)
    p.add_argument("--corrupt", nargs="*", metavar="ID[:MODE]",
                   help="corrupt these participants (headerless or no_stimulus)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
