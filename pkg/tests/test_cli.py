"""End-to-end CLI: synth -> preprocess -> stats."""
from codegaze import store
from codegaze.cli import main


def test_synth_preprocess_stats(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    out = tmp_path / "demo.gaze.json"

    rc = main(["synth", "--output", str(corpus), "--participants", "3",
               "--seed", "11", "--trial-seconds", "4", "--corrupt", "3:headerless"])
    assert rc == 0
    assert (corpus / "1_session.tsv").exists()
    assert (corpus / "stimuli" / "rectangle_java.png").exists()

    rc = main(["preprocess", "--input", str(corpus),
               "--metadata", str(corpus / "metadata.csv"),
               "--output", str(out), "--windows", "50,150,250", "--gzip"])
    assert rc == 0
    assert out.exists() and out.with_suffix(".json.gz").exists()
    dataset = store.load_dataset(out)
    assert sorted(dataset.participants) == [1, 2]
    assert [w for _, w in dataset.windows] == [50, 125, 250]
    assert dataset.build_report.skipped_files[0][0] == "3_session.tsv"

    capsys.readouterr()
    rc = main(["stats", "--dataset", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "participants: 2" in text
    assert "rectangle: 2 trials" in text
    assert "skipped files" in text


def test_preprocess_custom_patterns(tmp_path):
    corpus = tmp_path / "corpus"
    main(["synth", "--output", str(corpus), "--participants", "1",
          "--seed", "2", "--trial-seconds", "3"])
    patterns = tmp_path / "patterns.json"
    patterns.write_text('{"vehicle": {"pattern": "vehicle_[a-z]+", "regex": true}}')
    out = tmp_path / "ds.gaze.json"
    rc = main(["preprocess", "--input", str(corpus),
               "--metadata", str(corpus / "metadata.csv"),
               "--output", str(out), "--windows", "250", "--patterns", str(patterns)])
    assert rc == 0
    dataset = store.load_dataset(out)
    assert set(dataset.participants[1].trials) == {"rectangle", "vehicle"}


def test_serve_requires_dataset(monkeypatch, capsys):
    monkeypatch.delenv("CODEGAZE_DATASET", raising=False)
    rc = main(["serve"])
    assert rc == 2
