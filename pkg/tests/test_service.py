"""API contract tests against a served synthetic corpus."""
import concurrent.futures
import random

import pytest
from fastapi.testclient import TestClient

from codegaze.service import create_app

WINDOW_LABELS = {"50": 50, "150": 125, "250": 250}


@pytest.fixture(scope="module")
def client(service_corpus):
    app = create_app(
        service_corpus["dataset"],
        stimuli_dir=service_corpus["stimuli_dir"],
        seed=99,
    )
    return TestClient(app)


@pytest.fixture(scope="module")
def dataset(service_corpus):
    return service_corpus["dataset"]


class TestCapabilities:
    def test_options_come_from_dataset(self, client, dataset):
        caps = client.get("/api/capabilities").json()
        assert caps["windows"] == [{"label": lab, "window_len": w} for lab, w in dataset.windows]
        assert caps["modes"] == ["linear", "linear-closed", "step", "monotone"]
        assert set(caps["languages"]) == {"java", "scala"}
        assert set(caps["stimuli"]) == {"rectangle", "vehicle"}
        assert caps["participant_count"] == len(dataset.participants)


class TestParticipants:
    def test_all_ids_ascending(self, client, dataset):
        body = client.get("/api/participants").json()
        assert [p["id"] for p in body] == sorted(dataset.participants)

    def test_language_filter(self, client):
        java_ids = [p["id"] for p in client.get("/api/participants?language=java").json()]
        scala_ids = [p["id"] for p in client.get("/api/participants?language=scala").json()]
        assert java_ids == [2, 4]
        assert scala_ids == [1, 3]

    def test_expertise_filter_matches_metadata(self, client, service_corpus):
        table = service_corpus["metadata"]
        want = sorted(pid for pid, m in table.items() if (m.expertise or "").lower() == "high")
        got = [p["id"] for p in client.get("/api/participants?expertise=high").json()]
        assert got == want

    def test_empty_result_is_valid(self, client):
        r = client.get("/api/participants?expertise=grandmaster")
        assert r.status_code == 200 and r.json() == []

    def test_invalid_language_400(self, client):
        r = client.get("/api/participants?language=cobol")
        assert r.status_code == 400
        assert r.json()["detail"]["parameter"] == "language"

    def test_correctness_filter(self, client, service_corpus):
        table = service_corpus["metadata"]
        want = sorted(pid for pid, m in table.items() if m.correctness.get("rectangle") is True)
        got = [p["id"] for p in client.get("/api/participants?correct_rectangle=true").json()]
        assert got == want

    def test_summary_shape(self, client):
        p = client.get("/api/participants").json()[0]
        assert set(p) == {"id", "languages", "stimuli", "expertise", "correctness", "metadata_missing"}


class TestRandom:
    def test_seeded_sequence_reproducible(self, service_corpus):
        a = TestClient(create_app(service_corpus["dataset"], seed=7))
        b = TestClient(create_app(service_corpus["dataset"], seed=7))
        seq_a = [a.get("/api/participants/random").json()["id"] for _ in range(20)]
        seq_b = [b.get("/api/participants/random").json()["id"] for _ in range(20)]
        assert seq_a == seq_b

    def test_single_match_always_returned(self, client):
        ids = {client.get("/api/participants/random?language=java&expertise=x").status_code
               for _ in range(3)}
        # expertise=x matches nobody -> 404 every time
        assert ids == {404}

    def test_honors_language_filter(self, client):
        for _ in range(20):
            pid = client.get("/api/participants/random?language=scala").json()["id"]
            assert pid in (1, 3)

    def test_rough_uniformity(self, service_corpus):
        c = TestClient(create_app(service_corpus["dataset"], seed=123))
        counts = {}
        n = 2000
        for _ in range(n):
            pid = c.get("/api/participants/random").json()["id"]
            counts[pid] = counts.get(pid, 0) + 1
        assert set(counts) == set(service_corpus["dataset"].participants)
        for v in counts.values():
            assert abs(v / n - 0.25) < 0.05


class TestScanpath:
    def test_linear_returns_stored_knots(self, client, dataset):
        body = client.get("/api/scanpath/1/rectangle?window=50&mode=linear").json()
        stored = dataset.participants[1].trials["rectangle"].series[50].points
        assert body["self"]["vertices"] == [[p.fused[0], p.fused[1]] for p in stored]
        assert body["self"]["knot_times"] == [p.t for p in stored]
        assert body["self"]["knot_count"] == len(stored)
        assert body["benchmark"] is None

    def test_benchmark_self_identity(self, client):
        body = client.get("/api/scanpath/2/vehicle?window=250&mode=monotone&benchmark=2").json()
        assert body["benchmark"] == body["self"]

    def test_benchmark_other(self, client):
        body = client.get("/api/scanpath/1/vehicle?window=250&mode=step&benchmark=3").json()
        assert body["benchmark"]["participant"] == 3
        assert body["benchmark"]["vertices"] != body["self"]["vertices"]

    def test_window_label_150_means_125(self, client, dataset):
        body = client.get("/api/scanpath/1/rectangle?window=150&mode=linear").json()
        assert body["window"] == {"label": "150", "window_len": 125}
        # 6-second trial at 2 points per second
        duration = dataset.participants[1].trials["rectangle"].duration_s
        assert abs(body["self"]["knot_count"] - 2 * duration) <= 1

    def test_unknown_participant_404(self, client):
        assert client.get("/api/scanpath/77/rectangle").status_code == 404

    def test_unknown_stimulus_404(self, client):
        assert client.get("/api/scanpath/1/triangle").status_code == 404

    def test_unknown_window_400(self, client):
        r = client.get("/api/scanpath/1/rectangle?window=77")
        assert r.status_code == 400
        assert r.json()["detail"]["parameter"] == "window"

    def test_unknown_mode_400(self, client):
        r = client.get("/api/scanpath/1/rectangle?mode=spiral")
        assert r.status_code == 400
        assert r.json()["detail"]["parameter"] == "mode"

    def test_step_mode_axis_aligned(self, client):
        body = client.get("/api/scanpath/1/rectangle?window=250&mode=step").json()
        vs = body["self"]["vertices"]
        for (x1, y1), (x2, y2) in zip(vs, vs[1:]):
            assert x1 == x2 or y1 == y2

    def test_path_length_reported(self, client):
        body = client.get("/api/scanpath/1/rectangle?window=250&mode=linear").json()
        assert body["self"]["path_length"] > 0


class TestDensity:
    def test_png_deterministic(self, client):
        url = "/api/density/1/rectangle?window=50&cell=16&sigma=24"
        a = client.get(url)
        b = client.get(url)
        assert a.status_code == 200
        assert a.content[:8] == b"\x89PNG\r\n\x1a\n"
        assert a.content == b.content
        assert a.headers["x-plane-width"] == "1920"

    def test_bad_cell_400(self, client):
        assert client.get("/api/density/1/rectangle?cell=0").status_code == 400
        assert client.get("/api/density/1/rectangle?cell=5000").status_code == 400

    def test_bad_sigma_400(self, client):
        assert client.get("/api/density/1/rectangle?sigma=-4").status_code == 400

    def test_unknown_participant_404(self, client):
        assert client.get("/api/density/99/rectangle").status_code == 404


class TestMetadataEndpoint:
    def test_known_id_record(self, client, service_corpus):
        body = client.get("/api/metadata/1").json()
        assert body["missing"] is False
        record = body["metadata"]
        table = service_corpus["metadata"]
        assert record["age"] == table[1].age
        # every card field is present in the payload, unknowns as nulls
        for key in ("age", "gender", "english_level", "visual_aid", "makeup",
                    "mother_tongue", "expertise", "experiment_languages", "trial_order",
                    "time_programming_overall", "time_programming_language",
                    "responses", "correctness"):
            assert key in record

    def test_unknown_id_404(self, client):
        assert client.get("/api/metadata/1234").status_code == 404

    def test_missing_metadata_marker(self, service_corpus):
        ds = service_corpus["dataset"]
        stripped = ds.participants.copy()
        from codegaze.store import CompactDataset, ParticipantEntry

        stripped[1] = ParticipantEntry(metadata=None, trials=stripped[1].trials)
        ds2 = CompactDataset(ds.version, ds.windows, ds.stimuli, stripped, ds.build_report)
        c = TestClient(create_app(ds2))
        body = c.get("/api/metadata/1").json()
        assert body == {"id": 1, "missing": True, "metadata": None}


class TestStimuli:
    def test_image_bytes_and_plane_headers(self, client):
        r = client.get("/api/stimuli/rectangle_java/image")
        assert r.status_code == 200
        assert r.content[:8] == b"\x89PNG\r\n\x1a\n"
        assert r.headers["x-plane-width"] == "1920"
        assert r.headers["x-plane-height"] == "1080"

    def test_unknown_stimulus_404(self, client):
        assert client.get("/api/stimuli/circle_java/image").status_code == 404

    def test_question_sidecar_absent_404(self, client):
        assert client.get("/api/questions/rectangle").status_code == 404

    def test_question_sidecar(self, service_corpus, tmp_path):
        sidecar = tmp_path / "questions.json"
        sidecar.write_text('{"rectangle": "What does width() return?"}')
        c = TestClient(create_app(service_corpus["dataset"], questions_path=sidecar))
        assert c.get("/api/questions/rectangle").json()["question"].startswith("What")


class TestReadOnlyConcurrency:
    def test_interleavings_identical(self, client):
        urls = [
            "/api/participants",
            "/api/participants?language=java",
            "/api/metadata/1",
            "/api/metadata/3",
            "/api/scanpath/1/rectangle?window=50&mode=monotone",
            "/api/scanpath/2/vehicle?window=150&mode=step",
            "/api/scanpath/3/rectangle?window=250&mode=linear&benchmark=1",
            "/api/density/1/rectangle?cell=32&sigma=16",
        ] * 4
        reference = {url: client.get(url).content for url in set(urls)}
        rng = random.Random(0)
        shuffled = urls[:]
        rng.shuffle(shuffled)
        with concurrent.futures.ThreadPoolExecutor(max_workers=32) as pool:
            results = list(pool.map(lambda u: (u, client.get(u).content), shuffled))
        for url, content in results:
            assert content == reference[url]


class TestStaticUi:
    def test_bundle_served(self, service_corpus, tmp_path):
        (tmp_path / "index.html").write_text("<!doctype html><title>gaze</title>")
        c = TestClient(create_app(service_corpus["dataset"], ui_dir=tmp_path))
        r = c.get("/")
        assert r.status_code == 200 and "gaze" in r.text
        # API still wins over the static mount
        assert c.get("/api/capabilities").status_code == 200
