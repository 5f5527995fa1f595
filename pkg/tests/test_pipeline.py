import csv
import json

import numpy as np
import pytest

from tbpwalk.errors import ParameterError, UsageError
from tbpwalk.io import AnnotationRecord
from tbpwalk.periodicity import Normalization, NucleotideSequence
from tbpwalk.pipeline import PipelineConfig, run_pipeline, thread_budget
from tbpwalk.synth import generate_synthetic


@pytest.fixture(scope="module")
def synth_pair():
    return generate_synthetic(1, 600, 600, 0.7, 42)


class TestConfig:
    def test_defaults(self):
        c = PipelineConfig()
        assert c.gain == 0.001 and c.step == 1.0
        assert c.normalization is Normalization.PER_BASE
        assert c.gains() == (0.001,)

    def test_grid_overrides_single_gain(self):
        c = PipelineConfig(grid=(0.1, 0.01))
        assert c.gains() == (0.1, 0.01)

    @pytest.mark.parametrize("kwargs", [
        dict(gain=0.0), dict(gain=-1.0), dict(step=0.0), dict(min_segment=0),
        dict(grid=(0.1, -0.5)), dict(grid=(0.1, 0.1)),
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises((ParameterError, UsageError)):
            PipelineConfig(**kwargs)

    def test_rejects_empty_grid(self):
        with pytest.raises(UsageError):
            PipelineConfig(grid=())


class TestThreadBudget:
    def test_auto(self, monkeypatch):
        monkeypatch.delenv("TBP_WALK_THREADS", raising=False)
        assert 1 <= thread_budget(100) <= 100

    def test_explicit_cap(self, monkeypatch):
        monkeypatch.setenv("TBP_WALK_THREADS", "2")
        assert thread_budget(100) == 2
        assert thread_budget(1) == 1

    def test_zero_means_auto(self, monkeypatch):
        monkeypatch.setenv("TBP_WALK_THREADS", "0")
        assert thread_budget(4) >= 1

    def test_garbage_rejected(self, monkeypatch):
        monkeypatch.setenv("TBP_WALK_THREADS", "lots")
        with pytest.raises(UsageError):
            thread_budget(4)
        monkeypatch.setenv("TBP_WALK_THREADS", "-3")
        with pytest.raises(UsageError):
            thread_budget(4)


class TestRunPipeline:
    def test_report_with_truth(self, synth_pair):
        seq, ann = synth_pair
        cfg = PipelineConfig(grid=(0.1, 0.01, 0.001, 0.0001))
        report = run_pipeline(cfg, [seq], [ann])
        acs = {e["R"]: e["metrics"]["AC"] for e in report["results"]}
        assert len(acs) == 4
        assert report["best"] == [
            {"id": "synth-42", "R": 0.01, "AC": max(acs.values())}]
        assert report["best"][0]["AC"] >= 0.85

    def test_report_without_truth(self, synth_pair):
        seq, _ = synth_pair
        report = run_pipeline(PipelineConfig(), [seq])
        assert "best" not in report
        assert all("metrics" not in e for e in report["results"])
        assert report["results"][0]["segments"]

    def test_dangling_annotation_id(self, synth_pair):
        seq, _ = synth_pair
        with pytest.raises(UsageError, match="unknown sequence id"):
            run_pipeline(PipelineConfig(), [seq],
                         [AnnotationRecord("nope", ((1, 5),))])

    def test_duplicate_sequence_ids(self, synth_pair):
        seq, _ = synth_pair
        with pytest.raises(UsageError, match="duplicate"):
            run_pipeline(PipelineConfig(), [seq, seq])

    def test_no_sequences(self):
        with pytest.raises(UsageError):
            run_pipeline(PipelineConfig(), [])

    def test_grid_entries_independent(self, synth_pair):
        """Scanning gains together or separately gives identical per-gain output."""
        seq, ann = synth_pair
        together = run_pipeline(
            PipelineConfig(grid=(0.01, 0.001)), [seq], [ann])
        for gain in (0.01, 0.001):
            alone = run_pipeline(PipelineConfig(gain=gain), [seq], [ann])
            a = [e for e in together["results"] if e["R"] == gain][0]
            b = alone["results"][0]
            assert a["segments"] == b["segments"]
            assert a["metrics"] == b["metrics"]

    def test_thread_count_invariance(self, synth_pair, monkeypatch):
        seq, ann = synth_pair
        cfg = PipelineConfig(grid=(0.1, 0.001))
        monkeypatch.setenv("TBP_WALK_THREADS", "1")
        serial = run_pipeline(cfg, [seq], [ann])
        monkeypatch.setenv("TBP_WALK_THREADS", "4")
        threaded = run_pipeline(cfg, [seq], [ann])
        assert serial == threaded

    def test_multiple_sequences_sorted(self):
        s1, a1 = generate_synthetic(1, 120, 90, 0.8, 1)
        s2, a2 = generate_synthetic(1, 120, 90, 0.8, 2)
        report = run_pipeline(PipelineConfig(), [s2, s1], [a2, a1])
        ids = [e["id"] for e in report["results"]]
        assert ids == sorted(ids)


class TestArtifacts:
    def test_files_written(self, synth_pair, tmp_path):
        seq, ann = synth_pair
        cfg = PipelineConfig(grid=(0.01, 0.001))
        run_pipeline(cfg, [seq], [ann], out_dir=tmp_path)
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == [
            "metrics.json",
            "report.json",
            "segments.R0.001.csv",
            "segments.R0.01.csv",
            "synth-42.R0.001.trajectory.csv",
            "synth-42.R0.01.trajectory.csv",
        ]

    def test_single_gain_segment_name(self, synth_pair, tmp_path):
        seq, _ = synth_pair
        run_pipeline(PipelineConfig(), [seq], out_dir=tmp_path)
        assert (tmp_path / "segments.csv").exists()
        assert not (tmp_path / "metrics.json").exists()

    def test_trajectory_file_recheckable(self, synth_pair, tmp_path):
        """A reader can verify the smoothing identity from the file alone."""
        seq, _ = synth_pair
        run_pipeline(PipelineConfig(gain=0.01), [seq], out_dir=tmp_path)
        with open(tmp_path / "synth-42.R0.01.trajectory.csv") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            assert header == ["position", "base", "walk_raw", "walk_norm",
                              "smoothed", "derivative", "label"]
            rows = list(reader)
        assert len(rows) == len(seq)
        smoothed = np.array([float(r[4]) for r in rows])
        deriv = np.array([float(r[5]) for r in rows])
        assert np.array_equal(smoothed[:-1] + 1.0 * deriv[:-1], smoothed[1:])
        # per-base normalization is re-derivable from walk_raw
        raw = np.array([int(r[2]) for r in rows], dtype=np.int64)
        norm = np.array([float(r[3]) for r in rows])
        k = np.arange(1, len(rows) + 1, dtype=np.float64)
        assert np.array_equal(raw.astype(np.float64) / k, norm)
        assert {r[6] for r in rows} <= {"exon", "intron"}

    def test_byte_determinism_rerun(self, synth_pair, tmp_path):
        seq, ann = synth_pair
        cfg = PipelineConfig(grid=(0.1, 0.001))
        d1, d2 = tmp_path / "a", tmp_path / "b"
        run_pipeline(cfg, [seq], [ann], out_dir=d1)
        run_pipeline(cfg, [seq], [ann], out_dir=d2)
        files = sorted(p.name for p in d1.iterdir())
        assert files == sorted(p.name for p in d2.iterdir())
        for name in files:
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_json_format(self, synth_pair, tmp_path):
        seq, ann = synth_pair
        run_pipeline(PipelineConfig(gain=0.01), [seq], [ann],
                     out_dir=tmp_path, fmt="json")
        seg_rows = json.loads((tmp_path / "segments.json").read_text())
        assert seg_rows[0]["id"] == "synth-42"
        assert seg_rows[0]["start"] == 1
        traj = json.loads(
            (tmp_path / "synth-42.R0.01.trajectory.json").read_text())
        assert len(traj) == len(seq)
        assert set(traj[0]) == {"position", "base", "walk_raw", "walk_norm",
                                "smoothed", "derivative", "label"}

    def test_bad_format_rejected(self, synth_pair):
        seq, _ = synth_pair
        with pytest.raises(UsageError):
            run_pipeline(PipelineConfig(), [seq], fmt="xml")

    def test_metrics_json_schema(self, synth_pair, tmp_path):
        seq, ann = synth_pair
        run_pipeline(PipelineConfig(gain=0.01), [seq], [ann], out_dir=tmp_path)
        rows = json.loads((tmp_path / "metrics.json").read_text())
        assert len(rows) == 1
        row = rows[0]
        assert set(row) == {"id", "R", "TP", "TN", "FP", "FN", "Sn", "Sp", "AC"}
        assert row["TP"] + row["TN"] + row["FP"] + row["FN"] == len(seq)
        assert row["AC"] == (row["Sn"] + row["Sp"]) / 2
