import json
import os
import subprocess
import sys

import pytest

from tbpwalk.cli import main
from tbpwalk.io import write_annotation, write_fasta
from tbpwalk.synth import generate_synthetic


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture()
def synth_dir(tmp_path):
    out = tmp_path / "synth"
    assert run_cli("synth", "--blocks", "1", "--exon-len", "600",
                   "--intron-len", "600", "--bias", "0.7", "--seed", "42",
                   "--out", str(out)) == 0
    return out


class TestSynthCommand:
    def test_writes_expected_files(self, synth_dir):
        assert (synth_dir / "synth-42.fasta").exists()
        assert (synth_dir / "synth-42.ann.tsv").exists()

    def test_fasta_matches_library_output(self, synth_dir):
        seq, _ = generate_synthetic(1, 600, 600, 0.7, 42)
        body = (synth_dir / "synth-42.fasta").read_text().splitlines()
        assert body[0] == ">synth-42"
        assert "".join(body[1:]) == seq.bases

    def test_bad_bias(self, tmp_path, capsys):
        rc = run_cli("synth", "--blocks", "1", "--exon-len", "10",
                     "--intron-len", "10", "--bias", "2.0", "--seed", "1",
                     "--out", str(tmp_path))
        assert rc == 1
        assert "bias" in capsys.readouterr().err


class TestPredictCommand:
    def test_grid_run_with_artifacts(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "run"
        rc = run_cli("predict", "--fasta", str(synth_dir / "synth-42.fasta"),
                     "--ann", str(synth_dir / "synth-42.ann.tsv"),
                     "--grid", "0.1,0.01,0.001,0.0001", "--out", str(out))
        assert rc == 0
        stdout = capsys.readouterr().out
        assert "best gain 0.01" in stdout
        metrics = json.loads((out / "metrics.json").read_text())
        assert {m["R"] for m in metrics} == {0.1, 0.01, 0.001, 0.0001}

    def test_report_to_stdout_without_out(self, synth_dir, capsys):
        rc = run_cli("predict", "--fasta", str(synth_dir / "synth-42.fasta"))
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["results"][0]["id"] == "synth-42"

    def test_gain_and_grid_conflict(self, synth_dir, capsys):
        rc = run_cli("predict", "--fasta", str(synth_dir / "synth-42.fasta"),
                     "--gain", "0.1", "--grid", "0.1,0.2")
        assert rc == 1
        assert "not allowed" in capsys.readouterr().err

    def test_missing_fasta_flag(self, capsys):
        assert run_cli("predict") == 1
        assert "--fasta" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert run_cli("predict", "--fasta", "/no/such/file.fa") == 2

    def test_malformed_fasta(self, tmp_path, capsys):
        bad = tmp_path / "bad.fa"
        bad.write_text(">s\nACQT\n")
        assert run_cli("predict", "--fasta", str(bad)) == 2
        assert "'Q'" in capsys.readouterr().err

    def test_single_class_truth_exit_code(self, tmp_path):
        seq, _ = generate_synthetic(1, 90, 60, 0.9, 3)
        fasta = tmp_path / "s.fa"
        ann = tmp_path / "s.tsv"
        write_fasta(fasta, [seq])
        # truth says the whole sequence is exon -> specificity undefined
        from tbpwalk.io import AnnotationRecord
        write_annotation(ann, [AnnotationRecord(seq.id, ((1, len(seq)),))])
        rc = run_cli("predict", "--fasta", str(fasta), "--ann", str(ann))
        assert rc == 3

    def test_skip_ambiguous_policy(self, tmp_path, capsys):
        fa = tmp_path / "n.fa"
        fa.write_text(">s\nACGTNNNACGTACGTACGT\n")
        rc = run_cli("predict", "--fasta", str(fa), "--policy",
                     "skip-ambiguous", "--seed", "4")
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        subs = report["sequences"][0]["substitutions"]
        assert [s[0] for s in subs] == [5, 6, 7]

    def test_bad_grid_text(self, synth_dir, capsys):
        rc = run_cli("predict", "--fasta", str(synth_dir / "synth-42.fasta"),
                     "--grid", "0.1,abc")
        assert rc == 1


class TestEvalCommand:
    def test_round_trip(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "run"
        run_cli("predict", "--fasta", str(synth_dir / "synth-42.fasta"),
                "--gain", "0.01", "--out", str(out))
        capsys.readouterr()
        rc = run_cli("eval", "--pred", str(out / "segments.csv"),
                     "--truth", str(synth_dir / "synth-42.ann.tsv"))
        assert rc == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["id"] == "synth-42"
        assert rows[0]["AC"] == pytest.approx(0.95125)

    def test_missing_truth_id(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "run"
        run_cli("predict", "--fasta", str(synth_dir / "synth-42.fasta"),
                "--gain", "0.01", "--out", str(out))
        other = tmp_path / "other.tsv"
        other.write_text("someone-else\t1\t10\n")
        rc = run_cli("eval", "--pred", str(out / "segments.csv"),
                     "--truth", str(other))
        assert rc == 1

    def test_bad_segments_header(self, tmp_path, capsys):
        seg = tmp_path / "segs.csv"
        seg.write_text("start,end\n1,10\n")
        truth = tmp_path / "t.tsv"
        truth.write_text("s\t1\t5\n")
        assert run_cli("eval", "--pred", str(seg), "--truth", str(truth)) == 2


class TestTopLevel:
    def test_no_subcommand_shows_help(self, capsys):
        assert run_cli() == 1
        assert "predict" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert run_cli("predict", "--fasta", "x", "--bogus") == 1

    def test_backend_subcommand(self, capsys):
        assert run_cli("backend") == 0
        assert capsys.readouterr().out.strip() in {"compiled", "python"}


def test_console_script_runs_pure(tmp_path):
    """The installed entry point works with the pure backend forced."""
    env = dict(os.environ, TBP_WALK_PURE="1")
    out = subprocess.run(
        [sys.executable, "-m", "tbpwalk.cli", "backend"],
        env=env, capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip() == "python"
