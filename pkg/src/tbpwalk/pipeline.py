"""End-to-end runs: walk, smooth, segment, score, emit artifacts.

A run covers every (sequence, gain) pair from the configured gain grid.
Pairs are computed concurrently (see TBP_WALK_THREADS) but aggregation and
all file writes are single-threaded and deterministically ordered by
sequence id, then gain, so a fixed (config, inputs, seed) triple produces
byte-identical artifacts on every platform and thread count.

Artifacts per run directory:
  <id>.R<gain>.trajectory.csv (or .json)  per-position walk, TD trace, label
  segments.csv / segments.R<gain>.csv     predicted segments per gain
  metrics.json                            per-(id, gain) confusion and rates
  report.json                             config echo, inputs, best gain
"""

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import ParameterError, UsageError
from .evaluation import metrics as score_metrics
from .io import IngestionPolicy, annotation_to_segments
from .periodicity import Normalization, normalize_walk, walk_raw_outputs
from .predictor import SegmentList, remove_short_segments
from .td import Nonlinearity, TDParams, td_track

__all__ = ["PipelineConfig", "SequenceResult", "run_pipeline", "thread_budget"]

THREADS_ENV = "TBP_WALK_THREADS"


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for a prediction run; defaults follow the library defaults."""

    gain: float = 0.001
    step: float = 1.0
    normalization: Normalization = Normalization.PER_BASE
    min_segment: int = 50
    policy: IngestionPolicy = IngestionPolicy.STRICT
    grid: tuple = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.gain <= 0:
            raise ParameterError(f"gain must be positive, got {self.gain}")
        if self.step <= 0:
            raise ParameterError(f"step must be positive, got {self.step}")
        if self.min_segment < 1:
            raise ParameterError(
                f"min_segment must be a positive integer, got {self.min_segment}"
            )
        if self.grid is not None:
            grid = tuple(float(r) for r in self.grid)
            if not grid:
                raise UsageError("the gain grid must not be empty")
            if any(r <= 0 for r in grid):
                raise ParameterError("every grid gain must be positive")
            if len(set(grid)) != len(grid):
                raise ParameterError("grid gains must be distinct")
            object.__setattr__(self, "grid", grid)

    def gains(self) -> tuple:
        return self.grid if self.grid is not None else (self.gain,)


@dataclass(frozen=True)
class SequenceResult:
    """Everything computed for one (sequence, gain) pair."""

    seq_id: str
    gain: float
    segments: SegmentList
    metrics: object = None  # PredictionMetrics when truth was available


def thread_budget(n_tasks: int) -> int:
    """Worker count from TBP_WALK_THREADS (unset or 0 means auto)."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(
            f"{THREADS_ENV} must be a nonnegative integer, got {raw!r}"
        ) from None
    if cap < 0:
        raise UsageError(f"{THREADS_ENV} must be >= 0, got {cap}")
    if cap == 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_tasks))


def _fmt_gain(r: float) -> str:
    return repr(float(r))


def _safe_name(seq_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in seq_id)


def run_pipeline(config: PipelineConfig, sequences, annotations=None,
                 out_dir=None, fmt: str = "csv") -> dict:
    """Predict (and score) every sequence at every configured gain.

    annotations, when given, must reference only ids present in sequences;
    sequences without an annotation are predicted but not scored.  Artifacts
    are written under out_dir when provided.  Returns the run report.
    """
    if fmt not in ("csv", "json"):
        raise UsageError(f"output format must be 'csv' or 'json', got {fmt!r}")
    seq_by_id = {}
    for seq in sequences:
        if seq.id in seq_by_id:
            raise UsageError(f"duplicate sequence id {seq.id!r}")
        seq_by_id[seq.id] = seq
    if not seq_by_id:
        raise UsageError("no sequences to process")

    truth_by_id = {}
    if annotations is not None:
        for rec in annotations:
            if rec.id not in seq_by_id:
                raise UsageError(
                    f"annotation references unknown sequence id {rec.id!r}"
                )
            truth_by_id[rec.id] = annotation_to_segments(
                rec, len(seq_by_id[rec.id])
            )

    gains = config.gains()
    ordered = sorted(seq_by_id.values(), key=lambda s: s.id)

    walks = {}

    def compute_walk(seq):
        power, bg_num = walk_raw_outputs(seq)
        return seq.id, power, normalize_walk(power, bg_num, config.normalization)

    def compute_pair(seq, gain):
        _, _, values = walks[seq.id]
        trace = td_track(values, TDParams(r=gain, h=config.step,
                                          nonlinearity=Nonlinearity.FHAN))
        segs = remove_short_segments(
            SegmentList.from_labels(trace.derivative > 0), config.min_segment
        )
        truth = truth_by_id.get(seq.id)
        scored = score_metrics(segs, truth) if truth is not None else None
        return SequenceResult(seq.id, gain, segs, scored), trace

    pairs = [(seq, gain) for seq in ordered for gain in gains]
    workers = thread_budget(len(pairs))
    if workers == 1:
        for seq in ordered:
            sid, power, values = compute_walk(seq)
            walks[sid] = (sid, power, values)
        computed = [compute_pair(seq, gain) for seq, gain in pairs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for sid, power, values in pool.map(compute_walk, ordered):
                walks[sid] = (sid, power, values)
            computed = list(
                pool.map(lambda sg: compute_pair(*sg), pairs)
            )

    results = {(res.seq_id, res.gain): (res, trace) for res, trace in computed}

    report = _build_report(config, ordered, gains, results)
    if out_dir is not None:
        _write_artifacts(Path(out_dir), ordered, gains, walks, results,
                         report, fmt)
    return report


def _build_report(config, ordered, gains, results) -> dict:
    # no backend or host fields here: artifacts must be byte-identical for a
    # fixed (config, inputs, seed) triple regardless of how they were computed
    report = {
        "config": {
            "gains": [float(g) for g in gains],
            "step": config.step,
            "normalization": config.normalization.value,
            "min_segment": config.min_segment,
            "policy": config.policy.value,
            "rng_seed": config.rng_seed,
        },
        "sequences": [
            {
                "id": seq.id,
                "length": len(seq),
                "substitutions": [list(s) for s in seq.substitutions],
            }
            for seq in ordered
        ],
        "results": [],
    }
    any_scored = False
    for seq in ordered:
        for gain in sorted(gains):
            res, _ = results[(seq.id, gain)]
            entry = {
                "id": seq.id,
                "R": gain,
                "segments": [
                    [s.start, s.end, s.label.value] for s in res.segments.segments
                ],
            }
            if res.metrics is not None:
                any_scored = True
                m = res.metrics
                entry["metrics"] = {
                    "TP": m.counts.tp, "TN": m.counts.tn,
                    "FP": m.counts.fp, "FN": m.counts.fn,
                    "Sn": m.sensitivity, "Sp": m.specificity,
                    "AC": m.approximate_correlation,
                }
            report["results"].append(entry)
    if any_scored:
        best = []
        for seq in ordered:
            scored = [
                (results[(seq.id, g)][0].metrics.approximate_correlation, g)
                for g in gains
                if results[(seq.id, g)][0].metrics is not None
            ]
            if scored:
                # ties go to the smaller gain
                top_ac = max(ac for ac, _ in scored)
                top_gain = min(g for ac, g in scored if ac == top_ac)
                best.append({"id": seq.id, "R": top_gain, "AC": top_ac})
        report["best"] = best
    return report


def _write_artifacts(out_dir, ordered, gains, walks, results, report, fmt):
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "." + fmt
    for seq in ordered:
        _, power, values = walks[seq.id]
        for gain in gains:
            res, trace = results[(seq.id, gain)]
            stem = f"{_safe_name(seq.id)}.R{_fmt_gain(gain)}.trajectory"
            _write_trajectory(out_dir / (stem + ext), seq, power, values,
                              trace, res.segments, fmt)

    for gain in gains:
        name = "segments" if len(gains) == 1 else f"segments.R{_fmt_gain(gain)}"
        _write_segments(out_dir / (name + ext), ordered, gain, results, fmt)

    metrics_rows = [
        {"id": entry["id"], "R": entry["R"], **entry["metrics"]}
        for entry in report["results"]
        if "metrics" in entry
    ]
    if metrics_rows:
        with open(out_dir / "metrics.json", "w", newline="") as handle:
            json.dump(metrics_rows, handle, indent=2)
            handle.write("\n")
    with open(out_dir / "report.json", "w", newline="") as handle:
        json.dump(report, handle, indent=2)
        handle.write("\n")


TRAJECTORY_COLUMNS = ("position", "base", "walk_raw", "walk_norm",
                      "smoothed", "derivative", "label")


def _trajectory_rows(seq, power, values, trace, segments):
    bases = seq.bases
    flags = segments.labels()
    for k in range(len(seq)):
        yield (
            k + 1,
            bases[k],
            int(power[k]),
            float(values[k]),
            float(trace.smoothed[k]),
            float(trace.derivative[k]),
            "exon" if flags[k] else "intron",
        )


def _write_trajectory(path, seq, power, values, trace, segments, fmt):
    rows = _trajectory_rows(seq, power, values, trace, segments)
    with open(path, "w", newline="") as handle:
        if fmt == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(TRAJECTORY_COLUMNS)
            writer.writerows(rows)
        else:
            json.dump([dict(zip(TRAJECTORY_COLUMNS, row)) for row in rows],
                      handle, indent=2)
            handle.write("\n")


def _write_segments(path, ordered, gain, results, fmt):
    rows = []
    for seq in ordered:
        res, _ = results[(seq.id, gain)]
        for seg in res.segments.segments:
            rows.append((seq.id, seg.start, seg.end, seg.label.value))
    with open(path, "w", newline="") as handle:
        if fmt == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("id", "start", "end", "label"))
            writer.writerows(rows)
        else:
            json.dump(
                [dict(zip(("id", "start", "end", "label"), row)) for row in rows],
                handle, indent=2)
            handle.write("\n")
