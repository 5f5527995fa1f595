"""Command-line front end.

Subcommands: predict (FASTA in, trajectories/segments/metrics out), synth
(write a synthetic benchmark sequence plus its truth annotation), and eval
(score a segments file against an annotation).

Exit codes: 0 success, 1 usage or configuration error, 2 input-format
error, 3 undefined metric (single-class truth).
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from ._backend import BACKEND
from .errors import InputFormatError, UndefinedMetricError, UsageError
from .evaluation import metrics as score_metrics
from .io import (
    IngestionPolicy,
    annotation_to_segments,
    parse_annotation,
    parse_fasta,
    write_annotation,
    write_fasta,
)
from .periodicity import Normalization
from .pipeline import PipelineConfig, run_pipeline
from .predictor import Label, Segment, SegmentList
from .synth import generate_synthetic

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags, which collides with the
    # input-format code; route through UsageError so main() maps it to 1
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _gain_list(text: str):
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated list of numbers, got {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tbp-walk",
                     description="Locate coding regions by tracking the "
                                 "3-base-periodicity walk of a DNA sequence.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("predict", parents=[], add_help=True,
                       help="run the walk + smoothing + segmentation pipeline")
    p.add_argument("--fasta", required=True, help="input FASTA file")
    p.add_argument("--ann", help="reference exon annotation (3-column TSV)")
    gains = p.add_mutually_exclusive_group()
    gains.add_argument("--gain", type=float, default=None,
                       help="differentiator gain R (default 0.001)")
    gains.add_argument("--grid", type=_gain_list, default=None, metavar="R1,R2,...",
                       help="comma-separated gains to scan; best R is reported")
    p.add_argument("--step", type=float, default=1.0,
                   help="sampling step h (default 1)")
    p.add_argument("--norm", default=Normalization.PER_BASE.value,
                   choices=[n.value for n in Normalization],
                   help="walk normalization (default per-base)")
    p.add_argument("--min-segment", type=int, default=50,
                   help="shortest believable interior segment (default 50)")
    p.add_argument("--policy", default=IngestionPolicy.STRICT.value,
                   choices=[q.value for q in IngestionPolicy],
                   help="how to treat IUPAC ambiguity codes (default strict)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for skip-ambiguous replacements (default 0)")
    p.add_argument("--out", help="directory for trajectory/segment/metric files")
    p.add_argument("--format", default="csv", choices=["csv", "json"],
                   help="artifact serialization (default csv)")
    p.set_defaults(func=_cmd_predict)

    s = sub.add_parser("synth", help="generate a codon-biased benchmark sequence")
    s.add_argument("--blocks", type=int, required=True,
                   help="number of exon blocks")
    s.add_argument("--exon-len", type=int, required=True,
                   help="length of each exon block (bp)")
    s.add_argument("--intron-len", type=int, required=True,
                   help="length of each intron block (bp)")
    s.add_argument("--bias", type=float, required=True,
                   help="probability of the designated base per codon position")
    s.add_argument("--seed", type=int, required=True,
                   help="generator seed (unsigned 64-bit)")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=_cmd_synth)

    e = sub.add_parser("eval", help="score a segments file against an annotation")
    e.add_argument("--pred", required=True,
                   help="predicted segments file (csv or json from predict)")
    e.add_argument("--truth", required=True,
                   help="reference exon annotation (3-column TSV)")
    e.set_defaults(func=_cmd_eval)

    v = sub.add_parser("backend", help="print the active compute backend")
    v.set_defaults(func=_cmd_backend)
    return parser


def _cmd_predict(args) -> int:
    policy = IngestionPolicy(args.policy)
    config = PipelineConfig(
        gain=args.gain if args.gain is not None else 0.001,
        step=args.step,
        normalization=Normalization(args.norm),
        min_segment=args.min_segment,
        policy=policy,
        grid=args.grid,
        rng_seed=args.seed,
    )
    sequences = parse_fasta(args.fasta, policy, args.seed)
    annotations = parse_annotation(args.ann) if args.ann else None
    report = run_pipeline(config, sequences, annotations,
                          out_dir=args.out, fmt=args.format)
    if args.out is None:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for item in report.get("best", []):
            print(f"{item['id']}: best gain {item['R']} (AC {item['AC']:.4f})")
        print(f"artifacts written to {args.out} ({BACKEND} backend)")
    return 0


def _cmd_synth(args) -> int:
    seq, ann = generate_synthetic(args.blocks, args.exon_len,
                                  args.intron_len, args.bias, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fasta_path = out / f"{seq.id}.fasta"
    ann_path = out / f"{seq.id}.ann.tsv"
    write_fasta(fasta_path, [seq])
    write_annotation(ann_path, [ann])
    print(f"wrote {fasta_path} and {ann_path}")
    return 0


def _read_segments_file(path) -> dict:
    """Load a segments artifact (csv or json) back into SegmentLists by id."""
    text = Path(path).read_text()
    rows = []
    if str(path).endswith(".json"):
        try:
            for obj in json.loads(text):
                rows.append((obj["id"], obj["start"], obj["end"], obj["label"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputFormatError(f"bad segments JSON {path}: {exc}") from None
    else:
        reader = csv.reader(text.splitlines())
        header = next(reader, None)
        if header != ["id", "start", "end", "label"]:
            raise InputFormatError(
                f"bad segments CSV header in {path}: expected "
                f"id,start,end,label, got {header}"
            )
        for line_no, row in enumerate(reader, 2):
            if len(row) != 4:
                raise InputFormatError(
                    f"expected 4 fields at line {line_no} of {path}"
                )
            rows.append(tuple(row))
    by_id = {}
    for seq_id, start, end, label in rows:
        try:
            seg = Segment(int(start), int(end), Label(label))
        except ValueError as exc:
            raise InputFormatError(f"bad segment row in {path}: {exc}") from None
        by_id.setdefault(seq_id, []).append(seg)
    out = {}
    for seq_id, segs in by_id.items():
        try:
            out[seq_id] = SegmentList(tuple(segs), segs[-1].end)
        except UsageError as exc:
            raise InputFormatError(
                f"segments for {seq_id!r} in {path} do not form a valid "
                f"cover: {exc}"
            ) from None
    return out


def _cmd_eval(args) -> int:
    predicted = _read_segments_file(args.pred)
    truth_records = {rec.id: rec for rec in parse_annotation(args.truth)}
    missing = sorted(set(predicted) - set(truth_records))
    if missing:
        raise UsageError(
            f"no annotation for predicted sequence id(s): {', '.join(missing)}"
        )
    rows = []
    for seq_id in sorted(predicted):
        pred = predicted[seq_id]
        truth = annotation_to_segments(truth_records[seq_id], pred.n)
        m = score_metrics(pred, truth)
        rows.append({
            "id": seq_id,
            "TP": m.counts.tp, "TN": m.counts.tn,
            "FP": m.counts.fp, "FN": m.counts.fn,
            "Sn": m.sensitivity, "Sp": m.specificity,
            "AC": m.approximate_correlation,
        })
    json.dump(rows, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_backend(args) -> int:
    print(BACKEND)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help(sys.stderr)
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except UndefinedMetricError as exc:
        print(f"metric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
