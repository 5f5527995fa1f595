"""Coding-region location by tracking the 3-base-periodicity walk.

The pipeline: compute the per-prefix 3-base periodicity of a DNA sequence
(the walk), smooth it with a nonlinear tracking-differentiator, label each
position exon or intron by the sign of the tracked derivative, drop
implausibly short interior segments, and score the result against a
reference annotation at nucleotide resolution.
"""

from ._backend import BACKEND, available_backends
from .errors import (
    InputFormatError,
    ParameterError,
    TbpWalkError,
    UndefinedMetricError,
    UsageError,
)
from .evaluation import ConfusionCounts, PredictionMetrics, confusion, metrics
from .io import (
    AnnotationRecord,
    IngestionPolicy,
    Substitution,
    annotation_to_segments,
    parse_annotation,
    parse_fasta,
    write_annotation,
    write_fasta,
)
from .periodicity import (
    BASE_ORDER,
    CodonPositionCounts,
    Normalization,
    NucleotideSequence,
    WalkTrajectory,
    count_codon_positions,
    dft_power_at_one_third,
    periodicity_walk,
    spectrum_background,
    three_base_power,
)
from .pipeline import PipelineConfig, run_pipeline
from .predictor import (
    Label,
    Segment,
    SegmentList,
    classify_by_derivative,
    predict,
    remove_short_segments,
)
from .rng import XorShift64Star
from .synth import generate_synthetic
from .td import (
    Nonlinearity,
    TDParams,
    TDState,
    TDTrace,
    fst,
    integrate_continuous,
    td_step,
    td_track,
    tracking_error_l1,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "TbpWalkError",
    "UsageError",
    "ParameterError",
    "InputFormatError",
    "UndefinedMetricError",
    "BASE_ORDER",
    "NucleotideSequence",
    "CodonPositionCounts",
    "Normalization",
    "WalkTrajectory",
    "count_codon_positions",
    "three_base_power",
    "dft_power_at_one_third",
    "spectrum_background",
    "periodicity_walk",
    "Nonlinearity",
    "TDParams",
    "TDState",
    "TDTrace",
    "fst",
    "td_step",
    "td_track",
    "integrate_continuous",
    "tracking_error_l1",
    "Label",
    "Segment",
    "SegmentList",
    "classify_by_derivative",
    "remove_short_segments",
    "predict",
    "ConfusionCounts",
    "PredictionMetrics",
    "confusion",
    "metrics",
    "IngestionPolicy",
    "Substitution",
    "AnnotationRecord",
    "parse_fasta",
    "parse_annotation",
    "annotation_to_segments",
    "write_fasta",
    "write_annotation",
    "generate_synthetic",
    "PipelineConfig",
    "run_pipeline",
    "XorShift64Star",
    "__version__",
]
