"""Position-level scoring of exon predictions against reference labels.

Exon is the positive class.  Sensitivity is the fraction of true exon
positions recovered, specificity the fraction of true intron positions
kept intron, and the approximate correlation is their arithmetic mean.
"""

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedMetricError, UsageError
from .predictor import SegmentList

__all__ = ["ConfusionCounts", "PredictionMetrics", "confusion", "metrics"]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class PredictionMetrics:
    sensitivity: float
    specificity: float
    approximate_correlation: float
    counts: ConfusionCounts


def confusion(predicted: SegmentList, truth: SegmentList) -> ConfusionCounts:
    """Count per-position agreement between two segmentations of equal length."""
    if predicted.n != truth.n:
        raise UsageError(
            f"prediction covers {predicted.n} positions but truth covers {truth.n}"
        )
    p = predicted.labels().astype(bool)
    t = truth.labels().astype(bool)
    tp = int(np.count_nonzero(p & t))
    tn = int(np.count_nonzero(~p & ~t))
    fp = int(np.count_nonzero(p & ~t))
    fn = int(np.count_nonzero(~p & t))
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def metrics(predicted: SegmentList, truth: SegmentList) -> PredictionMetrics:
    """Sensitivity, specificity and their mean for a prediction.

    Raises UndefinedMetricError when the truth contains only one class, since
    the rate for the missing class has a zero denominator.
    """
    c = confusion(predicted, truth)
    if c.tp + c.fn == 0:
        raise UndefinedMetricError(
            "sensitivity is undefined: the reference contains no exon positions"
        )
    if c.tn + c.fp == 0:
        raise UndefinedMetricError(
            "specificity is undefined: the reference contains no intron positions"
        )
    sn = c.tp / (c.tp + c.fn)
    sp = c.tn / (c.tn + c.fp)
    return PredictionMetrics(
        sensitivity=sn,
        specificity=sp,
        approximate_correlation=(sn + sp) / 2.0,
        counts=c,
    )
