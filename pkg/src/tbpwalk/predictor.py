"""Exon/intron calling from a periodicity walk.

The walk is smoothed with the discrete tracking-differentiator; a position is
called exon when the smoothed derivative is strictly positive (upward trend
of periodicity per base) and intron otherwise, including at exactly zero.
Segments shorter than a plausibility threshold are then relabeled: interior
short exons first, interior short introns second, re-merging runs after each
pass.  Segments touching either sequence end are exempt from relabeling.
"""

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParameterError, UsageError
from .periodicity import Normalization, NucleotideSequence, WalkTrajectory, periodicity_walk
from .td import TDParams, td_track

__all__ = [
    "Label",
    "Segment",
    "SegmentList",
    "classify_by_derivative",
    "remove_short_segments",
    "predict",
]


class Label(enum.Enum):
    EXON = "exon"
    INTRON = "intron"

    def other(self) -> "Label":
        return Label.INTRON if self is Label.EXON else Label.EXON


class Segment(NamedTuple):
    """A labeled run of positions, 1-based inclusive on both ends."""

    start: int
    end: int
    label: Label

    def __len__(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True, eq=True)
class SegmentList:
    """Ordered, gap-free, non-overlapping labeled cover of positions 1..n.

    Adjacent segments always carry different labels (maximal runs).
    """

    segments: tuple
    n: int

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise UsageError("a segment list must contain at least one segment")
        if segs[0].start != 1 or segs[-1].end != self.n:
            raise UsageError(f"segments must cover positions 1..{self.n} exactly")
        for prev, cur in zip(segs, segs[1:]):
            if cur.start != prev.end + 1:
                raise UsageError(f"segments {prev} and {cur} do not tile the sequence")
            if cur.label is prev.label:
                raise UsageError(f"adjacent segments {prev} and {cur} share a label")
        for seg in segs:
            if seg.start > seg.end:
                raise UsageError(f"segment {seg} is empty")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_labels(cls, labels, n=None) -> "SegmentList":
        """Build maximal runs from a per-position label array (truthy = exon)."""
        arr = np.asarray(labels, dtype=bool)
        if n is None:
            n = len(arr)
        if len(arr) != n or n == 0:
            raise UsageError("label array must be non-empty and match the sequence length")
        segs = []
        start = 0
        for k in range(1, n + 1):
            if k == n or arr[k] != arr[start]:
                segs.append(Segment(start + 1, k, Label.EXON if arr[start] else Label.INTRON))
                start = k
        return cls(tuple(segs), n)

    def labels(self) -> np.ndarray:
        """Per-position exon indicator (uint8: 1 exon, 0 intron)."""
        out = np.zeros(self.n, dtype=np.uint8)
        for seg in self.segments:
            if seg.label is Label.EXON:
                out[seg.start - 1 : seg.end] = 1
        return out

    def __len__(self) -> int:
        return len(self.segments)


def classify_by_derivative(trajectory: WalkTrajectory, td: TDParams) -> SegmentList:
    """Label each position by the sign of the tracked derivative of the walk."""
    trace = td_track(trajectory.values, td)
    return SegmentList.from_labels(trace.derivative > 0)


def _merge_runs(segs) -> tuple:
    merged = [segs[0]]
    for seg in segs[1:]:
        last = merged[-1]
        if seg.label is last.label:
            merged[-1] = Segment(last.start, seg.end, last.label)
        else:
            merged.append(seg)
    return tuple(merged)


def _relabel_pass(seglist: SegmentList, target: Label, min_len: int) -> SegmentList:
    # boundary segments (touching position 1 or n) are never relabeled
    out = []
    for seg in seglist.segments:
        interior = seg.start != 1 and seg.end != seglist.n
        if seg.label is target and interior and len(seg) < min_len:
            seg = Segment(seg.start, seg.end, seg.label.other())
        out.append(seg)
    return SegmentList(_merge_runs(out), seglist.n)


def remove_short_segments(seglist: SegmentList, min_len: int = 50) -> SegmentList:
    """Drop implausibly short interior segments, exons first, then introns.

    Pass order matters on adjacent short segments and is fixed: short interior
    exons are absorbed before short interior introns.  After both passes every
    interior segment has length >= min_len, and the operation is idempotent.
    """
    if min_len < 1:
        raise ParameterError(f"min_len must be a positive integer, got {min_len}")
    seglist = _relabel_pass(seglist, Label.EXON, min_len)
    return _relabel_pass(seglist, Label.INTRON, min_len)


def predict(
    seq: NucleotideSequence,
    td: TDParams,
    normalization: Normalization = Normalization.PER_BASE,
    min_len: int = 50,
) -> SegmentList:
    """Full per-sequence prediction: walk, smooth, classify, postprocess."""
    trajectory = periodicity_walk(seq, normalization)
    return remove_short_segments(classify_by_derivative(trajectory, td), min_len)
