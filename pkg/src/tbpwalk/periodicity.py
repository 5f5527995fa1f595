"""3-base periodicity of DNA prefixes.

Protein-coding DNA shows elevated spectral power at frequency 1/3 cycles per
base because the three codon positions have biased base composition.  This
module computes that power from codon-position counts via a closed form,
provides the direct DFT evaluation as an independent cross-check, and builds
the per-prefix trajectory ("walk") of the power in linear time.

The reading frame is anchored at sequence position 1: base k occupies codon
position ((k-1) mod 3) + 1.  Counts are raw occurrence counts, under which
the closed form equals the indicator-DFT power at frequency 1/3 exactly.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ParameterError, UsageError

__all__ = [
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
    "walk_raw_outputs",
    "normalize_walk",
]

BASE_ORDER = "ACGT"

_CODE_OF = {b: i for i, b in enumerate(BASE_ORDER)}


@dataclass(frozen=True, eq=False)
class NucleotideSequence:
    """A validated A/C/G/T series with its reading frame fixed at position 1.

    codes holds one uint8 per base (A=0, C=1, G=2, T=3).  substitutions
    records any deterministic ambiguity replacements made at ingestion as
    (position, original, replacement) triples.
    """

    id: str
    codes: np.ndarray
    substitutions: tuple = field(default=())

    def __post_init__(self):
        codes = np.ascontiguousarray(self.codes, dtype=np.uint8)
        if codes.ndim != 1 or codes.size == 0:
            raise UsageError(f"sequence {self.id!r} must contain at least one base")
        if codes.max(initial=0) > 3:
            raise UsageError(f"sequence {self.id!r} contains invalid base codes")
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_string(cls, seq_id: str, bases: str) -> "NucleotideSequence":
        up = bases.upper()
        try:
            codes = np.array([_CODE_OF[b] for b in up], dtype=np.uint8)
        except KeyError as exc:
            bad = exc.args[0]
            raise UsageError(
                f"sequence {seq_id!r} contains invalid base {bad!r} "
                f"at position {up.index(bad) + 1}"
            ) from None
        if codes.size == 0:
            raise UsageError(f"sequence {seq_id!r} must contain at least one base")
        return cls(seq_id, codes)

    @property
    def bases(self) -> str:
        return "".join(BASE_ORDER[c] for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)


@dataclass(frozen=True)
class CodonPositionCounts:
    """4x3 table of base counts per codon position.

    table[x, i] counts occurrences of base BASE_ORDER[x] at codon position
    i+1; the entries sum to the sequence length.
    """

    table: np.ndarray
    total: int

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (4, 3):
            raise UsageError(f"counts table must be 4x3, got shape {table.shape}")
        if (table < 0).any() or int(table.sum()) != self.total:
            raise UsageError("counts table entries must be nonnegative and sum to total")
        object.__setattr__(self, "table", table)

    def count(self, base: str, position: int) -> int:
        """Count of `base` at 1-based codon position 1, 2 or 3."""
        return int(self.table[_CODE_OF[base.upper()], position - 1])

    def letter_totals(self) -> np.ndarray:
        """Per-base totals across codon positions, in BASE_ORDER."""
        return self.table.sum(axis=1)


class Normalization(enum.Enum):
    """Scaling applied to the per-prefix periodicity power."""

    RAW = "raw"
    PER_BASE = "per-base"  # power / prefix length
    BACKGROUND_RATIO = "background"  # power / mean off-zero-bin spectrum power


@dataclass(frozen=True)
class WalkTrajectory:
    """Per-position periodicity values; values[k] depends on bases 1..k+1 only."""

    values: np.ndarray
    normalization: Normalization

    def __len__(self) -> int:
        return len(self.values)


def count_codon_positions(seq: NucleotideSequence) -> CodonPositionCounts:
    """Tally each base per codon position over the whole sequence."""
    n = len(seq)
    phases = np.arange(n, dtype=np.int64) % 3
    idx = seq.codes.astype(np.int64) * 3 + phases
    table = np.bincount(idx, minlength=12).reshape(4, 3)
    return CodonPositionCounts(table, n)


def three_base_power(counts: CodonPositionCounts) -> int:
    """Closed-form 3-base periodicity power from codon-position counts.

    sum over bases of F1^2 + F2^2 + F3^2 - (F1*F2 + F2*F3 + F1*F3), which is
    half a sum of squared pairwise differences: nonnegative, and zero exactly
    when every base is equidistributed over the three codon positions.
    """
    f1 = counts.table[:, 0]
    f2 = counts.table[:, 1]
    f3 = counts.table[:, 2]
    return int(np.sum(f1 * f1 + f2 * f2 + f3 * f3 - f1 * f2 - f2 * f3 - f1 * f3))


def dft_power_at_one_third(seq: NucleotideSequence) -> float:
    """Indicator-DFT power of the sequence at frequency 1/3, summed over bases.

    Direct complex summation; serves as the independent cross-check of
    :func:`three_base_power`, which it equals for every length.
    """
    n = len(seq)
    w = np.exp(-2j * np.pi * (np.arange(n) % 3) / 3.0)
    total = 0.0
    for x in range(4):
        s = complex(np.sum(w[seq.codes == x]))
        total += s.real * s.real + s.imag * s.imag
    return total


def spectrum_background(counts: CodonPositionCounts) -> float:
    """Mean indicator-DFT power over the N-1 nonzero frequency bins.

    Equals sum over bases of n_x * (N - n_x) / (N - 1), an exact consequence
    of Parseval's identity; zero only for single-letter sequences.
    """
    n = counts.total
    if n < 2:
        raise ParameterError(f"spectrum background is undefined for length {n} < 2")
    nx = counts.letter_totals()
    return float(np.sum(nx * (n - nx)) / (n - 1))


def walk_raw_outputs(seq: NucleotideSequence):
    """Per-prefix raw power and background numerator, both exact int64.

    bg_num[k] = (k+1)^2 - sum_x n_x(k)^2, so the prefix background equals
    bg_num[k] / k and the background-ratio value is power*(k) / bg_num[k]
    computed in exact integer arithmetic before the final division.
    """
    return kernels.walk_prefix_power(seq.codes)


def normalize_walk(power: np.ndarray, bg_num: np.ndarray, normalization: Normalization) -> np.ndarray:
    """Apply a normalization mode to raw walk outputs; always float64."""
    n = len(power)
    if normalization is Normalization.RAW:
        return power.astype(np.float64)
    if normalization is Normalization.PER_BASE:
        k = np.arange(1, n + 1, dtype=np.float64)
        return power.astype(np.float64) / k
    if normalization is Normalization.BACKGROUND_RATIO:
        # power*(k-1) <= k^3/3 stays within int64 up to ~3e6 bases
        k = np.arange(n, dtype=np.int64)
        if n <= 3_000_000:
            numer = (power * k).astype(np.float64)
        else:
            numer = power.astype(np.float64) * k.astype(np.float64)
        denom = bg_num.astype(np.float64)
        out = np.zeros(n, dtype=np.float64)
        np.divide(numer, denom, out=out, where=bg_num > 0)
        return out
    raise UsageError(f"unknown normalization {normalization!r}")


def periodicity_walk(
    seq: NucleotideSequence, normalization: Normalization = Normalization.PER_BASE
) -> WalkTrajectory:
    """The 3-base periodicity walk: one value per position, prefix by prefix.

    values[k-1] is the (normalized) periodicity power of the prefix of length
    k.  Computed incrementally in O(N) total; positions where the background
    ratio is undefined (single-letter prefixes) yield 0 by convention.
    """
    power, bg_num = walk_raw_outputs(seq)
    return WalkTrajectory(normalize_walk(power, bg_num, normalization), normalization)
