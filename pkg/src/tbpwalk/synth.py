"""Synthetic benchmark sequences with tunable codon bias.

Coding regions are modeled by a phase-specific base distribution: codon
position i places probability `bias` on one designated base (A at phase 1,
T at phase 2, G at phase 3) and (1 - bias)/3 on each of the other three.
Non-coding regions draw uniformly over A/C/G/T.  bias = 0.25 degenerates to
uniform everywhere; bias = 1.0 makes exon blocks an exact ATG repeat in the
global frame.

Generation is deterministic: a fixed seed yields a byte-identical sequence
on every platform, with exactly one generator draw per base.
"""

import numpy as np

from .errors import ParameterError
from .io import AnnotationRecord
from .periodicity import NucleotideSequence
from .rng import XorShift64Star

__all__ = ["generate_synthetic", "DESIGNATED_BASES"]

# exon-phase designated bases: codes for A, T, G at codon positions 1, 2, 3
DESIGNATED_BASES = (0, 3, 2)


def generate_synthetic(
    n_blocks: int,
    exon_len: int,
    intron_len: int,
    bias: float,
    seed: int,
):
    """Build an alternating intron/exon/.../intron sequence plus its truth.

    The layout is one leading intron block, then n_blocks repetitions of
    exon block + intron block.  The codon frame is global (anchored at
    sequence position 1), so exon periodicity lines up with the frame the
    walk assumes.  Returns (NucleotideSequence, AnnotationRecord); the
    record id is "synth-{seed}".
    """
    if n_blocks < 1 or exon_len < 1 or intron_len < 1:
        raise ParameterError(
            "n_blocks, exon_len and intron_len must be positive integers"
        )
    if not 0.0 <= bias <= 1.0:
        raise ParameterError(f"bias must lie in [0, 1], got {bias}")
    if not 0 <= seed < 2**64:
        raise ParameterError("seed must be an unsigned 64-bit integer")

    rng = XorShift64Star(seed)
    total = intron_len + n_blocks * (exon_len + intron_len)
    codes = np.empty(total, dtype=np.uint8)
    exons = []
    pos = 0

    def intron_block(m):
        nonlocal pos
        for _ in range(m):
            codes[pos] = int(rng.next_double() * 4) & 3
            pos += 1

    def exon_block(m):
        nonlocal pos
        start = pos + 1
        for _ in range(m):
            designated = DESIGNATED_BASES[pos % 3]
            u = rng.next_double()
            if u < bias:
                base = designated
            else:
                # rescale the tail of u into a uniform pick over the other
                # three bases; min() guards the r == 1.0 endpoint
                r = (u - bias) / (1.0 - bias) if bias < 1.0 else 0.0
                others = [c for c in range(4) if c != designated]
                base = others[min(2, int(r * 3))]
            codes[pos] = base
            pos += 1
        exons.append((start, pos))

    intron_block(intron_len)
    for _ in range(n_blocks):
        exon_block(exon_len)
        intron_block(intron_len)

    seq_id = f"synth-{seed}"
    return (
        NucleotideSequence(seq_id, codes),
        AnnotationRecord(seq_id, tuple(exons)),
    )
