"""FASTA and exon-annotation ingestion and emission.

Sequence input is FASTA (LF or CRLF, case-insensitive bases).  Under the
strict policy any character outside A/C/G/T is rejected.  Under the
skip-ambiguous policy the IUPAC ambiguity codes are replaced by a concrete
base drawn from the code's allowed set with a deterministic seeded generator,
one draw per ambiguous character in file order, and every replacement is
recorded on the resulting sequence.  Replacing instead of deleting keeps the
codon frame anchored at position 1.

Annotations are minimal 3-column TSV: sequence id, exon start, exon end,
1-based inclusive, one exon per line, '#' comments ignored.
"""

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import InputFormatError, UsageError
from .periodicity import BASE_ORDER, NucleotideSequence
from .predictor import Label, Segment, SegmentList
from .rng import XorShift64Star

__all__ = [
    "IngestionPolicy",
    "Substitution",
    "AnnotationRecord",
    "parse_fasta",
    "parse_annotation",
    "annotation_to_segments",
    "write_fasta",
    "write_annotation",
]

# IUPAC ambiguity codes and the concrete bases each may stand for
AMBIGUITY_CODES = {
    "N": "ACGT",
    "R": "AG",
    "Y": "CT",
    "S": "CG",
    "W": "AT",
    "K": "GT",
    "M": "AC",
    "B": "CGT",
    "D": "AGT",
    "H": "ACT",
    "V": "ACG",
}

_CODE_OF = {b: i for i, b in enumerate(BASE_ORDER)}

# 256-entry byte classifier: 0-3 concrete base code, 10+ ambiguity code
# index, 255 invalid
_INVALID = 255
_AMBIG_BASE = 10
_CHAR_CLASS = np.full(256, _INVALID, dtype=np.uint8)
for _i, _b in enumerate(BASE_ORDER):
    _CHAR_CLASS[ord(_b)] = _i
    _CHAR_CLASS[ord(_b.lower())] = _i
_AMBIG_LETTERS = "".join(AMBIGUITY_CODES)
for _i, _b in enumerate(_AMBIG_LETTERS):
    _CHAR_CLASS[ord(_b)] = _AMBIG_BASE + _i
    _CHAR_CLASS[ord(_b.lower())] = _AMBIG_BASE + _i


class IngestionPolicy(enum.Enum):
    STRICT = "strict"
    SKIP_AMBIGUOUS = "skip-ambiguous"


class Substitution(NamedTuple):
    """One ambiguity replacement: where, what was read, what was written."""

    position: int
    original: str
    replacement: str


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise InputFormatError(
                f"input is not ASCII text (byte {data[exc.start]:#04x} "
                f"at offset {exc.start})"
            ) from None
    return data


def parse_fasta(source, policy: IngestionPolicy = IngestionPolicy.STRICT,
                rng_seed: int = 0) -> list:
    """Read FASTA records into validated sequences.

    source may be a path or a file-like object (text or bytes).  rng_seed
    seeds the replacement generator used by the skip-ambiguous policy; the
    seed must be held fixed for reproducible runs.
    """
    text = _read_text(source)
    rng = XorShift64Star(rng_seed)
    records = []
    seen = set()
    cur_id = None
    cur_chunks = []
    cur_subs = []
    cur_len = 0

    def finish(line_no):
        if cur_id is None:
            return
        if cur_len == 0:
            raise InputFormatError(
                f"record {cur_id!r} (ending at line {line_no}) has no sequence"
            )
        codes = np.concatenate(cur_chunks)
        records.append(NucleotideSequence(cur_id, codes, tuple(cur_subs)))

    line_no = 0
    for line_no, line in enumerate(text.splitlines(), 1):
        if line.endswith("\r"):
            line = line[:-1]
        if not line.strip():
            continue
        if line.startswith(">"):
            finish(line_no - 1)
            header = line[1:].strip()
            if not header:
                raise InputFormatError(f"empty FASTA header at line {line_no}")
            cur_id = header.split()[0]
            if cur_id in seen:
                raise InputFormatError(
                    f"duplicate sequence id {cur_id!r} at line {line_no}"
                )
            seen.add(cur_id)
            cur_chunks, cur_subs, cur_len = [], [], 0
            continue
        if cur_id is None:
            raise InputFormatError(
                f"sequence data before the first FASTA header at line {line_no}"
            )
        classes = _CHAR_CLASS[np.frombuffer(line.encode("ascii"), dtype=np.uint8)]
        flagged = np.nonzero(classes >= _AMBIG_BASE)[0]
        for idx in flagged:
            ch = line[idx]
            pos = cur_len + int(idx) + 1
            if classes[idx] == _INVALID:
                raise InputFormatError(
                    f"record {cur_id!r}: invalid character {ch!r} at "
                    f"position {pos} (line {line_no})"
                )
            if policy is IngestionPolicy.STRICT:
                raise InputFormatError(
                    f"record {cur_id!r}: ambiguous character {ch!r} at "
                    f"position {pos} (line {line_no}); only A/C/G/T are "
                    f"accepted under the strict policy"
                )
            choices = AMBIGUITY_CODES[ch.upper()]
            pick = choices[rng.next_below(len(choices))]
            classes[idx] = _CODE_OF[pick]
            cur_subs.append(Substitution(pos, ch.upper(), pick))
        cur_chunks.append(classes)
        cur_len += len(classes)

    finish(line_no)
    if not records:
        raise InputFormatError("FASTA input contains no records")
    return records


@dataclass(frozen=True)
class AnnotationRecord:
    """Reference exon intervals for one sequence, 1-based inclusive."""

    id: str
    exons: tuple = field(default=())

    def __post_init__(self):
        exons = tuple((int(s), int(e)) for s, e in self.exons)
        for start, end in exons:
            if start < 1 or start > end:
                raise UsageError(
                    f"annotation {self.id!r} has invalid exon interval "
                    f"[{start}, {end}]"
                )
        for (_, e1), (s2, _) in zip(exons, exons[1:]):
            if s2 <= e1:
                raise UsageError(
                    f"annotation {self.id!r} has unsorted or overlapping exons"
                )
        object.__setattr__(self, "exons", exons)


def parse_annotation(source) -> list:
    """Read exon intervals grouped by sequence id.

    Intervals for one id may appear in any order; they are sorted and
    checked for overlap (errors name both offending lines).  Record order
    follows first appearance of each id.
    """
    text = _read_text(source)
    by_id = {}
    for line_no, line in enumerate(text.splitlines(), 1):
        if line.endswith("\r"):
            line = line[:-1]
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise InputFormatError(
                f"expected 3 tab-separated fields (id, start, end) at "
                f"line {line_no}, got {len(parts)}"
            )
        seq_id = parts[0].strip()
        if not seq_id:
            raise InputFormatError(f"empty sequence id at line {line_no}")
        try:
            start, end = int(parts[1]), int(parts[2])
        except ValueError:
            raise InputFormatError(
                f"non-integer exon coordinates at line {line_no}: "
                f"{parts[1]!r}, {parts[2]!r}"
            ) from None
        if start < 1:
            raise InputFormatError(
                f"exon start must be >= 1 at line {line_no}, got {start}"
            )
        if start > end:
            raise InputFormatError(f"start > end at line {line_no}")
        by_id.setdefault(seq_id, []).append((start, end, line_no))

    if not by_id:
        raise InputFormatError("annotation input contains no exon lines")

    records = []
    for seq_id, rows in by_id.items():
        rows.sort(key=lambda r: (r[0], r[1]))
        for (s1, e1, l1), (s2, e2, l2) in zip(rows, rows[1:]):
            if s2 <= e1:
                raise InputFormatError(
                    f"exons for {seq_id!r} overlap: [{s1}, {e1}] (line {l1}) "
                    f"and [{s2}, {e2}] (line {l2})"
                )
        records.append(AnnotationRecord(seq_id, tuple((s, e) for s, e, _ in rows)))
    return records


def annotation_to_segments(rec: AnnotationRecord, n: int) -> SegmentList:
    """Expand exon intervals into a gap-free exon/intron cover of 1..n.

    Contiguous exon intervals (next start == previous end + 1) are merged.
    """
    if n < 1:
        raise UsageError(f"sequence length must be positive, got {n}")
    merged = []
    for start, end in rec.exons:
        if end > n:
            raise InputFormatError(
                f"annotation {rec.id!r}: exon [{start}, {end}] exceeds "
                f"sequence length {n}"
            )
        if merged and start == merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    segs = []
    cursor = 1
    for start, end in merged:
        if start > cursor:
            segs.append(Segment(cursor, start - 1, Label.INTRON))
        segs.append(Segment(start, end, Label.EXON))
        cursor = end + 1
    if cursor <= n:
        segs.append(Segment(cursor, n, Label.INTRON))
    return SegmentList(tuple(segs), n)


def _open_write(dest):
    if isinstance(dest, (str, Path)):
        return open(dest, "w", newline=""), True
    return dest, False


def write_fasta(dest, sequences, width: int = 60) -> None:
    """Emit sequences as FASTA with fixed-width lines and LF endings."""
    handle, owned = _open_write(dest)
    try:
        for seq in sequences:
            handle.write(f">{seq.id}\n")
            bases = seq.bases
            for k in range(0, len(bases), width):
                handle.write(bases[k : k + width])
                handle.write("\n")
    finally:
        if owned:
            handle.close()


def write_annotation(dest, records) -> None:
    """Emit exon intervals as 3-column TSV, one exon per line."""
    handle, owned = _open_write(dest)
    try:
        handle.write("# id\tstart\tend\n")
        for rec in records:
            for start, end in rec.exons:
                handle.write(f"{rec.id}\t{start}\t{end}\n")
    finally:
        if owned:
            handle.close()
