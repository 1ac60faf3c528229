"""Random zero-one matrix samplers and related transforms.

Two models: independent Bernoulli(p) entries, and rows drawn uniformly
from the weight-d slice (the combinatorial model).  Both are driven by
the counter-based generator in :mod:`singmat.rng`, with row i of a
matrix read from the child stream ``derive_seed(seed, i)``, so matrices
are reproducible bit for bit and rows can be generated in parallel.

Probabilities are exact rationals realized by comparing a 64-bit draw
against floor(p * 2**64); the resulting bias is below 2**-64 and is
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PairingInfeasible
from .matrices import BitMatrix
from .rng import MASK64, Stream, bernoulli_threshold, derive_seed, u64_block


@dataclass(frozen=True)
class SampleSpec:
    """Which model to draw from, at what size, under which seed."""

    model: str  # "bernoulli" | "combinatorial"
    n: int
    seed: int
    p: Fraction | None = None
    d: int | None = None

    def __post_init__(self):
        if self.model not in ("bernoulli", "combinatorial"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.model == "bernoulli":
            if self.p is None or not 0 <= self.p <= 1:
                raise ValueError("bernoulli model needs 0 <= p <= 1")
            object.__setattr__(self, "p", Fraction(self.p))
        else:
            if self.d is None or not 0 <= self.d <= self.n:
                raise ValueError("combinatorial model needs 0 <= d <= n")

    @classmethod
    def bernoulli(cls, n: int, p, seed: int) -> SampleSpec:
        return cls("bernoulli", n, seed, p=Fraction(p))

    @classmethod
    def combinatorial(cls, n: int, d: int, seed: int) -> SampleSpec:
        return cls("combinatorial", n, seed, d=d)

    @property
    def density(self):
        return self.p if self.model == "bernoulli" else self.d


@dataclass(frozen=True)
class PairingSample:
    """d disjoint ordered index pairs plus one fair coin per pair.

    The induced one-set takes pair k's first element where the coin is
    1, else the second; it is a uniform d-subset of [0, n).
    """

    n: int
    pairs: tuple[tuple[int, int], ...]
    choices: tuple[int, ...]

    def __post_init__(self):
        seen = set()
        for i, j in self.pairs:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError("pair index out of range")
            seen.update((i, j))
        if len(seen) != 2 * len(self.pairs):
            raise ValueError("pair indices must be distinct")
        if len(self.choices) != len(self.pairs):
            raise ValueError("one choice bit per pair")
        if any(c not in (0, 1) for c in self.choices):
            raise ValueError("choices must be bits")

    def one_set(self) -> frozenset[int]:
        return frozenset(i if c else j for (i, j), c in zip(self.pairs, self.choices))


def sample(spec: SampleSpec) -> BitMatrix:
    if spec.model == "bernoulli":
        return sample_bernoulli(spec)
    return sample_combinatorial(spec)


def sample_bernoulli(spec: SampleSpec) -> BitMatrix:
    """n x n matrix of independent Bernoulli(p) entries.

    Entry (i, j) is 1 iff output j of row stream i is below
    floor(p * 2**64).
    """
    if spec.model != "bernoulli":
        raise ValueError("spec is not a bernoulli spec")
    n = spec.n
    threshold = bernoulli_threshold(spec.p.numerator, spec.p.denominator)
    if threshold == 0:
        return BitMatrix.zeros(n, n)
    if threshold > MASK64:
        return BitMatrix(n, n, ((1 << n) - 1,) * n)
    thr = np.uint64(threshold)
    rows = []
    for i in range(n):
        words = u64_block(derive_seed(spec.seed, i), 0, n)
        bits = np.packbits(words < thr, bitorder="little")
        rows.append(int.from_bytes(bits.tobytes(), "little"))
    return BitMatrix(n, n, tuple(rows))


def _uniform_subset_row(stream: Stream, n: int, d: int) -> int:
    """Packed indicator of a uniform d-subset via partial Fisher-Yates."""
    idx = list(range(n))
    for k in range(d):
        j = k + stream.below(n - k)
        idx[k], idx[j] = idx[j], idx[k]
    row = 0
    for b in idx[:d]:
        row |= 1 << b
    return row


def sample_combinatorial(spec: SampleSpec) -> BitMatrix:
    """n x n matrix with independent rows, each a uniform d-subset indicator."""
    if spec.model != "combinatorial":
        raise ValueError("spec is not a combinatorial spec")
    n, d = spec.n, spec.d
    rows = tuple(
        _uniform_subset_row(Stream(derive_seed(spec.seed, i)), n, d) for i in range(n)
    )
    return BitMatrix(n, n, rows)


def sample_row(spec: SampleSpec) -> int:
    """Packed first row of sample(spec): one draw from the row law."""
    if spec.model == "bernoulli":
        threshold = bernoulli_threshold(spec.p.numerator, spec.p.denominator)
        if threshold == 0:
            return 0
        if threshold > MASK64:
            return (1 << spec.n) - 1
        words = u64_block(derive_seed(spec.seed, 0), 0, spec.n)
        bits = np.packbits(words < np.uint64(threshold), bitorder="little")
        return int.from_bytes(bits.tobytes(), "little")
    return _uniform_subset_row(Stream(derive_seed(spec.seed, 0)), spec.n, spec.d)


def sample_pairing(n: int, d: int, seed: int) -> PairingSample:
    """d uniformly random disjoint ordered pairs plus d fair coins.

    Pairs come from a partial Fisher-Yates pass (positions 0..2d-1 of a
    random permutation, consecutive positions paired in order), then one
    coin per pair.
    """
    if 2 * d > n:
        raise PairingInfeasible(f"cannot place {2 * d} distinct indices in [0, {n})")
    stream = Stream(seed)
    idx = list(range(n))
    for k in range(2 * d):
        j = k + stream.below(n - k)
        idx[k], idx[j] = idx[j], idx[k]
    pairs = tuple((idx[2 * k], idx[2 * k + 1]) for k in range(d))
    choices = tuple(stream.bit() for _ in range(d))
    return PairingSample(n, pairs, choices)


def complement(q: BitMatrix) -> BitMatrix:
    """Entrywise 1 - q: the all-ones matrix minus q."""
    return q.complement()


@dataclass(frozen=True)
class LineReport:
    """Zero and duplicate rows/columns of a matrix.

    Any nonempty field witnesses singularity (for square matrices).
    Duplicate pairs are reported as (first occurrence, later occurrence),
    one pair per later occurrence.
    """

    zero_rows: tuple[int, ...]
    zero_cols: tuple[int, ...]
    duplicate_row_pairs: tuple[tuple[int, int], ...]
    duplicate_col_pairs: tuple[tuple[int, int], ...]

    @property
    def any_line(self) -> bool:
        return bool(
            self.zero_rows or self.zero_cols
            or self.duplicate_row_pairs or self.duplicate_col_pairs
        )


def _scan_lines(rows: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    zeros = tuple(i for i, r in enumerate(rows) if r == 0)
    first_seen: dict[int, int] = {}
    dups = []
    for i, r in enumerate(rows):
        if r in first_seen:
            dups.append((first_seen[r], i))
        else:
            first_seen[r] = i
    return zeros, tuple(dups)


def find_duplicate_or_zero_lines(m: BitMatrix) -> LineReport:
    """Exact zero/duplicate line detection by hashing packed rows."""
    zero_rows, dup_rows = _scan_lines(m.rows)
    zero_cols, dup_cols = _scan_lines(m.transpose().rows)
    return LineReport(zero_rows, zero_cols, dup_rows, dup_cols)
