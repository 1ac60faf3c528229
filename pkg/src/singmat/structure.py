"""Combinatorial structure of kernel vectors: supports and fibres.

A fibre of a vector is a maximal set of indices holding one common
value; the complement size of the largest fibre (here ``s``) measures
how far the vector is from constant.  Fibre equality is exact rational
equality, never a tolerance.  Brute-force enumeration oracles for small
instances live here too.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, EmptyVector, KernelTooLarge
from .exactla import kernel_gf2
from .matrices import BitMatrix, RationalVector, unpack_bits

MODQ_ENUM_BUDGET = 8**8


@dataclass(frozen=True)
class KernelStructureReport:
    """Support size and fibre histogram of one vector."""

    n: int
    support_size: int
    fibre_histogram: tuple[tuple[Fraction, int], ...]  # (value, count), by value
    largest_fibre_size: int
    s: int

    def histogram(self) -> dict[Fraction, int]:
        return dict(self.fibre_histogram)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "support_size": self.support_size,
            "fibre_histogram": [[str(v), c] for v, c in self.fibre_histogram],
            "largest_fibre_size": self.largest_fibre_size,
            "s": self.s,
        }


def analyze_vector(x: RationalVector) -> KernelStructureReport:
    """Exact support and fibre statistics of a rational vector."""
    if x.length == 0:
        raise EmptyVector("cannot analyze an empty vector")
    counts = Counter(x.entries)
    largest = max(counts.values())
    hist = tuple(sorted(counts.items()))
    return KernelStructureReport(
        n=x.length,
        support_size=x.length - counts.get(Fraction(0), 0),
        fibre_histogram=hist,
        largest_fibre_size=largest,
        s=x.length - largest,
    )


@dataclass(frozen=True)
class PropertyPredicate:
    """A thresholded vector property, evaluable in O(n).

    kinds: "support_at_least" (support size >= threshold) and
    "largest_fibre_at_most" (largest fibre size <= threshold).
    Thresholds are exact rationals; counts compare exactly.
    """

    kind: str
    threshold: Fraction

    def __post_init__(self):
        if self.kind not in ("support_at_least", "largest_fibre_at_most"):
            raise ValueError(f"unknown predicate kind {self.kind!r}")
        object.__setattr__(self, "threshold", Fraction(self.threshold))

    @classmethod
    def support_at_least(cls, t) -> PropertyPredicate:
        return cls("support_at_least", Fraction(t))

    @classmethod
    def largest_fibre_at_most(cls, bound) -> PropertyPredicate:
        return cls("largest_fibre_at_most", Fraction(bound))

    def describe(self) -> str:
        if self.kind == "support_at_least":
            return f"|supp(x)| >= {self.threshold}"
        return f"largest fibre <= {self.threshold}"


def eval_predicate(pred: PropertyPredicate, x: RationalVector) -> bool:
    report = analyze_vector(x)
    if pred.kind == "support_at_least":
        return report.support_size >= pred.threshold
    return report.largest_fibre_size <= pred.threshold


@dataclass(frozen=True)
class MinSupportReport:
    """Result of exhausting a GF(2) kernel for its lightest vector."""

    kernel_dim: int
    trivial: bool
    min_support: int | None
    witness: tuple[int, ...] | None


def enumerate_gf2_kernel_min_support(
    m: BitMatrix, side: str = "right", max_dim: int = 20
) -> MinSupportReport:
    """Minimum Hamming weight over the 2**k - 1 nonzero kernel vectors.

    Walks the kernel span in Gray-code order (one basis XOR per step).
    Raises KernelTooLarge when the kernel dimension exceeds max_dim.
    """
    basis = kernel_gf2(m, side)
    k = basis.dim
    if k == 0:
        return MinSupportReport(0, True, None, None)
    if k > max_dim:
        raise KernelTooLarge(f"kernel dimension {k} exceeds budget {max_dim}")
    vectors = basis.vectors
    current = 0
    best_weight = None
    best_vector = None
    for g in range(1, 1 << k):
        current ^= vectors[(g & -g).bit_length() - 1]
        w = current.bit_count()
        if best_weight is None or w < best_weight:
            best_weight, best_vector = w, current
    rows = m.rows if side == "right" else m.transpose().rows
    assert best_vector and best_vector.bit_count() == best_weight
    assert all((row & best_vector).bit_count() % 2 == 0 for row in rows)
    return MinSupportReport(
        k, False, best_weight, unpack_bits(best_vector, basis.ambient_dim)
    )


def enumerate_modq_bad_vectors(
    rows: BitMatrix,
    q: int,
    fibre_deficiency_max: int,
    budget: int = MODQ_ENUM_BUDGET,
) -> list[tuple[int, ...]]:
    """All nonconstant v in Z_q^n with every given row orthogonal to v
    mod q and with n minus the largest fibre at most the given cap.

    Complete brute force over Z_q^n (chunked, vectorized); ground truth
    for small instances.  Output is in lexicographic order of the entry
    tuples.
    """
    n = rows.n_cols
    if q < 2:
        raise ValueError("q must be >= 2")
    total = q**n
    if total > budget:
        raise BudgetExceeded(f"q^n = {total} exceeds budget {budget}")
    if n == 0:
        return []
    A = rows.to_bit_array().astype(np.int64)
    out: list[tuple[int, ...]] = []
    chunk = 1 << 18
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((n, codes.size), dtype=np.int64)
        tmp = codes.copy()
        for pos in range(n - 1, -1, -1):  # entry n-1 varies fastest
            digits[pos] = tmp % q
            tmp //= q
        ok = np.ones(codes.size, dtype=bool)
        if rows.n_rows:
            products = (A @ digits) % q
            ok &= ~products.any(axis=0)
        ok &= ~(digits == digits[0]).all(axis=0)  # drop constants
        if fibre_deficiency_max < n:
            largest = np.zeros(codes.size, dtype=np.int64)
            for value in range(q):
                np.maximum(largest, (digits == value).sum(axis=0), out=largest)
            ok &= (n - largest) <= fibre_deficiency_max
        for col in np.nonzero(ok)[0]:
            out.append(tuple(int(d) for d in digits[:, col]))
    return out
