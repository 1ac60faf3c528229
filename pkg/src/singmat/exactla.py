"""Exact linear algebra over GF(2), prime fields, and the rationals.

GF(2) elimination runs on packed rows: Python bit-integers for small
shapes, a numpy uint64 word matrix for large ones; either way a row
update is whole-word XOR.  Prime-field elimination is vectorized int64
with 31-bit moduli.  Integer determinants use Chinese remaindering
against a fixed prime list up to twice the Hadamard bound; rational
kernels use fraction-free (Bareiss) elimination with exact
back-substitution, plus a multi-modular lifting shortcut for single
kernel vectors that is always verified exactly before use.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from .errors import CompositeModulus, DimensionMismatch, NotSquare
from .matrices import BitMatrix, IntMatrix, KernelBasis, ModMatrix, RationalVector
from .modular import crt_pair, crt_primes, is_prime, rational_reconstruct, symmetric_lift

# Shapes at least this large take the numpy word-matrix path.
_WORD_PATH_MIN = 192
_MOD_NUMPY_MIN = 24


class KernelLiftFailed(Exception):
    """Internal: multi-modular kernel lift did not converge."""


# ---------------------------------------------------------------------------
# GF(2) elimination


def _rref_bits(rows: Sequence[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Gauss-Jordan on packed bit rows; returns (rref rows, pivot cols)."""
    work = list(rows)
    pivot_cols: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = None
        for i in range(r, len(work)):
            if (work[i] >> c) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> c) & 1:
                work[i] ^= work[r]
        pivot_cols.append(c)
        r += 1
        if r == len(work):
            break
    return work, pivot_cols


def _word_matrix(rows: Sequence[int], n_cols: int) -> np.ndarray:
    n_words = max(1, (n_cols + 63) // 64)
    buf = b"".join(r.to_bytes(n_words * 8, "little") for r in rows)
    return np.frombuffer(buf, dtype="<u8").reshape(len(rows), n_words).copy()


def _rank_words(rows: Sequence[int], n_cols: int) -> int:
    """Forward elimination on the word matrix, counting pivots only."""
    W = _word_matrix(rows, n_cols)
    n = W.shape[0]
    one = np.uint64(1)
    r = 0
    for c in range(n_cols):
        if r == n:
            break
        w, b = c >> 6, np.uint64(c & 63)
        col = (W[r:, w] >> b) & one
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            W[[r, pivot], w:] = W[[pivot, r], w:]
        hits = nz[1:] + r
        if hits.size:
            # Columns left of c are never read again, so XOR from word w on.
            W[hits, w:] ^= W[r, w:]
        r += 1
    return r


def _rref_words(rows: Sequence[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Full Gauss-Jordan on the word matrix; returns (rref rows, pivot cols)."""
    W = _word_matrix(rows, n_cols)
    n = W.shape[0]
    one = np.uint64(1)
    pivot_cols: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n:
            break
        w, b = c >> 6, np.uint64(c & 63)
        col = (W[r:, w] >> b) & one
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            W[[r, pivot]] = W[[pivot, r]]
        hits = nz[1:] + r
        if hits.size:
            W[hits] ^= W[r]
        pivot_cols.append(c)
        r += 1
    for k in range(len(pivot_cols) - 1, -1, -1):
        c = pivot_cols[k]
        w, b = c >> 6, np.uint64(c & 63)
        col = (W[:k, w] >> b) & one
        nz = np.nonzero(col)[0]
        if nz.size:
            W[nz] ^= W[k]
    out = [int.from_bytes(W[i].tobytes(), "little") for i in range(n)]
    return out, pivot_cols


def rank_gf2(m: BitMatrix) -> int:
    """Rank of a zero-one matrix over GF(2)."""
    if max(m.n_rows, m.n_cols, 1) >= _WORD_PATH_MIN:
        return _rank_words(m.rows, m.n_cols)
    return len(_rref_bits(m.rows, m.n_cols)[1])


def _gf2_right_kernel_vectors(rows: Sequence[int], n_cols: int) -> list[int]:
    if max(len(rows), n_cols, 1) >= _WORD_PATH_MIN:
        rref, pivots = _rref_words(rows, n_cols)
    else:
        rref, pivots = _rref_bits(rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(n_cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for k, c in enumerate(pivots):
            if (rref[k] >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def kernel_gf2(m: BitMatrix, side: str = "right") -> KernelBasis:
    """Basis of the left or right kernel over GF(2), packed bit vectors.

    Every returned vector is checked against the matrix before return.
    """
    if side == "right":
        rows, ambient = m.rows, m.n_cols
    elif side == "left":
        mt = m.transpose()
        rows, ambient = mt.rows, m.n_rows
    else:
        raise ValueError("side must be 'left' or 'right'")
    basis = _gf2_right_kernel_vectors(rows, ambient)
    for v in basis:
        assert all((row & v).bit_count() % 2 == 0 for row in rows)
    return KernelBasis("gf2", tuple(basis), ambient, side)


# ---------------------------------------------------------------------------
# Prime-field elimination


def _rref_mod_py(rows: list[list[int]], p: int) -> tuple[int, list[int], list[list[int]]]:
    R = [[e % p for e in row] for row in rows]
    m_rows = len(R)
    n = len(R[0]) if R else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m_rows):
            if R[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [x * inv % p for x in R[r]]
        for i in range(m_rows):
            f = R[i][c]
            if i != r and f:
                Rr = R[r]
                R[i] = [(x - f * y) % p for x, y in zip(R[i], Rr)]
        pivots.append(c)
        r += 1
        if r == m_rows:
            break
    return r, pivots, R


def _rref_mod_np(rows: list[list[int]], p: int) -> tuple[int, list[int], list[list[int]]]:
    M = np.array(rows, dtype=np.int64) % p
    m_rows, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m_rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            M[[r, pivot]] = M[[pivot, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        f = M[:, c].copy()
        f[r] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            M[hit] = (M[hit] - f[hit, None] * M[r][None, :]) % p
        pivots.append(c)
        r += 1
    return r, pivots, M.tolist()


def _rref_mod(rows: list[list[int]], p: int) -> tuple[int, list[int], list[list[int]]]:
    """Reduced row echelon form mod prime p: (rank, pivot cols, rref)."""
    if not rows or len(rows[0]) == 0:
        return 0, [], [list(row) for row in rows]
    if max(len(rows), len(rows[0])) >= _MOD_NUMPY_MIN:
        return _rref_mod_np(rows, p)
    return _rref_mod_py(rows, p)


def _det_mod_py(rows: list[list[int]], p: int) -> int:
    M = [[e % p for e in row] for row in rows]
    n = len(M)
    det = 1
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if M[i][c]:
                pivot = i
                break
        if pivot is None:
            return 0
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            det = p - det
        piv = M[c][c]
        det = det * piv % p
        inv = pow(piv, -1, p)
        for i in range(c + 1, n):
            f = M[i][c]
            if f:
                f = f * inv % p
                Mc = M[c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], Mc)]
    return det % p


def _det_mod_np(rows: list[list[int]], p: int) -> int:
    M = np.array(rows, dtype=np.int64) % p
    n = M.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(M[c:, c])[0]
        if nz.size == 0:
            return 0
        pivot = c + int(nz[0])
        if pivot != c:
            M[[c, pivot]] = M[[pivot, c]]
            det = p - det
        piv = int(M[c, c])
        det = det * piv % p
        inv = pow(piv, -1, p)
        f = M[c + 1 :, c] * inv % p
        hit = np.nonzero(f)[0]
        if hit.size:
            M[c + 1 + hit, c:] = (M[c + 1 + hit, c:] - f[hit, None] * M[c, c:][None, :]) % p
    return det % p


def det_mod(rows: list[list[int]], p: int) -> int:
    """Determinant of a square integer matrix modulo prime p."""
    n = len(rows)
    if n == 0:
        return 1 % p
    if n >= _MOD_NUMPY_MIN:
        return _det_mod_np(rows, p)
    return _det_mod_py(rows, p)


def rank_mod(m: ModMatrix) -> int:
    """Rank of a matrix over the prime field Z_p."""
    if not is_prime(m.modulus):
        raise CompositeModulus(f"modulus {m.modulus} is not prime")
    rank, _, _ = _rref_mod([list(r) for r in m.entries], m.modulus)
    return rank


# ---------------------------------------------------------------------------
# Exact integer determinant


def hadamard_bound(m: IntMatrix) -> int:
    """Integer upper bound on |det m|: isqrt of the product of row
    squared norms, plus one.  For zero-one matrices this is at most
    n**(n/2) rounded up."""
    prod = 1
    for row in m.entries:
        s = sum(e * e for e in row)
        prod *= s
        if prod == 0:
            return 0
    return isqrt(prod) + 1


def det_exact(m: IntMatrix) -> int:
    """Exact integer determinant by Chinese remaindering.

    Accumulates det mod consecutive primes from the fixed 31-bit list
    until the combined modulus exceeds twice the Hadamard bound, then
    lifts symmetrically.  Deterministic: same matrix, same primes, same
    answer.
    """
    if m.n_rows != m.n_cols:
        raise NotSquare(f"{m.n_rows}x{m.n_cols} matrix has no determinant")
    if m.n_rows == 0:
        return 1
    bound = hadamard_bound(m)
    if bound == 0:
        return 0
    rows = [list(r) for r in m.entries]
    residue, modulus = 0, 1
    idx = 0
    while modulus <= 2 * bound:
        p = crt_primes(idx + 1)[idx]
        idx += 1
        dp = det_mod(rows, p)
        residue = crt_pair(residue, modulus, dp, p) if modulus > 1 else dp
        modulus *= p
    return symmetric_lift(residue, modulus)


# ---------------------------------------------------------------------------
# Rational kernels


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination; returns (echelon rows, pivot cols).

    All divisions are exact integer divisions by the previous pivot.
    """
    M = [list(r) for r in rows]
    m_rows = len(M)
    n = len(M[0]) if M else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m_rows):
            if M[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        prc = M[r][c]
        for i in range(r + 1, m_rows):
            mic = M[i][c]
            Mi, Mr = M[i], M[r]
            for j in range(c + 1, n):
                Mi[j] = (prc * Mi[j] - mic * Mr[j]) // prev
            Mi[c] = 0
        prev = prc
        pivots.append(c)
        r += 1
        if r == m_rows:
            break
    return M, pivots


def _kernel_from_echelon(
    ech: list[list[int]], pivots: list[int], n_cols: int
) -> list[tuple[Fraction, ...]]:
    """Back-substitute one basis vector per free column (that column set
    to 1, other free columns 0)."""
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for f in free:
        x = [Fraction(0)] * n_cols
        x[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = ech[k]
            s = Fraction(0)
            for j in range(c + 1, n_cols):
                if row[j] and x[j]:
                    s += row[j] * x[j]
            x[c] = -s / row[c]
        basis.append(tuple(x))
    return basis


def kernel_rational(m: IntMatrix, side: str = "right") -> KernelBasis:
    """Exact rational kernel basis via fraction-free elimination.

    Each basis vector is verified against the matrix in exact
    arithmetic before return.
    """
    if side == "left":
        src = m.transpose()
        ambient = m.n_rows
    elif side == "right":
        src = m
        ambient = m.n_cols
    else:
        raise ValueError("side must be 'left' or 'right'")
    ech, pivots = _bareiss_echelon([list(r) for r in src.entries])
    basis = _kernel_from_echelon(ech, pivots, src.n_cols)
    for x in basis:
        for row in src.entries:
            assert sum(e * xi for e, xi in zip(row, x)) == 0
    vectors = tuple(RationalVector(x) for x in basis)
    return KernelBasis("rational", vectors, ambient, side)


def _kernel_solve_mod(
    rows: list[list[int]], p: int
) -> tuple[int, tuple[int, ...], list[int] | None]:
    """Mod-p rank, pivot columns, and the canonical kernel solution
    (first free column set to 1) as residues; None if full column rank."""
    n_cols = len(rows[0]) if rows else 0
    rank, pivots, rref = _rref_mod(rows, p)
    if rank == n_cols:
        return rank, tuple(pivots), None
    pivot_set = set(pivots)
    f = next(c for c in range(n_cols) if c not in pivot_set)
    x = [0] * n_cols
    x[f] = 1
    for k, c in enumerate(pivots):
        x[c] = (-rref[k][f]) % p
    return rank, tuple(pivots), x


def kernel_vector_crt(rows: Sequence[Sequence[int]], n_cols: int) -> tuple[int, ...] | None:
    """One exact integer right-kernel vector of an integer matrix, or
    None when the columns are provably independent.

    Lifts the canonical mod-p kernel solution by CRT across the fixed
    prime list, reconstructing rationals and verifying the cleared
    integer vector exactly; a verified vector is returned immediately.
    Raises KernelLiftFailed if the lift exhausts its prime budget
    (callers fall back to fraction-free elimination).
    """
    rows = [list(r) for r in rows]
    if n_cols == 0:
        return None
    if not rows:
        v = [0] * n_cols
        v[0] = 1
        return tuple(v)
    nonzero_norms = [s for row in rows if (s := sum(e * e for e in row)) > 0]
    minor_bound = 1
    for s in nonzero_norms:
        minor_bound *= s
    minor_bound = isqrt(minor_bound) + 1
    target = 2 * minor_bound * minor_bound

    best: tuple[int, tuple[int, ...]] | None = None
    residues: list[int] = []
    modulus = 1
    idx = 0
    # A handful of extra primes past the bound absorbs unlucky ones.
    max_primes = (target.bit_length() // 30 + 2) * 2 + 8
    while idx < max_primes:
        p = crt_primes(idx + 1)[idx]
        idx += 1
        rank, pivots, x = _kernel_solve_mod(rows, p)
        if x is None:
            return None
        key = (-rank, pivots)
        if best is None or key < (-best[0], best[1]):
            best = (rank, pivots)
            residues = x
            modulus = p
        elif (rank, pivots) == best:
            residues = [crt_pair(r0, modulus, xp, p) for r0, xp in zip(residues, x)]
            modulus *= p
        else:
            continue
        candidate = _try_reconstruct(residues, modulus)
        if candidate is not None and _verify_kernel_vector(rows, candidate):
            return candidate
        if modulus > target:
            break
    raise KernelLiftFailed("no verified kernel vector within the prime budget")


def _try_reconstruct(residues: list[int], modulus: int) -> tuple[int, ...] | None:
    fracs = []
    for r in residues:
        nd = rational_reconstruct(r, modulus)
        if nd is None:
            return None
        fracs.append(Fraction(*nd))
    return RationalVector(tuple(fracs)).cleared()


def _verify_kernel_vector(rows: list[list[int]], v: Sequence[int]) -> bool:
    if not any(v):
        return False
    return all(sum(e * vi for e, vi in zip(row, v)) == 0 for row in rows)


# ---------------------------------------------------------------------------
# Membership checks mod arbitrary moduli


def check_vector_mod(
    m: BitMatrix, v: RationalVector, modulus: int, side: str = "right"
) -> bool:
    """True iff every row (side="right") or column (side="left") inner
    product with the integer vector v vanishes mod the modulus.

    The modulus may be composite: this is membership only, never
    elimination.
    """
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    ints = v.integer_entries()
    if side == "right":
        if v.length != m.n_cols:
            raise DimensionMismatch(f"vector length {v.length} != n_cols {m.n_cols}")
        for row in m.rows:
            acc = 0
            w = row
            while w:
                j = (w & -w).bit_length() - 1
                acc += ints[j]
                w &= w - 1
            if acc % modulus:
                return False
        return True
    if side == "left":
        if v.length != m.n_rows:
            raise DimensionMismatch(f"vector length {v.length} != n_rows {m.n_rows}")
        acc = [0] * m.n_cols
        for i, row in enumerate(m.rows):
            vi = ints[i]
            if vi == 0:
                continue
            w = row
            while w:
                j = (w & -w).bit_length() - 1
                acc[j] += vi
                w &= w - 1
        return all(a % modulus == 0 for a in acc)
    raise ValueError("side must be 'left' or 'right'")
