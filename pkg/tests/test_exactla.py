"""Exact linear algebra against naive oracles."""

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_gf2_right_kernel, naive_det, naive_rank_gf2
from singmat.errors import CompositeModulus, DimensionMismatch, NotSquare
from singmat.exactla import (
    KernelLiftFailed,
    check_vector_mod,
    det_exact,
    det_mod,
    hadamard_bound,
    kernel_gf2,
    kernel_rational,
    kernel_vector_crt,
    rank_gf2,
    rank_mod,
    _rank_words,
    _rref_bits,
)
from singmat.matrices import BitMatrix, IntMatrix, ModMatrix, RationalVector, unpack_bits


def bm(rows):
    return BitMatrix.from_rows(rows)


def random_bit_rows(rng, n_rows, n_cols, density=0.5):
    return [[1 if rng.random() < density else 0 for _ in range(n_cols)] for _ in range(n_rows)]


# -- rank over GF(2) --------------------------------------------------------


def test_rank_examples():
    assert rank_gf2(BitMatrix.identity(3)) == 3
    assert rank_gf2(bm([[1, 1, 1]] * 3)) == 1
    assert rank_gf2(bm([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2


def test_rank_all_3x3():
    for bits in range(512):
        rows = [[(bits >> (3 * i + j)) & 1 for j in range(3)] for i in range(3)]
        assert rank_gf2(bm(rows)) == naive_rank_gf2(rows)


def test_rank_random_up_to_64():
    rng = random.Random(1)
    for _ in range(300):
        n_rows = rng.randint(1, 64)
        n_cols = rng.randint(1, 64)
        rows = random_bit_rows(rng, n_rows, n_cols, rng.choice([0.1, 0.5, 0.9]))
        assert rank_gf2(bm(rows)) == naive_rank_gf2(rows)


def test_rank_word_path_matches_bit_path():
    rng = random.Random(2)
    for _ in range(25):
        n = rng.randint(1, 80)
        m = rng.randint(1, 80)
        rows = random_bit_rows(rng, n, m)
        mat = bm(rows)
        assert _rank_words(mat.rows, mat.n_cols) == len(_rref_bits(mat.rows, mat.n_cols)[1])


def test_rank_degenerate_shapes():
    assert rank_gf2(BitMatrix(0, 0, ())) == 0
    assert rank_gf2(BitMatrix.zeros(3, 0)) == 0
    assert rank_gf2(BitMatrix.zeros(0, 3)) == 0


# -- kernels over GF(2) -----------------------------------------------------


def test_kernel_gf2_examples():
    assert kernel_gf2(BitMatrix.identity(4), "right").is_trivial()
    left = kernel_gf2(bm([[1, 1, 0], [0, 1, 1], [1, 0, 1]]), "left")
    assert left.vectors_as_tuples() == [(1, 1, 1)]
    full = kernel_gf2(BitMatrix.zeros(2, 2), "right")
    assert full.dim == 2


def test_kernel_gf2_span_equals_brute_force():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(1, 8)
        m = rng.randint(1, 8)
        rows = random_bit_rows(rng, m, n)
        basis = kernel_gf2(bm(rows), "right")
        span = {0}
        for v in basis.vectors:
            span |= {s ^ v for s in span}
        got = {unpack_bits(v, n) for v in span}
        assert got == brute_gf2_right_kernel(rows)


def test_kernel_gf2_dimension_identity():
    rng = random.Random(4)
    for _ in range(40):
        n_rows, n_cols = rng.randint(1, 30), rng.randint(1, 30)
        mat = bm(random_bit_rows(rng, n_rows, n_cols))
        r = rank_gf2(mat)
        assert kernel_gf2(mat, "right").dim == n_cols - r
        assert kernel_gf2(mat, "left").dim == n_rows - r


# -- prime-field ranks ------------------------------------------------------


def test_rank_mod_examples():
    assert rank_mod(ModMatrix.from_rows([[1, 0], [0, 1]], 5)) == 2
    assert rank_mod(ModMatrix.from_rows([[1, 1], [1, 1]], 3)) == 1
    assert rank_mod(ModMatrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 3)) == 3


def test_rank_mod_rejects_composite():
    with pytest.raises(CompositeModulus):
        rank_mod(ModMatrix.from_rows([[1]], 6))


# -- exact determinants -----------------------------------------------------


def test_det_examples():
    assert det_exact(IntMatrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])) == 1
    assert det_exact(IntMatrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2
    assert det_exact(IntMatrix.from_rows([[1, 1], [1, 1]])) == 0
    assert det_exact(IntMatrix.from_rows([])) == 1


def test_det_not_square():
    with pytest.raises(NotSquare):
        det_exact(IntMatrix.from_rows([[1, 0]]))


def test_det_matches_fraction_elimination():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 8)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        expect = naive_det(rows)
        assert expect.denominator == 1
        assert det_exact(IntMatrix.from_rows(rows)) == expect.numerator


def test_det_mod_p_agrees_for_twenty_random_primes():
    from singmat.modular import random_prime
    from singmat.rng import Stream

    rng = random.Random(6)
    stream = Stream(0xD37)
    primes = [random_prime(stream) for _ in range(20)]
    for _ in range(10):
        n = rng.randint(1, 12)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        d = det_exact(IntMatrix.from_rows(rows))
        for p in primes:
            assert det_mod(rows, p) == d % p


def test_hadamard_bound_dominates():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 7)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        m = IntMatrix.from_rows(rows)
        assert abs(det_exact(m)) <= hadamard_bound(m)


# -- rational kernels -------------------------------------------------------


def test_kernel_rational_examples():
    assert kernel_rational(IntMatrix.from_rows([[1, 0], [0, 1]])).is_trivial()
    basis = kernel_rational(IntMatrix.from_rows([[1, 2], [2, 4]]), "right")
    assert basis.dim == 1
    v = basis.vectors[0].entries
    # spans (2, -1)
    assert v[0] * (-1) == v[1] * 2
    basis2 = kernel_rational(IntMatrix.from_rows([[1, 1, 0], [1, 0, 1], [0, 1, -1]]), "right")
    assert basis2.dim == 1
    w = basis2.vectors[0].cleared()
    assert w in ((-1, 1, 1), (1, -1, -1))
    # cleared() canonicalizes the leading sign
    assert w == (1, -1, -1)


def test_kernel_rational_left_side():
    m = IntMatrix.from_rows([[1, 1, 0], [2, 2, 0], [0, 0, 1]])
    basis = kernel_rational(m, "left")
    assert basis.dim == 1
    v = basis.vectors[0].entries
    assert all(
        sum(v[i] * m.entries[i][j] for i in range(3)) == 0 for j in range(3)
    )


def test_det_zero_iff_kernel_nonempty():
    rng = random.Random(8)
    for _ in range(80):
        n = rng.randint(1, 7)
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        m = IntMatrix.from_rows(rows)
        assert (det_exact(m) != 0) == kernel_rational(m, "right").is_trivial()


def test_gf2_rank_never_exceeds_rational_rank():
    rng = random.Random(9)
    for _ in range(60):
        n = rng.randint(1, 7)
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        bit = bm(rows)
        g = rank_gf2(bit)
        q_rank = n - kernel_rational(bit.to_int_matrix(), "right").dim
        assert g <= q_rank <= n
        if g < n:
            assert det_exact(bit.to_int_matrix()) % 2 == 0


# -- CRT kernel vector lift -------------------------------------------------


def test_kernel_vector_crt_matches_bareiss_on_singulars():
    rng = random.Random(10)
    found = 0
    for _ in range(200):
        n = rng.randint(2, 12)
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        m = IntMatrix.from_rows(rows)
        basis = kernel_rational(m, "right")
        try:
            v = kernel_vector_crt(rows, n)
        except KernelLiftFailed:
            pytest.fail("lift failed on a small instance")
        if basis.is_trivial():
            assert v is None
        else:
            found += 1
            assert v is not None and any(v)
            assert all(sum(r[j] * v[j] for j in range(n)) == 0 for r in rows)
            assert v == basis.vectors[0].cleared()
    assert found > 20


def test_kernel_vector_crt_wide_system_always_finds_vector():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(2, 20)
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n - 1)]
        v = kernel_vector_crt(rows, n)
        assert v is not None
        assert all(sum(r[j] * v[j] for j in range(n)) == 0 for r in rows)


# -- membership checks mod q ------------------------------------------------


def test_check_vector_mod_examples():
    m = bm([[1, 1, 0], [0, 1, 1]])
    zero = RationalVector.from_values([0, 0, 0])
    ones = RationalVector.from_values([1, 1, 1])
    assert check_vector_mod(m, zero, 7, "right")
    assert check_vector_mod(m, ones, 2, "right")
    assert not check_vector_mod(BitMatrix.identity(3), ones, 2, "right")


def test_check_vector_mod_left_and_composite():
    m = bm([[1, 1], [1, 1], [0, 0]])
    v = RationalVector.from_values([1, 5, 3])
    # v . M = (6, 6): divisible by 6 (composite modulus allowed)
    assert check_vector_mod(m, v, 6, "left")
    assert not check_vector_mod(m, v, 4, "left")


def test_check_vector_mod_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        check_vector_mod(BitMatrix.identity(3), RationalVector.from_values([1, 1]), 2, "right")


def test_check_vector_mod_consistent_with_dot_products():
    rng = random.Random(12)
    for _ in range(50):
        n_rows, n_cols = rng.randint(1, 6), rng.randint(1, 6)
        rows = random_bit_rows(rng, n_rows, n_cols)
        mat = bm(rows)
        q = rng.randint(2, 9)
        vec = [rng.randint(-6, 6) for _ in range(n_cols)]
        expect = all(
            sum(rows[i][j] * vec[j] for j in range(n_cols)) % q == 0
            for i in range(n_rows)
        )
        got = check_vector_mod(mat, RationalVector.from_values(vec), q, "right")
        assert got == expect


# -- property-based checks --------------------------------------------------


@st.composite
def bit_matrices(draw, max_dim=10):
    n_rows = draw(st.integers(1, max_dim))
    n_cols = draw(st.integers(1, max_dim))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, 1), min_size=n_cols, max_size=n_cols),
            min_size=n_rows,
            max_size=n_rows,
        )
    )
    return bm(rows)


@given(bit_matrices())
@settings(max_examples=80, deadline=None)
def test_rank_transpose_invariant(m):
    assert rank_gf2(m) == rank_gf2(m.transpose())


@given(bit_matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_always_verify(m):
    basis = kernel_gf2(m, "right")
    for v in basis.vectors:
        assert all((row & v).bit_count() % 2 == 0 for row in m.rows)
    assert basis.dim == m.n_cols - rank_gf2(m)
