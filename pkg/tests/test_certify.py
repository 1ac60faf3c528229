"""Certification pipeline: verdicts, witnesses, tamper detection."""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from oracles import naive_det
from singmat.certify import (
    SingularityCertificate,
    is_singular_exact,
    verify_certificate,
)
from singmat.errors import DimensionMismatch, NotSquare
from singmat.matrices import BitMatrix
from singmat.models import SampleSpec, sample


def bm(rows):
    return BitMatrix.from_rows(rows)


def test_identity_is_nonsingular_via_gf2():
    cert = is_singular_exact(BitMatrix.identity(5))
    assert cert.verdict == "nonsingular"
    assert cert.prime == 2 and cert.residue == 1
    assert cert.stats.gf2_rank == 5


def test_even_determinant_needs_prime_stage():
    m = bm([[1, 1, 0], [0, 1, 1], [1, 0, 1]])  # det 2, gf2 rank 2
    cert = is_singular_exact(m)
    assert cert.verdict == "nonsingular"
    assert cert.stats.gf2_rank == 2
    assert cert.prime not in (None, 2)
    assert cert.residue == 2 % cert.prime


def test_zero_column_witness():
    cert = is_singular_exact(bm([[1, 0], [1, 0]]))
    assert cert.verdict == "singular"
    assert cert.kernel_vector == (0, 1)


def test_exhaustive_agreement_with_determinant_up_to_3():
    for n in (1, 2, 3):
        for bits in range(1 << (n * n)):
            rows = [[(bits >> (n * i + j)) & 1 for j in range(n)] for i in range(n)]
            cert = is_singular_exact(bm(rows), prime_seed=bits)
            assert cert.is_singular == (naive_det(rows) == 0)


def test_all_certificates_verify_on_random_instances():
    rng = random.Random(0)
    for trial in range(150):
        n = rng.randint(1, 24)
        if rng.random() < 0.5:
            spec = SampleSpec.bernoulli(n, Fraction(rng.randint(0, 8), 8), trial)
        else:
            spec = SampleSpec.combinatorial(n, rng.randint(0, n), trial)
        m = sample(spec)
        cert = is_singular_exact(m, prime_seed=trial)
        assert verify_certificate(m, cert)


def test_verdict_independent_of_prime_seed():
    rng = random.Random(1)
    for trial in range(10):
        n = rng.randint(2, 16)
        m = sample(SampleSpec.bernoulli(n, Fraction(1, 4), trial))
        verdicts = {is_singular_exact(m, prime_seed=s).verdict for s in range(10)}
        assert len(verdicts) == 1


def test_nonsingular_whenever_gf2_full_rank():
    rng = random.Random(2)
    for trial in range(40):
        n = rng.randint(1, 16)
        m = sample(SampleSpec.bernoulli(n, Fraction(1, 2), 1000 + trial))
        cert = is_singular_exact(m, prime_seed=trial)
        if cert.stats.gf2_rank == n:
            assert cert.verdict == "nonsingular"


def test_tampered_singular_witness_fails():
    m = bm([[1, 0], [1, 0]])
    cert = is_singular_exact(m)
    zeroed = replace(cert, kernel_vector=(0, 0))
    assert not verify_certificate(m, zeroed)
    wrong = replace(cert, kernel_vector=(1, 1))
    assert not verify_certificate(m, wrong)


def test_tampered_residue_fails():
    m = bm([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    cert = is_singular_exact(m)
    bumped = replace(cert, residue=cert.residue + 1)
    assert not verify_certificate(m, bumped)


def test_witness_length_mismatch_raises():
    m = bm([[1, 0], [1, 0]])
    cert = is_singular_exact(m)
    bad = replace(cert, kernel_vector=(0, 1, 0))
    with pytest.raises(DimensionMismatch):
        verify_certificate(m, bad)


def test_not_square_raises():
    with pytest.raises(NotSquare):
        is_singular_exact(BitMatrix.zeros(2, 3))


def test_json_round_trip():
    for rows in ([[1, 0], [1, 0]], [[1, 1, 0], [0, 1, 1], [1, 0, 1]]):
        m = bm(rows)
        cert = is_singular_exact(m)
        text = cert.to_json()
        back = SingularityCertificate.from_json(text)
        assert back.verdict == cert.verdict
        assert back.kernel_vector == cert.kernel_vector
        assert back.prime == cert.prime and back.residue == cert.residue
        assert verify_certificate(m, back)
        assert '"verdict"' in text and '"witness"' in text


def test_witness_is_canonical():
    # Witness entries share no common factor; first nonzero is positive.
    rng = random.Random(3)
    seen = 0
    for trial in range(200):
        n = rng.randint(2, 12)
        m = sample(SampleSpec.combinatorial(n, rng.randint(0, max(1, n // 3)), trial))
        cert = is_singular_exact(m, prime_seed=trial)
        if not cert.is_singular:
            continue
        seen += 1
        from math import gcd

        g = 0
        for v in cert.kernel_vector:
            g = gcd(g, v)
        assert g == 1
        first = next(v for v in cert.kernel_vector if v)
        assert first > 0
    assert seen > 30


def test_empty_matrix_certificate():
    cert = is_singular_exact(BitMatrix(0, 0, ()))
    assert cert.verdict == "nonsingular"
