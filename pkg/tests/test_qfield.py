import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scissors.qfield import (
    FieldMismatchError,
    QuadElem,
    exact_sqrt,
    qf_conj,
    qf_embed,
    qf_sign,
    quad_sqrt,
    recognize_rational,
)

PHI = QuadElem(Fraction(1, 2), Fraction(1, 2), 5)


def small_rationals():
    return st.fractions(min_value=-20, max_value=20, max_denominator=12)


def quad_elems(d=5):
    return st.builds(lambda a, b: QuadElem(a, b, d), small_rationals(), small_rationals())


def test_embed_golden_ratio():
    assert qf_embed(PHI, 1) == pytest.approx(1.6180339887, abs=1e-9)
    assert qf_embed(PHI, 2) == pytest.approx(-0.6180339887, abs=1e-9)


def test_embed_rational_is_place_independent():
    x = QuadElem.rational(3, 5)
    assert qf_embed(x, 1) == 3.0
    assert qf_embed(x, 2) == 3.0


def test_conj_basics():
    assert qf_conj(PHI) == QuadElem(Fraction(1, 2), Fraction(-1, 2), 5)
    assert qf_conj(QuadElem.rational(3, 5)) == QuadElem.rational(3, 5)


@given(quad_elems())
def test_conj_is_involution(x):
    assert qf_conj(qf_conj(x)) == x


def test_sign_examples():
    assert qf_sign(PHI, 2) == -1
    assert qf_sign(QuadElem.rational(0, 5), 1) == 0
    assert qf_sign(QuadElem(2, -1, 5), 1) == -1  # 2 - sqrt(5) < 0


@given(quad_elems())
def test_sign_matches_embedding(x):
    for place in (1, 2):
        emb = qf_embed(x, place)
        if abs(emb) > 1e-9:
            assert qf_sign(x, place) == (1 if emb > 0 else -1)


@given(quad_elems(), quad_elems(), quad_elems())
@settings(max_examples=60)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * x.inverse() == QuadElem.rational(1, 5)


@given(quad_elems(), quad_elems())
@settings(max_examples=60)
def test_embed_is_multiplicative(x, y):
    for place in (1, 2):
        lhs = qf_embed(x * y, place)
        rhs = qf_embed(x, place) * qf_embed(y, place)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_mixed_field_arithmetic_is_an_error():
    with pytest.raises(FieldMismatchError):
        PHI + QuadElem.sqrt_d(2)


def test_quad_sqrt():
    # phi^2 = phi + 1
    assert quad_sqrt(PHI + 1) == PHI
    assert quad_sqrt(QuadElem.rational(Fraction(16, 25), 5)) == QuadElem.rational(Fraction(4, 5), 5)
    assert quad_sqrt(QuadElem.rational(5, 5)) == QuadElem.sqrt_d(5)
    assert quad_sqrt(QuadElem.rational(Fraction(3, 4), 5)) is None
    assert quad_sqrt(QuadElem(1, 1, 5) * QuadElem(1, 1, 5)) == QuadElem(1, 1, 5)
    # negative at either place cannot be a square
    assert quad_sqrt(QuadElem(2, -1, 5)) is None


def test_exact_sqrt_rational():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None


def test_recognize_examples():
    assert recognize_rational(0.03333333334, 100, 1e-8) == Fraction(1, 30)
    assert recognize_rational(3.14159265358979, 100, 1e-12) is None
    assert recognize_rational(0.5, 10, 0.0) == Fraction(1, 2)


def test_recognize_prefers_small_denominator():
    # 0.5 is within 0.2 of 1/2 but also of 2/5, 3/5, ...; the convergent walk
    # stops at the smallest qualifying denominator.
    assert recognize_rational(0.5 + 1e-13, 100, 1e-9) == Fraction(1, 2)


@given(
    st.integers(min_value=-200, max_value=200),
    st.integers(min_value=1, max_value=50),
    st.floats(min_value=-1e-10, max_value=1e-10),
)
@settings(max_examples=120)
def test_recognize_roundtrip(p, q, eps):
    x = p / q + eps
    got = recognize_rational(x, 50, 1e-9)
    assert got == Fraction(p, q)


def test_recognize_validates_arguments():
    with pytest.raises(ValueError):
        recognize_rational(0.5, 0, 1e-9)
    with pytest.raises(ValueError):
        recognize_rational(0.5, 10, -1.0)


def test_serialization_roundtrip():
    x = QuadElem(Fraction(2, 3), Fraction(-7, 5), 13)
    assert QuadElem.from_list(x.to_list(), 13) == x
    assert x.to_list() == [2, 3, -7, 5]


def test_ordering_is_place_one():
    assert PHI > 1
    assert PHI < 2
    assert abs(QuadElem(2, -1, 5)) == QuadElem(-2, 1, 5)
