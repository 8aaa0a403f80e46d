import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from lauricella.errors import ConductorOverflowError, CyclotomicZeroDivisionError, NotRealError
from lauricella.exactnum import (
    CyclotomicNumber,
    ambient_conductor,
    cos_pi_over,
    cot_pi_over,
    csc_pi_over,
    format_rational,
    one,
    parse_rational,
    root_of_unity,
    sin_pi_over,
    zero,
)
from tests.helpers import random_element


def test_parse_rational_accepts_text_and_ints():
    assert parse_rational("3/12") == Fraction(1, 4)
    assert parse_rational(" -2/4 ") == Fraction(-1, 2)
    assert parse_rational(5) == Fraction(5)


@pytest.mark.parametrize("bad", ["3/", "1/0", "a/2", 0.5, True, None])
def test_parse_rational_rejects_inexact_or_malformed(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_always_has_a_slash():
    assert format_rational(Fraction(2)) == "2/1"
    assert format_rational(Fraction(-7, 12)) == "-7/12"


def test_conductor_is_a_multiple_of_four():
    assert ambient_conductor(3) == 12
    assert ambient_conductor(8) == 8
    assert ambient_conductor(1) == 4


def test_root_of_unity_powers():
    zeta = root_of_unity(3)
    assert zeta ** 3 == 1
    assert 1 + zeta + zeta ** 2 == 0
    i = root_of_unity(4)
    assert i * i == -1


def test_equality_and_hash_across_conductors():
    a = root_of_unity(3, 1)
    b = root_of_unity(3, 1).lift(24)
    assert (a.order, b.order) == (12, 24)
    assert a == b
    assert hash(a) == hash(b)
    assert root_of_unity(6, 2) == a
    c = root_of_unity(12).lift(60)
    assert c == root_of_unity(12)
    assert hash(c) == hash(root_of_unity(12))
    assert hash(CyclotomicNumber.constant(Fraction(2, 3), 20)) == hash(Fraction(2, 3) * one(12))


def test_minimal_conductor():
    assert root_of_unity(3).lift(24).minimal_conductor() == 12
    assert root_of_unity(12).lift(60).minimal_conductor() == 12
    assert root_of_unity(5).minimal_conductor() == 20
    assert one(24).minimal_conductor() == 4
    assert root_of_unity(4).lift(40).minimal_conductor() == 4


def test_hash_separates_galois_conjugates():
    roots = [root_of_unity(12, k) for k in (1, 5, 7, 11)]
    assert len({hash(r) for r in roots}) == 4
    assert len(set(roots)) == 4
    assert root_of_unity(12, 13) in set(roots)


def test_inverse_round_trip():
    x = 1 + root_of_unity(5) - 3 * root_of_unity(5, 2)
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert (2 / x) * x == 2


def test_inverse_of_rational_elements():
    half = CyclotomicNumber.constant(Fraction(1, 2), 12)
    assert half.inverse() == 2
    assert half.inverse() * half == 1
    assert CyclotomicNumber.constant(-3, 8).inverse() == Fraction(-1, 3)
    assert 1 / CyclotomicNumber.constant(4, 20) == Fraction(1, 4)
    assert CyclotomicNumber.constant(Fraction(2, 5), 4) ** -2 == Fraction(25, 4)


@pytest.mark.parametrize("order", [4, 8, 12, 20, 24])
def test_inverse_of_random_elements(rng, order):
    for _ in range(200):
        a = random_element(rng, order)
        if a.is_zero:
            continue
        assert a.inverse() * a == 1


@pytest.mark.parametrize("order", [8, 12, 20])
def test_embedding_is_a_ring_homomorphism(rng, order):
    for _ in range(100):
        a = random_element(rng, order)
        b = random_element(rng, order)
        scale = 1 + abs(a.embed()) * abs(b.embed())
        assert abs((a * b).embed() - a.embed() * b.embed()) <= 1e-9 * scale
        assert abs((a + b).embed() - (a.embed() + b.embed())) <= 1e-9 * scale


@pytest.mark.parametrize("order", [8, 12, 20, 24])
def test_conjugation_is_a_field_automorphism(rng, order):
    for _ in range(100):
        a = random_element(rng, order)
        b = random_element(rng, order)
        assert (a + b).conjugate() == a.conjugate() + b.conjugate()
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        assert a.conjugate().conjugate() == a
        assert abs(a.conjugate().embed() - a.embed().conjugate()) <= 1e-9 * (1 + abs(a.embed()))


@pytest.mark.parametrize("order", [12, 20, 24])
def test_sign_of_real_agrees_with_embedding(rng, order):
    for _ in range(100):
        a = random_element(rng, order)
        real = a + a.conjugate()
        value = real.embed().real
        if abs(value) <= 1e-9:
            continue
        assert real.sign_of_real() == int(np.sign(value))


def test_division_by_exact_zero():
    with pytest.raises(CyclotomicZeroDivisionError):
        zero(12).inverse()
    with pytest.raises(ZeroDivisionError):
        one(12) / zero(12)
    with pytest.raises(ZeroDivisionError):
        one(12) / 0


def test_trigonometric_constants_are_exact():
    assert sin_pi_over(6) == Fraction(1, 2)
    assert cos_pi_over(3) == Fraction(1, 2)
    assert cot_pi_over(4) == 1
    assert csc_pi_over(6) == 2
    assert cos_pi_over(6) ** 2 == Fraction(3, 4)
    assert cot_pi_over(3).is_real
    assert cot_pi_over(3).embed() == pytest.approx(1 / math.sqrt(3), abs=1e-14)


def test_conjugate_real_and_imaginary_parts():
    zeta = root_of_unity(8)
    assert zeta * zeta.conjugate() == 1
    assert zeta.real_part() == zeta.imag_part()
    assert zeta.real_part() ** 2 == Fraction(1, 2)
    assert zeta.real_part().is_real


def test_embed_matches_complex_exponential():
    for k in range(12):
        assert root_of_unity(12, k).embed() == pytest.approx(cmath.exp(2j * math.pi * k / 12), abs=1e-14)


def test_sign_of_real():
    golden_half = cos_pi_over(5)  # 0.80901699...
    assert (golden_half - Fraction(4, 5)).sign_of_real() == 1
    assert (golden_half - Fraction(81, 100)).sign_of_real() == -1
    assert (golden_half - golden_half).sign_of_real() == 0


def test_sign_of_non_real_element_is_rejected():
    with pytest.raises(NotRealError):
        root_of_unity(3).sign_of_real()


def test_conductor_cap(monkeypatch):
    monkeypatch.setenv("LAURICELLA_MAX_CONDUCTOR", "16")
    with pytest.raises(ConductorOverflowError):
        root_of_unity(40)


def test_json_round_trip():
    x = Fraction(1, 3) + root_of_unity(7, 3)
    data = x.to_json()
    assert data["conductor"] == 28
    assert all("/" in c for c in data["coefficients"])
    assert CyclotomicNumber.from_json(data) == x
