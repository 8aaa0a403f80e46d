import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate, special

from lauricella.errors import CaseError, InvalidConfigurationError
from lauricella.hermitian import ambient_form, evaluate
from lauricella.periods import (
    Configuration,
    PeriodVector,
    closure_residual,
    gauss_jacobi_rule,
    identity_checks,
    lauricella_periods,
    n_integral,
    parabolic_residual,
    schwarz_point,
    verify_period_form,
)
from lauricella.weights import WeightSystem
from tests.helpers import sixths, weights

CONFIGURATION = Configuration.real([0, 1, 2, 3])


def test_gauss_legendre_two_nodes():
    rule = gauss_jacobi_rule(0.0, 0.0, 2)
    assert np.allclose(rule.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-14)
    assert np.allclose(rule.weights, [1.0, 1.0], atol=1e-14)


def test_chebyshev_rule():
    n = 7
    rule = gauss_jacobi_rule(-0.5, -0.5, n)
    expected = np.sort(np.cos((2 * np.arange(1, n + 1) - 1) * np.pi / (2 * n)))
    assert np.allclose(rule.nodes, expected, atol=1e-13)
    assert np.allclose(rule.weights, np.pi / n, atol=1e-13)


def test_jacobi_moments_match_adaptive_reference():
    alpha, beta = -1 / 3, -1 / 4
    rule = gauss_jacobi_rule(alpha, beta, 8)
    assert np.all(rule.weights > 0)
    assert np.all(np.diff(rule.nodes) > 0)
    assert -1 < rule.nodes[0] and rule.nodes[-1] < 1
    for j in range(6):
        reference, _ = integrate.quad(lambda x: x ** j, -1, 1, weight="alg", wvar=(beta, alpha), epsabs=1e-14, epsrel=1e-14)
        assert np.dot(rule.weights, rule.nodes ** j) == pytest.approx(reference, abs=1e-12)


def test_rule_rejects_bad_exponents():
    with pytest.raises(ValueError):
        gauss_jacobi_rule(-1.0, 0.0, 4)


def test_configuration_validation():
    with pytest.raises(InvalidConfigurationError):
        Configuration.real([0, 2, 1])
    with pytest.raises(InvalidConfigurationError):
        Configuration((0, 1 + 0.3j, 2))
    assert Configuration((0, 1 + 0.1j, 2)).min_gap == 1


def test_half_half_period_is_pi():
    pv = lauricella_periods(weights("1/2", "1/2"), Configuration.real([0, 1]), nodes=32)
    assert pv.values[0] == pytest.approx(math.pi, abs=1e-10)


def test_third_two_thirds_period():
    pv = lauricella_periods(weights("1/3", "2/3"), Configuration.real([0, 1]), nodes=32)
    assert pv.values[0].real == pytest.approx(2 * math.pi / math.sqrt(3), abs=1e-10)


def test_two_point_periods_match_beta_function(rng):
    for _ in range(50):
        mu = (Fraction(rng.randint(1, 11), 12), Fraction(rng.randint(1, 11), 12))
        ws = WeightSystem(weights=mu)
        pv = lauricella_periods(ws, Configuration.real([0, 1]), nodes=32)
        expected = math.exp(special.betaln(1 - float(mu[0]), 1 - float(mu[1])))
        assert abs(pv.values[0] - expected) <= 1e-10 * max(1.0, expected), ws.label()


def test_parabolic_pi_identity(parabolic_quarters):
    pv = lauricella_periods(parabolic_quarters, CONFIGURATION, nodes=64)
    assert np.all(pv.values.real > 0)
    assert np.allclose(pv.values.imag, 0, atol=1e-14)
    assert pv.infinity is None
    assert parabolic_residual(parabolic_quarters, pv) <= 1e-8
    assert pv.error_estimate < 1e-10


def test_hyperbolic_closure_and_negativity(cocompact_example):
    pv = lauricella_periods(cocompact_example, CONFIGURATION, nodes=64)
    assert pv.infinity is not None
    assert np.all(pv.lifted().real > 0)
    assert closure_residual(cocompact_example, pv) <= 1e-8
    lifted = pv.lifted()
    assert evaluate(ambient_form(cocompact_example), lifted, lifted).real < 0


def test_period_input_validation(parabolic_quarters):
    with pytest.raises(CaseError):
        lauricella_periods(parabolic_quarters, CONFIGURATION, include_infinity=True)
    with pytest.raises(CaseError):
        lauricella_periods(sixths(12), Configuration.real(range(12)))
    with pytest.raises(InvalidConfigurationError):
        lauricella_periods(parabolic_quarters, Configuration.real([0, 1, 2]))


def test_identity_residuals_parabolic(parabolic_quarters):
    checks = identity_checks(parabolic_quarters, CONFIGURATION, step=1e-4)
    assert checks.translation <= 1e-9
    assert checks.homogeneity <= 1e-9
    assert checks.pde <= 1e-5
    assert checks.jacobian_rank == 2
    assert checks.jacobian_singular_values[1] > 1e-3
    assert checks.jacobian_singular_values[2] < 1e-7
    assert checks.parabolic_pi <= 1e-8
    assert checks.closure is None


def test_identity_residuals_hyperbolic(cocompact_example):
    checks = identity_checks(cocompact_example, CONFIGURATION, step=1e-4)
    assert checks.pde <= 1e-5
    assert checks.translation <= 1e-9
    assert checks.smallest_singular_value > 1e-3
    assert checks.jacobian_rank == 3
    assert checks.closure <= 1e-8


def test_step_must_fit_the_configuration(parabolic_quarters):
    with pytest.raises(InvalidConfigurationError):
        identity_checks(parabolic_quarters, CONFIGURATION, step=0.5)


def test_schwarz_point_hyperbolic(cocompact_example):
    pv = lauricella_periods(cocompact_example, CONFIGURATION)
    point = schwarz_point(cocompact_example, pv)
    assert point.radius < 1
    scaled = PeriodVector((2 - 3j) * pv.values, (2 - 3j) * pv.infinity, pv.nodes, pv.error_estimate)
    assert np.allclose(schwarz_point(cocompact_example, scaled).projective, point.projective)


def test_schwarz_point_parabolic(parabolic_quarters):
    pv = lauricella_periods(parabolic_quarters, CONFIGURATION)
    point = schwarz_point(parabolic_quarters, pv)
    assert point.affine_residual <= 1e-8
    assert point.ball is None


@pytest.mark.slow
def test_n_integral_two_points_matches_gamma_product():
    ws = weights("2/3", "2/3")
    value = n_integral(ws, Configuration.real([0, 1]), tolerance=1e-6)
    gamma_ratio = special.gamma(1 / 3) / special.gamma(2 / 3)
    assert value == pytest.approx(-math.pi * gamma_ratio ** 3, rel=1e-4)


@pytest.mark.slow
def test_n_integral_scaling():
    ws = weights("2/3", "2/3", "1/3")
    base = n_integral(ws, Configuration.real([0, 1, 2]), tolerance=1e-6)
    doubled = n_integral(ws, Configuration.real([0, 2, 4]), tolerance=1e-6)
    assert base < 0
    assert doubled == pytest.approx(2 ** (2 - 2 * float(ws.total)) * base, rel=1e-4)


@pytest.mark.slow
def test_period_form_equals_n_integral(cocompact_example):
    check = verify_period_form(cocompact_example, CONFIGURATION, tolerance=1e-5)
    assert check.closure <= 1e-8
    assert check.form_value < 0
    assert check.relative_gap <= 1e-3
