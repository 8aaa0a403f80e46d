"""
Numerical Lauricella periods at real-ordered configurations.

F_k = integral over [z_{k-1}, z_k] of prod_{j<k} (zeta - z_j)^{-mu_j} prod_{j>=k} (z_j - zeta)^{-mu_j},
evaluated with Gauss-Jacobi rules that absorb the endpoint singularities.
F_{n+1} runs from z_n to infinity and is mapped onto a finite Jacobi integral.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, linalg, special

from lauricella.errors import (
    CaseError,
    InvalidConfigurationError,
    QuadratureError,
    SchwarzMapError,
    ToleranceError,
    ValidationFailure,
)
from lauricella.hermitian import ambient_form, cumulative_phases, evaluate, form_on_period_coordinates
from lauricella.weights import CaseLabel, WeightSystem, classify, require_case

logger = logging.getLogger(__name__)

DEFAULT_NODES = 64
PARTITION_EXPONENT = 4


@dataclass(frozen=True)
class Configuration:
    """Points z_0 < ... < z_n on the real line, optionally slightly perturbed off it."""

    points: Tuple[complex, ...]

    def __post_init__(self):
        points = tuple(complex(z) for z in self.points)
        object.__setattr__(self, "points", points)
        if len(points) < 2:
            raise InvalidConfigurationError("a configuration needs at least two points")
        reals = [z.real for z in points]
        if any(b <= a for a, b in zip(reals, reals[1:])):
            raise InvalidConfigurationError("real parts must be strictly increasing")
        radius = self.min_gap / 4
        if any(abs(z.imag) >= radius for z in points):
            raise InvalidConfigurationError(f"imaginary perturbations must stay below {radius:g} (a quarter of the smallest gap)")

    @classmethod
    def real(cls, points: Sequence[float]) -> "Configuration":
        return cls(tuple(complex(float(z)) for z in points))

    @property
    def min_gap(self) -> float:
        reals = [z.real for z in self.points]
        return min(b - a for a, b in zip(reals, reals[1:]))


@dataclass(frozen=True)
class QuadratureRule:
    alpha: float
    beta: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class PeriodVector:
    values: np.ndarray
    infinity: Optional[complex]
    nodes: int
    error_estimate: float

    @property
    def n(self) -> int:
        return len(self.values)

    def lifted(self) -> np.ndarray:
        """(F_1..F_{n+1})"""
        if self.infinity is None:
            raise CaseError("F_{n+1} was not computed for this period vector")
        return np.append(self.values, self.infinity)


@lru_cache(maxsize=128)
def gauss_jacobi_rule(alpha: float, beta: float, nodes: int) -> QuadratureRule:
    """Nodes and weights for (1-x)^alpha (1+x)^beta on (-1,1) via the Jacobi matrix eigenproblem"""
    if alpha <= -1 or beta <= -1:
        raise ValueError(f"exponents must exceed -1, got alpha={alpha}, beta={beta}")
    if nodes < 1:
        raise ValueError("at least one node is required")

    ab = alpha + beta
    diagonal = np.empty(nodes)
    diagonal[0] = (beta - alpha) / (ab + 2)
    if nodes > 1:
        j = np.arange(1, nodes, dtype=float)
        s = 2 * j + ab
        diagonal[1:] = (beta ** 2 - alpha ** 2) / (s * (s + 2))

        off_squared = 4 * j * (j + alpha) * (j + beta) * (j + ab) / (s ** 2 * (s + 1) * (s - 1))
        off_squared[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        off_diagonal = np.sqrt(off_squared)
    else:
        off_diagonal = np.empty(0)

    try:
        x, vectors = linalg.eigh_tridiagonal(diagonal, off_diagonal)
    except linalg.LinAlgError as e:
        raise QuadratureError(f"Jacobi eigenproblem did not converge: {e}")

    mu0 = math.exp((ab + 1) * math.log(2) + special.betaln(alpha + 1, beta + 1))
    w = mu0 * vectors[0, :] ** 2
    return QuadratureRule(alpha=alpha, beta=beta, nodes=x, weights=w)


def _segment_period(weights: Sequence[float], points: Sequence[complex], k: int, nodes: int) -> complex:
    """F_k over the straight segment [z_{k-1}, z_k]"""
    a, b = points[k - 1], points[k]
    h = b - a
    rule = gauss_jacobi_rule(-weights[k], -weights[k - 1], nodes)
    zeta = a + h * (1 + rule.nodes) / 2

    smooth = np.ones(rule.size, dtype=complex)
    for j, (z, mu) in enumerate(zip(points, weights)):
        if j < k - 1:
            smooth *= np.power(zeta - z, -mu)
        elif j > k:
            smooth *= np.power(z - zeta, -mu)
    return complex(np.power(h / 2, 1 - weights[k - 1] - weights[k]) * np.dot(rule.weights, smooth))


def _infinity_period(weights: Sequence[float], complement: float, points: Sequence[complex], nodes: int) -> complex:
    """F_{n+1} via zeta = z_n - c + c/omega, c = z_n - z_{n-1}, omega in (0,1]"""
    n = len(points) - 1
    mu_n = weights[n]
    c = points[n] - points[n - 1]
    rule = gauss_jacobi_rule(-mu_n, -complement, nodes)
    omega = (1 + rule.nodes) / 2

    smooth = np.ones(rule.size, dtype=complex)
    for j in range(n):
        smooth *= np.power(c * (1 - omega) + (points[n] - points[j]) * omega, -weights[j])
    scale = np.power(c, 1 - mu_n) * 2.0 ** (mu_n + complement - 1)
    return complex(scale * np.dot(rule.weights, smooth))


def _evaluate(ws: WeightSystem, cfg: Configuration, nodes: int, include_infinity: bool) -> Tuple[np.ndarray, Optional[complex]]:
    weights = [float(mu) for mu in ws.weights]
    points = cfg.points
    values = np.array([_segment_period(weights, points, k, nodes) for k in range(1, ws.n + 1)])
    infinity = _infinity_period(weights, float(ws.complement), points, nodes) if include_infinity else None
    return values, infinity


def lauricella_periods(
    ws: WeightSystem,
    cfg: Configuration,
    nodes: int = DEFAULT_NODES,
    include_infinity: Optional[bool] = None,
) -> PeriodVector:
    case = require_case(ws, CaseLabel.ELLIPTIC, CaseLabel.PARABOLIC, CaseLabel.HYPERBOLIC)
    if len(cfg.points) != ws.n + 1:
        raise InvalidConfigurationError(f"expected {ws.n + 1} points, got {len(cfg.points)}")
    if include_infinity is None:
        include_infinity = case is CaseLabel.HYPERBOLIC
    if include_infinity and case is not CaseLabel.HYPERBOLIC:
        raise CaseError("F_{n+1} is only defined when |mu| > 1")

    values, infinity = _evaluate(ws, cfg, nodes, include_infinity)
    refined, refined_infinity = _evaluate(ws, cfg, 2 * nodes, include_infinity)
    error = float(np.max(np.abs(refined - values)))
    if include_infinity:
        error = max(error, abs(refined_infinity - infinity))
    return PeriodVector(values=values, infinity=infinity, nodes=nodes, error_estimate=error)


def embedded_phases(ws: WeightSystem) -> np.ndarray:
    return np.array([w.embed() for w in cumulative_phases(ws)])


def closure_residual(ws: WeightSystem, pv: PeriodVector) -> float:
    """|sum_{k=1}^{n+1} im(w_k) F_k|, zero in the hyperbolic case"""
    return float(abs(np.dot(embedded_phases(ws).imag, pv.lifted())))


def parabolic_residual(ws: WeightSystem, pv: PeriodVector) -> float:
    """|sum_{k=1}^{n} im(w_k) F_k - pi|, zero in the parabolic case"""
    return float(abs(np.dot(embedded_phases(ws)[: pv.n].imag, pv.values) - math.pi))


def _chart_integrand(points: np.ndarray, mus: np.ndarray, k: int) -> Tuple[Callable, Callable]:
    others = np.array([j for j in range(len(points)) if j != k])
    center = points[k]
    offsets = points[others] - center
    other_mus = mus[others]

    def near(r: float, theta: float) -> float:
        # r dr * phi_k * |density|, divided by the r^{1 - 2 mu_k} quadrature weight
        direction = complex(math.cos(theta), math.sin(theta))
        distances = np.abs(r * direction - offsets)
        if np.any(distances == 0):
            return 0.0
        partition = 1.0 / (1.0 + np.sum((r / distances) ** PARTITION_EXPONENT))
        return float(partition * np.prod(distances ** (-2 * other_mus)))

    def far(s: float, theta: float) -> float:
        # r = 1/s, divided by the s^{2|mu| - 3} quadrature weight
        direction = complex(math.cos(theta), math.sin(theta))
        scaled = np.abs(direction - s * offsets)
        if np.any(scaled == 0):
            return 0.0
        partition = 1.0 / (1.0 + np.sum(scaled ** (-PARTITION_EXPONENT)))
        return float(partition * np.prod(scaled ** (-2 * other_mus)))

    return near, far


def n_integral(ws: WeightSystem, cfg: Configuration, tolerance: float = 1e-6) -> float:
    """N(z) = -integral over C of prod |z_k - zeta|^{-2 mu_k}, in local polar charts"""
    require_case(ws, CaseLabel.HYPERBOLIC)
    if len(cfg.points) != ws.n + 1:
        raise InvalidConfigurationError(f"expected {ws.n + 1} points, got {len(cfg.points)}")
    points = np.array(cfg.points, dtype=complex)
    mus = np.array([float(mu) for mu in ws.weights])
    total_mu = float(ws.total)
    inner_tolerance = tolerance / 10

    total = 0.0
    error = 0.0
    for k in range(len(points)):
        near, far = _chart_integrand(points, mus, k)
        radius = 2 * float(np.max(np.abs(points - points[k])))

        def radial(theta: float) -> float:
            inner, inner_error = integrate.quad(
                near, 0.0, radius, args=(theta,), weight="alg", wvar=(1 - 2 * mus[k], 0.0),
                epsabs=0.0, epsrel=inner_tolerance, limit=200,
            )
            outer, outer_error = integrate.quad(
                far, 0.0, 1.0 / radius, args=(theta,), weight="alg", wvar=(2 * total_mu - 3, 0.0),
                epsabs=0.0, epsrel=inner_tolerance, limit=200,
            )
            return inner + outer

        value, value_error = integrate.quad(radial, 0.0, 2 * math.pi, epsabs=0.0, epsrel=inner_tolerance, limit=200)
        total += value
        error += value_error

    result = -total
    if error > tolerance * abs(result):
        raise ToleranceError(f"N(z) error estimate {error:.3g} exceeds tolerance {tolerance:g} * |N|")
    logger.debug(f"N(z) = {result:.12g} with error estimate {error:.3g}")
    return result


@dataclass
class IdentityResiduals:
    translation: float
    homogeneity: float
    pde: float
    jacobian_singular_values: np.ndarray
    jacobian_rank: int
    parabolic_pi: Optional[float] = None
    closure: Optional[float] = None
    step: float = 1e-4

    @property
    def smallest_singular_value(self) -> float:
        return float(self.jacobian_singular_values[-1])


def _values(ws: WeightSystem, points: Sequence[complex], nodes: int) -> np.ndarray:
    values, _ = _evaluate(ws, Configuration(tuple(points)), nodes, include_infinity=False)
    return values


def identity_checks(
    ws: WeightSystem,
    cfg: Configuration,
    step: float = 1e-4,
    nodes: int = DEFAULT_NODES,
    shift: float = 1e-3,
    rank_tolerance: float = 1e-7,
) -> IdentityResiduals:
    """Residuals of translation invariance, homogeneity, the Lauricella system and the Jacobian rank"""
    case = require_case(ws, CaseLabel.ELLIPTIC, CaseLabel.PARABOLIC, CaseLabel.HYPERBOLIC)
    if step >= cfg.min_gap / 4:
        raise InvalidConfigurationError(f"step {step:g} is too large for the smallest gap {cfg.min_gap:g}")
    points = list(cfg.points)
    size = len(points)
    mus = [float(mu) for mu in ws.weights]
    base = _values(ws, points, nodes)

    translated = _values(ws, [z + shift for z in points], nodes)
    translation = float(np.max(np.abs(translated - base)))

    t = shift
    scaled = _values(ws, [math.exp(t) * z for z in points], nodes)
    homogeneity = float(np.max(np.abs(scaled - math.exp((1 - float(ws.total)) * t) * base)))

    def moved(moves: Sequence[Tuple[int, float]]) -> np.ndarray:
        shifted = list(points)
        for index, delta in moves:
            shifted[index] = shifted[index] + delta
        return _values(ws, shifted, nodes)

    h = step
    first = []
    for j in range(size):
        first.append(
            (-moved([(j, 2 * h)]) + 8 * moved([(j, h)]) - 8 * moved([(j, -h)]) + moved([(j, -2 * h)])) / (12 * h)
        )

    pde = 0.0
    for k in range(size):
        for l in range(k + 1, size):
            mixed = (
                moved([(k, h), (l, h)]) - moved([(k, h), (l, -h)]) - moved([(k, -h), (l, h)]) + moved([(k, -h), (l, -h)])
            ) / (4 * h * h)
            rhs = (mus[l] * first[k] - mus[k] * first[l]) / (points[k] - points[l])
            pde = max(pde, float(np.max(np.abs(mixed - rhs))))

    # z_0 pinned: columns are derivatives in z_1..z_n
    jacobian = np.column_stack(first[1:])
    singular_values = np.linalg.svd(jacobian, compute_uv=False)
    rank = int(np.sum(singular_values > rank_tolerance * max(singular_values[0], 1.0)))

    report = IdentityResiduals(
        translation=translation,
        homogeneity=homogeneity,
        pde=pde,
        jacobian_singular_values=singular_values,
        jacobian_rank=rank,
        step=step,
    )
    if case is CaseLabel.PARABOLIC:
        report.parabolic_pi = parabolic_residual(ws, PeriodVector(base, None, nodes, 0.0))
    if case is CaseLabel.HYPERBOLIC:
        report.closure = closure_residual(ws, lauricella_periods(ws, cfg, nodes))
    return report


@dataclass
class SchwarzPoint:
    projective: np.ndarray
    ball: Optional[np.ndarray] = None
    radius: Optional[float] = None
    affine: Optional[np.ndarray] = None
    affine_residual: Optional[float] = None


def _normalize(values: np.ndarray) -> np.ndarray:
    anchor = int(np.argmax(np.abs(values)))
    return values / values[anchor]


def schwarz_point(ws: WeightSystem, pv: PeriodVector) -> SchwarzPoint:
    values = np.asarray(pv.values, dtype=complex)
    if not np.any(values):
        raise ValidationFailure("the period vector is zero")
    point = SchwarzPoint(projective=_normalize(values))
    case = classify(ws)

    if case is CaseLabel.HYPERBOLIC:
        gram = form_on_period_coordinates(ws).to_numpy()
        eigenvalues, vectors = np.linalg.eigh(gram)
        coordinates = np.sqrt(np.abs(eigenvalues)) * (vectors.conj().T @ values)
        negative = eigenvalues < 0
        if np.sum(negative) != 1:
            raise SchwarzMapError(f"form has {int(np.sum(negative))} negative directions, expected 1")
        ball = coordinates[~negative] / coordinates[negative][0]
        radius = float(np.linalg.norm(ball))
        if radius > 1:
            raise SchwarzMapError(f"point lies outside the unit ball (radius {radius:.6g})")
        point.ball = ball
        point.radius = radius
    elif case is CaseLabel.PARABOLIC:
        level = np.dot(embedded_phases(ws)[: pv.n].imag, values)
        point.affine = values * math.pi / level
        point.affine_residual = float(abs(level - math.pi))
    return point


@dataclass
class PeriodFormCheck:
    closure: float
    form_value: float
    n_value: float
    relative_gap: float


def verify_period_form(
    ws: WeightSystem,
    cfg: Configuration,
    nodes: int = DEFAULT_NODES,
    tolerance: float = 1e-6,
    closure_tolerance: float = 1e-8,
) -> PeriodFormCheck:
    """H(F,F) against N(z), using the measured F_{n+1} after checking the closure identity"""
    require_case(ws, CaseLabel.HYPERBOLIC)
    pv = lauricella_periods(ws, cfg, nodes, include_infinity=True)
    closure = closure_residual(ws, pv)
    scale = max(1.0, float(np.max(np.abs(pv.lifted()))))
    if closure > closure_tolerance * scale:
        raise ToleranceError(f"closure identity violated: residual {closure:.3g}")
    lifted = pv.lifted()
    form_value = evaluate(ambient_form(ws), lifted, lifted).real
    n_value = n_integral(ws, cfg, tolerance)
    return PeriodFormCheck(
        closure=closure,
        form_value=form_value,
        n_value=n_value,
        relative_gap=abs(form_value - n_value) / abs(n_value),
    )
