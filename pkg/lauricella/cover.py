"""
Invariants of the cyclic cover w^m = prod (z_k - zeta)^{d_k}: eigenspace
dimensions of holomorphic differentials, genus, and the arithmeticity test.
"""

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from lauricella.errors import InvalidIndexError
from lauricella.exactnum import Rational
from lauricella.weights import CaseLabel, WeightSystem, require_case


class CoverProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int
    ramification: Tuple[int, ...]
    eigendims: Tuple[int, ...]
    genus: int


class Witness(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: int
    sum_r: Rational
    sum_minus_r: Rational

    def render(self) -> str:
        return f"r={self.r}: {self.sum_r.numerator}/{self.sum_r.denominator}, {self.sum_minus_r.numerator}/{self.sum_minus_r.denominator}"


class EigenformData(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: int
    degree_bound: Rational
    vanishing_orders: Tuple[int, ...]
    dimension: int


def _frac(value: Fraction) -> Fraction:
    return value - math.floor(value)


def fractional_sum(ws: WeightSystem, r: int) -> Fraction:
    """S_r = sum_{k=0}^{n} {r mu_k}"""
    return sum((_frac(r * mu) for mu in ws.weights), Fraction(0))


def eigenspace_dims(ws: WeightSystem) -> List[int]:
    require_case(ws, CaseLabel.HYPERBOLIC)
    m = ws.denominator
    dims = [0]
    for r in range(1, m):
        dims.append(math.ceil(fractional_sum(ws, r)) - 1)
    return dims


def genus(ws: WeightSystem) -> int:
    """From 2 - 2g = -m n + sum_{k=0}^{n+1} m/m_k"""
    require_case(ws, CaseLabel.HYPERBOLIC)
    m = ws.denominator
    euler = -m * ws.n + sum(m // order for order in ws.local_orders)
    return (2 - euler) // 2


def cover_profile(ws: WeightSystem) -> CoverProfile:
    dims = eigenspace_dims(ws)
    g = genus(ws)
    return CoverProfile(m=ws.denominator, ramification=ws.local_orders, eigendims=tuple(dims), genus=g)


def eigenspace_signature(ws: WeightSystem, r: int) -> Tuple[int, int]:
    m = ws.denominator
    r %= m
    if r == 0:
        raise InvalidIndexError("r must be nonzero modulo m")
    dims = eigenspace_dims(ws)
    return dims[r], dims[m - r]


def is_arithmetic(ws: WeightSystem) -> Tuple[bool, List[Witness]]:
    """Arithmetic iff every Galois-conjugate eigenspace (r != +-1) is definite"""
    require_case(ws, CaseLabel.HYPERBOLIC)
    m = ws.denominator
    dims = eigenspace_dims(ws)
    witnesses = []
    for r in range(2, m - 1):
        if math.gcd(r, m) != 1:
            continue
        if dims[r] > 0 and dims[m - r] > 0:
            witnesses.append(Witness(r=r, sum_r=fractional_sum(ws, r), sum_minus_r=fractional_sum(ws, m - r)))
    return not witnesses, witnesses


def eigenform_data(ws: WeightSystem, r: int) -> EigenformData:
    """Eigenforms w^{-r} f(zeta) d zeta: deg f < bound, f vanishing to order floor(r mu_k) at z_k"""
    require_case(ws, CaseLabel.HYPERBOLIC)
    m = ws.denominator
    r %= m
    if r == 0:
        raise InvalidIndexError("r must be nonzero modulo m")
    bound = -1 + r * ws.total
    orders = tuple(math.floor(r * mu) for mu in ws.weights)
    count = math.ceil(bound) if bound > 0 else 0
    return EigenformData(r=r, degree_bound=bound, vanishing_orders=orders, dimension=max(0, count - sum(orders)))


def epsilon_periods(ws: WeightSystem, values: Sequence[complex]) -> np.ndarray:
    """Integrals of the cover's eigenform over the epsilon cycles: m F_k"""
    return ws.denominator * np.asarray(values, dtype=complex)
