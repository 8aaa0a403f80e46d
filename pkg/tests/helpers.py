import random
from fractions import Fraction

from lauricella.exactnum import CyclotomicNumber
from lauricella.weights import CaseLabel, WeightSystem, classify


def weights(*values) -> WeightSystem:
    return WeightSystem(weights=tuple(Fraction(v) for v in values))


def sixths(count: int) -> WeightSystem:
    return WeightSystem(weights=(Fraction(1, 6),) * count)


def random_system(rng: random.Random, case: CaseLabel, max_n: int = 4, max_denominator: int = 12) -> WeightSystem:
    """Rejection sampler for weight systems of a given case"""
    while True:
        n = rng.randint(1, max_n)
        m = rng.randint(2, max_denominator)
        ws = WeightSystem(weights=tuple(Fraction(rng.randint(1, m - 1), m) for _ in range(n + 1)))
        if classify(ws) is case:
            return ws


def random_element(rng: random.Random, order: int) -> CyclotomicNumber:
    """Small random combination of zeta_order powers"""
    terms = rng.randint(1, order)
    return CyclotomicNumber(order, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(terms)])
