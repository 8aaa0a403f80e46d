"""
Weight systems mu_0..mu_n, case classification, the INT / half-INT pair
conditions, stability of partitions and cusp splittings.
"""

import itertools
import math
from collections import Counter
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from lauricella.errors import CaseError, InvalidWeightsError, MalformedPartitionError, ParseError
from lauricella.exactnum import Rational, format_rational, parse_rational


class CaseLabel(str, Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"
    OUT_OF_RANGE = "OutOfRange"

    @property
    def letter(self) -> str:
        return {"Elliptic": "E", "Parabolic": "P", "Hyperbolic": "H", "OutOfRange": "O"}[self.value]


class IndexRange(str, Enum):
    FINITE = "finite-only"
    INFINITY = "include-infinity"


class Stability(str, Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


class WeightSystem(BaseModel):
    """Rational weights mu_0..mu_n, each strictly between 0 and 1."""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[Rational, ...]

    @field_validator('weights')
    @classmethod
    def weights_in_open_unit_interval(cls, v):
        if len(v) < 2:
            raise ValueError('at least two weights are required (n >= 1)')
        for k, mu in enumerate(v):
            if not 0 < mu < 1:
                raise ValueError(f'weight mu_{k} = {format_rational(mu)} is not in (0,1)')
        return v

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def complement(self) -> Fraction:
        """mu_{n+1} = 2 - |mu|, the weight at infinity"""
        return 2 - self.total

    @property
    def complement_admissible(self) -> bool:
        return 0 < self.complement < 1

    @property
    def extended(self) -> Tuple[Fraction, ...]:
        """mu_0..mu_{n+1}"""
        return self.weights + (self.complement,)

    @property
    def denominator(self) -> int:
        """m, the lcm of the denominators of mu_0..mu_{n+1}"""
        return math.lcm(*(mu.denominator for mu in self.extended))

    @property
    def numerators(self) -> Tuple[int, ...]:
        """d_0..d_{n+1} with mu_k = d_k/m"""
        m = self.denominator
        return tuple(int(mu * m) for mu in self.extended)

    @property
    def local_orders(self) -> Tuple[int, ...]:
        """m_0..m_{n+1}, the reduced denominator of each weight"""
        return tuple(mu.denominator for mu in self.extended)

    def canonical(self) -> "WeightSystem":
        return WeightSystem(weights=tuple(sorted(self.weights)))

    def label(self) -> str:
        return ",".join(format_rational(mu) for mu in self.weights)

    def __str__(self):
        return self.label()


def weight_system(values: Iterable) -> WeightSystem:
    """Build a WeightSystem, reporting violations as InvalidWeightsError"""
    try:
        return WeightSystem(weights=tuple(values))
    except ValidationError as e:
        message = "; ".join(error["msg"] for error in e.errors())
        raise InvalidWeightsError(message)


def parse_weights(text: str) -> WeightSystem:
    """Parse "3/12,3/12,3/12,7/12"; positions are 0-based character offsets"""
    if not text or not text.strip():
        raise ParseError("empty weight list", position=0)
    values = []
    offset = 0
    for token in text.split(","):
        stripped = token.strip()
        position = offset + (len(token) - len(token.lstrip()))
        try:
            values.append(parse_rational(stripped))
        except ValueError as e:
            raise ParseError(str(e), position=position)
        offset += len(token) + 1
    return weight_system(values)


def classify(ws: WeightSystem) -> CaseLabel:
    total = ws.total
    if total < 1:
        return CaseLabel.ELLIPTIC
    if total == 1:
        return CaseLabel.PARABOLIC
    if total < 2:
        return CaseLabel.HYPERBOLIC
    return CaseLabel.OUT_OF_RANGE


def require_case(ws: WeightSystem, *allowed: CaseLabel) -> CaseLabel:
    case = classify(ws)
    if case not in allowed:
        names = ", ".join(c.value for c in allowed)
        raise CaseError(f"{ws.label()} is {case.value} (|mu| = {format_rational(ws.total)}); expected {names}")
    return case


class PairRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    l: int
    pair_sum: Rational
    applicable: bool
    reciprocal: Optional[Rational] = None
    integral: bool
    half_integral_equal: bool
    finite_local_monodromy: bool
    extends_holomorphically: bool
    local_isomorphism: bool
    quotient: bool


class ConditionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    index_range: IndexRange
    records: Tuple[PairRecord, ...]
    int_ok: bool
    half_int_ok: bool


def _pair_record(k: int, l: int, mu_k: Fraction, mu_l: Fraction) -> PairRecord:
    pair_sum = mu_k + mu_l
    applicable = pair_sum < 1
    reciprocal = 1 / (1 - pair_sum) if applicable else None
    integral = applicable and reciprocal.denominator == 1
    half_integral_equal = applicable and mu_k == mu_l and (2 * reciprocal).denominator == 1
    return PairRecord(
        k=k,
        l=l,
        pair_sum=pair_sum,
        applicable=applicable,
        reciprocal=reciprocal,
        integral=integral,
        half_integral_equal=half_integral_equal,
        finite_local_monodromy=pair_sum != 1,
        extends_holomorphically=applicable,
        local_isomorphism=integral,
        quotient=half_integral_equal and not integral,
    )


def check_conditions(ws: WeightSystem, index_range: IndexRange = IndexRange.FINITE) -> ConditionReport:
    index_range = IndexRange(index_range)
    if index_range is IndexRange.INFINITY:
        require_case(ws, CaseLabel.HYPERBOLIC)
        indexed = ws.extended
    else:
        indexed = ws.weights

    records = tuple(
        _pair_record(k, l, indexed[k], indexed[l])
        for k, l in itertools.combinations(range(len(indexed)), 2)
    )
    applicable = [r for r in records if r.applicable]
    return ConditionReport(
        index_range=index_range,
        records=records,
        int_ok=all(r.integral for r in applicable),
        half_int_ok=all(r.integral or r.half_integral_equal for r in applicable),
    )


def case_range(ws: WeightSystem) -> IndexRange:
    """Pair range the discreteness criterion quantifies over for this case"""
    return IndexRange.INFINITY if classify(ws) is CaseLabel.HYPERBOLIC else IndexRange.FINITE


def stability_of_partition(ws: WeightSystem, partition: Iterable[Iterable[int]], affine: bool = False) -> Stability:
    size = ws.n + 1 if affine else ws.n + 2
    if not affine and not ws.complement_admissible:
        raise CaseError("partitions including infinity need a hyperbolic weight system")

    parts = [tuple(part) for part in partition]
    seen: List[int] = [index for part in parts for index in part]
    if any(not part for part in parts):
        raise MalformedPartitionError("empty part")
    if sorted(seen) != list(range(size)):
        raise MalformedPartitionError(f"parts must cover 0..{size - 1} exactly once, got {parts}")

    indexed = ws.extended
    heaviest = max(sum((indexed[i] for i in part), Fraction(0)) for part in parts)
    if heaviest < 1:
        return Stability.STABLE
    if heaviest == 1:
        return Stability.STRICTLY_SEMISTABLE
    return Stability.UNSTABLE


def cusp_splittings(ws: WeightSystem) -> List[Tuple[int, ...]]:
    """Subsets S of {0..n+1} containing 0 with mu-weight exactly 1"""
    require_case(ws, CaseLabel.HYPERBOLIC)
    numerators = ws.numerators
    target = ws.denominator
    found: List[Tuple[int, ...]] = []

    def walk(index: int, chosen: List[int], remaining: int):
        if remaining == 0:
            found.append(tuple(chosen))
            return
        for j in range(index, len(numerators)):
            if numerators[j] <= remaining:
                chosen.append(j)
                walk(j + 1, chosen, remaining - numerators[j])
                chosen.pop()

    walk(1, [0], target - numerators[0])
    return sorted(found)


def symmetry_group_order(ws: WeightSystem, index_range: IndexRange = IndexRange.FINITE) -> int:
    indexed = ws.extended if IndexRange(index_range) is IndexRange.INFINITY else ws.weights
    order = 1
    for multiplicity in Counter(indexed).values():
        order *= math.factorial(multiplicity)
    return order


class DiscretenessVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: CaseLabel
    index_range: IndexRange
    criterion: str
    satisfied: bool
    conclusion: str
    cocompact: Optional[bool] = None
    symmetry_order: int = 1


def discreteness(ws: WeightSystem) -> DiscretenessVerdict:
    """Apply the INT / half-INT sufficient criterion appropriate to the case"""
    case = require_case(ws, CaseLabel.ELLIPTIC, CaseLabel.PARABOLIC, CaseLabel.HYPERBOLIC)
    index_range = case_range(ws)
    report = check_conditions(ws, index_range)

    if case is CaseLabel.HYPERBOLIC:
        satisfied = report.half_int_ok
        criterion = "half-INT"
        cocompact = not cusp_splittings(ws) if satisfied else None
        if not satisfied:
            conclusion = "criterion not satisfied"
        elif report.int_ok:
            conclusion = "lattice in PU(n-1,1)"
        else:
            conclusion = "lattice in PU(n-1,1) acting on a quotient by the equal-weight symmetries"
        return DiscretenessVerdict(
            case=case,
            index_range=index_range,
            criterion=criterion,
            satisfied=satisfied,
            conclusion=conclusion,
            cocompact=cocompact,
            symmetry_order=symmetry_group_order(ws, index_range),
        )

    satisfied = report.int_ok
    if not satisfied:
        conclusion = "criterion not satisfied"
    elif case is CaseLabel.ELLIPTIC:
        conclusion = "finite complex reflection group"
    else:
        conclusion = "discrete affine group"
    return DiscretenessVerdict(
        case=case,
        index_range=index_range,
        criterion="INT",
        satisfied=satisfied,
        conclusion=conclusion,
        symmetry_order=symmetry_group_order(ws, index_range),
    )
