"""Versioned report models and the analyze / periods report builders."""

from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from lauricella.config import get_settings
from lauricella.cover import CoverProfile, Witness, cover_profile, is_arithmetic
from lauricella.errors import ClosureBoundError
from lauricella.exactnum import Rational
from lauricella.hermitian import (
    Convention,
    HermitianGram,
    epsilon_gram,
    form_on_period_coordinates,
    signature,
)
from lauricella.monodromy import BoundExceeded, MonodromyElement, generators, group_closure, preserves_form
from lauricella.periods import (
    DEFAULT_NODES,
    Configuration,
    identity_checks,
    lauricella_periods,
    schwarz_point,
)
from lauricella.weights import (
    CaseLabel,
    ConditionReport,
    DiscretenessVerdict,
    IndexRange,
    WeightSystem,
    check_conditions,
    classify,
    cusp_splittings,
    discreteness,
    require_case,
)

SCHEMA_VERSION = "1.0"

ComplexPair = Tuple[float, float]


def not_applicable(reason: str) -> str:
    return f"n/a: {reason}"


class GramReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    dimension: int
    conductor: int
    signature: Tuple[int, int, int]
    float_entries: Tuple[Tuple[ComplexPair, ...], ...]
    exact_entries: Optional[Tuple[Tuple[Tuple[Rational, ...], ...], ...]] = None


class MatrixReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    conductor: int
    float_entries: Tuple[Tuple[ComplexPair, ...], ...]
    exact_entries: Optional[Tuple[Tuple[Tuple[Rational, ...], ...], ...]] = None


class GeneratorReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    angle: Rational
    order: Optional[int] = None
    unipotent: bool
    preserves_form: bool
    matrix: Optional[MatrixReport] = None


class ArithmeticReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    arithmetic: bool
    witnesses: Tuple[Witness, ...]


class ClosureReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    finite: bool
    order: Optional[int] = None
    bound: int


class AnalysisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    weights: Tuple[Rational, ...]
    n: int
    total: Rational
    complement: Rational
    case: CaseLabel
    conditions_finite: ConditionReport
    conditions_infinity: Union[ConditionReport, str]
    discreteness: DiscretenessVerdict
    cusps: Union[Tuple[Tuple[int, ...], ...], str]
    arithmetic: Union[ArithmeticReport, str]
    gram: GramReport
    epsilon_grams: Union[Dict[str, GramReport], str]
    generators: Tuple[GeneratorReport, ...]
    cover: Union[CoverProfile, str]
    closure: Union[ClosureReport, str]


def _pairs(matrix) -> Tuple[Tuple[ComplexPair, ...], ...]:
    return tuple(tuple((float(z.real), float(z.imag)) for z in row) for row in matrix)


def gram_report(g: HermitianGram, exact: bool = False) -> GramReport:
    exact_entries = None
    if exact:
        exact_entries = tuple(tuple(entry.coefficients for entry in row) for row in g.entries)
    return GramReport(
        dimension=g.dimension,
        conductor=g.conductor,
        signature=tuple(signature(g)),
        float_entries=_pairs(g.to_numpy().tolist()),
        exact_entries=exact_entries,
    )


def matrix_report(element: MonodromyElement, exact: bool = False) -> MatrixReport:
    exact_entries = None
    if exact:
        exact_entries = tuple(tuple(entry.coefficients for entry in row) for row in element.matrix)
    return MatrixReport(
        conductor=element.conductor,
        float_entries=_pairs(element.to_numpy().tolist()),
        exact_entries=exact_entries,
    )


def generator_reports(ws: WeightSystem, exact: bool = False, include_matrix: bool = False) -> List[GeneratorReport]:
    form = form_on_period_coordinates(ws)
    reports = []
    for element in generators(ws):
        angle = element.eigenvalue_angle
        reports.append(
            GeneratorReport(
                k=element.word[0],
                angle=angle,
                order=angle.denominator if angle else None,
                unipotent=angle == 0,
                preserves_form=preserves_form(element, form),
                matrix=matrix_report(element, exact) if include_matrix else None,
            )
        )
    return reports


def analyze_system(
    ws: WeightSystem,
    exact: bool = False,
    closure_bound: Optional[int] = None,
    threads: Optional[int] = None,
) -> AnalysisReport:
    """Every sub-analysis defined for the case; the rest marked n/a"""
    case = require_case(ws, CaseLabel.ELLIPTIC, CaseLabel.PARABOLIC, CaseLabel.HYPERBOLIC)
    hyperbolic = case is CaseLabel.HYPERBOLIC

    if hyperbolic:
        conditions_infinity = check_conditions(ws, IndexRange.INFINITY)
        cusps = tuple(cusp_splittings(ws))
        arithmetic_flag, witnesses = is_arithmetic(ws)
        arithmetic = ArithmeticReport(arithmetic=arithmetic_flag, witnesses=tuple(witnesses))
        cover = cover_profile(ws)
    else:
        reason = not_applicable(f"{case.value} case (|mu| = {ws.total}) has no weight at infinity")
        conditions_infinity = reason
        cusps = not_applicable("cusps are defined in the hyperbolic case only")
        arithmetic = not_applicable("arithmeticity is defined in the hyperbolic case only")
        cover = not_applicable("the cover bookkeeping is defined in the hyperbolic case only")

    if hyperbolic and ws.n >= 2:
        epsilon_grams = {
            convention.value: gram_report(epsilon_gram(ws, convention), exact) for convention in Convention
        }
    elif hyperbolic:
        epsilon_grams = not_applicable("the epsilon-basis Gram needs n >= 2")
    else:
        epsilon_grams = not_applicable("the epsilon-basis Gram is defined in the hyperbolic case only")

    if case is not CaseLabel.ELLIPTIC:
        closure = not_applicable("closure search only terminates in the elliptic case")
    elif closure_bound is None:
        closure = not_applicable("closure not requested")
    else:
        result = group_closure(generators(ws), closure_bound, threads=threads)
        if isinstance(result, BoundExceeded):
            closure = ClosureReport(finite=False, bound=closure_bound)
        else:
            closure = ClosureReport(finite=True, order=result.order, bound=closure_bound)

    return AnalysisReport(
        weights=ws.weights,
        n=ws.n,
        total=ws.total,
        complement=ws.complement,
        case=case,
        conditions_finite=check_conditions(ws, IndexRange.FINITE),
        conditions_infinity=conditions_infinity,
        discreteness=discreteness(ws),
        cusps=cusps,
        arithmetic=arithmetic,
        gram=gram_report(form_on_period_coordinates(ws), exact),
        epsilon_grams=epsilon_grams,
        generators=tuple(generator_reports(ws, exact)),
        cover=cover,
        closure=closure,
    )


class PeriodResiduals(BaseModel):
    model_config = ConfigDict(frozen=True)

    translation: float
    homogeneity: float
    pde: float
    jacobian_singular_values: Tuple[float, ...]
    jacobian_rank: int
    parabolic_pi: Optional[float] = None
    closure: Optional[float] = None


class PeriodsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    weights: Tuple[Rational, ...]
    case: CaseLabel
    points: Tuple[float, ...]
    nodes: int
    F: Tuple[ComplexPair, ...]
    F_inf: Optional[ComplexPair] = None
    error_estimate: float
    residuals: PeriodResiduals
    ball_radius: Optional[float] = None
    affine: Optional[Tuple[ComplexPair, ...]] = None


def periods_report(
    ws: WeightSystem,
    points: Sequence[float],
    nodes: int = DEFAULT_NODES,
    step: float = 1e-4,
) -> PeriodsReport:
    cfg = Configuration.real(points)
    pv = lauricella_periods(ws, cfg, nodes)
    checks = identity_checks(ws, cfg, step=step, nodes=nodes)
    point = schwarz_point(ws, pv)
    return PeriodsReport(
        weights=ws.weights,
        case=classify(ws),
        points=tuple(float(z) for z in points),
        nodes=nodes,
        F=tuple((float(z.real), float(z.imag)) for z in pv.values),
        F_inf=(float(pv.infinity.real), float(pv.infinity.imag)) if pv.infinity is not None else None,
        error_estimate=pv.error_estimate,
        residuals=PeriodResiduals(
            translation=checks.translation,
            homogeneity=checks.homogeneity,
            pde=checks.pde,
            jacobian_singular_values=tuple(float(s) for s in checks.jacobian_singular_values),
            jacobian_rank=checks.jacobian_rank,
            parabolic_pi=checks.parabolic_pi,
            closure=checks.closure,
        ),
        ball_radius=point.radius,
        affine=tuple((float(z.real), float(z.imag)) for z in point.affine) if point.affine is not None else None,
    )


def monodromy_report(
    ws: WeightSystem,
    exact: bool = False,
    closure: bool = False,
    bound: Optional[int] = None,
    threads: Optional[int] = None,
) -> dict:
    """Generators as JSON, with an optional closure search that fails loudly on the bound"""
    data = {
        "schema_version": SCHEMA_VERSION,
        "weights": ws.label(),
        "case": classify(ws).value,
        "generators": [report.model_dump(mode="json") for report in generator_reports(ws, exact, include_matrix=True)],
    }
    if closure:
        bound = bound or get_settings().closure_bound
        result = group_closure(generators(ws), bound, threads=threads)
        if isinstance(result, BoundExceeded):
            raise ClosureBoundError(f"closure exceeded {bound} elements")
        data["closure"] = {"finite": True, "order": result.order, "bound": bound}
    return data
