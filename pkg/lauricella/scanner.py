"""
Exhaustive census of weight systems with n+1 weights d/M, 1 <= d < M.

Systems are enumerated as non-decreasing numerator tuples, so each weight
multiset appears exactly once and in lexicographic canonical order.
"""

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict
from sqlalchemy.orm import Session

from lauricella.config import get_settings
from lauricella.cover import Witness, eigenspace_dims, genus, is_arithmetic
from lauricella.errors import DenominatorCapError, InvalidWeightsError
from lauricella.exactnum import Rational, format_rational
from lauricella.weights import (
    CaseLabel,
    IndexRange,
    WeightSystem,
    check_conditions,
    classify,
    cusp_splittings,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("weights", "case", "INT", "half-INT", "cusps", "arithmetic", "witnesses")


class Filter(str, Enum):
    INT = "int"
    HALF_INT = "half-int"
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    NONARITHMETIC = "nonarithmetic"


class CensusEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    weights: Tuple[Rational, ...]
    case: CaseLabel
    int_ok: bool
    half_int_ok: bool
    int_ok_finite: bool
    half_int_ok_finite: bool
    int_ok_infinity: Optional[bool] = None
    half_int_ok_infinity: Optional[bool] = None
    cusps: Optional[int] = None
    arithmetic: Optional[bool] = None
    witnesses: Tuple[Witness, ...] = ()
    eigendims: Optional[Tuple[int, ...]] = None
    genus: Optional[int] = None

    @property
    def label(self) -> str:
        return ",".join(format_rational(mu) for mu in self.weights)


def _cheap_entry(ws: WeightSystem) -> CensusEntry:
    case = classify(ws)
    finite = check_conditions(ws, IndexRange.FINITE)
    fields = dict(
        weights=ws.weights,
        case=case,
        int_ok=finite.int_ok,
        half_int_ok=finite.half_int_ok,
        int_ok_finite=finite.int_ok,
        half_int_ok_finite=finite.half_int_ok,
    )
    if case is CaseLabel.HYPERBOLIC:
        infinity = check_conditions(ws, IndexRange.INFINITY)
        fields.update(
            int_ok=infinity.int_ok,
            half_int_ok=infinity.half_int_ok,
            int_ok_infinity=infinity.int_ok,
            half_int_ok_infinity=infinity.half_int_ok,
            cusps=len(cusp_splittings(ws)),
        )
    return CensusEntry(**fields)


def _with_expensive_verdicts(entry: CensusEntry, ws: WeightSystem) -> CensusEntry:
    if entry.case is not CaseLabel.HYPERBOLIC:
        return entry
    arithmetic, witnesses = is_arithmetic(ws)
    return entry.model_copy(
        update=dict(
            arithmetic=arithmetic,
            witnesses=tuple(witnesses),
            eigendims=tuple(eigenspace_dims(ws)),
            genus=genus(ws),
        )
    )


def census_entry(ws: WeightSystem) -> CensusEntry:
    """Full classification of a single system (canonicalized)"""
    ws = ws.canonical()
    return _with_expensive_verdicts(_cheap_entry(ws), ws)


def _cheap_filters_pass(entry: CensusEntry, filters: Set[Filter]) -> bool:
    if Filter.INT in filters and not entry.int_ok:
        return False
    if Filter.HALF_INT in filters and not entry.half_int_ok:
        return False
    if Filter.HYPERBOLIC in filters and entry.case is not CaseLabel.HYPERBOLIC:
        return False
    if Filter.ELLIPTIC in filters and entry.case is not CaseLabel.ELLIPTIC:
        return False
    if Filter.PARABOLIC in filters and entry.case is not CaseLabel.PARABOLIC:
        return False
    if Filter.NONARITHMETIC in filters and entry.case is not CaseLabel.HYPERBOLIC:
        return False
    return True


def _sum_bounds(denominator: int, filters: Set[Filter]) -> Tuple[int, int]:
    """Inclusive bounds on the numerator sum implied by the case filters"""
    low, high = 0, 10 ** 9
    if Filter.ELLIPTIC in filters:
        high = min(high, denominator - 1)
    if Filter.PARABOLIC in filters:
        low, high = max(low, denominator), min(high, denominator)
    if Filter.HYPERBOLIC in filters or Filter.NONARITHMETIC in filters:
        low, high = max(low, denominator + 1), min(high, 2 * denominator - 1)
    return low, high


def _pair_passes(a: int, b: int, denominator: int, half: bool) -> bool:
    gap = denominator - a - b
    if gap <= 0:
        return True
    if denominator % gap == 0:
        return True
    return half and a == b and (2 * denominator) % gap == 0


def _walk_prefix(task: Tuple[int, int, int, Tuple[str, ...]]) -> List[Tuple[int, ...]]:
    """All numerator tuples starting with the given first numerator that survive pruning"""
    size, denominator, first, filter_names = task
    filters = {Filter(name) for name in filter_names}
    low, high = _sum_bounds(denominator, filters)
    pair_mode = None
    if Filter.INT in filters:
        pair_mode = False
    elif Filter.HALF_INT in filters:
        pair_mode = True

    found: List[Tuple[int, ...]] = []
    chosen = [first]

    def walk(total: int):
        remaining = size - len(chosen)
        last = chosen[-1]
        if total + remaining * last > high or total + remaining * (denominator - 1) < low:
            return
        if remaining == 0:
            found.append(tuple(chosen))
            return
        for d in range(last, denominator):
            if total + d + (remaining - 1) * d > high:
                break
            if pair_mode is not None and not all(_pair_passes(c, d, denominator, pair_mode) for c in chosen):
                continue
            chosen.append(d)
            walk(total + d)
            chosen.pop()

    walk(first)
    return found


def enumerate_systems(
    n: int,
    max_denominator: int,
    filters: Iterable = (),
    threads: Optional[int] = None,
) -> Iterator[CensusEntry]:
    """Ordered stream of census entries for n+1 weights with denominators dividing max_denominator"""
    if n < 1:
        raise InvalidWeightsError("n must be at least 1")
    settings = get_settings()
    if max_denominator < 2:
        raise InvalidWeightsError("max_denominator must be at least 2")
    if max_denominator > settings.max_denominator:
        raise DenominatorCapError(
            f"max_denominator {max_denominator} exceeds the cap {settings.max_denominator} "
            f"(LAURICELLA_MAX_CONDUCTOR // 2)"
        )
    filters = {Filter(f) for f in filters}
    threads = threads or settings.threads
    names = tuple(sorted(f.value for f in filters))
    tasks = [(n + 1, max_denominator, first, names) for first in range(1, max_denominator)]

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            batches = list(executor.map(_walk_prefix, tasks))
    else:
        batches = [_walk_prefix(task) for task in tasks]

    emitted = 0
    for batch in batches:
        for numerators in batch:
            ws = WeightSystem(weights=tuple(Fraction(d, max_denominator) for d in numerators))
            entry = _cheap_entry(ws)
            if not _cheap_filters_pass(entry, filters):
                continue
            entry = _with_expensive_verdicts(entry, ws)
            if Filter.NONARITHMETIC in filters and entry.arithmetic:
                continue
            emitted += 1
            yield entry
    logger.info(f"census n={n} M={max_denominator} filters={list(names)}: {emitted} entries")


enumerate_census = enumerate_systems


def _bool(value: Optional[bool]) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def census_rows(entries: Iterable[CensusEntry]) -> Iterator[List[str]]:
    for entry in entries:
        yield [
            entry.label,
            entry.case.letter,
            _bool(entry.int_ok),
            _bool(entry.half_int_ok),
            "" if entry.cusps is None else str(entry.cusps),
            _bool(entry.arithmetic),
            "; ".join(w.render() for w in entry.witnesses),
        ]


def census_report(entries: Iterable[CensusEntry], fmt: str = "csv") -> str:
    """Render a census table; identical inputs give byte-identical output"""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in census_rows(entries):
            writer.writerow(row)
        return buffer.getvalue()
    if fmt == "json":
        return json.dumps([entry.model_dump(mode="json") for entry in entries], indent=2) + "\n"
    raise ValueError(f"unknown census format {fmt!r}")


def write_census(entries: Iterable[CensusEntry], path: str) -> int:
    fmt = "json" if path.endswith(".json") else "csv"
    entries = list(entries)
    content = census_report(entries, fmt)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(content)
    return len(entries)


def store_census(db: Session, entries: Sequence[CensusEntry], n: int, max_denominator: int, filters: Iterable) -> int:
    """Persist one census run and its rows; returns the run id"""
    from lauricella.census_service.models import CensusRow, CensusRun

    names = ",".join(sorted(Filter(f).value for f in filters))
    run = CensusRun(n=n, max_denominator=max_denominator, filters=names, entry_count=len(entries))
    db.add(run)
    db.flush()
    for position, entry in enumerate(entries):
        db.add(
            CensusRow(
                run_id=run.id,
                position=position,
                weights=entry.label,
                case=entry.case.value,
                int_ok=entry.int_ok,
                half_int_ok=entry.half_int_ok,
                cusps=entry.cusps,
                arithmetic=entry.arithmetic,
                witnesses="; ".join(w.render() for w in entry.witnesses),
            )
        )
    db.commit()
    db.refresh(run)
    return run.id
