"""
Invariant Hermitian forms over Q(zeta_N).

The canonical form lives on period coordinates (F_1..F_n): the ambient form
on (F_1..F_{n+1}) restricted to the hyperplane sum im(w_k) F_k = 0.
"""

import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from lauricella.errors import CaseError, DimensionMismatchError, ValidationFailure
from lauricella.exactnum import (
    CyclotomicNumber,
    Matrix,
    ambient_conductor,
    cot_pi_over,
    csc_pi_over,
    embed_matrix,
    matrix_over,
    root_of_unity,
    zero,
)
from lauricella.weights import CaseLabel, WeightSystem, classify, require_case


class Convention(str, Enum):
    STATEMENT = "statement"
    PROOF = "proof"


class Signature(NamedTuple):
    positive: int
    negative: int
    null: int

    @property
    def dimension(self) -> int:
        return self.positive + self.negative + self.null


class HermitianGram:
    """Square conjugate-symmetric matrix over a single cyclotomic conductor.

    For the parabolic period form, ``basis`` holds the hyperplane basis vectors
    (in ambient coordinates F_1..F_n) and ``eliminated`` the dropped index.
    """

    def __init__(
        self,
        entries: Sequence[Sequence],
        conductor: int = 4,
        basis: Optional[Matrix] = None,
        eliminated: Optional[int] = None,
    ):
        size = len(entries)
        if any(len(row) != size for row in entries):
            raise DimensionMismatchError("Gram matrix must be square")
        self.conductor = ambient_conductor(_lcm_orders(entries, conductor))
        self.entries: Matrix = matrix_over(entries, self.conductor)
        self.basis = basis
        self.eliminated = eliminated

        for k in range(size):
            for l in range(k, size):
                if self.entries[k][l] != self.entries[l][k].conjugate():
                    raise ValidationFailure(f"entry ({k},{l}) is not the conjugate of ({l},{k})")

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def entry(self, k: int, l: int) -> CyclotomicNumber:
        return self.entries[k][l]

    def to_numpy(self) -> np.ndarray:
        return embed_matrix(self.entries)

    def to_json(self, exact: bool = True) -> dict:
        data = {
            "dimension": self.dimension,
            "conductor": self.conductor,
            "float": [[[z.real, z.imag] for z in row] for row in self.to_numpy().tolist()],
        }
        if exact:
            data["entries"] = [[entry.to_json()["coefficients"] for entry in row] for row in self.entries]
        return data

    def __eq__(self, other):
        if not isinstance(other, HermitianGram):
            return NotImplemented
        return self.dimension == other.dimension and all(
            a == b for row_a, row_b in zip(self.entries, other.entries) for a, b in zip(row_a, row_b)
        )

    def __repr__(self):
        return f"HermitianGram(dimension={self.dimension}, conductor={self.conductor})"


def _lcm_orders(entries, conductor: int) -> int:
    for row in entries:
        for entry in row:
            if isinstance(entry, CyclotomicNumber):
                conductor = math.lcm(conductor, entry.order)
    return conductor


def cumulative_phases(ws: WeightSystem) -> Tuple[CyclotomicNumber, ...]:
    """w_1..w_{n+1}, w_k = exp(i pi (mu_0 + ... + mu_{k-1}))"""
    m = ws.denominator
    order = ambient_conductor(2 * m)
    numerators = ws.numerators
    phases = []
    running = 0
    for k in range(ws.n + 1):
        running += numerators[k]
        phases.append(root_of_unity(2 * m, running).lift(order))
    return tuple(phases)


@lru_cache(maxsize=256)
def _ambient_entries(ws: WeightSystem) -> Tuple[Matrix, Tuple[CyclotomicNumber, ...]]:
    phases = cumulative_phases(ws)
    size = len(phases)
    order = phases[0].order
    rows: List[List[CyclotomicNumber]] = [[zero(order)] * size for _ in range(size)]
    for j in range(size):
        for l in range(j + 1, size):
            value = (phases[j] * phases[l].conjugate()).imag_part() / 2
            rows[j][l] = value
            rows[l][j] = value
    imaginary = tuple(w.imag_part() for w in phases)
    return tuple(tuple(row) for row in rows), imaginary


def ambient_form(ws: WeightSystem) -> HermitianGram:
    """Form on (F_1..F_{n+1}) whose value at the period vector is N(z)"""
    require_case(ws, CaseLabel.ELLIPTIC, CaseLabel.PARABOLIC, CaseLabel.HYPERBOLIC)
    entries, _ = _ambient_entries(ws)
    return HermitianGram(entries, entries[0][0].order)


@lru_cache(maxsize=256)
def form_on_period_coordinates(ws: WeightSystem) -> HermitianGram:
    case = require_case(ws, CaseLabel.ELLIPTIC, CaseLabel.PARABOLIC, CaseLabel.HYPERBOLIC)
    ambient, imaginary = _ambient_entries(ws)
    n = ws.n
    order = ambient[0][0].order

    if case is not CaseLabel.PARABOLIC:
        # eliminate F_{n+1} = sum_j c_j F_j
        last = imaginary[n]
        c = [-imaginary[j] / last for j in range(n)]
        rows = []
        for a in range(n):
            row = []
            for b in range(n):
                row.append(ambient[a][b] + c[a] * ambient[n][b] + ambient[a][n] * c[b])
            rows.append(row)
        return HermitianGram(rows, order)

    eliminated = n - 1 if not imaginary[n - 1].is_zero else next(j for j in range(n) if not imaginary[j].is_zero)
    kept = [k for k in range(n) if k != eliminated]
    basis = []
    for k in kept:
        vector = [zero(order)] * n
        vector[k] = CyclotomicNumber.constant(1, order)
        vector[eliminated] = -imaginary[k] / imaginary[eliminated]
        basis.append(tuple(vector))

    rows = []
    for a in basis:
        row = []
        for b in basis:
            total = zero(order)
            for i in range(n):
                if a[i].is_zero:
                    continue
                for j in range(n):
                    if b[j].is_zero or ambient[i][j].is_zero:
                        continue
                    total = total + a[i].conjugate() * ambient[i][j] * b[j]
            row.append(total)
        rows.append(row)
    return HermitianGram(rows, order, basis=tuple(basis), eliminated=eliminated)


def epsilon_gram(ws: WeightSystem, convention: Convention = Convention.STATEMENT) -> HermitianGram:
    """Tridiagonal Gram on the epsilon basis, built from the denominators only"""
    convention = Convention(convention)
    if classify(ws) is not CaseLabel.HYPERBOLIC:
        raise CaseError(f"{ws.label()} is not hyperbolic")
    if ws.n < 2:
        raise CaseError("the epsilon-basis Gram needs n >= 2")

    m = ws.denominator
    order = ambient_conductor(2 * m)
    local = ws.local_orders
    sign = 1 if convention is Convention.STATEMENT else -1
    off_diagonal = (csc_pi_over(m) * Fraction(-1, 4)).lift(order)

    n = ws.n
    rows = [[zero(order)] * n for _ in range(n)]
    for k in range(1, n + 1):
        diagonal = (cot_pi_over(local[k - 1]) + sign * cot_pi_over(local[k])) / 4
        rows[k - 1][k - 1] = diagonal.lift(order)
        if k < n:
            rows[k - 1][k] = off_diagonal
            rows[k][k - 1] = off_diagonal
    return HermitianGram(rows, order)


def signature(g: HermitianGram) -> Signature:
    """Exact signature by Hermitian elimination with 1x1 and 2x2 pivots"""
    work = [list(row) for row in g.entries]
    positive = negative = null = 0

    while work:
        size = len(work)
        pivot = next((i for i in range(size) if not work[i][i].is_zero), None)
        if pivot is not None:
            d = work[pivot][pivot]
            if d.sign_of_real() > 0:
                positive += 1
            else:
                negative += 1
            inverse = d.inverse()
            rest = [i for i in range(size) if i != pivot]
            updated = []
            for r in rest:
                row = []
                left = work[r][pivot]
                for c in rest:
                    value = work[r][c]
                    if not left.is_zero and not work[pivot][c].is_zero:
                        value = value - left * inverse * work[pivot][c]
                    row.append(value)
                updated.append(row)
            work = updated
            continue

        pair = next(((i, j) for i in range(size) for j in range(i + 1, size) if not work[i][j].is_zero), None)
        if pair is None:
            null += size
            break

        # [[0, a], [conj(a), 0]] has one positive and one negative direction
        i, j = pair
        positive += 1
        negative += 1
        a = work[i][j]
        inverse_a = a.inverse()
        inverse_conj = a.conjugate().inverse()
        rest = [r for r in range(size) if r not in (i, j)]
        updated = []
        for r in rest:
            row = []
            for c in rest:
                value = work[r][c]
                if not work[r][j].is_zero and not work[i][c].is_zero:
                    value = value - work[r][j] * inverse_a * work[i][c]
                if not work[r][i].is_zero and not work[j][c].is_zero:
                    value = value - work[r][i] * inverse_conj * work[j][c]
                row.append(value)
            updated.append(row)
        work = updated

    return Signature(positive, negative, null)


def evaluate(g: HermitianGram, v: Sequence[complex], w: Sequence[complex]) -> complex:
    """w* G v with embedded entries"""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if v.shape != (g.dimension,) or w.shape != (g.dimension,):
        raise DimensionMismatchError(f"vectors must have length {g.dimension}")
    if g.dimension == 0:
        return 0j
    return complex(np.vdot(w, g.to_numpy() @ v))
