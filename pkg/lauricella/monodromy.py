"""
Exact complex-reflection monodromy of the Dehn twists about consecutive
points, acting on period coordinates F_1..F_n by F -> M F.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from lauricella.config import get_settings
from lauricella.errors import DimensionMismatchError, InvalidIndexError, ValidationFailure
from lauricella.exactnum import (
    CyclotomicNumber,
    Matrix,
    ambient_conductor,
    conjugate_transpose,
    embed_matrix,
    matmul,
    matrix_over,
    one,
    root_of_unity,
    zero,
)
from lauricella.hermitian import HermitianGram
from lauricella.weights import WeightSystem

Key = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


def _identity_rows(size: int, order: int) -> List[List[CyclotomicNumber]]:
    return [[one(order) if i == j else zero(order) for j in range(size)] for i in range(size)]


def exact_rank(matrix: Sequence[Sequence[CyclotomicNumber]]) -> int:
    work = [list(row) for row in matrix]
    rank = 0
    width = len(work[0]) if work else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(work)) if not work[r][col].is_zero), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inverse = work[rank][col].inverse()
        for r in range(len(work)):
            if r != rank and not work[r][col].is_zero:
                factor = work[r][col] * inverse
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank


class MonodromyElement:
    """Exact invertible matrix over Q(zeta_N) with the word that produced it."""

    def __init__(
        self,
        matrix: Sequence[Sequence],
        conductor: int = 4,
        word: Sequence[int] = (),
        angle: Optional[Fraction] = None,
    ):
        size = len(matrix)
        if any(len(row) != size for row in matrix):
            raise DimensionMismatchError("monodromy matrices are square")
        for row in matrix:
            for entry in row:
                if isinstance(entry, CyclotomicNumber):
                    conductor = math.lcm(conductor, entry.order)
        self.conductor = ambient_conductor(conductor)
        self.matrix: Matrix = matrix_over(matrix, self.conductor)
        self.word = tuple(word)
        self.angle = angle

    @classmethod
    def _wrap(cls, matrix: Matrix, conductor: int, word: Sequence[int] = ()) -> "MonodromyElement":
        element = object.__new__(cls)
        element.conductor = conductor
        element.matrix = matrix
        element.word = tuple(word)
        element.angle = None
        return element

    @classmethod
    def identity(cls, dimension: int, conductor: int = 4) -> "MonodromyElement":
        conductor = ambient_conductor(conductor)
        rows = _identity_rows(dimension, conductor)
        return cls._wrap(tuple(tuple(row) for row in rows), conductor)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def eigenvalue_angle(self) -> Optional[Fraction]:
        """Turn theta of the nontrivial eigenvalue exp(2 pi i theta); 0 for a unipotent twist"""
        return self.angle

    def lift(self, conductor: int) -> "MonodromyElement":
        if conductor == self.conductor:
            return self
        lifted = tuple(tuple(entry.lift(conductor) for entry in row) for row in self.matrix)
        element = MonodromyElement._wrap(lifted, conductor, self.word)
        element.angle = self.angle
        return element

    def key(self) -> Key:
        """Canonical hash key; only comparable between elements of one conductor"""
        return tuple(tuple(entry.coefficients for entry in row) for row in self.matrix)

    def __matmul__(self, other: "MonodromyElement") -> "MonodromyElement":
        if self.dimension != other.dimension:
            raise DimensionMismatchError(f"cannot multiply {self.dimension}x{self.dimension} by {other.dimension}x{other.dimension}")
        conductor = math.lcm(self.conductor, other.conductor)
        left, right = self.lift(conductor), other.lift(conductor)
        # self @ other applies other first
        return MonodromyElement._wrap(matmul(left.matrix, right.matrix), conductor, other.word + self.word)

    def __eq__(self, other):
        if not isinstance(other, MonodromyElement):
            return NotImplemented
        return self.dimension == other.dimension and all(
            a == b for row_a, row_b in zip(self.matrix, other.matrix) for a, b in zip(row_a, row_b)
        )

    def __hash__(self):
        return hash(tuple(entry.trace() for row in self.matrix for entry in row))

    def __repr__(self):
        return f"MonodromyElement(dimension={self.dimension}, conductor={self.conductor}, word={list(self.word)})"

    def is_identity(self) -> bool:
        return self == MonodromyElement.identity(self.dimension, self.conductor)

    def trace(self) -> CyclotomicNumber:
        total = zero(self.conductor)
        for k in range(self.dimension):
            total = total + self.matrix[k][k]
        return total

    def determinant(self) -> CyclotomicNumber:
        work = [list(row) for row in self.matrix]
        size = len(work)
        det = one(self.conductor)
        for col in range(size):
            pivot = next((r for r in range(col, size) if not work[r][col].is_zero), None)
            if pivot is None:
                return zero(self.conductor)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            det = det * work[col][col]
            inverse = work[col][col].inverse()
            for r in range(col + 1, size):
                if not work[r][col].is_zero:
                    factor = work[r][col] * inverse
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return det

    def inverse(self) -> "MonodromyElement":
        size = self.dimension
        identity_rows = _identity_rows(size, self.conductor)
        work = [list(row) + identity_rows[i] for i, row in enumerate(self.matrix)]
        for col in range(size):
            pivot = next((r for r in range(col, size) if not work[r][col].is_zero), None)
            if pivot is None:
                raise ValidationFailure("monodromy matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            inverse = work[col][col].inverse()
            work[col] = [entry * inverse for entry in work[col]]
            for r in range(size):
                if r != col and not work[r][col].is_zero:
                    factor = work[r][col]
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        matrix = tuple(tuple(row[size:]) for row in work)
        return MonodromyElement._wrap(matrix, self.conductor, tuple(-letter for letter in reversed(self.word)))

    def minus_identity_rank(self) -> int:
        rows = [[entry - (1 if i == j else 0) for j, entry in enumerate(row)] for i, row in enumerate(self.matrix)]
        return exact_rank(rows)

    def order(self, bound: int) -> Optional[int]:
        """Multiplicative order, or None if larger than bound"""
        identity = MonodromyElement.identity(self.dimension, self.conductor)
        power = self
        for exponent in range(1, bound + 1):
            if power == identity:
                return exponent
            power = self @ power
        return None

    def to_numpy(self) -> np.ndarray:
        return embed_matrix(self.matrix)

    def to_json(self, exact: bool = False) -> dict:
        data = {
            "dimension": self.dimension,
            "conductor": self.conductor,
            "word": list(self.word),
            "float": [[[z.real, z.imag] for z in row] for row in self.to_numpy().tolist()],
        }
        if exact:
            data["entries"] = [[entry.to_json()["coefficients"] for entry in row] for row in self.matrix]
        return data


def single_point_phases(ws: WeightSystem) -> Tuple[CyclotomicNumber, ...]:
    """a_k = exp(i pi mu_k) for k = 0..n+1"""
    m = ws.denominator
    order = ambient_conductor(2 * m)
    return tuple(root_of_unity(2 * m, d).lift(order) for d in ws.numerators)


def dehn_twist_generator(ws: WeightSystem, k: int) -> MonodromyElement:
    """Twist about a circle enclosing exactly z_{k-1} and z_k, 1 <= k <= n"""
    n = ws.n
    if not 1 <= k <= n:
        raise InvalidIndexError(f"twist index {k} is outside 1..{n}")
    phases = single_point_phases(ws)
    order = phases[0].order
    a, b = phases[k - 1], phases[k]

    rows = _identity_rows(n, order)
    column = k - 1
    rows[column][column] = a * a * b * b
    if k >= 2:
        rows[column - 1][column] = a * (1 - b * b)
    if k <= n - 1:
        rows[column + 1][column] = b * (1 - a * a)

    element = MonodromyElement(rows, order, word=(k,))
    element.angle = (ws.weights[k - 1] + ws.weights[k]) % 1
    return element


def generators(ws: WeightSystem) -> List[MonodromyElement]:
    return [dehn_twist_generator(ws, k) for k in range(1, ws.n + 1)]


def evaluate_word(gens: Sequence[MonodromyElement], word: Sequence[int]) -> MonodromyElement:
    """Product of signed generator letters; later letters act after earlier ones"""
    if not gens:
        raise DimensionMismatchError("at least one generator is required")
    dimension = gens[0].dimension
    if any(g.dimension != dimension for g in gens):
        raise DimensionMismatchError("generators have different dimensions")
    conductor = math.lcm(*(g.conductor for g in gens))
    inverses: Dict[int, MonodromyElement] = {}

    result = MonodromyElement.identity(dimension, conductor)
    for letter in word:
        if letter == 0 or abs(letter) > len(gens):
            raise InvalidIndexError(f"letter {letter} does not name one of {len(gens)} generators")
        factor = gens[abs(letter) - 1]
        if letter < 0:
            if letter not in inverses:
                inverses[letter] = factor.inverse()
            factor = inverses[letter]
        result = factor @ result
    result.word = tuple(word)
    return result


def _restrict_to_hyperplane(M: MonodromyElement, H: HermitianGram) -> Optional[Matrix]:
    basis_columns = tuple(zip(*H.basis)) if H.basis else ()
    if not basis_columns:
        return ()
    image = matmul(M.matrix, basis_columns)
    kept = [k for k in range(M.dimension) if k != H.eliminated]
    for column in range(len(H.basis)):
        # image column must be sum over kept k of image[k] * basis vector k
        expected = sum(
            (image[k][column] * H.basis[position][H.eliminated] for position, k in enumerate(kept)),
            zero(M.conductor),
        )
        if image[H.eliminated][column] != expected:
            return None
    return tuple(image[k] for k in kept)


def preserves_form(M: MonodromyElement, H: HermitianGram) -> bool:
    """Exact test of M* H M = H (on the hyperplane for parabolic forms)"""
    if H.dimension == M.dimension:
        restricted = M.matrix
    elif H.basis is not None and H.dimension == M.dimension - 1:
        restricted = _restrict_to_hyperplane(M, H)
        if restricted is None:
            return False
        if not restricted:
            return True
    else:
        raise DimensionMismatchError(f"form of dimension {H.dimension} vs matrix of dimension {M.dimension}")

    transformed = matmul(matmul(conjugate_transpose(restricted), H.entries), restricted)
    return all(a == b for row_a, row_b in zip(transformed, H.entries) for a, b in zip(row_a, row_b))


@dataclass(frozen=True)
class Finite:
    order: int
    elements: Optional[Tuple[MonodromyElement, ...]] = None


@dataclass(frozen=True)
class BoundExceeded:
    bound: int
    explored: int


ClosureResult = Union[Finite, BoundExceeded]


def group_closure(
    gens: Sequence[MonodromyElement],
    element_bound: Optional[int] = None,
    threads: Optional[int] = None,
    keep_elements: bool = False,
) -> ClosureResult:
    """Breadth-first closure of the generated group, deterministic for any thread count"""
    settings = get_settings()
    bound = element_bound or settings.closure_bound
    threads = threads or settings.threads
    if not gens:
        raise DimensionMismatchError("at least one generator is required")
    dimension = gens[0].dimension
    if any(g.dimension != dimension for g in gens):
        raise DimensionMismatchError("generators have different dimensions")

    conductor = math.lcm(*(g.conductor for g in gens))
    gens = [g.lift(conductor) for g in gens]
    identity = MonodromyElement.identity(dimension, conductor)
    seen = {identity.key(): identity}
    frontier = [identity]

    def expand(element: MonodromyElement) -> List[MonodromyElement]:
        return [g @ element for g in gens]

    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            if executor is not None:
                batches = list(executor.map(expand, frontier))
            else:
                batches = [expand(element) for element in frontier]
            next_frontier = []
            for batch in batches:
                for product in batch:
                    key = product.key()
                    if key in seen:
                        continue
                    seen[key] = product
                    if len(seen) > bound:
                        return BoundExceeded(bound=bound, explored=len(seen))
                    next_frontier.append(product)
            frontier = next_frontier
    finally:
        if executor is not None:
            executor.shutdown()

    elements = tuple(seen.values()) if keep_elements else None
    return Finite(order=len(seen), elements=elements)
