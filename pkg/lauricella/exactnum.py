"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored fully reduced modulo the N-th cyclotomic polynomial, as
phi(N) rational coefficients on the power basis 1, zeta, ..., zeta^(phi(N)-1).
The conductor is always a multiple of 4 so that i, real parts and imaginary
parts stay inside the field.
"""

import cmath
import math
import re
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Annotated, Iterable, List, NamedTuple, Sequence, Tuple, Union

import numpy as np
import sympy
from mpmath import iv
from pydantic import PlainSerializer, PlainValidator, WithJsonSchema

from lauricella.config import get_settings
from lauricella.errors import (
    ConductorOverflowError,
    CyclotomicZeroDivisionError,
    NotRealError,
    PrecisionError,
)

SIGN_PRECISIONS = (64, 256, 1024)

_RATIONAL_PATTERN = re.compile(r"[+-]?\d+(?:/\d+)?")
_INTERVAL_LOCK = threading.Lock()


def parse_rational(value) -> Fraction:
    """Accept Fraction, int or "p/q" text; floats are rejected as inexact"""
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_PATTERN.fullmatch(text):
            raise ValueError(f"malformed rational {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}")
    raise ValueError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^[+-]?\d+/\d+$"}),
]

Scalar = Union[int, Fraction]


def ambient_conductor(order: int) -> int:
    """Smallest admissible conductor containing zeta_order; enforces the cap"""
    if order < 1:
        raise ValueError(f"conductor must be positive, got {order}")
    conductor = math.lcm(4, order)
    cap = get_settings().max_conductor
    if conductor > cap:
        raise ConductorOverflowError(f"conductor {conductor} exceeds the configured cap {cap}")
    return conductor


def _mobius(value: int) -> int:
    factors = sympy.factorint(value)
    if any(exponent > 1 for exponent in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


class _FieldData(NamedTuple):
    degree: int
    rows: Tuple[Tuple[int, ...], ...]
    modulus: sympy.Poly
    traces: Tuple[Fraction, ...]


@lru_cache(maxsize=None)
def _field(order: int) -> _FieldData:
    x = sympy.Symbol("x")
    modulus = sympy.Poly(sympy.cyclotomic_poly(order, x), x, domain=sympy.QQ)
    degree = modulus.degree()
    low = [int(c) for c in reversed(modulus.all_coeffs())]

    # rows[j] = coefficients of x^j mod Phi_order
    rows = []
    current = [0] * degree
    current[0] = 1
    for _ in range(max(order, 2 * degree - 1)):
        rows.append(tuple(current))
        carry = current[-1]
        current = [0] + current[:-1]
        if carry:
            for i in range(degree):
                current[i] -= carry * low[i]

    traces = []
    for j in range(degree):
        primitive = order // math.gcd(j, order)
        traces.append(Fraction(_mobius(primitive), int(sympy.totient(primitive))))
    return _FieldData(degree, tuple(rows), modulus, tuple(traces))


def _reduce(order: int, dense: Sequence) -> Tuple[Fraction, ...]:
    data = _field(order)
    out = [Fraction(0)] * data.degree
    for j, c in enumerate(dense):
        if not c:
            continue
        if j < data.degree:
            out[j] += c
            continue
        row = data.rows[j] if j < len(data.rows) else data.rows[j % order]
        for i, r in enumerate(row):
            if r:
                out[i] += c * r
    return tuple(out)


class CyclotomicNumber:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("_order", "_coefficients", "_hash")

    def __init__(self, order: int, coefficients: Iterable = ()):
        base = order
        order = ambient_conductor(base)
        step = order // base
        dense = [0] * order
        for j, c in enumerate(coefficients):
            value = parse_rational(c)
            if value:
                dense[(j * step) % order] += value
        self._order = order
        self._coefficients = _reduce(order, dense)

    @classmethod
    def _make(cls, order: int, coefficients: Tuple[Fraction, ...]) -> "CyclotomicNumber":
        number = object.__new__(cls)
        number._order = order
        number._coefficients = coefficients
        return number

    @classmethod
    def constant(cls, value: Scalar, order: int = 4) -> "CyclotomicNumber":
        order = ambient_conductor(order)
        degree = _field(order).degree
        return cls._make(order, (parse_rational(value),) + (Fraction(0),) * (degree - 1))

    @property
    def order(self) -> int:
        return self._order

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._coefficients

    @property
    def is_zero(self) -> bool:
        return not any(self._coefficients)

    @property
    def is_rational(self) -> bool:
        return not any(self._coefficients[1:])

    @property
    def is_real(self) -> bool:
        return self == self.conjugate()

    def lift(self, order: int) -> "CyclotomicNumber":
        if order == self._order:
            return self
        if order % self._order:
            raise ValueError(f"cannot lift conductor {self._order} to {order}")
        order = ambient_conductor(order)
        step = order // self._order
        dense = [0] * (step * (len(self._coefficients) - 1) + 1)
        for j, c in enumerate(self._coefficients):
            dense[j * step] = c
        return CyclotomicNumber._make(order, _reduce(order, dense))

    def _coerce(self, other) -> Tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, CyclotomicNumber.constant(other, self._order)
        if not isinstance(other, CyclotomicNumber):
            raise TypeError
        if other._order == self._order:
            return self, other
        order = math.lcm(self._order, other._order)
        return self.lift(order), other.lift(order)

    def _scale(self, factor: Fraction) -> "CyclotomicNumber":
        return CyclotomicNumber._make(self._order, tuple(c * factor for c in self._coefficients))

    def __add__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber._make(a._order, tuple(x + y for x, y in zip(a._coefficients, b._coefficients)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._make(self._order, tuple(-c for c in self._coefficients))

    def __sub__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber._make(a._order, tuple(x - y for x, y in zip(a._coefficients, b._coefficients)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._scale(Fraction(other))
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        if a.is_zero or b.is_zero:
            return CyclotomicNumber._make(a._order, (Fraction(0),) * len(a._coefficients))
        if b.is_rational:
            return a._scale(b._coefficients[0])
        if a.is_rational:
            return b._scale(a._coefficients[0])
        dense = [0] * (2 * len(a._coefficients) - 1)
        for i, x in enumerate(a._coefficients):
            if x:
                for j, y in enumerate(b._coefficients):
                    if y:
                        dense[i + j] += x * y
        return CyclotomicNumber._make(a._order, _reduce(a._order, dense))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero:
            raise CyclotomicZeroDivisionError("inverse of exact zero")
        if self.is_rational:
            return CyclotomicNumber.constant(1 / self._coefficients[0], self._order)
        data = _field(self._order)
        x = data.modulus.gen
        high_first = [sympy.Rational(c.numerator, c.denominator) for c in reversed(self._coefficients)]
        inverse = sympy.Poly.from_list(high_first, x, domain=sympy.QQ).invert(data.modulus)
        low_first = []
        for c in reversed(inverse.all_coeffs()):
            numerator, denominator = sympy.fraction(c)
            low_first.append(Fraction(int(numerator), int(denominator)))
        return CyclotomicNumber._make(self._order, _reduce(self._order, low_first))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise CyclotomicZeroDivisionError("division by exact zero")
            return self._scale(1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = CyclotomicNumber.constant(1, self._order)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self) -> "CyclotomicNumber":
        """zeta^j -> zeta^(N-j)"""
        dense = [0] * self._order
        for j, c in enumerate(self._coefficients):
            if c:
                dense[(-j) % self._order] += c
        return CyclotomicNumber._make(self._order, _reduce(self._order, dense))

    def real_part(self) -> "CyclotomicNumber":
        return (self + self.conjugate()) / 2

    def imag_part(self) -> "CyclotomicNumber":
        i = root_of_unity(4, 1).lift(self._order)
        return (self - self.conjugate()) * (-i) / 2

    def embed(self) -> complex:
        """Horner evaluation at exp(2*pi*i/N); error O(N * ulp * max|coefficient|)"""
        z = cmath.exp(2j * math.pi / self._order)
        value = 0j
        for c in reversed(self._coefficients):
            value = value * z + float(c)
        return value

    def sign_of_real(self) -> int:
        """Exact sign of a real element: -1, 0 or 1"""
        if not self.is_real:
            raise NotRealError(f"{self!r} is not fixed by conjugation")
        if self.is_zero:
            return 0
        with _INTERVAL_LOCK:
            saved = iv.prec
            try:
                for bits in SIGN_PRECISIONS:
                    iv.prec = bits
                    total = iv.mpf(0)
                    for j, c in enumerate(self._coefficients):
                        if c:
                            total += iv.mpf(c.numerator) / c.denominator * iv.cos(2 * iv.pi * j / self._order)
                    if total.a > 0:
                        return 1
                    if total.b < 0:
                        return -1
            finally:
                iv.prec = saved
        raise PrecisionError(f"sign of {self!r} undecided at {SIGN_PRECISIONS[-1]} bits")

    def trace(self) -> Fraction:
        """Normalized trace Tr(a)/phi(N); independent of the conductor"""
        traces = _field(self._order).traces
        return sum((c * t for c, t in zip(self._coefficients, traces) if c), Fraction(0))

    def __eq__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return a._coefficients == b._coefficients

    def galois(self, a: int) -> "CyclotomicNumber":
        """The automorphism zeta -> zeta^a, gcd(a, N) = 1"""
        if math.gcd(a, self._order) != 1:
            raise ValueError(f"{a} is not a unit modulo {self._order}")
        dense = [0] * self._order
        for j, c in enumerate(self._coefficients):
            if c:
                dense[(j * a) % self._order] += c
        return CyclotomicNumber._make(self._order, _reduce(self._order, dense))

    def minimal_conductor(self) -> int:
        """Smallest multiple of 4 whose cyclotomic field contains this element"""
        current = self._order
        descended = True
        while descended:
            descended = False
            for p in sympy.primefactors(current):
                candidate = current // p
                if candidate % 4:
                    continue
                fixing = (1 + k * candidate for k in range(self._order // candidate))
                if all(self.galois(a)._coefficients == self._coefficients
                       for a in fixing if math.gcd(a, self._order) == 1):
                    current = candidate
                    descended = True
                    break
        return current

    def __hash__(self):
        cached = getattr(self, "_hash", None)
        if cached is not None:
            return cached
        if self.is_rational:
            value = hash(self._coefficients[0])
        else:
            # trace pairing against the basis of the smallest field; conductor-independent
            conductor = self.minimal_conductor()
            pairing = tuple(
                (self * root_of_unity(conductor, -j).lift(self._order)).trace()
                for j in range(_field(conductor).degree)
            )
            value = hash((conductor,) + pairing)
        self._hash = value
        return value

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        terms = ", ".join(str(c) for c in self._coefficients)
        return f"CyclotomicNumber({self._order}, [{terms}])"

    def to_json(self) -> dict:
        return {"conductor": self._order, "coefficients": [format_rational(c) for c in self._coefficients]}

    @classmethod
    def from_json(cls, data: dict) -> "CyclotomicNumber":
        return cls(data["conductor"], data["coefficients"])


def root_of_unity(order: int, k: int = 1) -> CyclotomicNumber:
    """Exact zeta_order^k inside the conductor lcm(4, order)"""
    conductor = ambient_conductor(order)
    data = _field(conductor)
    power = (k * (conductor // order)) % conductor
    return CyclotomicNumber._make(conductor, tuple(Fraction(c) for c in data.rows[power]))


def zero(order: int = 4) -> CyclotomicNumber:
    return CyclotomicNumber.constant(0, order)


def one(order: int = 4) -> CyclotomicNumber:
    return CyclotomicNumber.constant(1, order)


def as_cyclotomic(value, order: int = 4) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value.lift(math.lcm(value.order, ambient_conductor(order)))
    return CyclotomicNumber.constant(parse_rational(value), order)


def sin_pi_over(q: int) -> CyclotomicNumber:
    zeta = root_of_unity(2 * q, 1)
    return (zeta - zeta.conjugate()) / (2 * root_of_unity(4, 1))


def cos_pi_over(q: int) -> CyclotomicNumber:
    zeta = root_of_unity(2 * q, 1)
    return (zeta + zeta.conjugate()) / 2


def cot_pi_over(q: int) -> CyclotomicNumber:
    """cot(pi/q) = i(zeta + zeta^-1)/(zeta - zeta^-1), zeta = zeta_2q"""
    zeta = root_of_unity(2 * q, 1)
    return root_of_unity(4, 1) * (zeta + zeta.conjugate()) / (zeta - zeta.conjugate())


def csc_pi_over(q: int) -> CyclotomicNumber:
    zeta = root_of_unity(2 * q, 1)
    return 2 * root_of_unity(4, 1) / (zeta - zeta.conjugate())


Matrix = Tuple[Tuple[CyclotomicNumber, ...], ...]


def embed_matrix(rows: Sequence[Sequence[CyclotomicNumber]]) -> np.ndarray:
    size = len(rows)
    width = len(rows[0]) if size else 0
    out = np.zeros((size, width), dtype=complex)
    for k, row in enumerate(rows):
        for l, entry in enumerate(row):
            out[k, l] = entry.embed()
    return out


def matrix_over(rows: Sequence[Sequence], order: int) -> Matrix:
    """Coerce a matrix of numbers/rationals into one conductor"""
    return tuple(tuple(as_cyclotomic(entry, order).lift(order) for entry in row) for row in rows)


def conjugate_transpose(rows: Matrix) -> Matrix:
    size = len(rows)
    width = len(rows[0]) if size else 0
    return tuple(tuple(rows[k][l].conjugate() for k in range(size)) for l in range(width))


def matmul(left: Matrix, right: Matrix) -> Matrix:
    inner = len(right)
    width = len(right[0]) if inner else 0
    out: List[Tuple[CyclotomicNumber, ...]] = []
    for row in left:
        line = []
        for l in range(width):
            total = None
            for j in range(inner):
                if row[j].is_zero or right[j][l].is_zero:
                    continue
                term = row[j] * right[j][l]
                total = term if total is None else total + term
            line.append(total if total is not None else zero(row[0].order if row else 4))
        out.append(tuple(line))
    return tuple(out)
