"""
Arithmetic in GF(2^m) and polynomials over it.

Elements use the polynomial basis with the least-significant bit holding the
coefficient of x^0. Polynomials and serialized vectors are ascending-degree
everywhere. Field arrays are ``galois.FieldArray`` instances; the lookup tables
that back multiplication are galois' own log/antilog tables.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Sequence, Union

import galois
import numpy as np

from .errors import ConsistencyError, FieldDomainError, UnsupportedParameterError, UsageError

logger = logging.getLogger(__name__)

MAX_EXTENSION_DEGREE = 16

# Integer form of the default primitive polynomial for each m (bit i = coefficient of x^i).
DEFAULT_PRIMITIVE_POLYS: dict[int, int] = {
    1: 0b11,  # x + 1
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10001001,  # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,  # x^9 + x^4 + 1
    10: 0x409,  # x^10 + x^3 + 1
    11: 0x805,  # x^11 + x^2 + 1
    12: 0x1053,  # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,  # x^13 + x^4 + x^3 + x + 1
    14: 0x4443,  # x^14 + x^10 + x^6 + x + 1
    15: 0x8003,  # x^15 + x + 1
    16: 0x1100B,  # x^16 + x^12 + x^3 + x + 1
}

FieldElement = galois.FieldArray
Polynomial = galois.Poly
PolyLike = Union[galois.Poly, Sequence[int], np.ndarray]


class FieldOp(str, Enum):
    ADD = "add"
    MUL = "mul"
    INV = "inv"
    POW = "pow"


class PolyOp(str, Enum):
    ADD = "add"
    MUL = "mul"
    DIVMOD = "divmod"


@lru_cache(maxsize=None)
def _field_class(m: int, primitive_poly: int) -> type[galois.FieldArray]:
    if m == 1:
        return galois.GF(2)
    return galois.GF(2**m, irreducible_poly=primitive_poly, primitive_element=2)


@dataclass(frozen=True)
class FieldParams:
    """GF(2^m) defined by a primitive binary polynomial of degree m."""

    m: int
    primitive_poly: int = field(default=0)

    def __post_init__(self) -> None:
        if not 1 <= self.m <= MAX_EXTENSION_DEGREE:
            raise UnsupportedParameterError(f"extension degree m={self.m} outside 1..{MAX_EXTENSION_DEGREE}")
        if self.primitive_poly == 0:
            object.__setattr__(self, "primitive_poly", DEFAULT_PRIMITIVE_POLYS[self.m])
        if self.primitive_poly.bit_length() - 1 != self.m:
            raise UsageError(f"primitive polynomial {self.primitive_poly:#x} does not have degree {self.m}")
        if self.m > 1 and not galois.Poly.Int(self.primitive_poly, field=galois.GF(2)).is_primitive():
            raise UsageError(f"polynomial {self.primitive_poly:#x} is not primitive over GF(2)")
        if self.m == 1 and self.primitive_poly != 0b11:
            raise UsageError("GF(2) is defined by x + 1")

    @property
    def q(self) -> int:
        return 2**self.m

    @property
    def gf(self) -> type[galois.FieldArray]:
        return _field_class(self.m, self.primitive_poly)

    @property
    def alpha(self) -> galois.FieldArray:
        return self.gf.primitive_element

    def element(self, value: int) -> galois.FieldArray:
        if not 0 <= value < self.q:
            raise UsageError(f"value {value} is not an element of GF({self.q})")
        return self.gf(value)

    def __str__(self) -> str:
        return f"GF(2^{self.m})" if self.m > 1 else "GF(2)"


GF2 = FieldParams(1)


def to_ints(x: Any) -> np.ndarray:
    """Integer view of a field array (or any array-like) as int64."""
    if isinstance(x, galois.FieldArray):
        return x.view(np.ndarray).astype(np.int64)
    return np.asarray(x, dtype=np.int64)


def field_arith(params: FieldParams, a: Any, b: Any = None, op: FieldOp = FieldOp.ADD) -> galois.FieldArray:
    gf = params.gf
    x = gf(to_ints(a))
    if op is FieldOp.INV:
        if np.any(to_ints(x) == 0):
            raise FieldDomainError("zero has no multiplicative inverse")
        return np.reciprocal(x)
    if op is FieldOp.POW:
        e = int(b)
        if e < 0 and np.any(to_ints(x) == 0):
            raise FieldDomainError("negative power of zero")
        return x**e
    y = gf(to_ints(b))
    if op is FieldOp.ADD:
        return x + y
    if op is FieldOp.MUL:
        return x * y
    raise UsageError(f"unknown field operation {op!r}")


def poly_from_coeffs(params: FieldParams, coeffs: PolyLike) -> galois.Poly:
    """Ascending coefficient sequence (or an existing poly) -> polynomial over params' field."""
    if isinstance(coeffs, galois.Poly):
        return galois.Poly(params.gf(to_ints(coeffs.coeffs)))
    values = to_ints(coeffs)
    if values.size == 0:
        return galois.Poly.Zero(field=params.gf)
    return galois.Poly(params.gf(values), order="asc")


def poly_coeffs(p: galois.Poly, size: int | None = None) -> galois.FieldArray:
    """Ascending coefficients, zero-padded to ``size`` when given."""
    if size is None:
        return p.coefficients(order="asc")
    if not is_zero(p) and p.degree >= size:
        raise UsageError(f"polynomial of degree {p.degree} does not fit in {size} coefficients")
    return p.coefficients(size, order="asc")


def is_zero(p: galois.Poly) -> bool:
    return p.degree == 0 and int(p.coeffs[0]) == 0


def degree(p: galois.Poly) -> int:
    """Degree with the zero polynomial at -1."""
    return -1 if is_zero(p) else p.degree


def poly_arith(a: galois.Poly, b: galois.Poly, op: PolyOp) -> galois.Poly | tuple[galois.Poly, galois.Poly]:
    if op is PolyOp.ADD:
        return a + b
    if op is PolyOp.MUL:
        return a * b
    if op is PolyOp.DIVMOD:
        if is_zero(b):
            raise FieldDomainError("division by the zero polynomial")
        return divmod(a, b)
    raise UsageError(f"unknown polynomial operation {op!r}")


def x_n_minus_1(n: int, params: FieldParams) -> galois.Poly:
    return galois.Poly.Degrees([n, 0], field=params.gf)


def format_poly(p: galois.Poly) -> str:
    """Comma-separated hex coefficients, ascending degree: 1 + x + x^3 -> '1,1,0,1'."""
    return ",".join(f"{int(c):x}" for c in poly_coeffs(p))


def parse_poly(text: str, params: FieldParams) -> galois.Poly:
    try:
        values = [int(tok, 16) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from exc
    if any(v >= params.q for v in values):
        raise UsageError(f"coefficient out of range for {params}: {text!r}")
    return poly_from_coeffs(params, values)


def multiplicative_order(base: int, n: int) -> int:
    if math.gcd(base, n) != 1:
        raise UnsupportedParameterError(f"{base} is not invertible modulo {n}")
    if n == 1:
        return 1
    order, acc = 1, base % n
    while acc != 1:
        acc = (acc * base) % n
        order += 1
    return order


@lru_cache(maxsize=None)
def splitting_field(params: FieldParams, n: int) -> tuple[FieldParams, galois.FieldArray]:
    """Field holding the n-th roots of unity over params, and a primitive n-th root omega.

    For m = 1 this is GF(2^M) with M = ord_n(2); for m > 1 it is params itself and
    n must divide q - 1.
    """
    if n < 1 or n % 2 == 0:
        raise UnsupportedParameterError(f"length n={n} must be odd (repeated-root factorization unsupported)")
    if params.m == 1:
        big = FieldParams(multiplicative_order(2, n))
    else:
        if (params.q - 1) % n:
            raise UnsupportedParameterError(f"n={n} does not divide q-1={params.q - 1} for {params}")
        big = params
    omega = big.alpha ** ((big.q - 1) // n)
    return big, omega


def lift_poly(p: galois.Poly, big: FieldParams) -> galois.Poly:
    """Re-read a polynomial over GF(2) or over the splitting field itself in ``big``."""
    return galois.Poly(big.gf(to_ints(p.coeffs)))


def cyclotomic_cosets(n: int, q: int) -> list[list[int]]:
    """Cosets of Z_n under multiplication by q, ordered by smallest representative."""
    seen: set[int] = set()
    cosets = []
    for s in range(n):
        if s in seen:
            continue
        coset, j = [], s
        while j not in coset:
            coset.append(j)
            j = (j * q) % n
        seen.update(coset)
        cosets.append(coset)
    return cosets


def factor_xn_minus_1(n: int, params: FieldParams) -> list[tuple[galois.Poly, int]]:
    """Irreducible factors of x^n - 1 over params, one per q-cyclotomic coset of omega."""
    big, omega = splitting_field(params, n)
    factors = []
    for coset in cyclotomic_cosets(n, params.q):
        roots = omega ** np.array(coset)
        minimal = galois.Poly.Roots(roots, field=big.gf)
        coeffs = to_ints(minimal.coeffs)
        if np.any(coeffs >= params.q):
            raise ConsistencyError(f"minimal polynomial of coset {coset} not over {params}")
        factors.append((galois.Poly(params.gf(coeffs)), 1))
    product = galois.Poly.One(field=params.gf)
    for f, _ in factors:
        product = product * f
    if product != x_n_minus_1(n, params):
        raise ConsistencyError(f"factors of x^{n}-1 over {params} do not multiply back")
    logger.debug(f"x^{n}-1 over {params}: {len(factors)} irreducible factors")
    return factors
