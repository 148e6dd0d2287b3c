"""
Nested cyclic codes from a three-way split of x^n - 1 = g f h.

C is generated by g (dimension k1 + k2), the information subcode C1 by the
shifts x^i g for i < k1 (zero padded to length n) and the binning subcode C2 by
g f (dimension k2). Information always lives in C1; swap roles by rebuilding
with a different split.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional, Sequence

import galois
import numpy as np

from .core_types import VerificationReport
from .errors import ConsistencyError, ConstructionError, NotACodewordError, UsageError
from .finite_field import (
    FieldParams,
    PolyLike,
    degree,
    factor_xn_minus_1,
    format_poly,
    is_zero,
    poly_coeffs,
    poly_from_coeffs,
    x_n_minus_1,
)
from .linear_code import AnyCode, LinearCode, code_intersection, code_sum, contains_code, same_rowspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactorSplit:
    """Indices into ``factor_xn_minus_1`` output assigned to each role."""

    g: tuple[int, ...]
    f: tuple[int, ...]
    h: tuple[int, ...]

    @classmethod
    def of(cls, g: Sequence[int], f: Sequence[int], h: Sequence[int]) -> "FactorSplit":
        return cls(tuple(g), tuple(f), tuple(h))


@dataclass(frozen=True, eq=False)
class NestedCyclicCode:
    params: FieldParams
    n: int
    g: galois.Poly
    f: galois.Poly
    h: galois.Poly
    split: Optional[FactorSplit] = None

    @property
    def r(self) -> int:
        return self.g.degree

    @property
    def k1(self) -> int:
        return self.f.degree

    @property
    def k2(self) -> int:
        return self.h.degree

    @property
    def k(self) -> int:
        return self.k1 + self.k2

    @cached_property
    def gf(self) -> galois.Poly:
        return self.g * self.f

    @cached_property
    def c(self) -> LinearCode:
        return LinearCode.cyclic(self.params, self.n, self.g, name=f"C({self.n},{self.k})")

    @cached_property
    def c1(self) -> LinearCode:
        # Shortened (n - k2, k1) code padded with k2 trailing zeros.
        return LinearCode.cyclic(self.params, self.n, self.g, k=self.k1, name=f"C1({self.n - self.k2},{self.k1})")

    @cached_property
    def c2(self) -> LinearCode:
        return LinearCode.cyclic(self.params, self.n, self.gf, name=f"C2({self.n},{self.k2})")

    def describe(self) -> str:
        return (
            f"nested cyclic code n={self.n} over {self.params}: "
            f"g=[{format_poly(self.g)}] f=[{format_poly(self.f)}] h=[{format_poly(self.h)}] "
            f"(r={self.r}, k1={self.k1}, k2={self.k2})"
        )


@dataclass(frozen=True, slots=True)
class NestedCodeword:
    v: galois.Poly
    i1: galois.Poly
    i2: galois.Poly

    def vector(self, n: int) -> galois.FieldArray:
        return poly_coeffs(self.v, n)


def _role_product(params: FieldParams, factors: list[galois.Poly], indices: Sequence[int], role: str) -> galois.Poly:
    product = galois.Poly.One(field=params.gf)
    for i in indices:
        if not 0 <= i < len(factors):
            raise ConstructionError(f"factor index {i} for {role} outside 0..{len(factors) - 1}")
        product = product * factors[i]
    return product


def build_nested(n: int, params: FieldParams, split: FactorSplit) -> NestedCyclicCode:
    """Assemble g, f, h from the irreducible factors of x^n - 1 named by ``split``."""
    factors = [p for p, _ in factor_xn_minus_1(n, params)]
    g = _role_product(params, factors, split.g, "g")
    f = _role_product(params, factors, split.f, "f")
    h = _role_product(params, factors, split.h, "h")
    return nested_from_polys(n, params, g, f, h, split=split)


def nested_from_polys(
    n: int, params: FieldParams, g: PolyLike, f: PolyLike, h: PolyLike, split: Optional[FactorSplit] = None
) -> NestedCyclicCode:
    g, f, h = (poly_from_coeffs(params, p) for p in (g, f, h))
    if g * f * h != x_n_minus_1(n, params):
        raise ConstructionError(f"g*f*h != x^{n}-1 over {params}")
    if g.degree < 1:
        raise ConstructionError("g must be nonconstant")
    if f.degree < 1:
        raise ConstructionError("f = 1 leaves no information subcode (k1 = 0)")
    if h.degree < 1:
        raise ConstructionError("h = 1 leaves no binning subcode (k2 = 0)")
    code = NestedCyclicCode(params=params, n=n, g=g, f=f, h=h, split=split)
    logger.debug(code.describe())
    return code


def _as_poly(params: FieldParams, p: Any) -> galois.Poly:
    return poly_from_coeffs(params, p)


def nested_encode(code: NestedCyclicCode, i1: Any, i2: Any) -> NestedCodeword:
    """v = i1 g + i2 g f."""
    p1, p2 = _as_poly(code.params, i1), _as_poly(code.params, i2)
    if degree(p1) >= code.k1:
        raise UsageError(f"deg(i1)={degree(p1)} must be < k1={code.k1}")
    if degree(p2) >= code.k2:
        raise UsageError(f"deg(i2)={degree(p2)} must be < k2={code.k2}")
    v = p1 * code.g + p2 * code.gf
    return NestedCodeword(v=v, i1=p1, i2=p2)


def extract_info(code: NestedCyclicCode, v: Any) -> galois.Poly:
    """i1 = (v mod g f) / g."""
    pv = _as_poly(code.params, v)
    if degree(pv) >= code.n:
        raise UsageError(f"deg(v)={degree(pv)} must be < n={code.n}")
    if not is_zero(pv % code.g):
        raise NotACodewordError("v is not divisible by g")
    i1, rem = divmod(pv % code.gf, code.g)
    if not is_zero(rem):
        raise ConsistencyError("(v mod gf) / g left a remainder")
    return i1


def split_codeword(code: NestedCyclicCode, v: Any) -> NestedCodeword:
    """Both information parts of v: i1 from ``extract_info`` and i2 = (v - i1 g) / (g f)."""
    pv = _as_poly(code.params, v)
    i1 = extract_info(code, pv)
    i2, rem = divmod(pv - i1 * code.g, code.gf)
    if not is_zero(rem):
        raise ConsistencyError("v - i1 g is not a multiple of g f")
    return NestedCodeword(v=pv, i1=i1, i2=i2)


def verify_nested_views(c: AnyCode, c1: AnyCode, c2: AnyCode, subject: str = "nested code") -> VerificationReport:
    """Check C subset of F_q^n holding C1 and C2, C = C1 + C2, and C1 ∩ C2 = {0}."""
    report = VerificationReport(subject=subject)
    comparable = all(x.params == c.params and x.n == c.n for x in (c1, c2))
    if not comparable:
        report.add("i", False, "subcodes differ from C in length or field")
        report.add("ii", False, "not evaluated")
        report.add("iii", False, "not evaluated")
        return report
    inside = contains_code(c, c1) and contains_code(c, c2)
    report.add("i", inside, f"C({c.n},{c.k}) in {c.params}^{c.n}; C1, C2 subcodes: {inside}")
    total = code_sum(c1, c2)
    report.add("ii", same_rowspace(c, total), f"dim C={c.k}, dim(C1+C2)={total.k}")
    common = code_intersection(c1, c2)
    excess = c1.k + c2.k - total.k
    report.add(
        "iii",
        excess == 0 and common.k == 0,
        f"dim C1 + dim C2 - dim(C1+C2) = {c1.k}+{c2.k}-{total.k} = {excess}; dim(C1∩C2)={common.k}",
    )
    return report


def verify_nested(code: NestedCyclicCode) -> VerificationReport:
    report = verify_nested_views(code.c, code.c1, code.c2, subject=code.describe())
    if report.passed and code.c1.k + code.c2.k != code.c.k:
        raise ConsistencyError("clauses passed but dimensions do not add up")
    # padded C1 coordinates beyond r + k1 are zero by construction
    tail = np.asarray(code.c1.generator[:, code.n - code.k2 :])
    if np.any(tail):
        raise ConsistencyError("C1 view is not zero padded")
    return report
