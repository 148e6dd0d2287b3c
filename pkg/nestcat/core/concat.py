"""
Concatenation of an outer code over GF(2^m) with a binary inner code.

phi expands each outer symbol into its m coordinates in the polynomial basis
(LSB first); psi_star cuts the resulting nm bits into l groups of nm/l bits and
encodes every group with the inner generator. The binary images of the outer
subcodes span the nested pair (C_eq1, C_eq2) of the equivalent code C_eq.

With a nested inner pair (``InnerPair``) and a plain outer code, each group is
split between the two inner subcodes instead: the first k_a bits go through
the first inner generator and the remaining k_b bits through the second.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Union

import galois
import numpy as np

from .core_types import VerificationReport
from .errors import ConstructionError, UsageError
from .finite_field import GF2, FieldParams, to_ints
from .linear_code import (
    AnyCode,
    LinearCode,
    ZeroCode,
    code_intersection,
    code_sum,
    contains_code,
    rank,
    same_rowspace,
    stack,
)
from .nested_cyclic import NestedCyclicCode

logger = logging.getLogger(__name__)


def phi(v: Any, params: FieldParams) -> galois.FieldArray:
    """GF(2^m)^n -> GF(2)^(nm); symbol j occupies bits j*m .. j*m + m - 1, LSB first."""
    values = to_ints(v)
    if np.any(values >= params.q) or np.any(values < 0):
        raise UsageError(f"entries outside {params}")
    bits = (values[..., None] >> np.arange(params.m, dtype=np.int64)) & 1
    return GF2.gf(bits.reshape(*values.shape[:-1], values.shape[-1] * params.m))


def phi_inv(u: Any, params: FieldParams) -> galois.FieldArray:
    bits = to_ints(u)
    if bits.shape[-1] % params.m:
        raise UsageError(f"{bits.shape[-1]} bits are not a whole number of {params} symbols")
    grouped = bits.reshape(*bits.shape[:-1], bits.shape[-1] // params.m, params.m)
    return params.gf(grouped @ (np.int64(1) << np.arange(params.m, dtype=np.int64)))


def _group(u: np.ndarray, l: int) -> np.ndarray:
    if l < 1 or u.shape[-1] % l:
        raise UsageError(f"group count l={l} does not divide {u.shape[-1]}")
    return u.reshape(*u.shape[:-1], l, u.shape[-1] // l)


def psi_star(u: Any, inner: LinearCode, l: int) -> galois.FieldArray:
    """(u_1 G, ..., u_l G) for u split into l consecutive groups."""
    groups = GF2.gf(_group(to_ints(u), l))
    if groups.shape[-1] != inner.k:
        raise UsageError(f"group length {groups.shape[-1]} != inner dimension k={inner.k}")
    images = groups @ inner.generator
    return images.reshape(*images.shape[:-2], l * inner.n)


def psi_star_inv(c: Any, inner: LinearCode, l: int) -> galois.FieldArray:
    """Inverse of psi_star on its image (each block must be an inner codeword)."""
    blocks = GF2.gf(_group(to_ints(c), l))
    if blocks.shape[-1] != inner.n:
        raise UsageError(f"block length {blocks.shape[-1]} != inner length n={inner.n}")
    messages = inner.message_of(blocks)
    return messages.reshape(*messages.shape[:-2], l * inner.k)


@dataclass(frozen=True, eq=False)
class InnerPair:
    """Nested binary inner code C_Psi = C_Psi1 + C_Psi2 with trivial intersection."""

    first: LinearCode
    second: LinearCode
    check: bool = True

    def __post_init__(self) -> None:
        if self.first.n != self.second.n or self.first.params != GF2 or self.second.params != GF2:
            raise ConstructionError("inner pair must be binary codes of one length")
        if self.check and rank(stack(GF2, self.first.generator, self.second.generator)) != self.k:
            raise ConstructionError("inner pair generators overlap: stacked rank is below k1 + k2")

    @property
    def n(self) -> int:
        return self.first.n

    @property
    def k(self) -> int:
        return self.first.k + self.second.k

    @property
    def generator(self) -> galois.FieldArray:
        return stack(GF2, self.first.generator, self.second.generator)


Outer = Union[NestedCyclicCode, LinearCode]
Inner = Union[LinearCode, InnerPair]


@dataclass(frozen=True, eq=False)
class ConcatParams:
    outer: Outer
    inner: Inner
    l: int

    def __post_init__(self) -> None:
        n, m = self.outer_code.n, self.params.m
        if not 1 <= self.l <= n:
            raise UsageError(f"group count l={self.l} outside 1..n={n}")
        if (n * m) % self.l:
            raise UsageError(f"l={self.l} does not divide nm={n * m}")
        if self.inner.k != n * m // self.l:
            raise UsageError(f"inner dimension {self.inner.k} != nm/l = {n * m // self.l}")
        if isinstance(self.inner, LinearCode) and self.inner.params != GF2:
            raise UsageError("inner code must be binary")
        if isinstance(self.inner, InnerPair) and isinstance(self.outer, NestedCyclicCode):
            raise UsageError("a nested inner pair takes a plain outer code")

    @property
    def params(self) -> FieldParams:
        return self.outer.params

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def outer_code(self) -> LinearCode:
        return self.outer.c if isinstance(self.outer, NestedCyclicCode) else self.outer

    @property
    def nested_outer(self) -> bool:
        return isinstance(self.outer, NestedCyclicCode)

    @property
    def N(self) -> int:
        return self.l * self.inner.n

    def image(self, v: Any) -> galois.FieldArray:
        """psi_star(phi(v)); with an inner pair, psi_1*(phi(v)) + psi_2*(phi(v))."""
        u = phi(v, self.params)
        if isinstance(self.inner, LinearCode):
            return psi_star(u, self.inner, self.l)
        first, second = split_images(u, self.inner, self.l)
        return first + second


def split_images(u: Any, pair: InnerPair, l: int) -> tuple[galois.FieldArray, galois.FieldArray]:
    """psi_1*(u) and psi_2*(u): the first k_a bits of every group go through the first generator."""
    groups = GF2.gf(_group(to_ints(u), l))
    ka = pair.first.k
    first = groups[..., :ka] @ pair.first.generator
    second = groups[..., ka:] @ pair.second.generator
    shape = (*groups.shape[:-2], l * pair.n)
    return first.reshape(shape), second.reshape(shape)


@dataclass(frozen=True, eq=False)
class ConcatenatedNestedCode:
    params: ConcatParams
    eq: LinearCode
    eq1: AnyCode
    eq2: AnyCode

    @property
    def N(self) -> int:
        return self.eq.n

    @property
    def K(self) -> int:
        return self.eq.k

    @property
    def K1(self) -> int:
        return self.eq1.k

    @property
    def K2(self) -> int:
        return self.eq2.k

    @property
    def outer(self) -> Outer:
        return self.params.outer

    @property
    def inner(self) -> LinearCode:
        """The single inner code of a nested-outer construction."""
        if not isinstance(self.params.inner, LinearCode):
            raise UsageError("construction uses a nested inner pair, not a single inner code")
        return self.params.inner

    def encode_outer(self, v: Any) -> galois.FieldArray:
        return self.params.image(v)

    def decode_outer(self, c: Any) -> galois.FieldArray:
        """Outer word whose image is c (c must lie in C_eq)."""
        return phi_inv(psi_star_inv(c, self.inner, self.params.l), self.params.params)

    def describe(self) -> str:
        return f"C_eq({self.N},{self.K}) = C_eq1(K1={self.K1}) + C_eq2(K2={self.K2}), l={self.params.l}"

    def warm_up(self) -> None:
        for code in (self.eq, self.eq1, self.eq2):
            if isinstance(code, LinearCode):
                code.parity_check
        if isinstance(self.params.inner, LinearCode):
            self.inner.message_of(GF2.gf.Zeros(self.inner.n))


def field_basis(code: LinearCode) -> galois.FieldArray:
    """Rows alpha^b * g_j (j < k, b < m): a GF(2)-basis of the code viewed as a binary space."""
    alpha_powers = code.params.alpha ** np.arange(code.params.m)
    scaled = alpha_powers[:, None, None] * code.generator[None, :, :]
    return scaled.reshape(code.params.m * code.k, code.n)


def _binary_image(params: ConcatParams, code: AnyCode, name: str) -> AnyCode:
    if isinstance(code, ZeroCode):
        return ZeroCode(GF2, params.N)
    return LinearCode.from_span(GF2, params.image(field_basis(code)), name=name)


def build_equivalent(params: ConcatParams) -> ConcatenatedNestedCode:
    """Binary images of C and of its two subcodes through phi and psi_star."""
    outer = params.outer_code
    expected = outer.k * params.m
    eq = _binary_image(params, outer, name=f"C_eq({params.N},{expected})")
    strict = not isinstance(params.inner, InnerPair) or params.inner.check
    if isinstance(eq, ZeroCode) or (strict and eq.k != expected):
        raise ConstructionError(f"binary image has rank {eq.k}, expected K = km = {expected}")
    if params.nested_outer:
        eq1 = _binary_image(params, params.outer.c1, name="C_eq1")
        eq2 = _binary_image(params, params.outer.c2, name="C_eq2")
    elif isinstance(params.inner, InnerPair):
        first, second = split_images(phi(field_basis(outer), params.params), params.inner, params.l)
        eq1 = LinearCode.from_span(GF2, first, name="C_eq1")
        eq2 = LinearCode.from_span(GF2, second, name="C_eq2")
    else:
        # plain outer, single inner: C = C + {0}
        eq1, eq2 = eq, ZeroCode(GF2, params.N)
    code = ConcatenatedNestedCode(params=params, eq=eq, eq1=eq1, eq2=eq2)
    logger.debug(code.describe())
    return code


def verify_preservation(code: ConcatenatedNestedCode) -> VerificationReport:
    """Clause 1: C_eq = C_eq1 + C_eq2 with K = km; clause 2: C_eq1 ∩ C_eq2 = {0}."""
    params = code.params
    report = VerificationReport(subject=code.describe())
    expected = params.outer_code.k * params.m
    injective = code.K == expected
    if not isinstance(params.inner, InnerPair):
        total = code_sum(code.eq1, code.eq2)
        spans = same_rowspace(code.eq, total)
        report.add("1", spans and injective, f"dim C_eq={code.K} (km={expected}), dim(C_eq1+C_eq2)={total.k}")
    else:
        pair = params.inner
        # psi_1* + psi_2* against psi_star with the stacked inner generator
        stacked = stack(GF2, pair.first.generator, pair.second.generator)
        reference = psi_star(phi(field_basis(params.outer_code), params.params), _RawInner(stacked), params.l)
        spans = same_rowspace(code.eq, LinearCode.from_span(GF2, reference))
        covered = contains_code(code_sum(code.eq1, code.eq2), code.eq)
        report.add(
            "1",
            spans and covered and injective,
            f"dim C_eq={code.K} (km={expected}), psi1*+psi2* = psi*: {spans}, C_eq in C_eq1+C_eq2: {covered}",
        )
    common = code_intersection(code.eq1, code.eq2)
    report.add("2", common.k == 0, f"dim(C_eq1 ∩ C_eq2)={common.k}")
    return report


@dataclass(frozen=True)
class _RawInner:
    """Generator-only stand-in for psi_star when the stacked inner rows may be dependent."""

    generator: galois.FieldArray

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def n(self) -> int:
        return self.generator.shape[1]


def concatenate(outer: Outer, inner: Inner, l: int, check_inner: bool = True) -> ConcatenatedNestedCode:
    """Validate parameters and build the equivalent code in one step."""
    if isinstance(inner, InnerPair) and inner.check != check_inner:
        inner = InnerPair(inner.first, inner.second, check=check_inner)
    return build_equivalent(ConcatParams(outer=outer, inner=inner, l=l))


def group_distance(params: ConcatParams) -> int:
    """Fewest nonzero groups of nm/l bits over the nonzero outer codewords; d itself when l = n."""
    outer = params.outer_code
    if params.l == outer.n:
        return outer.min_distance()
    book = outer.codebook[1:].astype(np.int64)
    bits = (book[..., None] >> np.arange(params.m, dtype=np.int64)) & 1
    groups = bits.reshape(book.shape[0], params.l, -1).any(axis=-1)
    return int(np.count_nonzero(groups, axis=1).min())


def distance_bound(code: ConcatenatedNestedCode, outer_distance: Optional[int] = None) -> int:
    """d_Psi times the outer distance counted in groups (enumerated when not given).

    With l < n a group mixes several outer symbols, so the outer distance is
    taken over the folded groups rather than over symbols.
    """
    d = outer_distance if outer_distance is not None else group_distance(code.params)
    inner = code.params.inner
    d_inner = inner.min_distance() if isinstance(inner, LinearCode) else LinearCode(GF2, inner.generator).min_distance()
    return d_inner * d
