"""
Reed-Solomon and folded Reed-Solomon codes, folding maps and decoders.

``BoundedDistanceDecoder`` decodes any cyclic code of odd length up to half
its BCH bound: it finds the longest run of consecutive roots of the generator
among the n-th roots of unity and runs the syndrome / Euclid / Chien / Forney
chain on that run. RS codes, shortened ones included, use it with the
primitive element as locator base and the run a^1..a^(n-k); nested cyclic
outer codes (BCH for m = 1, RS-type otherwise) use it with whatever run their
generator has.

``list_decode`` is exhaustive and only meant for desk-scale codes. Its
signature (code, received word, radius) -> list is the one a polynomial-time
folded RS list decoder would plug into.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional, Union

import galois
import numpy as np

from .core_types import DecodeKind, DecodeOutcome
from .errors import ConsistencyError, UsageError
from .finite_field import FieldParams, degree, is_zero, lift_poly, poly_from_coeffs, splitting_field, to_ints
from .linear_code import LinearCode, hamming_distance

logger = logging.getLogger(__name__)


class BoundedDistanceDecoder:
    """Unique decoder for the code of length n spanned by multiples of ``generator_poly``.

    Without ``root`` the code must be cyclic and the locators are powers of a
    primitive n-th root of unity. With ``root`` (a field element of order at
    least n) the locators are root^0 .. root^(n-1), which covers shortened RS
    codes whose length does not divide q - 1.
    """

    def __init__(self, params: FieldParams, n: int, generator_poly: galois.Poly, root: Optional[Any] = None):
        self.params = params
        self.n = n
        self.generator_poly = generator_poly
        if root is None:
            self.big, self.omega = splitting_field(params, n)
            self.order = n
        else:
            self.big, self.omega = params, params.gf(root)
            self.order = int(self.omega.multiplicative_order())
            if self.order < n:
                raise UsageError(f"locator base has order {self.order} < n={n}")
        g_big = lift_poly(generator_poly, self.big)
        powers = self.omega ** np.arange(self.order)
        zeros = set(np.flatnonzero(to_ints(g_big(powers)) == 0).tolist())
        self.first_root, self.run = _longest_cyclic_run(zeros, self.order)
        self.t = self.run // 2
        logger.debug(f"BD decoder n={n} over {params}: root run w^{self.first_root}.. of length {self.run}, t={self.t}")

    def _is_codeword(self, y: galois.FieldArray) -> bool:
        return is_zero(poly_from_coeffs(self.params, y) % self.generator_poly)

    def decode(self, y: Any) -> DecodeOutcome:
        received = self.params.gf(to_ints(y))
        if received.shape[-1] != self.n:
            raise UsageError(f"received length {received.shape[-1]} != n={self.n}")
        if self.t == 0:
            if self._is_codeword(received):
                return DecodeOutcome(DecodeKind.UNIQUE, [received], 0)
            return DecodeOutcome(DecodeKind.FAILURE)

        gf = self.big.gf
        r_big = galois.Poly(gf(to_ints(received)), order="asc")
        points = self.omega ** (self.first_root + np.arange(2 * self.t))
        syndromes = r_big(points)
        if not np.any(to_ints(syndromes)):
            if self._is_codeword(received):
                return DecodeOutcome(DecodeKind.UNIQUE, [received], 0)
            return DecodeOutcome(DecodeKind.FAILURE)

        locator, evaluator = self._solve_key_equation(galois.Poly(syndromes, order="asc"))
        if locator is None:
            return DecodeOutcome(DecodeKind.FAILURE)

        inverse_points = self.omega ** (-np.arange(self.n))
        positions = np.flatnonzero(to_ints(locator(inverse_points)) == 0)
        if len(positions) != locator.degree:
            return DecodeOutcome(DecodeKind.FAILURE)

        slope = locator.derivative()
        error = np.zeros(self.n, dtype=np.int64)
        for i in positions:
            x_inv = inverse_points[i]
            denom = slope(x_inv)
            if int(denom) == 0:
                return DecodeOutcome(DecodeKind.FAILURE)
            x = self.omega ** int(i)
            value = x ** ((1 - self.first_root) % self.order) * evaluator(x_inv) / denom
            if int(value) >= self.params.q or int(value) == 0:
                return DecodeOutcome(DecodeKind.FAILURE)
            error[i] = int(value)

        corrected = received - self.params.gf(error)
        if not self._is_codeword(corrected):
            return DecodeOutcome(DecodeKind.FAILURE)
        return DecodeOutcome(DecodeKind.UNIQUE, [corrected], len(positions))

    def _solve_key_equation(self, syndrome: galois.Poly) -> tuple[Any, Any]:
        """Sugiyama's Euclid run on (x^2t, S(x)); returns (locator, evaluator) with locator(0) = 1."""
        gf = self.big.gf
        r_prev = galois.Poly.Degrees([2 * self.t], field=gf)
        r_cur = syndrome
        t_prev = galois.Poly.Zero(field=gf)
        t_cur = galois.Poly.One(field=gf)
        while degree(r_cur) >= self.t:
            quotient, remainder = divmod(r_prev, r_cur)
            r_prev, r_cur = r_cur, remainder
            t_prev, t_cur = t_cur, t_prev - quotient * t_cur
        if degree(t_cur) > self.t:
            return None, None
        lead = t_cur(gf(0))
        if int(lead) == 0:
            return None, None
        return galois.Poly(t_cur.coeffs / lead), galois.Poly(r_cur.coeffs / lead)


def _longest_cyclic_run(zeros: set[int], n: int) -> tuple[int, int]:
    if not zeros:
        return 0, 0
    if len(zeros) == n:
        return 0, n
    best_start, best_len = 0, 0
    for s in sorted(zeros):
        if (s - 1) % n in zeros:
            continue
        length = 0
        while (s + length) % n in zeros:
            length += 1
        if length > best_len:
            best_start, best_len = s, length
    return best_start, best_len


@dataclass(frozen=True, eq=False)
class RSCode:
    """RS(n, k) over GF(q) with evaluation points a^0 .. a^(n-1), a primitive.

    For n < q - 1 this is the shortened code: multiples of g(x) = prod (x - a^i),
    i = 1 .. n - k, of degree below n. It is cyclic only when n = q - 1.
    """

    params: FieldParams
    n: int
    k: int

    @property
    def omega(self) -> galois.FieldArray:
        return self.params.alpha

    @cached_property
    def points(self) -> galois.FieldArray:
        return self.omega ** np.arange(self.n)

    @cached_property
    def generator_poly(self) -> galois.Poly:
        roots = self.omega ** np.arange(1, self.n - self.k + 1)
        return galois.Poly.Roots(roots, field=self.params.gf)

    @cached_property
    def linear(self) -> LinearCode:
        return LinearCode.cyclic(self.params, self.n, self.generator_poly, name=f"RS({self.n},{self.k})")

    @cached_property
    def column_multipliers(self) -> galois.FieldArray:
        """v_j = 1 / (a_j prod_{l != j} (a_j - a_l)); all ones when n = q - 1."""
        a = self.points
        diffs = a[:, None] - a[None, :]
        diffs[np.arange(self.n), np.arange(self.n)] = 1
        return (a * np.multiply.reduce(diffs, axis=1)) ** -1

    @cached_property
    def evaluation(self) -> LinearCode:
        """Evaluation form: a message i(x) maps to (v_j i(a_j))_j, the same code as ``linear``."""
        exponents = np.outer(np.arange(self.k), np.arange(self.n)) % (self.params.q - 1)
        rows = self.omega**exponents * self.column_multipliers[None, :]
        return LinearCode(self.params, rows, name=f"RS-eval({self.n},{self.k})")

    @cached_property
    def decoder(self) -> BoundedDistanceDecoder:
        return BoundedDistanceDecoder(self.params, self.n, self.generator_poly, root=self.omega)

    @property
    def min_distance(self) -> int:
        return self.n - self.k + 1

    def evaluate(self, message: Any) -> galois.FieldArray:
        return self.evaluation.encode(message)


def rs_build(n: int, k: int, params: FieldParams) -> RSCode:
    if params.m < 2:
        raise UsageError("RS codes need an extension field (m >= 2)")
    if not 1 <= k < n <= params.q - 1:
        raise UsageError(f"RS({n},{k}) over {params} needs 1 <= k < n <= {params.q - 1}")
    return RSCode(params=params, n=n, k=k)


@dataclass(frozen=True, eq=False)
class FoldedCode:
    """nu-folded view of a code: nu consecutive symbols bundled into one symbol of F_q^nu."""

    base: Union[RSCode, LinearCode]
    nu: int

    def __post_init__(self) -> None:
        if self.nu < 1 or self.base.n % self.nu:
            raise UsageError(f"folding parameter nu={self.nu} must divide n={self.base.n}")

    @property
    def linear(self) -> LinearCode:
        return _linear(self.base)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n_prime(self) -> int:
        return self.base.n // self.nu

    @property
    def rate(self) -> float:
        return self.k / self.n

    def fold_word(self, y: Any) -> np.ndarray:
        """Length-n word over GF(2^m) -> n/nu symbols of GF(2^(m nu))."""
        m = self.linear.params.m
        return sigma(sigma_star(y, m, 1), m, self.nu)

    def unfold_word(self, y: Any) -> np.ndarray:
        """n/nu symbols of GF(2^(m nu)) -> length-n word over GF(2^m)."""
        m = self.linear.params.m
        return sigma(sigma_star(y, m, self.nu), m, 1)

    def received(self, y: Any) -> np.ndarray:
        """Unfolded received word; y may be given unfolded or over the folded alphabet."""
        word = to_ints(y)
        if self.nu > 1 and word.shape[-1] == self.n_prime:
            return self.unfold_word(word)
        return word


# Folded Reed-Solomon codes are the folded view of an RSCode.
FoldedRSCode = FoldedCode

Decodable = Union[RSCode, LinearCode, FoldedCode]


def _linear(code: Union[RSCode, LinearCode]) -> LinearCode:
    return code.linear if isinstance(code, RSCode) else code


def fold(c: Any, nu: int) -> np.ndarray:
    """(c_0..c_{n-1}) -> ((c_0..c_{nu-1}), (c_nu..c_{2nu-1}), ...), shape (..., n/nu, nu)."""
    n = c.shape[-1]
    if nu < 1 or n % nu:
        raise UsageError(f"nu={nu} does not divide n={n}")
    return c.reshape(*c.shape[:-1], n // nu, nu)


def unfold(folded: Any, nu: int) -> np.ndarray:
    if folded.shape[-1] != nu:
        raise UsageError(f"last axis {folded.shape[-1]} != nu={nu}")
    return folded.reshape(*folded.shape[:-2], folded.shape[-2] * nu)


def sigma(bits: Any, m: int, nu: int) -> np.ndarray:
    """Pack F_2^(nm) into n/nu symbols of GF(2^(m nu)), LSB-first within each symbol."""
    width = m * nu
    if width > 62:
        raise UsageError(f"folded symbol width m*nu={width} exceeds 62 bits")
    b = to_ints(bits)
    if b.shape[-1] % width:
        raise UsageError(f"{b.shape[-1]} bits do not split into {width}-bit symbols")
    grouped = b.reshape(*b.shape[:-1], b.shape[-1] // width, width)
    return grouped @ (np.int64(1) << np.arange(width, dtype=np.int64))


def sigma_star(symbols: Any, m: int, nu: int) -> np.ndarray:
    width = m * nu
    s = to_ints(symbols)
    bits = (s[..., None] >> np.arange(width, dtype=np.int64)) & 1
    return bits.reshape(*s.shape[:-1], s.shape[-1] * width)


def bd_decode(code: Union[RSCode, BoundedDistanceDecoder], y: Any) -> DecodeOutcome:
    decoder = code.decoder if isinstance(code, RSCode) else code
    return decoder.decode(y)


def _folded_distances(book: np.ndarray, y: np.ndarray, nu: int) -> np.ndarray:
    differs = book != y[None, :]
    if nu == 1:
        return np.count_nonzero(differs, axis=1)
    return np.count_nonzero(fold(differs, nu).any(axis=-1), axis=1)


def list_decode(code: Decodable, y: Any, radius: int) -> DecodeOutcome:
    """All codewords within ``radius`` of y, folded symbols counted as single errors; exhaustive."""
    nu = code.nu if isinstance(code, FoldedCode) else 1
    linear = code.linear if isinstance(code, FoldedCode) else _linear(code)
    received = code.received(y) if isinstance(code, FoldedCode) else to_ints(y)
    if received.shape[-1] != linear.n:
        raise UsageError(f"received length {received.shape[-1]} != n={linear.n}")
    book = linear.codebook
    hits = book[_folded_distances(book, received, nu) <= radius]
    if len(hits) == 0:
        return DecodeOutcome(DecodeKind.FAILURE, [], radius)
    hits = hits[np.lexsort([hits[:, i] for i in reversed(range(hits.shape[1]))])]
    return DecodeOutcome(DecodeKind.LIST, [linear.params.gf(h.astype(np.int64)) for h in hits], radius)


def source_encode(code: Decodable, y: Any) -> tuple[galois.FieldArray, int]:
    """Nearest codeword by list decoding at radius 0, 1, ..., n - k; the first nonempty list wins."""
    linear = code.linear if isinstance(code, FoldedCode) else _linear(code)
    nu = code.nu if isinstance(code, FoldedCode) else 1
    received = code.received(y) if isinstance(code, FoldedCode) else to_ints(y)
    for e in range(linear.n - linear.k + 1):
        outcome = list_decode(code, received, math.ceil(e / nu))
        if not outcome.ok:
            continue
        close = [(hamming_distance(c, received), c) for c in outcome.codewords]
        close = [(d, c) for d, c in close if d <= e]
        if close:
            best = min(d for d, _ in close)
            # codewords arrive in lexicographic order
            winner = next(c for d, c in close if d == best)
            return winner, best
    raise ConsistencyError(f"no codeword within n-k={linear.n - linear.k} of the input")
