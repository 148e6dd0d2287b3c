"""
Generic q-ary linear block codes over GF(2^m).

A ``LinearCode`` is a full-rank generator matrix plus lazily built tables for
exhaustive work: the parity-check matrix (standard form with a recorded column
permutation), the codebook (all q^k codewords) and the coset-leader table
(all minimum-weight vectors of each of the q^(n-k) cosets). Tables are built at
most once per code under a lock; reads afterwards are lock-free.
"""

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Any, Literal, Optional, Union

import galois
import numpy as np

from .errors import CapacityError, ConstructionError, UsageError
from .finite_field import GF2, FieldParams, poly_coeffs, to_ints

logger = logging.getLogger(__name__)

# Desk-scale enumeration bound (codebook size or coset count).
ENUMERATION_LIMIT = 2**24
# Upper bound on error patterns visited while filling a coset-leader table.
PATTERN_LIMIT = 2**22
_CODEBOOK_CHUNK = 2**16


def rref(matrix: galois.FieldArray) -> tuple[galois.FieldArray, list[int]]:
    """Reduced row echelon form (nonzero rows only) and the pivot columns."""
    if matrix.shape[0] == 0:
        return matrix, []
    reduced = matrix.row_reduce()
    ints = to_ints(reduced)
    keep = np.flatnonzero(ints.any(axis=1))
    reduced = reduced[keep]
    pivots = [int(np.flatnonzero(row)[0]) for row in to_ints(reduced)]
    return reduced, pivots


def rank(matrix: galois.FieldArray) -> int:
    return len(rref(matrix)[1])


def null_space(matrix: galois.FieldArray) -> galois.FieldArray:
    """Basis (as rows) of {x : matrix @ x = 0}."""
    gf = type(matrix)
    ncols = matrix.shape[1]
    reduced, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = gf.Zeros((len(free), ncols))
    for row, col in enumerate(free):
        basis[row, col] = 1
        for i, p in enumerate(pivots):
            # -x = x in characteristic 2
            basis[row, p] = reduced[i, col]
    return basis


def stack(params: FieldParams, *mats: Any) -> galois.FieldArray:
    blocks = [to_ints(m).reshape(-1, to_ints(m).shape[-1]) for m in mats if to_ints(m).size]
    if not blocks:
        raise UsageError("nothing to stack")
    return params.gf(np.vstack(blocks))


def hamming_weight(x: Any) -> int:
    return int(np.count_nonzero(to_ints(x)))


def hamming_distance(x: Any, y: Any) -> int:
    return int(np.count_nonzero(to_ints(x) != to_ints(y)))


@dataclass(frozen=True)
class ZeroCode:
    """The trivial code {0} of length n."""

    params: FieldParams
    n: int

    @property
    def k(self) -> int:
        return 0

    @property
    def generator(self) -> galois.FieldArray:
        return self.params.gf.Zeros((0, self.n))


AnyCode = Union["LinearCode", ZeroCode]


@dataclass(frozen=True)
class Coset:
    code: "LinearCode"
    syndrome: galois.FieldArray
    leader: galois.FieldArray

    @property
    def weight(self) -> int:
        return hamming_weight(self.leader)


@dataclass(frozen=True)
class _CosetTable:
    leader_weight: np.ndarray  # per syndrome index
    syndromes: np.ndarray  # sorted syndrome index of every stored leader
    leaders: np.ndarray  # stored leaders, grouped by syndrome, lexicographic within a group


class LinearCode:
    """q-ary linear block code given by a full-rank k x n generator matrix."""

    def __init__(self, params: FieldParams, generator: Any, name: Optional[str] = None):
        gen = params.gf(to_ints(generator))
        if gen.ndim != 2:
            raise UsageError("generator must be a k x n matrix")
        k, n = gen.shape
        if not 0 < k <= n:
            raise ConstructionError(f"generator shape {gen.shape} violates 0 < k <= n")
        if rank(gen) != k:
            raise ConstructionError(f"generator of {name or 'code'} is rank deficient")
        self.params = params
        self.generator = gen
        self.n = n
        self.k = k
        self.name = name or f"C({n},{k})"
        self._lock = threading.RLock()
        self._cache: dict[str, Any] = {}

    # Construction helpers

    @classmethod
    def from_span(cls, params: FieldParams, rows: Any, name: Optional[str] = None) -> AnyCode:
        """Code spanned by arbitrary rows (possibly dependent); {0} when they span nothing."""
        mat = params.gf(to_ints(rows))
        basis, _ = rref(mat)
        if basis.shape[0] == 0:
            return ZeroCode(params, mat.shape[1])
        return cls(params, basis, name=name)

    @classmethod
    def cyclic(cls, params: FieldParams, n: int, generator_poly: galois.Poly, k: Optional[int] = None, name: Optional[str] = None) -> "LinearCode":
        """Rows x^i g(x), i < k (default k = n - deg g), as ascending length-n vectors."""
        r = generator_poly.degree
        k = n - r if k is None else k
        if k < 1 or k + r > n:
            raise ConstructionError(f"cannot take {k} shifts of a degree-{r} generator at length {n}")
        g = to_ints(poly_coeffs(generator_poly))
        rows = np.zeros((k, n), dtype=np.int64)
        for i in range(k):
            rows[i, i : i + r + 1] = g
        return cls(params, rows, name=name)

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    def __repr__(self) -> str:
        return f"LinearCode({self.name} over {self.params})"

    # Lazy tables

    def _cached(self, key: str, build):
        value = self._cache.get(key)
        if value is not None:
            return value
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    @property
    def standard_form(self) -> tuple[galois.FieldArray, list[int]]:
        return self._cached("standard_form", lambda: rref(self.generator))

    @property
    def parity_check(self) -> galois.FieldArray:
        return self._cached("parity_check", self._build_parity_check)

    def _build_parity_check(self) -> galois.FieldArray:
        reduced, pivots = self.standard_form
        free = [c for c in range(self.n) if c not in pivots]
        h = self.params.gf.Zeros((len(free), self.n))
        for j, col in enumerate(free):
            h[j, col] = 1
            for i, p in enumerate(pivots):
                h[j, p] = reduced[i, col]
        return h

    def warm_up(self) -> None:
        """Build the tables exhaustive queries will use before sharing the code across workers."""
        self.parity_check
        try:
            self._choose_method(None)
        except CapacityError as e:
            logger.debug(f"{self.name}: no exhaustive table ({e})")

    # Encoding and membership

    def encode(self, msg: Any) -> galois.FieldArray:
        m = self.params.gf(to_ints(msg))
        if m.shape[-1] != self.k:
            raise UsageError(f"{self.name}: message length {m.shape[-1]} != k={self.k}")
        return m @ self.generator

    def syndrome(self, y: Any) -> galois.FieldArray:
        v = self._vector(y)
        return v @ self.parity_check.T

    def contains(self, y: Any) -> bool:
        return self.redundancy == 0 or not np.any(to_ints(self.syndrome(y)))

    def message_of(self, codeword: Any) -> galois.FieldArray:
        """Inverse of encode for codewords, read off the information set of the standard form."""
        c = self._vector(codeword)
        reduced, pivots = self.standard_form
        transform = self._cached("information_inverse", lambda: np.linalg.inv(self.generator[:, pivots]))
        return c[..., pivots] @ transform

    def _vector(self, y: Any) -> galois.FieldArray:
        v = self.params.gf(to_ints(y))
        if v.shape[-1] != self.n:
            raise UsageError(f"{self.name}: vector length {v.shape[-1]} != n={self.n}")
        return v

    # Codebook enumeration

    def _check_codebook(self) -> None:
        if self.q**self.k > ENUMERATION_LIMIT:
            raise CapacityError(
                f"{self.name}: q^k = {self.q}^{self.k} codewords exceed the enumeration bound; "
                "use a structured decoder"
            )

    @property
    def codebook(self) -> np.ndarray:
        """All q^k codewords as an integer array, row i = encode(base-q digits of i)."""
        self._check_codebook()
        return self._cached("codebook", self._build_codebook)

    def _build_codebook(self) -> np.ndarray:
        total = self.q**self.k
        dtype = np.uint8 if self.q <= 256 else np.uint16
        book = np.empty((total, self.n), dtype=dtype)
        powers = self.q ** np.arange(self.k, dtype=np.int64)
        for start in range(0, total, _CODEBOOK_CHUNK):
            idx = np.arange(start, min(total, start + _CODEBOOK_CHUNK), dtype=np.int64)
            digits = (idx[:, None] // powers[None, :]) % self.q
            book[start : start + len(idx)] = to_ints(self.params.gf(digits) @ self.generator)
        logger.debug(f"{self.name}: codebook of {total} words built")
        return book

    @property
    def packed_codebook(self) -> np.ndarray:
        """Binary codewords packed into uint64 with coordinate 0 as the most significant bit."""
        if self.q != 2 or self.n > 64:
            raise UsageError("packed codebook needs a binary code with n <= 64")
        return self._cached("packed_codebook", lambda: _pack_bits(self.codebook))

    # Coset-leader table

    def _check_cosets(self) -> None:
        if self.q**self.redundancy > ENUMERATION_LIMIT:
            raise CapacityError(
                f"{self.name}: q^(n-k) = {self.q}^{self.redundancy} cosets exceed the enumeration bound"
            )

    @property
    def coset_table(self) -> _CosetTable:
        self._check_cosets()
        return self._cached("coset_table", self._build_coset_table)

    def _syndrome_index(self, syndromes: galois.FieldArray) -> np.ndarray:
        powers = self.q ** np.arange(self.redundancy, dtype=np.int64)
        return to_ints(syndromes) @ powers

    def _build_coset_table(self) -> _CosetTable:
        gf, n, q, r = self.params.gf, self.n, self.q, self.redundancy
        total = q**r
        leader_weight = np.full(total, -1, dtype=np.int64)
        h_cols = self.parity_check.T
        found_syndromes, found_leaders = [], []
        visited = 0
        for w in range(n + 1):
            if w == 0:
                patterns = np.zeros((1, n), dtype=np.int64)
                index = np.zeros(1, dtype=np.int64)
            else:
                positions = np.array(list(itertools.combinations(range(n), w)), dtype=np.int64)
                values = np.array(list(itertools.product(range(1, q), repeat=w)), dtype=np.int64)
                visited += len(positions) * len(values)
                if visited > PATTERN_LIMIT:
                    raise CapacityError(f"{self.name}: coset-leader search exceeds {PATTERN_LIMIT} patterns")
                synd = gf.Zeros((len(positions), len(values), r))
                grid = np.zeros((len(positions), len(values), n), dtype=np.int64)
                rows = np.arange(len(positions))[:, None]
                cols = np.arange(len(values))[None, :]
                for j in range(w):
                    synd = synd + h_cols[positions[:, j]][:, None, :] * gf(values[:, j])[None, :, None]
                    grid[rows, cols, positions[:, j][:, None]] = values[:, j][None, :]
                patterns = grid.reshape(-1, n)
                index = self._syndrome_index(synd.reshape(-1, r)) if r else np.zeros(len(patterns), dtype=np.int64)
            fresh = leader_weight[index] < 0
            if np.any(fresh):
                found_syndromes.append(index[fresh])
                found_leaders.append(patterns[fresh])
                leader_weight[np.unique(index[fresh])] = w
            if np.all(leader_weight >= 0):
                break
        syndromes = np.concatenate(found_syndromes)
        leaders = np.concatenate(found_leaders)
        order = np.lexsort([leaders[:, i] for i in reversed(range(n))] + [syndromes])
        logger.debug(f"{self.name}: coset table with {total} cosets, {len(leaders)} minimum-weight leaders")
        return _CosetTable(leader_weight=leader_weight, syndromes=syndromes[order], leaders=leaders[order])

    def _leaders_of(self, index: int) -> np.ndarray:
        table = self.coset_table
        lo = np.searchsorted(table.syndromes, index, side="left")
        hi = np.searchsorted(table.syndromes, index, side="right")
        return table.leaders[lo:hi]

    def coset_leaders(self) -> list[Coset]:
        """One coset per syndrome, each with its lexicographically smallest minimum-weight leader."""
        table = self.coset_table
        starts = np.flatnonzero(np.r_[True, table.syndromes[1:] != table.syndromes[:-1]])
        cosets = []
        for s in starts:
            leader = self.params.gf(table.leaders[s])
            cosets.append(Coset(code=self, syndrome=self.syndrome(leader), leader=leader))
        return cosets

    # Exhaustive queries

    def _choose_method(self, method: Optional[str]) -> str:
        if method is None:
            method = "cosets" if self.q**self.redundancy <= self.q**self.k else "codewords"
            if method == "cosets" and self.q**self.redundancy > ENUMERATION_LIMIT:
                method = "codewords"
        if method == "cosets":
            self.coset_table
        elif method == "codewords":
            self.packed_codebook if self.q == 2 and self.n <= 64 else self.codebook
        else:
            raise UsageError(f"unknown search method {method!r}")
        return method

    def nearest_codewords(self, y: Any, method: Optional[Literal["cosets", "codewords"]] = None) -> tuple[np.ndarray, int]:
        """Every codeword at minimum Hamming distance from y (integer rows) and that distance."""
        v = to_ints(self._vector(y))
        if self.q**self.k > ENUMERATION_LIMIT and self.q**self.redundancy > ENUMERATION_LIMIT:
            raise CapacityError(f"{self.name}: both enumeration bounds exceeded; use a structured decoder")
        method = self._choose_method(method)
        if method == "cosets":
            index = int(self._syndrome_index(self.syndrome(v))) if self.redundancy else 0
            leaders = self._leaders_of(index)
            # y - e is y XOR e in characteristic 2
            return np.bitwise_xor(v[None, :], leaders), hamming_weight(leaders[0])
        if self.q == 2 and self.n <= 64:
            packed = self.packed_codebook
            dist = np.bitwise_count(packed ^ _pack_bits(v[None, :])[0]).astype(np.int64)
            d = int(dist.min())
            return _unpack_bits(packed[dist == d], self.n), d
        book = self.codebook
        dist = np.count_nonzero(book != v[None, :], axis=1)
        d = int(dist.min())
        return book[dist == d].astype(np.int64), d

    def nearest_codeword(self, y: Any, method: Optional[Literal["cosets", "codewords"]] = None) -> tuple[galois.FieldArray, int]:
        """Closest codeword in Hamming distance; ties go to the lexicographically smallest codeword."""
        candidates, d = self.nearest_codewords(y, method)
        return self.params.gf(candidates[_lexmin(candidates)]), d

    def nearest_in_coset(self, y: Any, shift: Any) -> tuple[galois.FieldArray, int]:
        """Closest vector of shift + C to y; ties go to the lexicographically smallest vector."""
        s = to_ints(self._vector(shift))
        candidates, d = self.nearest_codewords(np.bitwise_xor(to_ints(y), s))
        members = np.bitwise_xor(candidates, s[None, :])
        return self.params.gf(members[_lexmin(members)]), d

    def covering_radius(self) -> int:
        return int(self.coset_table.leader_weight.max())

    def deep_hole(self) -> galois.FieldArray:
        """A vector whose distance to the code equals the covering radius."""
        table = self.coset_table
        worst = int(np.flatnonzero(table.leader_weight == table.leader_weight.max())[0])
        return self.params.gf(self._leaders_of(worst)[0])

    def min_distance(self) -> int:
        book = self.codebook
        if len(book) < 2:
            return self.n
        return int(np.count_nonzero(book[1:], axis=1).min())


def _lexmin(rows: np.ndarray) -> int:
    if len(rows) == 1:
        return 0
    return int(np.lexsort([rows[:, i] for i in reversed(range(rows.shape[1]))])[0])


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    n = bits.shape[1]
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    return np.bitwise_or.reduce(bits.astype(np.uint64) << shifts[None, :], axis=1)


def _unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    return ((np.asarray(words, dtype=np.uint64)[..., None] >> shifts) & np.uint64(1)).astype(np.int64)


def _check_compatible(a: AnyCode, b: AnyCode) -> None:
    if a.params != b.params or a.n != b.n:
        raise UsageError(f"codes over {a.params}/n={a.n} and {b.params}/n={b.n} are not comparable")


def encode(code: LinearCode, msg: Any) -> galois.FieldArray:
    return code.encode(msg)


def code_sum(a: AnyCode, b: AnyCode) -> AnyCode:
    _check_compatible(a, b)
    return LinearCode.from_span(a.params, stack(a.params, a.generator, b.generator) if a.k + b.k else a.generator)


def code_intersection(a: AnyCode, b: AnyCode) -> AnyCode:
    """Basis of rowspace(a) ∩ rowspace(b); ZeroCode when the intersection is {0}."""
    _check_compatible(a, b)
    if a.k == 0 or b.k == 0:
        return ZeroCode(a.params, a.n)
    stacked = stack(a.params, a.generator, b.generator)
    relations = null_space(stacked.T)
    if relations.shape[0] == 0:
        return ZeroCode(a.params, a.n)
    common = relations[:, : a.k] @ a.generator
    return LinearCode.from_span(a.params, common)


def same_rowspace(a: AnyCode, b: AnyCode) -> bool:
    _check_compatible(a, b)
    if a.k != b.k:
        return False
    if a.k == 0:
        return True
    return rank(stack(a.params, a.generator, b.generator)) == a.k


def contains_code(outer: AnyCode, inner: AnyCode) -> bool:
    """True when rowspace(inner) is a subspace of rowspace(outer)."""
    _check_compatible(outer, inner)
    if inner.k == 0:
        return True
    if outer.k == 0:
        return False
    return rank(stack(outer.params, outer.generator, inner.generator)) == outer.k


def nearest_codeword(code: LinearCode, y: Any) -> tuple[galois.FieldArray, int]:
    return code.nearest_codeword(y)


def covering_radius(code: LinearCode) -> int:
    return code.covering_radius()


def min_distance(code: LinearCode) -> int:
    return code.min_distance()


def repetition_code(n: int, params: FieldParams = GF2) -> LinearCode:
    return LinearCode(params, np.ones((1, n), dtype=np.int64), name=f"Rep({n},1)")


def identity_code(n: int, params: FieldParams = GF2) -> LinearCode:
    return LinearCode(params, np.eye(n, dtype=np.int64), name=f"Id({n})")
