"""Exact linear algebra over prime fields GF(p).

Subspaces are stored as canonical reduced-row-echelon bases, so two
`RowSpace` values describe the same subspace iff their rows are identical.
All kernels work on ``numpy`` int64 arrays reduced mod p.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatch, UnsupportedConfiguration

logger = logging.getLogger("polaris.linalg")

Vector = Tuple[int, ...]
MatrixLike = Union[np.ndarray, Sequence[Sequence[int]]]


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def check_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise UnsupportedConfiguration(f"Modulus must be a prime, got {p!r}")


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """inverse_table(p)[a] is a^{-1} mod p, with 0 mapped to 0."""
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, -1, p)
    return table


def as_matrix(rows: MatrixLike, p: int, ambient_dim: Optional[int] = None) -> np.ndarray:
    """Coerce rows to an int64 matrix reduced mod p, checking row lengths."""
    if isinstance(rows, np.ndarray):
        matrix = rows.astype(np.int64, copy=True)
        if matrix.ndim == 1:
            matrix = matrix.reshape(1, -1)
    else:
        rows = [list(r) for r in rows]
        lengths = {len(r) for r in rows}
        if len(lengths) > 1:
            raise DimensionMismatch(f"Rows have unequal lengths {sorted(lengths)}")
        if not rows:
            if ambient_dim is None:
                raise DimensionMismatch("Cannot infer the ambient dimension of an empty row list")
            return np.zeros((0, ambient_dim), dtype=np.int64)
        matrix = np.array(rows, dtype=np.int64)
    if ambient_dim is not None and matrix.shape[1] != ambient_dim:
        raise DimensionMismatch(f"Expected vectors of length {ambient_dim}, got {matrix.shape[1]}")
    return matrix % p


def rref(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of `matrix` over GF(p); zero rows are dropped."""
    R = np.array(matrix, dtype=np.int64) % p
    m, d = R.shape
    pivots: List[int] = []
    row = 0
    for col in range(d):
        if row == m:
            break
        nonzero = np.nonzero(R[row:, col])[0]
        if nonzero.size == 0:
            continue
        found = row + int(nonzero[0])
        if found != row:
            R[[row, found]] = R[[found, row]]
        R[row] = (R[row] * pow(int(R[row, col]), -1, p)) % p
        factors = R[:, col].copy()
        factors[row] = 0
        if factors.any():
            R = (R - np.outer(factors, R[row])) % p
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank_of(matrix: np.ndarray, p: int) -> int:
    if matrix.shape[0] == 0:
        return 0
    return len(rref(matrix, p)[1])


def left_kernel(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {c : c @ matrix == 0 mod p}."""
    m, d = matrix.shape
    augmented = np.hstack([matrix % p, np.eye(m, dtype=np.int64)])
    R, _ = rref(augmented, p)
    kernel = [r[d:] for r in R if not r[:d].any()]
    if not kernel:
        return np.zeros((0, m), dtype=np.int64)
    return np.array(kernel, dtype=np.int64)


def right_kernel(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {v : matrix @ v == 0 mod p}."""
    return left_kernel(matrix.T, p)


def normalize(vector: Iterable[int], p: int) -> Vector:
    """Scale a nonzero vector so that its first nonzero coordinate is 1."""
    v = [int(x) % p for x in vector]
    for x in v:
        if x:
            inv = pow(x, -1, p)
            return tuple((y * inv) % p for y in v)
    raise ValueError("Cannot normalize the zero vector")


def normalize_rows(matrix: np.ndarray, p: int) -> np.ndarray:
    """Vectorized `normalize`; zero rows stay zero."""
    if matrix.shape[0] == 0:
        return matrix
    first = (matrix != 0).argmax(axis=1)
    lead = matrix[np.arange(matrix.shape[0]), first]
    return (matrix * inverse_table(p)[lead][:, None]) % p


def all_vectors(dim: int, p: int) -> np.ndarray:
    """All p**dim vectors of GF(p)^dim in lexicographic order."""
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((p,) * dim).reshape(dim, -1).T
    return grid.astype(np.int64)


@dataclass(frozen=True)
class RowSpace:
    p: int
    ambient_dim: int
    rows: Tuple[Vector, ...] = ()

    def __post_init__(self):
        check_prime(self.p)
        if self.ambient_dim < 1:
            raise DimensionMismatch(f"ambient_dim must be positive, got {self.ambient_dim}")
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        for r in rows:
            if len(r) != self.ambient_dim:
                raise DimensionMismatch(f"Row {r} does not have length {self.ambient_dim}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "RowSpace":
        return cls(p, ambient_dim, ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "RowSpace":
        return cls(p, ambient_dim, tuple(tuple(int(i == j) for j in range(ambient_dim)) for i in range(ambient_dim)))

    @classmethod
    def span(cls, vectors: MatrixLike, p: int, ambient_dim: Optional[int] = None) -> "RowSpace":
        return rref_canonical(vectors, p, ambient_dim)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def proj_dim(self) -> int:
        return self.rank - 1

    @cached_property
    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        return np.array(self.rows, dtype=np.int64)

    @cached_property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.rows)

    def compatible(self, other: "RowSpace") -> None:
        if self.p != other.p:
            raise DimensionMismatch(f"Modulus mismatch: {self.p} vs {other.p}")
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"Ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def join(self, other: "RowSpace") -> "RowSpace":
        return meet_join(self, other)[1]

    def meet(self, other: "RowSpace") -> "RowSpace":
        return meet_join(self, other)[0]

    def contains(self, other: "RowSpace") -> bool:
        return contains(self, other)

    def contains_vector(self, vector: Iterable[int]) -> bool:
        v = as_matrix([list(vector)], self.p, self.ambient_dim)
        return rank_of(np.vstack([self.matrix, v]), self.p) == self.rank

    def vectors(self) -> np.ndarray:
        """Every vector of the span, zero included."""
        coefficients = all_vectors(self.rank, self.p)
        return (coefficients @ self.matrix) % self.p

    def projective_points(self) -> np.ndarray:
        """Normalized representatives of the 1-dimensional subspaces, in lexicographic order."""
        vectors = self.vectors()
        vectors = vectors[vectors.any(axis=1)]
        normalized = np.unique(normalize_rows(vectors, self.p), axis=0)
        return normalized

    def __repr__(self) -> str:
        return f"RowSpace(p={self.p}, ambient_dim={self.ambient_dim}, rows={list(map(list, self.rows))})"


def rref_canonical(matrix: MatrixLike, p: int, ambient_dim: Optional[int] = None) -> RowSpace:
    """Canonical basis of the row span of `matrix` over GF(p)."""
    check_prime(p)
    M = as_matrix(matrix, p, ambient_dim)
    R, _ = rref(M, p)
    return RowSpace(p, M.shape[1], tuple(tuple(int(x) for x in r) for r in R))


def meet_join(a: RowSpace, b: RowSpace) -> Tuple[RowSpace, RowSpace]:
    """Intersection and sum of two subspaces.

    The meet comes from the left kernel of the stacked bases: for every
    (c_a, c_b) with c_a A + c_b B = 0, c_a A lies in both spaces.
    """
    a.compatible(b)
    p, d = a.p, a.ambient_dim
    if a.rank == 0 or b.rank == 0:
        return RowSpace.zero(p, d), (b if a.rank == 0 else a)
    if a == b:
        return a, a
    stacked = np.vstack([a.matrix, b.matrix])
    join = rref_canonical(stacked, p, d)
    kernel = left_kernel(stacked, p)
    if kernel.shape[0] == 0:
        return RowSpace.zero(p, d), join
    meet = rref_canonical((kernel[:, : a.rank] @ a.matrix) % p, p, d)
    return meet, join


def contains(a: RowSpace, b: RowSpace) -> bool:
    """True iff b is a subspace of a."""
    a.compatible(b)
    if b.rank == 0:
        return True
    if b.rank > a.rank:
        return False
    return rank_of(np.vstack([a.matrix, b.matrix]), a.p) == a.rank


def meet_all(spaces: Iterable[RowSpace]) -> RowSpace:
    spaces = list(spaces)
    if not spaces:
        raise ValueError("meet_all needs at least one subspace")
    result = spaces[0]
    for s in spaces[1:]:
        result = meet_join(result, s)[0]
        if result.rank == 0:
            break
    return result


def join_all(spaces: Iterable[RowSpace]) -> RowSpace:
    spaces = list(spaces)
    if not spaces:
        raise ValueError("join_all needs at least one subspace")
    first = spaces[0]
    for s in spaces[1:]:
        first.compatible(s)
    return rref_canonical(np.vstack([s.matrix for s in spaces]), first.p, first.ambient_dim)


def solve_coordinates(vectors: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """Coefficients c with c @ basis == vectors; `basis` rows must be independent.

    Raises ValueError when a vector is outside the span of `basis`.
    """
    r = basis.shape[0]
    vectors = np.atleast_2d(vectors)
    if vectors.shape[0] == 0:
        return np.zeros((0, r), dtype=np.int64)
    augmented = np.hstack([basis.T % p, vectors.T % p])
    R, pivots = rref(augmented, p)
    if pivots[:r] != list(range(r)):
        raise ValueError("Basis rows are linearly dependent")
    if len(pivots) > r:
        raise ValueError("Vector is not in the span of the basis")
    return R[:r, r:].T.copy()


def enumerate_subspaces(ambient_dim: int, rank: int, p: int) -> Iterator[RowSpace]:
    """All rank-`rank` subspaces of GF(p)^ambient_dim, grouped by pivot pattern.

    Every RREF matrix is generated exactly once, so no deduplication is needed.
    """
    check_prime(p)
    if not 0 <= rank <= ambient_dim:
        raise ValueError(f"rank must lie in [0, {ambient_dim}], got {rank}")
    if rank == 0:
        yield RowSpace.zero(p, ambient_dim)
        return
    for pivots in itertools.combinations(range(ambient_dim), rank):
        pivot_set = set(pivots)
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, ambient_dim) if j not in pivot_set]
        for values in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * ambient_dim for _ in pivots]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            yield RowSpace(p, ambient_dim, tuple(map(tuple, rows)))


def extend_basis(base: np.ndarray, candidates: np.ndarray, p: int) -> np.ndarray:
    """Rows of `candidates` that, in order, extend the independent rows of `base`."""
    chosen: List[np.ndarray] = []
    current = base
    for row in candidates:
        stacked = np.vstack([current, row.reshape(1, -1)])
        if rank_of(stacked, p) > current.shape[0]:
            chosen.append(row)
            current = stacked
    if not chosen:
        return np.zeros((0, base.shape[1]), dtype=np.int64)
    return np.array(chosen, dtype=np.int64)
