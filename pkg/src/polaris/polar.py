import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    TypedDict,
)

import numpy as np

from .errors import InconsistentInput, PreconditionError, UnsupportedConfiguration
from .linalg import (
    RowSpace,
    Vector,
    all_vectors,
    check_prime,
    extend_basis,
    left_kernel,
    normalize,
    rank_of,
    rref_canonical,
    right_kernel,
    solve_coordinates,
)

logger = logging.getLogger("polaris.polar")

KINDS = ("symplectic", "hyperbolic", "parabolic")
KIND_ALIASES = {
    "C": "symplectic",
    "D": "hyperbolic",
    "B": "parabolic",
    "hyperbolic-orthogonal": "hyperbolic",
    "parabolic-orthogonal": "parabolic",
}


@dataclass(frozen=True)
class FormSpec:
    """A classical form of Witt index `rank` over GF(p).

    Coordinates are (x_1..x_n, y_1..y_n) with e_i, f_i the unit vectors of
    x_i and y_i; the parabolic kind appends x_0 as the last coordinate.
    """

    kind: str
    rank: int
    p: int

    def __post_init__(self):
        kind = KIND_ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise UnsupportedConfiguration(f"Unknown form kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        check_prime(self.p)
        if self.rank < 1:
            raise UnsupportedConfiguration(f"Form rank must be at least 1, got {self.rank}")
        if kind == "parabolic" and self.p == 2:
            raise UnsupportedConfiguration("Parabolic (B_n) forms need an odd characteristic")

    def replace(self, **kwargs) -> "FormSpec":
        return replace(self, **kwargs)

    @property
    def ambient_dim(self) -> int:
        return 2 * self.rank + (1 if self.kind == "parabolic" else 0)

    @property
    def is_orthogonal(self) -> bool:
        return self.kind != "symplectic"

    @cached_property
    def gram(self) -> np.ndarray:
        """Gram matrix of the polar bilinear form (the polarization for quadratic kinds)."""
        n, p = self.rank, self.p
        G = np.zeros((self.ambient_dim, self.ambient_dim), dtype=np.int64)
        for i in range(n):
            G[i, n + i] = 1
            G[n + i, i] = (p - 1) if self.kind == "symplectic" else 1
        if self.kind == "parabolic":
            G[2 * n, 2 * n] = 2 % p
        return G

    def e(self, i: int) -> Vector:
        """Unit vector e_i, 1-based."""
        return tuple(int(j == i - 1) for j in range(self.ambient_dim))

    def f(self, i: int) -> Vector:
        return tuple(int(j == self.rank + i - 1) for j in range(self.ambient_dim))

    def bilinear(self, u: Sequence[int], v: Sequence[int]) -> int:
        return int(np.asarray(u, dtype=np.int64) @ self.gram @ np.asarray(v, dtype=np.int64)) % self.p

    def quadratic(self, v: Sequence[int]) -> int:
        return int(self.quadratic_rows(np.asarray(v, dtype=np.int64).reshape(1, -1))[0])

    def quadratic_rows(self, vectors: np.ndarray) -> np.ndarray:
        if not self.is_orthogonal:
            return np.zeros(vectors.shape[0], dtype=np.int64)
        n = self.rank
        q = (vectors[:, :n] * vectors[:, n : 2 * n]).sum(axis=1)
        if self.kind == "parabolic":
            q = q + vectors[:, 2 * n] ** 2
        return q % self.p


@dataclass(frozen=True)
class SingularSubspace:
    """A totally singular subspace; `proj_dim` is its projective dimension."""

    space: RowSpace

    @property
    def rows(self) -> Tuple[Vector, ...]:
        return self.space.rows

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def ambient_dim(self) -> int:
        return self.space.ambient_dim

    @property
    def rank(self) -> int:
        return self.space.rank

    @property
    def proj_dim(self) -> int:
        return self.space.rank - 1

    @property
    def matrix(self) -> np.ndarray:
        return self.space.matrix

    @property
    def is_empty(self) -> bool:
        return self.space.rank == 0

    def contains(self, other: "SingularSubspace") -> bool:
        return self.space.contains(other.space)

    def meet(self, other: "SingularSubspace") -> "SingularSubspace":
        return SingularSubspace(self.space.meet(other.space))

    def __repr__(self) -> str:
        return f"SingularSubspace(dim={self.proj_dim}, rows={list(map(list, self.rows))})"


def subspace_key(s: SingularSubspace) -> Tuple[int, Tuple[Vector, ...]]:
    """Canonical sort key: rank first, then the RREF rows."""
    return (s.rank, s.rows)


@dataclass(frozen=True)
class Frame:
    """2l point ids with a fixed-point-free involution `sigma` on their positions (0-based)."""

    points: Tuple[int, ...]
    sigma: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(int(x) for x in self.points))
        object.__setattr__(self, "sigma", tuple(int(x) for x in self.sigma))
        size = len(self.points)
        if size == 0 or size % 2 or len(self.sigma) != size:
            raise ValueError(f"A frame needs an even, nonzero number of points with a matching sigma, got {size}")
        for i, j in enumerate(self.sigma):
            if not 0 <= j < size or j == i or self.sigma[j] != i:
                raise ValueError(f"sigma is not a fixed-point-free involution at position {i}")
        if len(set(self.points)) != size:
            raise ValueError("Frame points must be distinct")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, int]]) -> "Frame":
        points: List[int] = []
        sigma: List[int] = []
        for a, b in pairs:
            i = len(points)
            points.extend([a, b])
            sigma.extend([i + 1, i])
        return cls(tuple(points), tuple(sigma))

    @property
    def l(self) -> int:
        return len(self.points) // 2

    def pairs(self) -> List[Tuple[int, int]]:
        """Position pairs (i, sigma(i)) with i < sigma(i), ordered by i."""
        return [(i, j) for i, j in enumerate(self.sigma) if i < j]

    @cached_property
    def labels(self) -> Tuple[int, ...]:
        """Signed label of each position: the t-th pair gets +t and -t."""
        labels = [0] * len(self.points)
        for t, (i, j) in enumerate(self.pairs(), start=1):
            labels[i], labels[j] = t, -t
        return tuple(labels)

    def point_of(self, label: int) -> int:
        return self.points[self.labels.index(label)]


class AxiomReport(TypedDict):
    points: int
    lines: int
    thick_lines: bool
    one_or_all: bool
    no_radical_point: bool
    maximal_rank: bool


class PolarSpace:
    """The polar space of a classical form: point registry, collinearity and subspaces.

    Points are the normalized singular vectors (first nonzero coordinate 1)
    in lexicographic order; a point id is an index into `points`.
    """

    def __init__(self, form: FormSpec):
        self.form = form
        p, d = form.p, form.ambient_dim
        vectors = all_vectors(d, p)[1:]
        leads = vectors[np.arange(vectors.shape[0]), (vectors != 0).argmax(axis=1)]
        vectors = vectors[leads == 1]
        vectors = vectors[form.quadratic_rows(vectors) == 0]
        self.points: np.ndarray = vectors
        self._index: Dict[Vector, int] = {tuple(r): i for i, r in enumerate(vectors.tolist())}
        self._gram_points = (vectors @ form.gram) % p
        self._leads = (vectors != 0).argmax(axis=1)
        self._point_sets: Dict[Tuple[Vector, ...], FrozenSet[int]] = {}
        self._quotients: Dict[Tuple[Vector, ...], "Quotient"] = {}
        logger.debug("Built %s polar space of rank %d over GF(%d): %d points", form.kind, form.rank, p, len(vectors))

    def __repr__(self) -> str:
        return f"PolarSpace(kind={self.kind!r}, rank={self.rank}, p={self.p})"

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def kind(self) -> str:
        return self.form.kind

    @property
    def rank(self) -> int:
        return self.form.rank

    @property
    def n(self) -> int:
        return self.form.rank

    @property
    def p(self) -> int:
        return self.form.p

    @property
    def ambient_dim(self) -> int:
        return self.form.ambient_dim

    # points and collinearity

    def vector(self, point: int) -> Vector:
        return tuple(int(x) for x in self.points[point])

    def point_id(self, vector: Iterable[int]) -> int:
        key = normalize(vector, self.p)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(f"{key} is not a point of {self!r}") from None

    def collinear(self, a: int, b: int) -> bool:
        if a == b:
            raise ValueError(f"Collinearity is defined for distinct points, got {a} twice")
        return int(self._gram_points[a] @ self.points[b]) % self.p == 0

    @cached_property
    def collinearity(self) -> np.ndarray:
        """Boolean N x N matrix; a point counts as collinear with itself."""
        return (self._gram_points @ self.points.T) % self.p == 0

    def perp_mask(self, vectors: np.ndarray) -> np.ndarray:
        """Mask over points q with f(q, v) = 0 for every row v."""
        if vectors.shape[0] == 0:
            return np.ones(len(self), dtype=bool)
        return ~((self._gram_points @ vectors.T) % self.p).any(axis=1)

    def perp_set(self, xs: Iterable[int]) -> FrozenSet[int]:
        xs = list(xs)
        if not xs:
            raise ValueError("perp_set needs at least one point")
        mask = self.perp_mask(self.points[xs])
        return frozenset(int(i) for i in np.nonzero(mask)[0])

    # subspaces

    def bilinear_block(self, a: RowSpace, b: RowSpace) -> np.ndarray:
        return (a.matrix @ self.form.gram @ b.matrix.T) % self.p

    def perpendicular(self, a: SingularSubspace, b: SingularSubspace) -> bool:
        """a ⊥ b: the span of two singular subspaces is singular iff the form vanishes across them."""
        return not self.bilinear_block(a.space, b.space).any()

    def perp_space(self, space: RowSpace) -> RowSpace:
        if space.rank == 0:
            return RowSpace.full(self.p, self.ambient_dim)
        kernel = right_kernel((space.matrix @ self.form.gram.T) % self.p, self.p)
        return rref_canonical(kernel, self.p, self.ambient_dim)

    def is_totally_singular(self, space: RowSpace) -> bool:
        if space.rank == 0:
            return True
        if self.form.quadratic_rows(space.matrix).any():
            return False
        return not self.bilinear_block(space, space).any()

    def singular(self, rows) -> SingularSubspace:
        """Canonical singular subspace spanned by `rows`; raises if the span is not totally singular."""
        space = rows if isinstance(rows, RowSpace) else rref_canonical(rows, self.p, self.ambient_dim)
        if space.ambient_dim != self.ambient_dim:
            raise PreconditionError(f"Subspace lives in dimension {space.ambient_dim}, expected {self.ambient_dim}", space)
        if not self.is_totally_singular(space):
            raise PreconditionError("Subspace is not totally singular", space)
        return SingularSubspace(space)

    def empty(self) -> SingularSubspace:
        return SingularSubspace(RowSpace.zero(self.p, self.ambient_dim))

    def point_subspace(self, point: int) -> SingularSubspace:
        return SingularSubspace(RowSpace(self.p, self.ambient_dim, (self.vector(point),)))

    def span_points(self, points: Iterable[int]) -> SingularSubspace:
        points = list(points)
        if not points:
            return self.empty()
        return self.singular(self.points[points])

    def join(self, *subspaces: SingularSubspace) -> SingularSubspace:
        """Span of singular subspaces; raises if the span is not singular."""
        stacked = np.vstack([s.matrix for s in subspaces])
        return self.singular(rref_canonical(stacked, self.p, self.ambient_dim))

    def point_ids(self, sub: SingularSubspace) -> FrozenSet[int]:
        cached = self._point_sets.get(sub.rows)
        if cached is None:
            if sub.rank == 0:
                cached = frozenset()
            else:
                cached = frozenset(self._index[tuple(r)] for r in sub.space.projective_points().tolist())
            self._point_sets[sub.rows] = cached
        return cached

    def enumerate_singular(self, k: int) -> List[SingularSubspace]:
        """All totally singular subspaces of projective dimension k, sorted by their RREF rows.

        Each subspace is reached once, from the span of the first k rows of its
        canonical basis, by appending a point that keeps the basis reduced.
        """
        if not 0 <= k <= self.rank - 1:
            raise ValueError(f"k must lie in [0, {self.rank - 1}], got {k}")
        level = [RowSpace.zero(self.p, self.ambient_dim)]
        for _ in range(k + 1):
            level = [child for parent in level for child in self._canonical_children(parent)]
        logger.debug("Enumerated %d singular subspaces of dimension %d", len(level), k)
        return sorted((SingularSubspace(s) for s in level), key=subspace_key)

    def _canonical_children(self, parent: RowSpace) -> Iterator[RowSpace]:
        if parent.rank == 0:
            mask = np.ones(len(self), dtype=bool)
        else:
            pivots = list(parent.pivots)
            mask = self._leads > pivots[-1]
            mask &= ~self.points[:, pivots].any(axis=1)
            mask &= ~parent.matrix[:, self._leads].any(axis=0)
            mask &= self.perp_mask(parent.matrix)
        for i in np.nonzero(mask)[0]:
            yield RowSpace(self.p, self.ambient_dim, parent.rows + (self.vector(int(i)),))

    # frames

    def standard_frame(self) -> Frame:
        pairs = [(self.point_id(self.form.e(i)), self.point_id(self.form.f(i))) for i in range(1, self.rank + 1)]
        return Frame.from_pairs(pairs)

    def validate_frame(self, frame: Frame) -> Frame:
        """Check the frame conditions, raising PreconditionError with the failing pair."""
        if frame.l > self.rank:
            raise PreconditionError(f"A frame of {self!r} has at most {self.rank} pairs, got {frame.l}", frame)
        for x in frame.points:
            if not 0 <= x < len(self):
                raise PreconditionError(f"Point id {x} is not registered", x)
        size = len(frame.points)
        for i in range(size):
            for j in range(i + 1, size):
                collinear = self.collinear(frame.points[i], frame.points[j])
                if collinear == (frame.sigma[i] == j):
                    raise PreconditionError(f"Positions {i} and {j} violate the frame collinearity pattern", (i, j))
        return frame

    def extend_to_frame(self, xs: Iterable[int], ys: Iterable[int]) -> Frame:
        """Extend pairwise collinear X and partners Y to a frame of the whole space.

        Each y is paired with its unique non-collinear x. The remaining x's
        get partners inside the perp of the pairs found so far, chosen
        orthogonal to the other leftovers; fresh hyperbolic pairs then fill
        the space. Every choice takes the smallest admissible point id.
        """
        xs = sorted(set(xs))
        ys = sorted(set(ys))
        if not xs and not ys:
            return self.standard_frame()
        if not len(ys) <= len(xs) <= self.rank:
            raise PreconditionError(f"Need |Y| <= |X| <= {self.rank}, got |X|={len(xs)}, |Y|={len(ys)}", (xs, ys))
        common = set(xs) & set(ys)
        if common:
            raise PreconditionError("X and Y must be disjoint", min(common))
        for group in (xs, ys):
            for i, a in enumerate(group):
                for b in group[i + 1 :]:
                    if not self.collinear(a, b):
                        raise PreconditionError(f"Points {a} and {b} must be collinear", (a, b))
        partner: Dict[int, int] = {}
        for y in ys:
            opposite = [x for x in xs if not self.collinear(x, y)]
            if len(opposite) != 1:
                raise PreconditionError(f"Point {y} must be non-collinear with exactly one x, found {opposite}", (y, opposite))
            if opposite[0] in partner:
                raise PreconditionError(f"Points {partner[opposite[0]]} and {y} share the partner {opposite[0]}", (partner[opposite[0]], y))
            partner[opposite[0]] = y
        for i in range(1, len(xs) + 1):
            if rank_of(self.points[xs[:i]], self.p) < i:
                raise PreconditionError(f"Point {xs[i - 1]} lies in the span of the preceding x's", xs[i - 1])

        pairs = [(x, partner[x]) for x in xs if x in partner]
        used = [pt for pair in pairs for pt in pair]
        leftover = [x for x in xs if x not in partner]
        for idx, x in enumerate(leftover):
            others = leftover[:idx] + leftover[idx + 1 :]
            mask = self.perp_mask(self.points[used + others]) & ((self._gram_points @ self.points[x]) % self.p != 0)
            candidates = np.nonzero(mask)[0]
            if candidates.size == 0:
                raise InconsistentInput(f"No partner for {x} exists; the form is degenerate on the residue", x)
            pairs.append((x, int(candidates[0])))
            used.extend(pairs[-1])
        while len(pairs) < self.rank:
            pool = self.perp_mask(self.points[used]) if used else np.ones(len(self), dtype=bool)
            x = int(np.nonzero(pool)[0][0])
            mask = pool & ((self._gram_points @ self.points[x]) % self.p != 0)
            y = int(np.nonzero(mask)[0][0])
            pairs.append((x, y))
            used.extend([x, y])
        frame = Frame.from_pairs(pairs)
        logger.debug("Extended %d x's and %d y's to a frame of rank %d", len(xs), len(ys), self.rank)
        return self.validate_frame(frame)

    # residues

    def quotient(self, base: Optional[SingularSubspace] = None) -> "Quotient":
        """The polar space base^⊥ / base with lift and project maps."""
        if base is None or base.rank == 0:
            identity = np.eye(self.ambient_dim, dtype=np.int64)
            return Quotient(self, self.empty(), self, identity)
        cached = self._quotients.get(base.rows)
        if cached is not None:
            return cached
        if not self.is_totally_singular(base.space):
            raise PreconditionError("The quotient base must be totally singular", base)
        if base.proj_dim > self.rank - 2:
            raise PreconditionError(f"The quotient base must have dimension at most {self.rank - 2}, got {base.proj_dim}", base)
        complement = extend_basis(base.matrix, self.perp_space(base.space).matrix, self.p)
        residue_rank = self.rank - base.rank
        basis = self._witt_basis(complement, residue_rank)
        space = PolarSpace(FormSpec(self.kind, residue_rank, self.p))
        quotient = Quotient(self, base, space, basis)
        self._quotients[base.rows] = quotient
        return quotient

    def _witt_basis(self, complement: np.ndarray, residue_rank: int) -> np.ndarray:
        """Rows e_1..e_r, c*f_1..c*f_r (, a) realizing the standard form scaled by c."""
        p, G = self.p, self.form.gram
        current = complement
        es: List[np.ndarray] = []
        fs: List[np.ndarray] = []
        for _ in range(residue_rank):
            combos = (all_vectors(current.shape[0], p)[1:] @ current) % p
            singular = np.nonzero(self.form.quadratic_rows(combos) == 0)[0]
            e = combos[singular[0]]
            pairing = (e @ G @ current.T) % p
            j = int(np.nonzero(pairing)[0][0])
            w = (current[j] * pow(int(pairing[j]), -1, p)) % p
            f = (w - self.form.quadratic(w) * e) % p
            es.append(e)
            fs.append(f)
            kernel = left_kernel((current @ G @ np.vstack([e, f]).T) % p, p)
            current = (kernel @ current) % p
        scale = 1
        rows = list(es)
        if self.kind == "parabolic":
            anisotropic = current[0]
            scale = self.form.quadratic(anisotropic)
            rows += [(scale * f) % p for f in fs] + [anisotropic]
        else:
            rows += fs
        return np.array(rows, dtype=np.int64)

    # axioms

    def check_axioms(self) -> AxiomReport:
        """Exhaustive polar-space axiom check; meant for small spaces."""
        C = self.collinearity
        lines = [np.array(sorted(self.point_ids(line))) for line in self.enumerate_singular(1)]
        thick = all(len(line) == self.p + 1 for line in lines) and self.p + 1 >= 3
        one_or_all = True
        for line in lines:
            counts = C[:, line].sum(axis=1)
            if not np.isin(counts, (1, len(line))).all():
                one_or_all = False
                break
        no_radical = not C.all(axis=1).any()
        maximal = all(
            self.perp_set(self.point_ids(top)) == self.point_ids(top)
            for top in self.enumerate_singular(self.rank - 1)
        )
        return AxiomReport(
            points=len(self),
            lines=len(lines),
            thick_lines=thick,
            one_or_all=one_or_all,
            no_radical_point=no_radical,
            maximal_rank=maximal,
        )


@dataclass(frozen=True, eq=False)
class Quotient:
    """The residue of `base`: `space` is base^⊥/base with its own point registry.

    `basis` maps quotient coordinates to vectors of the parent space; the
    parent form restricted to its span is a nonzero multiple of the
    standard form of `space`.
    """

    parent: PolarSpace
    base: SingularSubspace
    space: PolarSpace
    basis: np.ndarray = field(repr=False)

    def __iter__(self):
        yield self.space
        yield self.lift
        yield self.project

    @property
    def is_identity(self) -> bool:
        return self.base.rank == 0

    def lift(self, sub: SingularSubspace) -> SingularSubspace:
        if self.is_identity:
            return sub
        lifted = (sub.matrix @ self.basis) % self.parent.p
        stacked = np.vstack([self.base.matrix, lifted])
        return SingularSubspace(rref_canonical(stacked, self.parent.p, self.parent.ambient_dim))

    def project(self, sub: SingularSubspace) -> SingularSubspace:
        if self.is_identity:
            return sub
        if not sub.contains(self.base):
            raise PreconditionError("Only subspaces containing the base can be projected", sub)
        full = np.vstack([self.base.matrix, self.basis])
        try:
            coords = solve_coordinates(sub.matrix, full, self.parent.p)
        except ValueError:
            raise PreconditionError("Subspace is not contained in the perp of the base", sub) from None
        residue = coords[:, self.base.rank :]
        return SingularSubspace(rref_canonical(residue, self.space.p, self.space.ambient_dim))

    def lift_point(self, point: int) -> SingularSubspace:
        return self.lift(self.space.point_subspace(point))

    def project_point(self, sub: SingularSubspace) -> int:
        """Point id in `space` of a subspace one dimension above the base."""
        projected = self.project(sub)
        if projected.rank != 1:
            raise PreconditionError(f"Expected a subspace of dimension {self.base.rank}, got {sub.proj_dim}", sub)
        return self.space.point_id(projected.rows[0])


def build_polar_space(kind: str, n: int, p: int) -> PolarSpace:
    """Polar space of rank n (n >= 2) for kind symplectic, hyperbolic or parabolic."""
    if n < 2:
        raise UnsupportedConfiguration(f"A polar space needs rank at least 2, got {n}")
    return PolarSpace(FormSpec(kind, n, p))
