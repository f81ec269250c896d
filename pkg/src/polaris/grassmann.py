"""Grassmann graphs and Grassmann spaces of a polar space.

Vertices of Γ_k are the singular subspaces of projective dimension k. For
k <= n-2 two of them are adjacent when they meet in a (k-1)-space and span
a singular space; for k = n-1 (the dual polar graph) when they meet in an
(n-2)-space.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, InconsistentInput, PreconditionError
from .linalg import RowSpace, enumerate_subspaces, extend_basis, join_all, meet_all, rank_of, rref_canonical
from .polar import PolarSpace, Quotient, SingularSubspace, subspace_key

logger = logging.getLogger("polaris.grassmann")

DEFAULT_CLOSURE_ITERATIONS = 64


def level_of(xs: Iterable[SingularSubspace]) -> int:
    levels = {x.proj_dim for x in xs}
    if len(levels) != 1:
        raise DimensionMismatch(f"Expected subspaces of one dimension, got {sorted(levels)}")
    return levels.pop()


def meet_rank(a: SingularSubspace, b: SingularSubspace) -> int:
    """Vector dimension of a ∩ b, from the rank of the stacked bases."""
    return a.rank + b.rank - rank_of(np.vstack([a.matrix, b.matrix]), a.p)


def adjacent(polar: PolarSpace, a: SingularSubspace, b: SingularSubspace) -> bool:
    if a.proj_dim != b.proj_dim:
        raise DimensionMismatch(f"Adjacency needs equal dimensions, got {a.proj_dim} and {b.proj_dim}")
    if a == b:
        return False
    k = a.proj_dim
    if meet_rank(a, b) != k:
        return False
    return k == polar.rank - 1 or polar.perpendicular(a, b)


# regions


@dataclass(frozen=True)
class BigStar:
    S: SingularSubspace


@dataclass(frozen=True)
class Parabolic:
    N: SingularSubspace


@dataclass(frozen=True)
class Interval:
    S: SingularSubspace
    U: SingularSubspace


Region = Union[BigStar, Parabolic, Interval]


def collect_region(polar: PolarSpace, region: Region, k: int) -> List[SingularSubspace]:
    """Members of [S⟩_k, [N⟩_k or [S,U]_k, generated inside the residue."""
    if isinstance(region, BigStar):
        if region.S.proj_dim != k - 1:
            raise DimensionMismatch(f"A big star at level {k} needs a {k - 1}-dimensional S, got {region.S.proj_dim}")
        return collect_region(polar, Parabolic(region.S), k)
    if isinstance(region, Parabolic):
        N = region.N
        if N.proj_dim > k - 1:
            raise DimensionMismatch(f"Parabolic base of dimension {N.proj_dim} does not fit level {k}")
        quotient = polar.quotient(N)
        m = k - N.proj_dim - 1
        if m > quotient.space.rank - 1:
            raise DimensionMismatch(f"Level {k} exceeds the rank of the residue of {N}")
        return sorted((quotient.lift(x) for x in quotient.space.enumerate_singular(m)), key=subspace_key)
    if isinstance(region, Interval):
        S, U = region.S, region.U
        if not S.proj_dim <= k <= U.proj_dim:
            raise DimensionMismatch(f"Level {k} is not between {S.proj_dim} and {U.proj_dim}")
        if not U.contains(S):
            raise PreconditionError("Interval bottom is not contained in its top", (S, U))
        complement = extend_basis(S.matrix, U.matrix, polar.p)
        members = []
        for sub in enumerate_subspaces(complement.shape[0], k + 1 - S.rank, polar.p):
            stacked = np.vstack([S.matrix, (sub.matrix @ complement) % polar.p])
            members.append(SingularSubspace(rref_canonical(stacked, polar.p, polar.ambient_dim)))
        return sorted(members, key=subspace_key)
    raise TypeError(f"Unknown region {region!r}")


@dataclass(frozen=True)
class ParabolicCollineation:
    """X ↦ project(X) from [N⟩_k onto the index-m Grassmann space of the residue of N."""

    quotient: Quotient
    m: int
    forward: Dict[SingularSubspace, SingularSubspace]
    inverse: Dict[SingularSubspace, SingularSubspace]


def parabolic_collineation(polar: PolarSpace, N: SingularSubspace, k: int) -> ParabolicCollineation:
    if N.proj_dim > k - 1:
        raise DimensionMismatch(f"Parabolic base of dimension {N.proj_dim} does not fit level {k}")
    quotient = polar.quotient(N)
    m = k - N.proj_dim - 1
    forward = {X: quotient.project(X) for X in collect_region(polar, Parabolic(N), k)}
    inverse = {v: key for key, v in forward.items()}
    return ParabolicCollineation(quotient, m, forward, inverse)


def recognize_parabolic(
        polar: PolarSpace,
        xs: Iterable[SingularSubspace],
        *,
        require_convex: bool = False,
        graph: Optional["GrassmannGraph"] = None,
    ) -> Optional[SingularSubspace]:
    """The N with xs == [N⟩_k, or None.

    With `require_convex`, xs must also be convex in `graph` (the whole Γ_k by
    default): a convex subspace equal to [N⟩_k is what the recognition
    corollary for Grassmann-space-shaped convex subspaces produces.
    """
    xs = set(xs)
    if not xs:
        return None
    k = level_of(xs)
    N = SingularSubspace(meet_all([x.space for x in xs]))
    if N.proj_dim >= k:
        return None
    if set(collect_region(polar, Parabolic(N), k)) != xs:
        return None
    if require_convex:
        graph = graph or GrassmannGraph(polar, k)
        if not graph.is_convex(xs):
            return None
    return N


# lines and cliques


@dataclass(frozen=True)
class PencilLine:
    """A line of the Grassmann space; `top` is None on dual polar lines [S⟩_{n-1}."""

    bottom: SingularSubspace
    top: Optional[SingularSubspace]
    members: Tuple[SingularSubspace, ...]


def line_through(polar: PolarSpace, a: SingularSubspace, b: SingularSubspace) -> Optional[PencilLine]:
    if not adjacent(polar, a, b):
        return None
    k = a.proj_dim
    S = a.meet(b)
    if k == polar.rank - 1:
        return PencilLine(S, None, tuple(collect_region(polar, BigStar(S), k)))
    U = polar.join(a, b)
    return PencilLine(S, U, tuple(collect_region(polar, Interval(S, U), k)))


@dataclass(frozen=True)
class MaxClique:
    tag: str
    members: Tuple[SingularSubspace, ...]
    U: Optional[SingularSubspace] = None
    S: Optional[SingularSubspace] = None
    M: Optional[SingularSubspace] = None


@dataclass(frozen=True)
class CliqueClassification:
    clique: MaxClique
    candidates: Tuple[MaxClique, ...]
    maximal: bool


def classify_maximal_clique(polar: PolarSpace, c: Iterable[SingularSubspace]) -> CliqueClassification:
    """Top, star or dual line containing the clique c.

    When c sits in a top and in stars (small cliques), every candidate is
    reported and the top is preferred if ⟨c⟩ has dimension k+1.
    """
    members = sorted(set(c), key=subspace_key)
    if len(members) < 2:
        raise ValueError("A clique needs at least two elements")
    k = level_of(members)
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if not adjacent(polar, a, b):
                raise PreconditionError("The given set is not a clique", (a, b))
    n = polar.rank
    meet = meet_all([x.space for x in members])
    join = join_all([x.space for x in members])
    if k == n - 1:
        S = SingularSubspace(meet)
        if S.proj_dim != n - 2:
            raise InconsistentInput("Maximal subspaces of a clique do not share a hyperplane", members)
        line = MaxClique("dual_line", tuple(collect_region(polar, BigStar(S), k)), S=S)
        return CliqueClassification(line, (line,), set(members) == set(line.members))
    candidates: List[MaxClique] = []
    if join.rank == k + 2:
        U = SingularSubspace(join)
        candidates.append(MaxClique("top", tuple(collect_region(polar, Interval(polar.empty(), U), k)), U=U))
    if meet.rank == k and k <= n - 3:
        S = SingularSubspace(meet)
        span = SingularSubspace(join)
        if span.proj_dim == n - 1:
            tops = [span]
        else:
            residue = polar.quotient(span)
            tops = [residue.lift(M) for M in residue.space.enumerate_singular(residue.space.rank - 1)]
        for M in tops:
            candidates.append(MaxClique("star", tuple(collect_region(polar, Interval(S, M), k)), S=S, M=M))
    if not candidates:
        raise InconsistentInput("Clique lies in neither a top nor a star", members)
    primary = candidates[0]
    return CliqueClassification(primary, tuple(candidates), set(members) == set(primary.members))


# span and independence


def span_closure(
        polar: PolarSpace,
        xs: Iterable[SingularSubspace],
        *,
        max_iterations: Optional[int] = None,
    ) -> Set[SingularSubspace]:
    """Least subspace of the Grassmann space containing xs."""
    closure = set(xs)
    if not closure:
        return closure
    level_of(closure)
    checked: Set[FrozenSet[SingularSubspace]] = set()
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        if max_iterations is not None and rounds > max_iterations:
            raise BudgetExceeded(f"Span closure did not stabilize within {max_iterations} rounds", closure)
        items = sorted(closure, key=subspace_key)
        for i, a in enumerate(items):
            for b in items[i + 1 :]:
                pair = frozenset((a, b))
                if pair in checked:
                    continue
                checked.add(pair)
                line = line_through(polar, a, b)
                if line is None:
                    continue
                new = set(line.members) - closure
                if new:
                    closure |= new
                    changed = True
    return closure


def projective_independence(polar: PolarSpace, xs: Sequence[SingularSubspace]) -> Optional[bool]:
    """Independence read off linear algebra when xs lies in one top or one star, else None."""
    k = level_of(xs)
    meet = meet_all([x.space for x in xs])
    join = join_all([x.space for x in xs])
    if join.rank == k + 2:
        # hyperplanes of U: independent iff their common meet drops by one per element
        return meet.rank == join.rank - len(xs)
    if meet.rank == k and polar.is_totally_singular(join):
        return join.rank == k + len(xs)
    return None


def closure_independence(polar: PolarSpace, xs: Sequence[SingularSubspace]) -> bool:
    for x in xs:
        rest = [y for y in xs if y != x]
        if x in span_closure(polar, rest):
            return False
    return True


def independent(polar: PolarSpace, xs: Iterable[SingularSubspace], *, method: str = "auto") -> bool:
    """No proper subset of xs spans the same subspace.

    `method` is "auto" (linear algebra inside a top or star, closure
    otherwise), "projective" or "closure".
    """
    members = sorted(set(xs), key=subspace_key)
    if method not in ("auto", "projective", "closure"):
        raise ValueError(f"Unknown independence method {method!r}")
    if len(members) <= 2:
        if members:
            level_of(members)
        return True
    if method == "closure":
        return closure_independence(polar, members)
    fast = projective_independence(polar, members)
    if method == "projective":
        if fast is None:
            raise ValueError("The set lies in no top and no star")
        return fast
    return fast if fast is not None else closure_independence(polar, members)


def locally_independent(polar: PolarSpace, xs: Iterable[SingularSubspace]) -> bool:
    """Every member's neighbour hyperplanes S ∩ U are distinct and independent in S."""
    members = sorted(set(xs), key=subspace_key)
    for x in members:
        if x.proj_dim != polar.rank - 1:
            raise DimensionMismatch(f"Local independence is defined on maximal subspaces, got dimension {x.proj_dim}")
    for S in members:
        hyperplanes = [S.meet(U) for U in members if U != S and adjacent(polar, S, U)]
        if not hyperplanes:
            continue
        if len(set(hyperplanes)) != len(hyperplanes):
            logger.debug("Repeated neighbour hyperplane at %r", S)
            return False
        if meet_all([h.space for h in hyperplanes]).rank != S.rank - len(hyperplanes):
            logger.debug("Dependent neighbour hyperplanes at %r", S)
            return False
    return True


# neighbourhoods


def hyperplanes(polar: PolarSpace, X: SingularSubspace) -> List[SingularSubspace]:
    out = []
    for sub in enumerate_subspaces(X.rank, X.rank - 1, polar.p):
        out.append(SingularSubspace(rref_canonical((sub.matrix @ X.matrix) % polar.p, polar.p, polar.ambient_dim)))
    return out


def neighbors(polar: PolarSpace, X: SingularSubspace) -> List[SingularSubspace]:
    """All Γ_k-neighbours of X, generated from its hyperplanes without enumerating 𝒢_k."""
    found: Set[SingularSubspace] = set()
    if X.proj_dim == polar.rank - 1:
        for H in hyperplanes(polar, X):
            found.update(collect_region(polar, BigStar(H), X.proj_dim))
    else:
        inside = polar.point_ids(X)
        outside = sorted(polar.perp_set(inside) - inside)
        for H in hyperplanes(polar, X):
            for q in outside:
                found.add(polar.join(H, polar.point_subspace(q)))
    found.discard(X)
    return sorted(found, key=subspace_key)


def random_neighbor(polar: PolarSpace, X: SingularSubspace, rng: np.random.Generator) -> SingularSubspace:
    options = neighbors(polar, X)
    return options[int(rng.integers(len(options)))]


# graphs


def adjacent_index_pairs(polar: PolarSpace, vertices: Sequence[SingularSubspace]) -> List[Tuple[int, int]]:
    """Edges of Γ_k on `vertices`, screened by point-set intersections before the form check."""
    if not vertices:
        return []
    k = level_of(vertices)
    p = polar.p
    target = (p**k - 1) // (p - 1)
    point_sets = [polar.point_ids(v) for v in vertices]
    dual = k == polar.rank - 1
    edges = []
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if len(point_sets[i] & point_sets[j]) != target:
                continue
            if dual or polar.perpendicular(vertices[i], vertices[j]):
                edges.append((i, j))
    return edges


def induced_graph(polar: PolarSpace, xs: Iterable[SingularSubspace]) -> nx.Graph:
    """Γ(xs): the Grassmann graph restricted to xs, nodes being the subspaces themselves."""
    vertices = sorted(set(xs), key=subspace_key)
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from((vertices[i], vertices[j]) for i, j in adjacent_index_pairs(polar, vertices))
    return graph


class GrassmannGraph:
    """Γ_k on an explicit vertex set, or on all of 𝒢_k when none is given.

    Nodes of `graph` are integer ids into `vertices`.
    """

    def __init__(self, polar: PolarSpace, k: int, vertices: Optional[Iterable[SingularSubspace]] = None):
        if not 0 <= k <= polar.rank - 1:
            raise ValueError(f"k must lie in [0, {polar.rank - 1}], got {k}")
        self.polar = polar
        self.k = k
        if vertices is None:
            self.vertices = polar.enumerate_singular(k)
        else:
            self.vertices = sorted(set(vertices), key=subspace_key)
            if self.vertices and level_of(self.vertices) != k:
                raise DimensionMismatch(f"Vertices do not have dimension {k}")
        self.index: Dict[SingularSubspace, int] = {v: i for i, v in enumerate(self.vertices)}
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(len(self.vertices)))
        self.graph.add_edges_from(adjacent_index_pairs(polar, self.vertices))
        self._distances: Dict[int, Dict[int, int]] = {}
        logger.debug("Grassmann graph at level %d: %d vertices, %d edges", k, len(self.vertices), self.graph.number_of_edges())

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacent(self, a: SingularSubspace, b: SingularSubspace) -> bool:
        return self.graph.has_edge(self.index[a], self.index[b])

    def neighbors(self, a: SingularSubspace) -> List[SingularSubspace]:
        return [self.vertices[j] for j in sorted(self.graph.neighbors(self.index[a]))]

    def maximal_cliques(self) -> List[List[SingularSubspace]]:
        return [[self.vertices[i] for i in sorted(c)] for c in nx.find_cliques(self.graph)]

    def _from(self, i: int) -> Dict[int, int]:
        if i not in self._distances:
            self._distances[i] = nx.single_source_shortest_path_length(self.graph, i)
        return self._distances[i]

    def distance(self, a: SingularSubspace, b: SingularSubspace) -> float:
        """BFS distance; math.inf when a and b lie in different components."""
        return self._from(self.index[a]).get(self.index[b], math.inf)

    def interval(self, a: SingularSubspace, b: SingularSubspace) -> Set[SingularSubspace]:
        ia, ib = self.index[a], self.index[b]
        da, db = self._from(ia), self._from(ib)
        d = da.get(ib)
        if d is None:
            return set()
        return {self.vertices[x] for x, dx in da.items() if dx + db.get(x, math.inf) == d}

    def is_convex(self, xs: Iterable[SingularSubspace]) -> bool:
        members = set(xs)
        items = sorted(members, key=subspace_key)
        for i, a in enumerate(items):
            for b in items[i + 1 :]:
                if not self.interval(a, b) <= members:
                    return False
        return True

    def convex_closure(
            self,
            xs: Iterable[SingularSubspace],
            max_iterations: int = DEFAULT_CLOSURE_ITERATIONS,
        ) -> Set[SingularSubspace]:
        """Least convex subspace containing xs: span closure alternated with geodesic saturation."""
        closure = set(xs)
        for _ in range(max_iterations):
            grown = span_closure(self.polar, closure)
            items = sorted(grown, key=subspace_key)
            for i, a in enumerate(items):
                for b in items[i + 1 :]:
                    grown |= self.interval(a, b)
            if grown == closure:
                return closure
            closure = grown
        raise BudgetExceeded(f"Convex closure did not stabilize within {max_iterations} rounds", closure)
