"""Apartments, l-frame-generated sets and embeddings of polar Johnson graphs.

An apartment of [N⟩_k is built from a frame of the residue of N: the vertex
{i_1, ..., i_{m+1}} of PJ(l, m) goes to the lift of the span of the frame
points labelled i_1, ..., i_{m+1}, where m = k - dim N - 1. N = ∅ gives the
ordinary apartments and l-frame-generated sets of 𝒢_k.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, TypedDict, Union

import numpy as np

from . import registry
from .errors import BudgetExceeded, DimensionMismatch, InconsistentInput, PreconditionError
from .grassmann import adjacent, adjacent_index_pairs, independent, induced_graph, level_of, meet_rank, neighbors
from .johnson import (
    DEFAULT_ISO_BUDGET,
    SignedSet,
    big_star,
    isomorphic,
    pj_adjacent,
    pj_cliques,
    pj_vertices,
    polar_johnson_graph,
    signed_key,
)
from .linalg import join_all, meet_all
from .polar import Frame, PolarSpace, SingularSubspace, subspace_key

logger = logging.getLogger("polaris.apartments")

DEFAULT_FRAME_LIMIT = 100_000


@dataclass(frozen=True, eq=False)
class Apartment:
    """`labels` maps each vertex of PJ(l, m) to its member of 𝒢_k.

    `frame` lives in the residue of `base` (the space itself when `base` is
    empty).
    """

    polar: PolarSpace
    base: SingularSubspace
    frame: Frame
    k: int
    m: int
    labels: Dict[SignedSet, SingularSubspace] = field(repr=False)

    @property
    def l(self) -> int:
        return self.frame.l

    @property
    def frame_space(self) -> PolarSpace:
        return self.polar.quotient(self.base).space

    @cached_property
    def members(self) -> List[SingularSubspace]:
        return sorted(self.labels.values(), key=subspace_key)

    @cached_property
    def label_of(self) -> Dict[SingularSubspace, SignedSet]:
        return {x: v for v, x in self.labels.items()}

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, x: SingularSubspace) -> bool:
        return x in self.label_of

    def neighborhood(self, x: SingularSubspace) -> List[SingularSubspace]:
        """𝒜(x): x together with the members adjacent to it."""
        return [x] + [y for y in self.members if y != x and adjacent(self.polar, x, y)]

    def embedding(self) -> "EmbeddingMap":
        return EmbeddingMap(self.polar, self.l, self.m, self.k, dict(self.labels))


def _spans(space: PolarSpace, frame: Frame, m: int) -> Dict[SignedSet, SingularSubspace]:
    return {v: space.span_points(frame.point_of(j) for j in v) for v in pj_vertices(frame.l, m)}


def parabolic_apartment(
        polar: PolarSpace,
        N: SingularSubspace,
        k: int,
        frame: Optional[Frame] = None,
    ) -> Apartment:
    """The apartment (or l-frame-generated set) of [N⟩_k defined by a frame of the residue of N."""
    if N.proj_dim > k - 1:
        raise DimensionMismatch(f"Parabolic base of dimension {N.proj_dim} does not fit level {k}")
    quotient = polar.quotient(N)
    residue = quotient.space
    frame = residue.standard_frame() if frame is None else residue.validate_frame(frame)
    m = k - N.rank
    if not 0 <= m <= frame.l - 1:
        raise PreconditionError(f"Level {k} needs 0 <= {m} <= l-1 = {frame.l - 1} inside the residue", frame)
    labels = {v: quotient.lift(x) for v, x in _spans(residue, frame, m).items()}
    logger.debug("Apartment of level %d over a %d-dimensional base: %d members", k, N.proj_dim, len(labels))
    return Apartment(polar, N, frame, k, m, labels)


def apartment(polar: PolarSpace, frame: Frame, k: int) -> Apartment:
    """Spans of σ-admissible (k+1)-subsets of the frame; an l-frame gives the l-frame-generated set."""
    return parabolic_apartment(polar, polar.empty(), k, frame)


def standard_lframe(space: PolarSpace, l: int) -> Frame:
    if not 1 <= l <= space.rank:
        raise PreconditionError(f"An l-frame of {space!r} needs 1 <= l <= {space.rank}, got {l}", l)
    full = space.standard_frame()
    return Frame.from_pairs([(full.points[i], full.points[j]) for i, j in full.pairs()[:l]])


# embeddings


@dataclass(frozen=True, eq=False)
class EmbeddingMap:
    """A map from the vertices of PJ(l, m) to 𝒢_k."""

    polar: PolarSpace
    l: int
    m: int
    k: int
    assign: Dict[SignedSet, SingularSubspace] = field(repr=False)

    def __post_init__(self):
        expected = set(pj_vertices(self.l, self.m))
        if set(self.assign) != expected:
            missing = sorted(expected - set(self.assign), key=signed_key)
            raise PreconditionError(f"The map must be total on PJ({self.l},{self.m})", missing[:1] or None)
        for v, x in self.assign.items():
            if x.proj_dim != self.k:
                raise DimensionMismatch(f"Vertex {sorted(v)} goes to dimension {x.proj_dim}, expected {self.k}")

    @property
    def vertices(self) -> List[SignedSet]:
        return pj_vertices(self.l, self.m)

    @property
    def image(self) -> List[SingularSubspace]:
        return sorted(set(self.assign.values()), key=subspace_key)

    def __getitem__(self, v: SignedSet) -> SingularSubspace:
        return self.assign[v]

    def compose(self, perm: Dict[SignedSet, SignedSet]) -> "EmbeddingMap":
        """f∘perm for a vertex permutation of PJ(l, m)."""
        return EmbeddingMap(self.polar, self.l, self.m, self.k, {v: self.assign[perm[v]] for v in self.assign})


def is_embedding(f: EmbeddingMap) -> bool:
    """Injective, and adjacency is preserved and reflected on every vertex pair."""
    vertices = f.vertices
    images = [f.assign[v] for v in vertices]
    if len(set(images)) != len(images):
        return False
    found = set(adjacent_index_pairs(f.polar, images))
    expected = {
        (i, j)
        for i in range(len(vertices))
        for j in range(i + 1, len(vertices))
        if pj_adjacent(f.l, f.m, vertices[i], vertices[j])
    }
    return found == expected


def embedding_from_set(
        polar: PolarSpace,
        xs: Iterable[SingularSubspace],
        l: int,
        m: int,
        *,
        budget: int = DEFAULT_ISO_BUDGET,
    ) -> Optional[EmbeddingMap]:
    """An embedding of PJ(l, m) onto xs read off an isomorphism witness, or None."""
    members = sorted(set(xs), key=subspace_key)
    if not members:
        return None
    k = level_of(members)
    witness = isomorphic(polar_johnson_graph(l, m), induced_graph(polar, members), budget=budget)
    if witness is None:
        return None
    return EmbeddingMap(polar, l, m, k, witness)


# PJ(l, 0) images


@dataclass(frozen=True)
class BigStarFrame:
    S: SingularSubspace
    l: int


@dataclass(frozen=True)
class RankThreeFrame:
    N: SingularSubspace
    M: SingularSubspace


def classify_pj_l0_image(
        polar: PolarSpace,
        xs: Iterable[SingularSubspace],
        *,
        witness: Optional[Dict[SignedSet, SingularSubspace]] = None,
    ) -> Union[BigStarFrame, RankThreeFrame]:
    """An l-frame of a big star [S⟩_k, or a frame of [N, M]_k with l = 3."""
    members = sorted(set(xs), key=subspace_key)
    if len(members) % 2 or len(members) < 6:
        raise PreconditionError(f"A PJ(l,0) image with l >= 3 has an even number >= 6 of members, got {len(members)}")
    k = level_of(members)
    l = len(members) // 2
    graph = induced_graph(polar, members)
    if witness is None:
        witness = isomorphic(polar_johnson_graph(l, 0), graph)
        if witness is None:
            raise PreconditionError(f"The set does not induce PJ({l},0)", members)
    X = members[0]
    opposite = [y for y in members if y != X and not graph.has_edge(X, y)]
    if len(opposite) != 1:
        raise PreconditionError("Every member of a PJ(l,0) image has exactly one non-neighbour", X)
    Y = opposite[0]
    common = meet_rank(X, Y)
    if common == k and not polar.perpendicular(X, Y):
        S = X.meet(Y)
        if l > polar.rank - k:
            raise InconsistentInput(f"An l-frame of a big star at level {k} needs l <= {polar.rank - k}, got {l}", S)
        if not all(Z.contains(S) for Z in members):
            raise InconsistentInput("Members do not share the meet of an opposite pair", S)
        return BigStarFrame(S, l)
    if common == k - 1:
        if l != 3:
            raise InconsistentInput(f"Opposite members meeting in dimension {k - 2} force l = 3, got {l}", (X, Y))
        if not polar.perpendicular(X, Y):
            raise InconsistentInput("Opposite members of a rank-three frame must span a singular space", (X, Y))
        N = X.meet(Y)
        M = polar.join(X, Y)
        if not all(M.contains(Z) and Z.contains(N) for Z in members):
            raise InconsistentInput("Members leave the interval between N and M", (N, M))
        return RankThreeFrame(N, M)
    raise InconsistentInput(f"Opposite members meet in a subspace of dimension {common - 1}", (X, Y))


# clique images


class CliqueReport(TypedDict):
    tops_independent: bool
    tops_in_tops: bool
    stars_independent: bool
    stars_in_stars: bool
    t1: bool
    t2: bool
    big_stars_unique: bool
    big_star_container: Optional[SingularSubspace]
    top_kinds: Dict[SignedSet, str]
    failures: List[Tuple[str, object]]


def _clique_kind(polar: PolarSpace, images: Sequence[SingularSubspace], k: int) -> str:
    """Where a pairwise adjacent set of images sits: top, star, both or neither."""
    in_top = join_all([x.space for x in images]).rank == k + 2
    in_star = meet_all([x.space for x in images]).rank == k
    return {(True, True): "both", (True, False): "top", (False, True): "star"}.get((in_top, in_star), "neither")


def check_clique_images(f: EmbeddingMap) -> CliqueReport:
    """Independence and containment of the images of tops, stars and big stars."""
    polar, l, m, k = f.polar, f.l, f.m, f.k
    failures: List[Tuple[str, object]] = []
    tops_independent = tops_in_tops = stars_independent = stars_in_stars = True
    t1 = t2 = big_stars_unique = True
    top_kinds: Dict[SignedSet, str] = {}
    top_spans: Dict[SignedSet, Optional[SingularSubspace]] = {}
    if 1 <= m <= l - 2:
        cliques = pj_cliques(l, m)
        for U, members in cliques.tops.items():
            images = [f.assign[v] for v in members]
            kind = _clique_kind(polar, images, k)
            top_kinds[U] = kind
            injective = len(set(images)) == len(images)
            if not injective or not independent(polar, images):
                tops_independent = False
                failures.append(("top-independence", U))
            if kind not in ("top", "both"):
                tops_in_tops = False
                failures.append(("top-containment", U))
                top_spans[U] = None
            else:
                top_spans[U] = SingularSubspace(join_all([x.space for x in images]))
        t1 = tops_independent and tops_in_tops
        if t1:
            uppers = list(cliques.tops)
            for i, U in enumerate(uppers):
                for V in uppers[i + 1 :]:
                    if pj_adjacent(l, m + 1, U, V) and top_spans[U] == top_spans[V]:
                        t2 = False
                        failures.append(("T2", (U, V)))
        else:
            t2 = False
        for key, members in cliques.stars.items():
            images = [f.assign[v] for v in members]
            if not independent(polar, images):
                stars_independent = False
                failures.append(("star-independence", key))
            if _clique_kind(polar, images, k) not in ("star", "both"):
                stars_in_stars = False
                failures.append(("star-containment", key))
    if m >= 1:
        for S in pj_vertices(l, m - 1):
            images = [f.assign[v] for v in big_star(l, m, S)]
            if meet_all([x.space for x in images]).rank != k:
                big_stars_unique = False
                failures.append(("big-star", S))
    common = meet_all([x.space for x in f.assign.values()])
    container = SingularSubspace(common) if common.rank == k else None
    return CliqueReport(
        tops_independent=tops_independent,
        tops_in_tops=tops_in_tops,
        stars_independent=stars_independent,
        stars_in_stars=stars_in_stars,
        t1=t1,
        t2=t2,
        big_stars_unique=big_stars_unique,
        big_star_container=container,
        top_kinds=top_kinds,
        failures=failures,
    )


# perturbations and frame intersections


@dataclass(frozen=True)
class Perturbation:
    members: Tuple[SingularSubspace, ...]
    removed: SingularSubspace
    added: SingularSubspace


def perturb(polar: PolarSpace, xs: Iterable[SingularSubspace], rng: np.random.Generator) -> Perturbation:
    """Replace one random member by a random adjacent non-member."""
    members = sorted(set(xs), key=subspace_key)
    if not members:
        raise ValueError("Cannot perturb an empty set")
    current = set(members)
    for i in rng.permutation(len(members)):
        removed = members[int(i)]
        options = [y for y in neighbors(polar, removed) if y not in current]
        if options:
            added = options[int(rng.integers(len(options)))]
            out = sorted((current - {removed}) | {added}, key=subspace_key)
            return Perturbation(tuple(out), removed, added)
    raise PreconditionError("No member has an adjacent non-member", members)


def _residue_frames(polar: PolarSpace, pool: List[int], pairs: int, limit: int) -> Iterable[List[Tuple[int, int]]]:
    if pairs == 0:
        yield []
        return
    C = polar.collinearity
    count = 0
    for a_idx, x in enumerate(pool):
        for y in pool[a_idx + 1 :]:
            if C[x, y]:
                continue
            rest = [z for z in pool if z > x and z != y and C[x, z] and C[y, z]]
            for tail in _residue_frames(polar, rest, pairs - 1, limit):
                count += 1
                if count > limit:
                    raise BudgetExceeded(f"More than {limit} extending frames", None)
                yield [(x, y)] + tail


def lframe_intersection(
        polar: PolarSpace,
        frame: Frame,
        k: int,
        *,
        limit: int = DEFAULT_FRAME_LIMIT,
    ) -> List[SingularSubspace]:
    """Intersection of the level-k apartments of all frames of the space that extend `frame`."""
    polar.validate_frame(frame)
    missing = polar.rank - frame.l
    if missing == 0:
        return apartment(polar, frame, k).members
    pool = sorted(polar.perp_set(frame.points) - set(frame.points))
    common: Optional[set] = None
    extensions = 0
    for tail in _residue_frames(polar, pool, missing, limit):
        pairs = [(frame.points[i], frame.points[j]) for i, j in frame.pairs()] + tail
        full = polar.validate_frame(Frame.from_pairs(pairs))
        members = set(apartment(polar, full, k).members)
        common = members if common is None else common & members
        extensions += 1
    if common is None:
        raise InconsistentInput("The l-frame extends to no frame", frame)
    logger.debug("Intersected %d apartments extending a %d-frame", extensions, frame.l)
    return sorted(common, key=subspace_key)


# generated inputs


def generated_set(polar: PolarSpace, k: int, m: int, l: int) -> Apartment:
    """l-frame-generated set of [N⟩_k for N = ⟨e_1, ..., e_{k-m}⟩, using the standard frame of its residue."""
    if not 0 <= m <= k:
        raise PreconditionError(f"Need 0 <= m <= k, got m={m}, k={k}", (m, k))
    rows = [polar.form.e(i) for i in range(1, k - m + 1)]
    N = polar.singular(rows) if rows else polar.empty()
    residue = polar.quotient(N).space
    return parabolic_apartment(polar, N, k, standard_lframe(residue, l))


@registry.generators.register("apartment")
def generated_apartment(polar: PolarSpace, k: int, m: int, l: int) -> EmbeddingMap:
    if m != k or l != polar.rank:
        raise PreconditionError(f"A full apartment needs m = k and l = n, got m={m}, k={k}, l={l}", (k, m, l))
    return generated_set(polar, k, m, l).embedding()


@registry.generators.register("parabolic")
def generated_parabolic(polar: PolarSpace, k: int, m: int, l: int) -> EmbeddingMap:
    if m >= k:
        raise PreconditionError(f"A parabolic apartment needs m < k, got m={m}, k={k}", (k, m))
    return generated_set(polar, k, m, l).embedding()


@registry.generators.register("lframe")
def generated_lframe(polar: PolarSpace, k: int, m: int, l: int) -> EmbeddingMap:
    if m != k:
        raise PreconditionError(f"An l-frame-generated set of 𝒢_k needs m = k, got m={m}, k={k}", (k, m))
    return generated_set(polar, k, m, l).embedding()
