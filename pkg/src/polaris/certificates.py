"""Certificates for embeddings of polar Johnson graphs.

An embedding f of PJ(l, m) into Γ_k that sends tops to independent subsets
of tops is descended level by level through big stars down to the frame
points: Q_j is the image of the point labelled j. The certificate is the
meet N of one Q per σ-pair together with the l-frame the Q's form in the
residue of N, and the table expressing every image as a span of Q's.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .apartments import Apartment, EmbeddingMap, parabolic_apartment
from .errors import PreconditionError, Rejection, SpecialMapViolation
from .grassmann import adjacent, independent, level_of, line_through
from .johnson import SignedSet, big_star, pj_adjacent, pj_cliques, pj_vertices, sorted_signed
from .linalg import join_all, meet_all
from .polar import Frame, PolarSpace, SingularSubspace, subspace_key

logger = logging.getLogger("polaris.certificates")

Assign = Dict[SignedSet, SingularSubspace]


def check_special(polar: PolarSpace, assign: Assign, l: int) -> Dict[SignedSet, SingularSubspace]:
    """(T1) and (T2) for a map on PJ(l, i); returns the top spanned by each top image.

    (T1): every top goes injectively to an independent subset of a top.
    (T2): the images of adjacent tops lie in distinct tops.
    """
    i = len(next(iter(assign))) - 1
    j = level_of(assign.values())
    spans: Dict[SignedSet, SingularSubspace] = {}
    for U, members in pj_cliques(l, i).tops.items():
        images = [assign[v] for v in members]
        join = join_all([x.space for x in images])
        if len(set(images)) != len(images) or join.rank != j + 2:
            raise SpecialMapViolation(f"(T1) top {sorted_signed(U)} does not go injectively into a top", U)
        if meet_all([x.space for x in images]).rank != join.rank - len(images):
            raise SpecialMapViolation(f"(T1) top {sorted_signed(U)} does not go to an independent subset", U)
        spans[U] = SingularSubspace(join)
    uppers = list(spans)
    for a, U in enumerate(uppers):
        for V in uppers[a + 1 :]:
            if spans[U] == spans[V] and pj_adjacent(l, i + 1, U, V):
                raise SpecialMapViolation(
                    f"(T2) adjacent tops {sorted_signed(U)} and {sorted_signed(V)} share an image top", (U, V)
                )
    return spans


def descend_special_map(polar: PolarSpace, assign: Assign, l: int) -> Assign:
    """The induced map one level down: S goes to the meet of the images of the big star at S."""
    i = len(next(iter(assign))) - 1
    if i < 1:
        raise ValueError("A map on PJ(l,0) cannot be descended")
    j = level_of(assign.values())
    if i <= l - 2:
        check_special(polar, assign, l)
    lower: Assign = {}
    for S in pj_vertices(l, i - 1):
        images = [assign[X] for X in big_star(l, i, S)]
        meet = meet_all([x.space for x in images])
        if meet.rank != j:
            raise SpecialMapViolation(
                f"Big star at {sorted_signed(S)} meets in dimension {meet.rank - 1}, expected {j - 1}", S
            )
        lower[S] = SingularSubspace(meet)
    logger.debug("Descended level %d to %d (%d vertices)", j, j - 1, len(lower))
    return lower


def descent_chain(polar: PolarSpace, f: EmbeddingMap) -> List[Assign]:
    """f_m, f_{m-1}, ..., f_0."""
    chain = [dict(f.assign)]
    while len(next(iter(chain[-1]))) > 1:
        chain.append(descend_special_map(polar, chain[-1], f.l))
    return chain


def incidence_transported(chain: Sequence[Assign]) -> bool:
    """X ⊂ Y among abstract vertices implies incident images, across all levels of a chain."""
    for upper, lower in zip(chain, chain[1:]):
        for Y, image in upper.items():
            for j in Y:
                if not image.contains(lower[Y - {j}]):
                    return False
    return True


@dataclass(frozen=True, eq=False)
class Certificate:
    """N, the frame points Q (keyed by signed label) and the spanning table of an image."""

    N: SingularSubspace
    Q: Dict[int, SingularSubspace] = field(repr=False)
    frame: Frame
    spanning_table: Dict[SignedSet, Tuple[int, ...]] = field(repr=False)
    l: int
    m: int
    k: int

    def members(self, polar: PolarSpace) -> List[SingularSubspace]:
        """The image regenerated from the spanning table."""
        return sorted(
            {polar.join(*[self.Q[j] for j in labels]) for labels in self.spanning_table.values()},
            key=subspace_key,
        )

    def apartment(self, polar: PolarSpace) -> Apartment:
        return parabolic_apartment(polar, self.N, self.k, self.frame)

    def is_full_apartment(self, polar: PolarSpace) -> bool:
        return self.l == polar.rank - self.N.rank


def certify_frame(
        polar: PolarSpace,
        Q: Dict[int, SingularSubspace],
        assign: Assign,
        l: int,
        m: int,
        k: int,
    ) -> Certificate:
    """Check that the Q's form an l-frame over their meet N and span every image; raises Rejection."""
    labels = list(range(1, l + 1)) + [-t for t in range(1, l + 1)]
    N = SingularSubspace(meet_all([Q[t].space for t in range(1, l + 1)]))
    if N.proj_dim != k - m - 1:
        raise Rejection("N-dimension", f"N has dimension {N.proj_dim}, expected {k - m - 1}", N)
    for j in labels:
        if not Q[j].contains(N):
            raise Rejection("N-containment", f"Q_{j} does not contain N", j)
    try:
        quotient = polar.quotient(N)
        points = {j: quotient.project_point(Q[j]) for j in labels}
        frame = Frame.from_pairs([(points[t], points[-t]) for t in range(1, l + 1)])
        quotient.space.validate_frame(frame)
    except (PreconditionError, ValueError) as e:
        raise Rejection("l-frame", f"The Q's do not form an l-frame over N: {e}", getattr(e, "obj", None)) from None
    table: Dict[SignedSet, Tuple[int, ...]] = {}
    for v in pj_vertices(l, m):
        try:
            span = polar.join(*[Q[j] for j in v])
        except PreconditionError:
            raise Rejection("spanning-table", f"Q's of {sorted_signed(v)} do not span a singular subspace", v) from None
        if span != assign[v]:
            raise Rejection("spanning-table", f"The image of {sorted_signed(v)} is not spanned by its Q's", v)
        table[v] = tuple(sorted_signed(v))
    return Certificate(N, dict(Q), frame, table, l, m, k)


def extract_certificate(f: EmbeddingMap) -> Certificate:
    """Descend f to the frame points and certify the resulting l-frame; raises Rejection."""
    polar, l, m, k = f.polar, f.l, f.m, f.k
    if not 1 <= m <= min(k, l - 2):
        raise Rejection("hypothesis", f"Extraction needs 1 <= m <= min(k, l-2), got l={l}, m={m}, k={k}", (l, m, k))
    try:
        chain = descent_chain(polar, f)
    except SpecialMapViolation as e:
        raise Rejection("special-map", str(e), e.obj) from None
    if not incidence_transported(chain):
        raise Rejection("special-map", "Descended images are not incident", None)
    bottom = chain[-1]
    Q = {j: bottom[frozenset({j})] for v in bottom for j in v}
    certificate = certify_frame(polar, Q, f.assign, l, m, k)
    logger.debug("Extracted a certificate with N of dimension %d", certificate.N.proj_dim)
    return certificate


# condition (A): the local apartment at a member


@dataclass(frozen=True, eq=False)
class LocalCertificate:
    S: SingularSubspace
    N_S: SingularSubspace
    B_S: Tuple[int, ...]
    frame: Frame
    A_S: Apartment = field(repr=False)
    tops: int


def _tops_through(polar: PolarSpace, members: Sequence[SingularSubspace], S: SingularSubspace) -> List[List[SingularSubspace]]:
    groups: Dict[SingularSubspace, List[SingularSubspace]] = {}
    for Y in members:
        if Y != S and adjacent(polar, S, Y):
            groups.setdefault(polar.join(S, Y), []).append(Y)
    return [[S] + sorted(g, key=subspace_key) for _, g in sorted(groups.items(), key=lambda kv: subspace_key(kv[0]))]


def local_apartment_certificate(
        polar: PolarSpace,
        xs: Sequence[SingularSubspace],
        S: SingularSubspace,
        l: int,
        m: int,
    ) -> LocalCertificate:
    """An apartment 𝒜_S of a parabolic [N_S⟩_k with S ∈ 𝒜_S and 𝒳(S) = 𝒜_S(S); raises Rejection."""
    members = sorted(set(xs), key=subspace_key)
    if S not in members:
        raise ValueError("S must be a member of xs")
    k = S.proj_dim
    tops = _tops_through(polar, members, S)
    expected_tops = 2 * (l - m - 1)
    if len(tops) != expected_tops:
        raise Rejection("local-apartment", f"{len(tops)} tops pass through S, expected {expected_tops}", S)
    N_S: Optional[SingularSubspace] = None
    inner: Optional[set] = None
    outer: List[SingularSubspace] = []
    for top in tops:
        if len(top) != m + 2:
            raise Rejection("local-apartment", f"A top through S has {len(top)} members, expected {m + 2}", top)
        if not independent(polar, top):
            raise Rejection("local-apartment", "A top through S is not independent", top)
        N_T = SingularSubspace(meet_all([x.space for x in top]))
        if N_S is None:
            N_S = N_T
        elif N_T != N_S:
            raise Rejection("local-apartment", "Tops through S meet in different subspaces", top)
        base = {
            SingularSubspace(meet_all([y.space for y in top if y != x]))
            for x in top
            if x != S
        }
        if inner is None:
            inner = base
        elif base != inner:
            raise Rejection("local-apartment", "Tops through S disagree on the base inside S", top)
        outer.append(SingularSubspace(meet_all([y.space for y in top if y != S])))
    if N_S.proj_dim != k - m - 1:
        raise Rejection("local-apartment", f"N_S has dimension {N_S.proj_dim}, expected {k - m - 1}", N_S)

    neighborhood = [S] + [y for top in tops for y in top[1:]]
    for a, A in enumerate(neighborhood):
        for B in neighborhood[a + 1 :]:
            line = line_through(polar, A, B)
            if line is not None and len(set(line.members) & set(neighborhood)) > 2:
                raise Rejection("local-apartment", "Three members of 𝒳(S) lie on one line", (A, B))

    quotient = polar.quotient(N_S)
    try:
        inner_pts = sorted(quotient.project_point(x) for x in inner)
        outer_pts = [quotient.project_point(x) for x in outer]
    except PreconditionError as e:
        raise Rejection("local-apartment", str(e), e.obj) from None
    if len(set(inner_pts + outer_pts)) != len(inner_pts) + len(outer_pts):
        raise Rejection("local-apartment", "ℬ_S repeats a point", S)
    space = quotient.space
    partner: Dict[int, int] = {}
    for x in outer_pts:
        opposite = [y for y in inner_pts + outer_pts if y != x and not space.collinear(x, y)]
        if len(opposite) != 1:
            raise Rejection("local-apartment", f"An element of ℬ_S outside S has {len(opposite)} non-collinear points", x)
        partner[x] = opposite[0]
    firsts = sorted({min(x, partner[x]) for x in outer_pts})
    seconds = sorted({max(x, partner[x]) for x in outer_pts})
    try:
        frame = space.extend_to_frame(inner_pts + firsts, seconds)
        A_S = parabolic_apartment(polar, N_S, k, frame)
    except PreconditionError as e:
        raise Rejection("local-apartment", f"ℬ_S does not extend to a frame: {e}", e.obj) from None
    if S not in A_S:
        raise Rejection("local-apartment", "S is not a member of 𝒜_S", S)
    if set(A_S.neighborhood(S)) != set(neighborhood):
        raise Rejection("local-apartment", "𝒳(S) differs from 𝒜_S(S)", S)
    return LocalCertificate(S, N_S, tuple(inner_pts + outer_pts), frame, A_S, len(tops))
