"""Executable apartment characterizations.

Every verifier takes a polar space and either a vertex set `xs` or an
EmbeddingMap, checks the hypotheses of its characterization exactly, and
returns the certificate (N, ℬ) on success. Failures raise Rejection inside
the verifiers; `verify_theorem` turns them into a Verdict.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional

import catalogue

from . import registry
from .apartments import EmbeddingMap, check_clique_images, embedding_from_set
from .certificates import Certificate, certify_frame, extract_certificate, local_apartment_certificate
from .errors import Rejection
from .grassmann import induced_graph, level_of, locally_independent
from .johnson import (
    DEFAULT_ISO_BUDGET,
    HalfcubeSplit,
    SignedSet,
    halfcube_split_and_g,
    isomorphic,
    pj_cliques,
    polar_johnson_graph,
)
from .linalg import join_all, meet_all
from .polar import PolarSpace, SingularSubspace, subspace_key

logger = logging.getLogger("polaris.theorems")

THEOREMS = ("thm4.1", "thm4.2", "thm4.3", "thm4.4", "thm4.5", "cor4.1", "cor4.3")


@dataclass(frozen=True)
class Verdict:
    theorem: str
    accepted: bool
    certificate: Optional[Certificate] = None
    clause: Optional[str] = None
    message: str = ""
    obj: Any = None


def verify_theorem(
        which: str,
        polar: PolarSpace,
        *,
        xs: Optional[Iterable[SingularSubspace]] = None,
        embedding: Optional[EmbeddingMap] = None,
        l: Optional[int] = None,
        m: Optional[int] = None,
        budget: int = DEFAULT_ISO_BUDGET,
    ) -> Verdict:
    """Run one verifier; rejections come back as a Verdict, BudgetExceeded propagates."""
    try:
        verifier = registry.theorems.get(which)
    except catalogue.RegistryError:
        raise ValueError(f"Unknown theorem {which!r}; expected one of {THEOREMS}") from None
    if xs is None and embedding is None:
        raise ValueError("verify_theorem needs a vertex set or an embedding")
    try:
        certificate = verifier(polar, xs=xs, embedding=embedding, l=l, m=m, budget=budget)
    except Rejection as r:
        logger.info("%s rejected at %s: %s", which, r.clause, r.message)
        return Verdict(which, False, None, r.clause, r.message, r.obj)
    logger.info("%s accepted; N has dimension %d", which, certificate.N.proj_dim)
    return Verdict(which, True, certificate, None, f"N has dimension {certificate.N.proj_dim}")


# shared steps


def _members(xs, embedding) -> List[SingularSubspace]:
    members = embedding.image if embedding is not None else sorted(set(xs), key=subspace_key)
    if not members:
        raise Rejection("hypothesis", "The input set is empty")
    return members


def _resolve(polar: PolarSpace, xs, embedding, l: int, m: int, budget: int) -> EmbeddingMap:
    if embedding is not None:
        if (embedding.l, embedding.m) != (l, m):
            raise Rejection("hypothesis", f"Embedding of PJ({embedding.l},{embedding.m}) given, PJ({l},{m}) required")
        return embedding
    f = embedding_from_set(polar, _members(xs, None), l, m, budget=budget)
    if f is None:
        raise Rejection("graph-iso", f"The induced graph is not isomorphic to PJ({l},{m})")
    return f


def _check_exact_codimension(polar: PolarSpace, l: int, m: int, k: int) -> None:
    n = polar.rank
    if not (0 < m <= k and l <= n and l - m == n - k > 1):
        raise Rejection("hypothesis", f"Need 0 < m <= k, l <= n and l-m = n-k > 1; got l={l}, m={m}, k={k}, n={n}")


def _check_codimension_room(polar: PolarSpace, l: int, m: int, k: int) -> None:
    n = polar.rank
    if not (0 < m <= k and l <= n and 3 <= l - m <= n - k):
        raise Rejection("hypothesis", f"Need 0 < m <= k, l <= n and 3 <= l-m <= n-k; got l={l}, m={m}, k={k}, n={n}")


def _require(l: Optional[int], m: Optional[int]) -> None:
    if l is None or m is None:
        raise Rejection("hypothesis", "Both l and m are required")


def _cliques_independent(f: EmbeddingMap) -> Dict[str, Any]:
    report = check_clique_images(f)
    if not (report["tops_independent"] and report["stars_independent"]):
        obj = next(o for c, o in report["failures"] if c.endswith("independence"))
        raise Rejection("clique-independence", "A maximal clique does not go to an independent subset", obj)
    return report


@lru_cache(maxsize=2)
def _split(delta: str) -> HalfcubeSplit:
    return halfcube_split_and_g(delta)


def _align_tops(f: EmbeddingMap) -> EmbeddingMap:
    """f itself, or f∘g for an automorphism g of PJ(4,1), sending tops into tops."""
    report = check_clique_images(f)
    if report["t1"]:
        return f
    if (f.l, f.m) == (4, 1) and report["tops_independent"]:
        for delta in ("+", "-"):
            split = _split(delta)
            for perm in (split.g, split.g_inverse):
                relabelled = f.compose(perm)
                if check_clique_images(relabelled)["t1"]:
                    logger.debug("Relabelled PJ(4,1) through the top-to-star automorphism (class %s)", delta)
                    return relabelled
    starred = [U for U, kind in report["top_kinds"].items() if kind == "star"]
    if starred and report["stars_in_stars"]:
        raise Rejection("big-star", "A top lands in a star while stars land in stars; the image lies in a big star", starred[0])
    obj = next((o for c, o in report["failures"] if c.startswith("top")), None)
    raise Rejection("special-map", "(T1) tops are not sent to independent subsets of tops", obj)


def _check_regenerates_apartment(polar: PolarSpace, certificate: Certificate, image: List[SingularSubspace]) -> None:
    if not certificate.is_full_apartment(polar):
        raise Rejection("regeneration", f"ℬ is an l-frame with l={certificate.l} below the residue rank")
    if set(certificate.apartment(polar).members) != set(image):
        raise Rejection("regeneration", "The image is not the apartment of [N⟩_k spanned by ℬ")


# dual polar apartments


def _dual_certificate(polar: PolarSpace, assign: Dict[SignedSet, SingularSubspace], l: int) -> Certificate:
    """Certificate for a hypercube-shaped set of maximal subspaces labelled by PJ(l, l-1)."""
    n = polar.rank
    Q = {}
    for j in list(range(1, l + 1)) + [-t for t in range(1, l + 1)]:
        Q[j] = SingularSubspace(meet_all([x.space for v, x in assign.items() if j in v]))
    for j, sub in Q.items():
        if sub.proj_dim != n - l:
            raise Rejection("N-dimension", f"Members containing label {j} meet in dimension {sub.proj_dim}, expected {n - l}", j)
    return certify_frame(polar, Q, assign, l, l - 1, n - 1)


@registry.theorems.register("thm4.1")
def verify_dual_apartment(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """A locally independent set of maximal subspaces inducing H_l is an apartment of [N⟩_{n-1}.

    H_l is read as PJ(l, l-1); `l` defaults to the embedding's l or to log2 of the set size.
    """
    members = _members(xs, embedding)
    n = polar.rank
    if level_of(members) != n - 1:
        raise Rejection("hypothesis", f"Members must be maximal, of dimension {n - 1}")
    if l is None:
        l = embedding.l if embedding is not None else len(members).bit_length() - 1
    if not 2 <= l <= n:
        raise Rejection("hypothesis", f"The hypercube dimension must lie in [2, {n}], got {l}")
    if not locally_independent(polar, members):
        raise Rejection("local-independence", "The set is not locally independent")
    if embedding is not None and (embedding.l, embedding.m) == (l, l - 1):
        assign = embedding.assign
    else:
        witness = isomorphic(polar_johnson_graph(l, l - 1), induced_graph(polar, members), budget=budget)
        if witness is None:
            raise Rejection("graph-iso", f"The induced graph is not isomorphic to H_{l}")
        assign = witness
    certificate = _dual_certificate(polar, assign, l)
    if certificate.N != SingularSubspace(meet_all([x.space for x in members])):
        raise Rejection("N-dimension", "N is not the meet of all members", certificate.N)
    return certificate


# apartments in parabolic subspaces


def _through_dual(polar: PolarSpace, f: EmbeddingMap) -> Certificate:
    """l - m = 2: tops of PJ(l, l-2) go to maximal subspaces, which must form a dual apartment."""
    l = f.l
    tops = pj_cliques(l, l - 2).tops
    lifted: Dict[SignedSet, SingularSubspace] = {}
    for U, members in tops.items():
        join = join_all([f.assign[v].space for v in members])
        if join.rank != polar.rank:
            raise Rejection("special-map", "A top does not span a maximal subspace", U)
        lifted[U] = SingularSubspace(join)
    if len(set(lifted.values())) != len(lifted):
        raise Rejection("special-map", "Distinct tops span the same maximal subspace")
    dual = EmbeddingMap(polar, l, l - 1, polar.rank - 1, lifted)
    top_certificate = verify_dual_apartment(polar, embedding=dual, l=l)
    return certify_frame(polar, top_certificate.Q, f.assign, l, f.m, f.k)


@registry.theorems.register("thm4.2")
def verify_parabolic_apartment(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """An induced PJ(l, m) with independent maximal cliques is an apartment when l-m = n-k, and 2m+2 > l or no big star holds it."""
    _require(l, m)
    k = level_of(_members(xs, embedding))
    _check_exact_codimension(polar, l, m, k)
    f = _resolve(polar, xs, embedding, l, m, budget)
    report = _cliques_independent(f)
    if not (2 * m + 2 > l or report["big_star_container"] is None):
        raise Rejection("hypothesis", "2m+2 <= l and the image lies in a big star", report["big_star_container"])
    if l - m == 2:
        f = _align_tops(f)
        certificate = _through_dual(polar, f)
    else:
        certificate = extract_certificate(_align_tops(f))
    _check_regenerates_apartment(polar, certificate, f.image)
    return certificate


@registry.theorems.register("thm4.3")
def verify_top_preserving(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """With l-m = n-k and m <= l-3, an embedding sending tops to independent subsets of tops gives an apartment."""
    _require(l, m)
    members = _members(xs, embedding)
    k = level_of(members)
    _check_exact_codimension(polar, l, m, k)
    if m > l - 3:
        raise Rejection("hypothesis", f"Need m <= l-3, got l={l}, m={m}")
    f = _resolve(polar, xs, embedding, l, m, budget)
    if embedding is None:
        f = _align_tops(f)
    elif not check_clique_images(f)["t1"]:
        raise Rejection("hypothesis", "Tops are not sent to independent subsets of tops")
    for S in members:
        local_apartment_certificate(polar, members, S, l, m)
    certificate = extract_certificate(f)
    _check_regenerates_apartment(polar, certificate, members)
    return certificate


@registry.theorems.register("thm4.4")
def verify_frame_spanned(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """With 3 <= l-m <= n-k, an embedding sending tops to independent subsets of tops is spanned by an l-frame over N."""
    _require(l, m)
    k = level_of(_members(xs, embedding))
    _check_codimension_room(polar, l, m, k)
    f = _resolve(polar, xs, embedding, l, m, budget)
    if embedding is None:
        f = _align_tops(f)
    elif not check_clique_images(f)["t1"]:
        raise Rejection("hypothesis", "Tops are not sent to independent subsets of tops")
    return extract_certificate(f)


@registry.theorems.register("thm4.5")
def verify_clique_independent(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """With 3 <= l-m <= n-k, an induced PJ(l, m) with independent maximal cliques, and m+2 > n-k or (l-m >= 4 and no big star), is spanned by an l-frame over N."""
    _require(l, m)
    k = level_of(_members(xs, embedding))
    _check_codimension_room(polar, l, m, k)
    f = _resolve(polar, xs, embedding, l, m, budget)
    report = _cliques_independent(f)
    n = polar.rank
    if not (m + 2 > n - k or (l - m >= 4 and report["big_star_container"] is None)):
        raise Rejection("hypothesis", "m+2 <= n-k, and l-m < 4 or the image lies in a big star", report["big_star_container"])
    return extract_certificate(_align_tops(f))


@registry.theorems.register("cor4.1")
def verify_pj_n_k_plus_one(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """n-k >= 3 and an induced PJ(n-k+1, 1) outside every big star: an apartment of [N⟩_k with dim N = k-2."""
    k = level_of(_members(xs, embedding))
    n = polar.rank
    if n - k < 3:
        raise Rejection("hypothesis", f"Need n-k >= 3, got n={n}, k={k}")
    expected = (n - k + 1, 1)
    if (l, m) not in ((None, None), expected):
        raise Rejection("hypothesis", f"The corollary concerns PJ({expected[0]},1), got PJ({l},{m})")
    f = _resolve(polar, xs, embedding, *expected, budget)
    if check_clique_images(f)["big_star_container"] is not None:
        raise Rejection("hypothesis", "The image lies in a big star")
    return verify_parabolic_apartment(polar, embedding=f, l=expected[0], m=1, budget=budget)


@registry.theorems.register("cor4.3")
def verify_pj_l_one(polar: PolarSpace, *, xs=None, embedding=None, l=None, m=None, budget=DEFAULT_ISO_BUDGET) -> Certificate:
    """n-k+1 >= l and an induced PJ(l, 1) outside every big star: spanned by an l-frame over N of dimension k-2."""
    if l is None:
        raise Rejection("hypothesis", "l is required")
    if m not in (None, 1):
        raise Rejection("hypothesis", f"The corollary concerns PJ(l,1), got m={m}")
    k = level_of(_members(xs, embedding))
    n = polar.rank
    if not n - k + 1 >= l:
        raise Rejection("hypothesis", f"Need n-k+1 >= l, got n={n}, k={k}, l={l}")
    _check_codimension_room(polar, l, 1, k)
    f = _resolve(polar, xs, embedding, l, 1, budget)
    report = _cliques_independent(f)
    if report["big_star_container"] is not None:
        raise Rejection("hypothesis", "The image lies in a big star", report["big_star_container"])
    return extract_certificate(_align_tops(f))
