"""Seeded searches for copies of PJ(l, m) and H_l inside Grassmann graphs.

Each trial maps the pattern vertex by vertex in BFS order, choosing images at
random among the candidates consistent with every vertex already placed, and
backtracks until `node_cap` placements have been tried. Two candidate
generators exist: bit masks over an enumerated 𝒢_k for small spaces, and
neighbour generation around an already placed image for larger ones.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .apartments import BigStarFrame, EmbeddingMap, check_clique_images, classify_pj_l0_image
from .errors import BudgetExceeded, InconsistentInput, PreconditionError
from .grassmann import adjacent, adjacent_index_pairs, locally_independent, neighbors
from .johnson import SignedSet, polar_johnson_graph, signed_key
from .polar import PolarSpace, SingularSubspace, build_polar_space, subspace_key
from .theorems import verify_theorem
from .util import spawn_rngs, worker_count

logger = logging.getLogger("polaris.search")

DEFAULT_TRIALS = 500
DEFAULT_NODE_CAP = 256
SEARCH_METHODS = ("auto", "bitmask", "local")
PATTERN_KINDS = ("pj", "hypercube")


@dataclass(frozen=True)
class Pattern:
    """PJ(l, m), or the hypercube H_l read as PJ(l, l-1)."""

    kind: str
    l: int
    m: int = 0

    def __post_init__(self):
        if self.kind not in PATTERN_KINDS:
            raise ValueError(f"Unknown pattern kind {self.kind!r}; expected one of {PATTERN_KINDS}")
        if self.kind == "hypercube":
            object.__setattr__(self, "m", self.l - 1)
        if not 0 <= self.m <= self.l - 1:
            raise ValueError(f"PJ({self.l},{self.m}) needs 0 <= m <= l-1")

    @property
    def name(self) -> str:
        return f"H_{self.l}" if self.kind == "hypercube" else f"PJ({self.l},{self.m})"

    def graph(self) -> nx.Graph:
        return polar_johnson_graph(self.l, self.m)


# trial machinery


@dataclass(frozen=True)
class _Plan:
    order: Tuple[SignedSet, ...]
    linked: Tuple[Tuple[int, ...], ...]
    apart: Tuple[Tuple[int, ...], ...]


def _plan(graph: nx.Graph, rng: np.random.Generator) -> _Plan:
    nodes = sorted(graph.nodes, key=signed_key)
    start = nodes[int(rng.integers(len(nodes)))]
    order = [start]
    for component in [list(nx.bfs_tree(graph, start))] + [
        sorted(c, key=signed_key) for c in nx.connected_components(graph) if start not in c
    ]:
        order.extend(v for v in component if v not in order)
    position = {v: i for i, v in enumerate(order)}
    linked, apart = [], []
    for i, v in enumerate(order):
        linked.append(tuple(sorted(position[u] for u in graph[v] if position[u] < i)))
        apart.append(tuple(j for j in range(i) if not graph.has_edge(order[j], v)))
    return _Plan(tuple(order), tuple(linked), tuple(apart))


Candidates = Callable[[int, List[Any]], Sequence[Any]]


def _embed(plan: _Plan, candidates: Candidates, rng: np.random.Generator, node_cap: int) -> Optional[List[Any]]:
    images: List[Any] = [None] * len(plan.order)
    placed = 0

    def extend(i: int) -> bool:
        nonlocal placed
        if i == len(plan.order):
            return True
        options = candidates(i, images)
        for idx in rng.permutation(len(options)):
            placed += 1
            if placed > node_cap:
                raise BudgetExceeded(f"Trial exceeded {node_cap} placements", images[:i])
            images[i] = options[int(idx)]
            if extend(i + 1):
                return True
        images[i] = None
        return False

    try:
        return list(images) if extend(0) else None
    except BudgetExceeded:
        return None


@dataclass(frozen=True, eq=False)
class TargetGraph:
    """Γ_k on all of 𝒢_k with adjacency rows as int bit masks."""

    vertices: List[SingularSubspace]
    adj: List[int] = field(repr=False)

    @classmethod
    def build(cls, polar: PolarSpace, k: int) -> "TargetGraph":
        vertices = polar.enumerate_singular(k)
        adj = [0] * len(vertices)
        for i, j in adjacent_index_pairs(polar, vertices):
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        logger.debug("Bit mask target for level %d: %d vertices", k, len(vertices))
        return cls(vertices, adj)

    @property
    def full(self) -> int:
        return (1 << len(self.vertices)) - 1


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def bitmask_trial(target: TargetGraph, plan: _Plan, rng: np.random.Generator, node_cap: int) -> Optional[List[SingularSubspace]]:
    def candidates(i: int, images: List[Any]) -> List[int]:
        mask = target.full
        for a in plan.linked[i]:
            mask &= target.adj[images[a]]
        for b in plan.apart[i]:
            mask &= ~target.adj[images[b]]
        for j in range(i):
            mask &= ~(1 << images[j])
        return _bits(mask)

    found = _embed(plan, candidates, rng, node_cap)
    return None if found is None else [target.vertices[i] for i in found]


def random_singular(polar: PolarSpace, k: int, rng: np.random.Generator) -> SingularSubspace:
    """A random k-dimensional singular subspace grown one collinear point at a time."""
    if not 0 <= k <= polar.rank - 1:
        raise PreconditionError(f"Singular subspaces of {polar!r} have dimension 0..{polar.rank - 1}, got {k}", k)
    sub = polar.point_subspace(int(rng.integers(len(polar))))
    while sub.proj_dim < k:
        inside = polar.point_ids(sub)
        options = sorted(polar.perp_set(inside) - inside)
        sub = polar.join(sub, polar.point_subspace(options[int(rng.integers(len(options)))]))
    return sub


def local_embedding_trial(
        polar: PolarSpace,
        k: int,
        plan: _Plan,
        rng: np.random.Generator,
        node_cap: int,
    ) -> Optional[List[SingularSubspace]]:
    cache: Dict[SingularSubspace, List[SingularSubspace]] = {}

    def around(x: SingularSubspace) -> List[SingularSubspace]:
        if x not in cache:
            cache[x] = neighbors(polar, x)
        return cache[x]

    def candidates(i: int, images: List[Any]) -> List[SingularSubspace]:
        if not plan.linked[i]:
            return [random_singular(polar, k, rng)]
        anchor, *others = plan.linked[i]
        placed = set(images[:i])
        return [
            y
            for y in around(images[anchor])
            if y not in placed
            and all(adjacent(polar, y, images[a]) for a in others)
            and not any(adjacent(polar, y, images[b]) for b in plan.apart[i])
        ]

    return _embed(plan, candidates, rng, node_cap)


# classification


def classify_finding(polar: PolarSpace, pattern: Pattern, f: EmbeddingMap) -> Dict[str, Any]:
    """PJ(l,0) images by region, H_l images by local independence and the dual verifier, others by clique images."""
    if pattern.kind == "pj" and pattern.m == 0 and pattern.l >= 3:
        try:
            region = classify_pj_l0_image(polar, f.image, witness=f.assign)
        except InconsistentInput as e:
            return {"case": "inconsistent", "message": str(e)}
        if isinstance(region, BigStarFrame):
            return {"case": "big-star", "apex_dim": region.S.proj_dim}
        return {"case": "rank-three", "base_dim": region.N.proj_dim, "top_dim": region.M.proj_dim}
    if pattern.kind == "hypercube" and f.k == polar.rank - 1:
        local = locally_independent(polar, f.image)
        info: Dict[str, Any] = {"locally_independent": local}
        if local:
            verdict = verify_theorem("thm4.1", polar, embedding=f, l=pattern.l)
            info["accepted"] = verdict.accepted
            info["clause"] = verdict.clause
            if verdict.accepted:
                info["N_dim"] = verdict.certificate.N.proj_dim
        return info
    report = check_clique_images(f)
    return {
        "tops_independent": report["tops_independent"],
        "stars_independent": report["stars_independent"],
        "cliques_independent": report["tops_independent"] and report["stars_independent"],
        "t1": report["t1"],
        "t2": report["t2"],
        "in_big_star": report["big_star_container"] is not None,
    }


# searches


@dataclass(frozen=True, eq=False)
class Finding:
    trial: int
    members: Tuple[SingularSubspace, ...]
    assign: Dict[SignedSet, SingularSubspace] = field(repr=False)
    info: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class SearchReport:
    pattern: Pattern
    target: str
    k: int
    seed: Optional[int]
    trials: int
    attempted: int
    truncated: bool
    findings: List[Finding]


def resolve_method(polar: PolarSpace, method: str) -> str:
    if method not in SEARCH_METHODS:
        raise ValueError(f"Unknown search method {method!r}; expected one of {SEARCH_METHODS}")
    if method != "auto":
        return method
    return "bitmask" if polar.rank <= 3 and polar.p == 2 else "local"


def search_embeddings(
        polar: PolarSpace,
        pattern: Pattern,
        k: int,
        *,
        trials: int = DEFAULT_TRIALS,
        seed: Optional[int] = None,
        budget: Optional[int] = None,
        method: str = "auto",
        node_cap: int = DEFAULT_NODE_CAP,
    ) -> SearchReport:
    """Run seeded trials and return the distinct images found, in trial order.

    At most `budget` trials run; a larger request is truncated and flagged.
    Results do not depend on the worker count.
    """
    if not 0 <= k <= polar.rank - 1:
        raise PreconditionError(f"Level {k} is outside 0..{polar.rank - 1}", k)
    if trials < 0:
        raise ValueError(f"trials must be non-negative, got {trials}")
    method = resolve_method(polar, method)
    attempted = trials if budget is None else min(trials, budget)
    graph = pattern.graph()
    target = TargetGraph.build(polar, k) if method == "bitmask" else None

    def run(rng: np.random.Generator) -> Optional[Dict[SignedSet, SingularSubspace]]:
        plan = _plan(graph, rng)
        if target is not None:
            images = bitmask_trial(target, plan, rng, node_cap)
        else:
            images = local_embedding_trial(polar, k, plan, rng, node_cap)
        return None if images is None else dict(zip(plan.order, images))

    rngs = spawn_rngs(seed, attempted)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(run, rngs))

    findings: List[Finding] = []
    seen = set()
    for trial, assign in enumerate(results):
        if assign is None:
            continue
        members = tuple(sorted(assign.values(), key=subspace_key))
        key = frozenset(members)
        if key in seen:
            continue
        seen.add(key)
        f = EmbeddingMap(polar, pattern.l, pattern.m, k, assign)
        findings.append(Finding(trial, members, assign, classify_finding(polar, pattern, f)))
    logger.info(
        "%s in Γ_%d of %r: %d distinct images in %d trials (%s)",
        pattern.name, k, polar, len(findings), attempted, method,
    )
    return SearchReport(pattern, repr(polar), k, seed, trials, attempted, attempted < trials, findings)


def open_problem_search(
        kind: str,
        p: int,
        l: int,
        m: int,
        *,
        trials: int = DEFAULT_TRIALS,
        seed: Optional[int] = None,
        budget: Optional[int] = None,
        method: str = "auto",
        node_cap: int = DEFAULT_NODE_CAP,
    ) -> SearchReport:
    """Embeddings of PJ(l, m) in the collinearity graph of a rank l-m polar space.

    A finding with "cliques_independent" set would send every maximal clique
    to an independent set of points, the configuration a big star would have
    to contain.
    """
    if m < 1 or l - m < 2:
        raise PreconditionError(f"Need m >= 1 and l-m >= 2, got l={l}, m={m}", (l, m))
    if l < 2 * m + 2:
        logger.warning("l=%d < 2m+2=%d: this is the range already covered by the first condition", l, 2 * m + 2)
    polar = build_polar_space(kind, l - m, p)
    return search_embeddings(
        polar, Pattern("pj", l, m), 0, trials=trials, seed=seed, budget=budget, method=method, node_cap=node_cap
    )
