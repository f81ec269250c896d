"""Polar Johnson graphs, hypercubes and half-cubes, plus a small isomorphism engine.

A vertex of PJ(n, k) is a singular (k+1)-subset of J = {±1, ..., ±n}: it
never holds both j and -j.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Tuple

import networkx as nx

from .errors import BudgetExceeded, InconsistentInput

logger = logging.getLogger("polaris.johnson")

SignedSet = FrozenSet[int]
IsoWitness = Dict[Hashable, Hashable]

DEFAULT_ISO_BUDGET = 200_000
GRAPH_KINDS = ("pj", "hypercube", "halfcube")


def is_singular_set(xs: Iterable[int]) -> bool:
    xs = set(xs)
    return 0 not in xs and all(-j not in xs for j in xs)


def signed_set(*elements: int) -> SignedSet:
    if not is_singular_set(elements):
        raise ValueError(f"{sorted(elements)} is not a singular signed set")
    return frozenset(elements)


def element_key(j: int) -> Tuple[bool, int]:
    return (j < 0, abs(j))


def signed_key(xs: SignedSet) -> Tuple[Tuple[bool, int], ...]:
    """Positive indices sort before negative ones."""
    return tuple(sorted(element_key(j) for j in xs))


def sorted_signed(xs: Iterable[int]) -> List[int]:
    return sorted(xs, key=element_key)


def pj_vertices(n: int, k: int) -> List[SignedSet]:
    if not 0 <= k <= n - 1:
        raise ValueError(f"PJ({n},{k}) needs 0 <= k <= n-1")
    vertices = []
    for positions in itertools.combinations(range(1, n + 1), k + 1):
        for signs in itertools.product((1, -1), repeat=k + 1):
            vertices.append(frozenset(s * j for s, j in zip(signs, positions)))
    return sorted(vertices, key=signed_key)


def pj_adjacent(n: int, k: int, x: SignedSet, y: SignedSet) -> bool:
    if x == y or len(x & y) != k:
        return False
    return k == n - 1 or is_singular_set(x | y)


def build_named_graph(kind: str, n: int, k: Optional[int] = None) -> nx.Graph:
    """PJ(n, k), the hypercube H_n or the half-cube on {0,1}^n."""
    graph = nx.Graph()
    if kind == "pj":
        if k is None:
            raise ValueError("PJ graphs need k")
        vertices = pj_vertices(n, k)
        graph.add_nodes_from(vertices)
        graph.add_edges_from(
            (x, y) for i, x in enumerate(vertices) for y in vertices[i + 1 :] if pj_adjacent(n, k, x, y)
        )
        graph.graph["name"] = f"PJ({n},{k})"
    elif kind in ("hypercube", "halfcube"):
        if n < 1 or (kind == "halfcube" and n < 2):
            raise ValueError(f"{kind} needs a larger n, got {n}")
        vertices = list(itertools.product((0, 1), repeat=n))
        step = 1
        if kind == "halfcube":
            vertices = [v for v in vertices if sum(v) % 2 == 0]
            step = 2
        graph.add_nodes_from(vertices)
        graph.add_edges_from(
            (x, y)
            for i, x in enumerate(vertices)
            for y in vertices[i + 1 :]
            if sum(a != b for a, b in zip(x, y)) == step
        )
        graph.graph["name"] = f"{kind}({n})"
    else:
        raise ValueError(f"Unknown graph kind {kind!r}; expected one of {GRAPH_KINDS}")
    return graph


def polar_johnson_graph(n: int, k: int) -> nx.Graph:
    return build_named_graph("pj", n, k)


def big_star(n: int, k: int, x: SignedSet) -> List[SignedSet]:
    """The vertices of PJ(n, k) containing the (k-1)-level vertex x."""
    return [z for z in pj_vertices(n, k) if x < z]


def top(u: SignedSet) -> List[SignedSet]:
    return sorted((u - {j} for j in u), key=signed_key)


@dataclass(frozen=True)
class PJCliques:
    tops: Dict[SignedSet, Tuple[SignedSet, ...]]
    stars: Dict[Tuple[SignedSet, SignedSet], Tuple[SignedSet, ...]]
    big_stars: Dict[SignedSet, Tuple[SignedSet, ...]]


def pj_cliques(n: int, k: int) -> PJCliques:
    """Tops (by PJ(n,k+1)), stars (by PJ(n,k-1) x PJ(n,n-1)) and big stars (by PJ(n,k-1))."""
    if not 1 <= k <= n - 2:
        raise ValueError(f"Tops and stars of PJ({n},{k}) need 1 <= k <= n-2")
    tops = {u: tuple(top(u)) for u in pj_vertices(n, k + 1)}
    stars: Dict[Tuple[SignedSet, SignedSet], Tuple[SignedSet, ...]] = {}
    big_stars: Dict[SignedSet, Tuple[SignedSet, ...]] = {}
    if k <= n - 3:
        maximal = pj_vertices(n, n - 1)
        for x in pj_vertices(n, k - 1):
            for m in maximal:
                if x < m:
                    stars[(x, m)] = tuple(sorted((x | {j} for j in m - x), key=signed_key))
            big_stars[x] = tuple(big_star(n, k, x))
    return PJCliques(tops, stars, big_stars)


# isomorphism


def _signature(adj: Dict[Hashable, set], v: Hashable) -> Tuple[int, Tuple[int, ...]]:
    return (len(adj[v]), tuple(sorted(len(adj[u]) for u in adj[v])))


def _search_order(adj: Dict[Hashable, set], nodes: List[Hashable]) -> List[Hashable]:
    order: List[Hashable] = []
    seen = set()
    for start in sorted(nodes, key=lambda v: -len(adj[v])):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def verify_witness(g: nx.Graph, h: nx.Graph, mapping: IsoWitness) -> bool:
    """Edge-by-edge check that `mapping` is an isomorphism g -> h."""
    if len(mapping) != g.number_of_nodes() or len(set(mapping.values())) != h.number_of_nodes():
        return False
    if set(mapping) != set(g.nodes) or set(mapping.values()) != set(h.nodes):
        return False
    if g.number_of_edges() != h.number_of_edges():
        return False
    return all(h.has_edge(mapping[a], mapping[b]) for a, b in g.edges)


def isomorphic(g: nx.Graph, h: nx.Graph, *, budget: int = DEFAULT_ISO_BUDGET) -> Optional[IsoWitness]:
    """A verified isomorphism g -> h, or None when the complete search finds none.

    Backtracking over candidates with equal degree signatures, pruned by
    adjacency and common-neighbour counts against every mapped vertex.
    Raises BudgetExceeded once `budget` search nodes have been visited.
    """
    if g.number_of_nodes() != h.number_of_nodes() or g.number_of_edges() != h.number_of_edges():
        return None
    g_adj = {v: set(g[v]) for v in g.nodes}
    h_adj = {v: set(h[v]) for v in h.nodes}
    g_sig = {v: _signature(g_adj, v) for v in g_adj}
    h_sig = {v: _signature(h_adj, v) for v in h_adj}
    if sorted(g_sig.values()) != sorted(h_sig.values()):
        return None
    order = _search_order(g_adj, list(g.nodes))
    candidates = {v: [w for w in h.nodes if h_sig[w] == g_sig[v]] for v in order}
    mapping: IsoWitness = {}
    used = set()
    visited = 0

    def extend(i: int) -> bool:
        nonlocal visited
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"Isomorphism search exceeded {budget} nodes", dict(mapping))
            consistent = True
            for u, x in mapping.items():
                if (u in g_adj[v]) != (x in h_adj[w]):
                    consistent = False
                    break
                if len(g_adj[v] & g_adj[u]) != len(h_adj[w] & h_adj[x]):
                    consistent = False
                    break
            if not consistent:
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if not extend(0):
        return None
    if not verify_witness(g, h, mapping):
        raise InconsistentInput("Isomorphism search produced an invalid witness", mapping)
    logger.debug("Found isomorphism after %d search nodes", visited)
    return dict(mapping)


def is_automorphism(g: nx.Graph, mapping: IsoWitness) -> bool:
    return verify_witness(g, g, mapping)


# the half-cube split of PJ(4,3) and the top-to-star automorphism of PJ(4,1)


@dataclass(frozen=True)
class HalfcubeSplit:
    """`g` sends every top of PJ(4,1) to a star S_1({u}, U) with U in the `delta` class."""

    delta: str
    a_plus: Tuple[SignedSet, ...]
    a_minus: Tuple[SignedSet, ...]
    h: Dict[SignedSet, SignedSet]
    g: Dict[SignedSet, SignedSet]

    def cls(self, sign: str) -> Tuple[SignedSet, ...]:
        return self.a_plus if sign == "+" else self.a_minus

    @property
    def g_inverse(self) -> Dict[SignedSet, SignedSet]:
        return {v: k for k, v in self.g.items()}


def parity_class(x: SignedSet) -> str:
    return "+" if sum(1 for j in x if j < 0) % 2 == 0 else "-"


def halfcube_split_and_g(delta: str = "+") -> HalfcubeSplit:
    if delta not in ("+", "-"):
        raise ValueError(f"delta must be '+' or '-', got {delta!r}")
    maximal = pj_vertices(4, 3)
    a_plus = tuple(x for x in maximal if parity_class(x) == "+")
    a_minus = tuple(x for x in maximal if parity_class(x) == "-")
    for i, x in enumerate(maximal):
        for y in maximal[i + 1 :]:
            allowed = (2, 0) if parity_class(x) == parity_class(y) else (3, 1)
            if len(x & y) not in allowed:
                raise InconsistentInput("Parity classes of PJ(4,3) do not split by intersection size", (x, y))

    target = a_minus if delta == "+" else a_plus
    gamma = nx.Graph()
    gamma.add_nodes_from(target)
    gamma.add_edges_from((x, y) for i, x in enumerate(target) for y in target[i + 1 :] if len(x & y) == 2)
    h = isomorphic(polar_johnson_graph(4, 0), gamma)
    if h is None:
        raise InconsistentInput("PJ(4,0) is not isomorphic to the half-cube class graph")

    g: Dict[SignedSet, SignedSet] = {}
    for line in pj_vertices(4, 1):
        i, j = sorted(line)
        image = h[frozenset({i})] & h[frozenset({j})]
        if len(image) != 2:
            raise InconsistentInput(f"h({i}) and h({j}) do not meet in two elements", line)
        g[line] = frozenset(image)
    pj41 = polar_johnson_graph(4, 1)
    if not is_automorphism(pj41, g):
        raise InconsistentInput("The induced map is not an automorphism of PJ(4,1)", g)

    home = a_plus if delta == "+" else a_minus
    for u, members in pj_cliques(4, 1).tops.items():
        images = [g[x] for x in members]
        common = frozenset.intersection(*images)
        union = frozenset.union(*images)
        if len(common) != 1 or union not in home:
            raise InconsistentInput("A top is not sent to a star of the expected class", u)
        (apex,) = common
        if set(images) != {frozenset({apex, x}) for x in union - common}:
            raise InconsistentInput("A top is not sent to a star", u)
    logger.debug("Built the PJ(4,1) automorphism for class %s", delta)
    return HalfcubeSplit(delta, a_plus, a_minus, dict(h), g)
