import pytest

from polaris.apartments import apartment
from polaris.errors import BudgetExceeded, DimensionMismatch, PreconditionError
from polaris.grassmann import (
    BigStar,
    GrassmannGraph,
    Interval,
    Parabolic,
    adjacent,
    classify_maximal_clique,
    collect_region,
    independent,
    line_through,
    locally_independent,
    neighbors,
    parabolic_collineation,
    random_neighbor,
    recognize_parabolic,
    span_closure,
)
from polaris.polar import build_polar_space
from polaris.util import make_rng, spawn_rngs


def span(polar, *names):
    """Subspace spanned by named basis vectors like "e1", "f2", "e1+e2"."""
    rows = []
    for name in names:
        vec = [0] * polar.ambient_dim
        for part in name.split("+"):
            basis = polar.form.e if part[0] == "e" else polar.form.f
            vec = [(a + b) % polar.p for a, b in zip(vec, basis(int(part[1:])))]
        rows.append(vec)
    return polar.singular(rows)


W3 = build_polar_space("symplectic", 3, 2)
W4 = build_polar_space("symplectic", 4, 2)


def test_adjacency_of_lines():
    a = span(W3, "e1", "e2")
    b = span(W3, "e1", "e3")
    c = span(W3, "e1", "f2")
    assert adjacent(W3, a, b)
    assert not adjacent(W3, a, c)
    assert not adjacent(W3, a, a)
    assert not adjacent(W3, span(W3, "e2", "e3"), span(W3, "f2", "f3"))

def test_adjacency_of_maximal_subspaces():
    a = span(W3, "e1", "e2", "e3")
    b = span(W3, "e1", "e2", "f3")
    c = span(W3, "e1", "f2", "f3")
    assert adjacent(W3, a, b)
    assert not adjacent(W3, a, c)

def test_adjacency_needs_equal_dimensions():
    with pytest.raises(DimensionMismatch):
        adjacent(W3, span(W3, "e1"), span(W3, "e1", "e2"))

def test_neighbors_match_the_graph():
    line = span(W3, "e1", "e2")
    graph = GrassmannGraph(W3, 1)
    found = neighbors(W3, line)
    assert len(found) == 18
    assert found == graph.neighbors(line)
    assert adjacent(W3, line, random_neighbor(W3, line, make_rng(3)))

def test_maximal_cliques_of_the_line_graph_are_tops():
    graph = GrassmannGraph(W3, 1)
    cliques = graph.maximal_cliques()
    assert len(cliques) == 135
    assert {len(c) for c in cliques} == {7}
    for c in cliques[:20]:
        result = classify_maximal_clique(W3, c)
        assert result.clique.tag == "top"
        assert result.maximal

def test_stars_appear_in_rank_four():
    S = span(W4, "e1")
    M = span(W4, "e1", "e2", "e3", "e4")
    star = collect_region(W4, Interval(S, M), 1)
    assert len(star) == 7
    result = classify_maximal_clique(W4, star)
    assert result.clique.tag == "star"
    assert result.clique.S == S and result.clique.M == M
    assert result.maximal

def test_a_pencil_is_not_maximal():
    pencil = [span(W4, "e1", "e2"), span(W4, "e1", "e3"), span(W4, "e1", "e2+e3")]
    result = classify_maximal_clique(W4, pencil)
    assert not result.maximal
    assert {c.tag for c in result.candidates} == {"top", "star"}

def test_classify_rejects_non_cliques():
    with pytest.raises(PreconditionError, match="not a clique"):
        classify_maximal_clique(W3, [span(W3, "e1", "e2"), span(W3, "f1", "f2")])

def test_dual_lines():
    a = span(W3, "e1", "e2", "e3")
    b = span(W3, "e1", "e2", "f3")
    line = line_through(W3, a, b)
    assert line.top is None
    assert len(line.members) == 3
    assert classify_maximal_clique(W3, [a, b]).clique.tag == "dual_line"

def test_line_through_adjacent_lines():
    a, b = span(W3, "e1", "e2"), span(W3, "e1", "e3")
    line = line_through(W3, a, b)
    assert line.bottom == span(W3, "e1")
    assert line.top == span(W3, "e1", "e2", "e3")
    assert len(line.members) == 3
    assert line_through(W3, a, span(W3, "f1", "f2")) is None

def test_span_closure_of_two_adjacent_lines_is_their_pencil():
    a, b = span(W3, "e1", "e2"), span(W3, "e1", "e3")
    assert span_closure(W3, [a, b]) == set(line_through(W3, a, b).members)

def test_independence_in_a_top():
    triangle = [span(W3, "e1", "e2"), span(W3, "e1", "e3"), span(W3, "e2", "e3")]
    pencil = [span(W3, "e1", "e2"), span(W3, "e1", "e3"), span(W3, "e1", "e2+e3")]
    assert independent(W3, triangle)
    assert independent(W3, triangle, method="closure")
    assert not independent(W3, pencil)
    assert not independent(W3, pencil, method="closure")

def test_independence_method_is_checked():
    with pytest.raises(ValueError, match="method"):
        independent(W3, [span(W3, "e1", "e2")], method="guess")

def test_local_independence():
    cube = [span(W3, a, b, c) for a in ("e1", "f1") for b in ("e2", "f2") for c in ("e3", "f3")]
    assert locally_independent(W3, cube)
    through_line = collect_region(W3, BigStar(span(W3, "e1", "e2")), 2)
    assert not locally_independent(W3, through_line)

def test_local_independence_needs_maximal_subspaces():
    with pytest.raises(DimensionMismatch):
        locally_independent(W3, [span(W3, "e1", "e2")])

def test_big_star_is_a_convex_parabolic_subspace():
    S = span(W3, "e1")
    star = collect_region(W3, BigStar(S), 1)
    assert len(star) == 15
    assert recognize_parabolic(W3, star) == S
    assert recognize_parabolic(W3, star, require_convex=True, graph=GrassmannGraph(W3, 1)) == S
    assert recognize_parabolic(W3, star[:-1]) is None

def test_big_star_needs_matching_dimension():
    with pytest.raises(DimensionMismatch):
        collect_region(W3, BigStar(span(W3, "e1", "e2")), 1)

def test_parabolic_collineation_is_a_bijection():
    N = span(W4, "e1")
    collineation = parabolic_collineation(W4, N, 2)
    assert collineation.m == 1
    assert len(collineation.forward) == len(collect_region(W4, Parabolic(N), 2))
    assert all(collineation.inverse[y] == x for x, y in collineation.forward.items())

def test_distances_in_the_dual_polar_graph():
    graph = GrassmannGraph(W3, 2)
    a = span(W3, "e1", "e2", "e3")
    b = span(W3, "f1", "f2", "f3")
    assert graph.distance(a, b) == 3
    assert {a, b} <= graph.interval(a, b)
    # one member per subspace of a: 1 + 7 + 7 + 1
    assert len(graph.interval(a, b)) == 16
    assert not graph.is_convex([a, b])

def test_convex_closure_of_opposite_maximals_is_everything():
    graph = GrassmannGraph(W3, 2)
    a = span(W3, "e1", "e2", "e3")
    b = span(W3, "f1", "f2", "f3")
    closure = graph.convex_closure([a, b])
    assert len(closure) == 135
    assert graph.is_convex(closure)

def test_convex_closure_keeps_a_big_star():
    graph = GrassmannGraph(W3, 1)
    star = collect_region(W3, BigStar(span(W3, "e1")), 1)
    assert graph.convex_closure(star) == set(star)

def test_convex_closure_respects_its_round_limit():
    graph = GrassmannGraph(W3, 2)
    with pytest.raises(BudgetExceeded, match="stabilize"):
        graph.convex_closure([span(W3, "e1", "e2", "e3"), span(W3, "f1", "f2", "f3")], max_iterations=1)

@pytest.mark.parametrize("polar,k", [(build_polar_space("symplectic", 2, 2), 0), (build_polar_space("symplectic", 2, 2), 1), (W3, 2)])
def test_convex_closure_of_an_apartment_is_everything(polar, k):
    graph = GrassmannGraph(polar, k)
    members = apartment(polar, polar.standard_frame(), k).members
    assert graph.convex_closure(members) == set(graph.vertices)

def test_every_big_star_of_the_line_graph_is_convex():
    graph = GrassmannGraph(W3, 1)
    for point in range(len(W3)):
        star = collect_region(W3, BigStar(W3.point_subspace(point)), 1)
        assert len(star) == 15
        assert graph.is_convex(star)

@pytest.mark.parametrize("names", [("e1",), ("e1", "e2")])
def test_parabolic_regions_of_the_dual_polar_graph_are_convex(names):
    graph = GrassmannGraph(W3, 2)
    region = collect_region(W3, Parabolic(span(W3, *names)), 2)
    assert len(region) == (15 if len(names) == 1 else 3)
    assert graph.is_convex(region)
    assert graph.convex_closure(region) == set(region)

def top_and_star_families():
    tops = [collect_region(W3, Interval(W3.empty(), U), 1) for U in W3.enumerate_singular(2)]
    stars = []
    for M in W4.enumerate_singular(3)[::40]:
        for point in sorted(W4.point_ids(M))[:3]:
            stars.append(collect_region(W4, Interval(W4.point_subspace(point), M), 1))
    return tops, stars

def test_independence_agrees_with_span_closure_on_subsets_of_tops_and_stars():
    tops, stars = top_and_star_families()
    for trial, rng in enumerate(spawn_rngs(11, 1000)):
        polar, family = (W3, tops) if trial % 2 == 0 else (W4, stars)
        members = family[int(rng.integers(len(family)))]
        size = int(rng.integers(3, len(members) + 1))
        picked = [members[int(i)] for i in rng.choice(len(members), size=size, replace=False)]
        fast = independent(polar, picked, method="projective")
        assert fast == independent(polar, picked, method="closure")
        assert fast == independent(polar, picked)

@pytest.mark.parametrize(
    "polar,names,k",
    [(W4, ("e1",), 1), (W4, ("e1",), 2), (W4, ("e1", "e2"), 2), (W3, ("e1",), 2)],
)
def test_parabolic_collineation_preserves_adjacency_both_ways(polar, names, k):
    collineation = parabolic_collineation(polar, span(polar, *names), k)
    quotient = collineation.quotient
    residue = GrassmannGraph(quotient.space, collineation.m)
    assert set(collineation.inverse) == set(residue.vertices)
    domain = GrassmannGraph(polar, k, vertices=collineation.forward)
    forward = collineation.forward
    mapped = {frozenset((forward[domain.vertices[i]], forward[domain.vertices[j]])) for i, j in domain.graph.edges}
    expected = {frozenset((residue.vertices[i], residue.vertices[j])) for i, j in residue.graph.edges}
    assert mapped == expected
    assert all(quotient.lift(y) == x for x, y in forward.items())

def test_quotient_lift_maps_residue_edges_to_edges():
    quotient = W3.quotient(span(W3, "e1"))
    lines = GrassmannGraph(quotient.space, 1)
    for a in lines.vertices:
        for b in lines.vertices:
            if a == b:
                continue
            assert lines.adjacent(a, b) == adjacent(W3, quotient.lift(a), quotient.lift(b))
