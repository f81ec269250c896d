from math import comb

import pytest

from polaris import registry
from polaris.apartments import (
    BigStarFrame,
    EmbeddingMap,
    RankThreeFrame,
    apartment,
    check_clique_images,
    classify_pj_l0_image,
    embedding_from_set,
    generated_set,
    is_embedding,
    lframe_intersection,
    parabolic_apartment,
    perturb,
    standard_lframe,
)
from polaris.errors import BudgetExceeded, PreconditionError
from polaris.grassmann import adjacent, induced_graph
from polaris.johnson import build_named_graph, halfcube_split_and_g, isomorphic
from polaris.polar import build_polar_space
from polaris.util import make_rng


def span(polar, *names):
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


@pytest.mark.parametrize("n,k", [(n, k) for n in (2, 3, 4) for k in range(n)])
def test_apartment_size_and_embedding(n, k):
    polar = build_polar_space("symplectic", n, 2)
    a = apartment(polar, polar.standard_frame(), k)
    assert len(a) == 2 ** (k + 1) * comb(n, k + 1)
    assert len(set(a.members)) == len(a)
    assert is_embedding(a.embedding())

def test_top_level_apartment_is_a_hypercube():
    a = apartment(W3, W3.standard_frame(), 2)
    assert isomorphic(build_named_graph("hypercube", 3), induced_graph(W3, a.members)) is not None

def test_parabolic_apartment_over_a_point():
    N = span(W3, "e1")
    a = parabolic_apartment(W3, N, 1)
    assert (a.l, a.m) == (2, 0)
    assert set(a.members) == {span(W3, "e1", x) for x in ("e2", "f2", "e3", "f3")}
    assert is_embedding(a.embedding())

def test_parabolic_base_must_fit_the_level():
    with pytest.raises(ValueError):
        parabolic_apartment(W3, span(W3, "e1", "e2"), 1)

def test_neighborhood_in_an_apartment():
    a = apartment(W3, W3.standard_frame(), 1)
    x = span(W3, "e1", "e2")
    around = a.neighborhood(x)
    assert around[0] == x
    # {1,2} is adjacent to {1,±3} and {2,±3}
    assert len(around) == 5
    assert all(adjacent(W3, x, y) for y in around[1:])

def test_swapping_opposite_labels_breaks_the_embedding():
    f = apartment(W3, W3.standard_frame(), 1).embedding()
    a, b = frozenset({1, 2}), frozenset({-1, -2})
    assign = dict(f.assign)
    assign[a], assign[b] = assign[b], assign[a]
    assert not is_embedding(EmbeddingMap(W3, 3, 1, 1, assign))

def test_embedding_map_must_be_total():
    f = apartment(W3, W3.standard_frame(), 1).embedding()
    assign = dict(f.assign)
    assign.pop(frozenset({1, 2}))
    with pytest.raises(PreconditionError, match="total"):
        EmbeddingMap(W3, 3, 1, 1, assign)

def test_embedding_from_set():
    members = apartment(W3, W3.standard_frame(), 1).members
    f = embedding_from_set(W3, members, 3, 1)
    assert f is not None
    assert is_embedding(f)
    assert set(f.image) == set(members)
    assert embedding_from_set(W3, members[1:], 3, 1) is None

def test_pj_l0_image_in_a_big_star():
    N = span(W4, "e1")
    members = parabolic_apartment(W4, N, 1).members
    assert len(members) == 6
    assert classify_pj_l0_image(W4, members) == BigStarFrame(N, 3)

def test_pj_l0_image_in_a_rank_three_interval():
    M = span(W4, "e1", "e2", "e3", "e4")
    edges = [span(W4, f"e{i}", f"e{j}") for i in range(1, 5) for j in range(i + 1, 5)]
    found = classify_pj_l0_image(W4, edges)
    assert isinstance(found, RankThreeFrame)
    assert found.M == M
    assert found.N.is_empty

def test_pj_l0_image_needs_six_members():
    with pytest.raises(PreconditionError, match="even number"):
        classify_pj_l0_image(W4, [span(W4, "e1", "e2"), span(W4, "e1", "f2")])

def test_apartment_cliques_are_well_placed():
    report = check_clique_images(apartment(W4, W4.standard_frame(), 1).embedding())
    assert report["tops_independent"] and report["tops_in_tops"]
    assert report["t1"] and report["t2"]
    assert report["stars_independent"] and report["stars_in_stars"]
    assert report["big_stars_unique"]
    assert report["big_star_container"] is None
    assert report["failures"] == []
    assert set(report["top_kinds"].values()) == {"top"}

def test_twisting_by_the_halfcube_automorphism_sends_tops_to_stars():
    f = apartment(W4, W4.standard_frame(), 1).embedding()
    twisted = f.compose(halfcube_split_and_g("+").g)
    assert is_embedding(twisted)
    report = check_clique_images(twisted)
    assert not report["t1"]
    assert set(report["top_kinds"].values()) == {"star"}
    assert any(clause == "top-containment" for clause, _ in report["failures"])

def test_perturb_swaps_one_member():
    members = apartment(W3, W3.standard_frame(), 1).members
    out = perturb(W3, members, make_rng(11))
    assert len(out.members) == len(members)
    assert out.removed in members and out.added not in members
    assert adjacent(W3, out.removed, out.added)
    assert perturb(W3, members, make_rng(11)) == out

def test_perturb_needs_members():
    with pytest.raises(ValueError):
        perturb(W3, [], make_rng(0))

@pytest.mark.parametrize("l,k", [(1, 0), (2, 0), (2, 1), (3, 1)])
def test_lframe_intersection_is_the_generated_set(l, k):
    frame = standard_lframe(W3, l)
    assert lframe_intersection(W3, frame, k) == apartment(W3, frame, k).members

def test_lframe_intersection_respects_its_limit():
    with pytest.raises(BudgetExceeded):
        lframe_intersection(W4, standard_lframe(W4, 1), 0, limit=5)

def test_standard_lframe_range():
    with pytest.raises(PreconditionError):
        standard_lframe(W3, 4)

def test_generated_sets():
    a = generated_set(W4, 2, 1, 3)
    assert a.base == span(W4, "e1")
    assert (a.l, a.m, a.k) == (3, 1, 2)
    assert len(a) == 2 ** 2 * comb(3, 2)
    with pytest.raises(PreconditionError):
        generated_set(W4, 1, 2, 3)

def test_registered_generators():
    f = registry.generators.get("apartment")(W3, 1, 1, 3)
    assert is_embedding(f)
    assert len(registry.generators.get("lframe")(W4, 1, 1, 3).image) == 12
    with pytest.raises(PreconditionError):
        registry.generators.get("parabolic")(W3, 1, 1, 3)
    with pytest.raises(PreconditionError):
        registry.generators.get("apartment")(W3, 1, 1, 2)
