import pytest

from polaris.apartments import apartment, generated_set, parabolic_apartment, perturb
from polaris.polar import build_polar_space
from polaris.theorems import THEOREMS, verify_theorem
from polaris.util import spawn_rngs


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
W5 = build_polar_space("symplectic", 5, 2)


def test_every_theorem_is_registered():
    for which in THEOREMS:
        verdict = verify_theorem(which, W3, xs=[span(W3, "e1", "e2")])
        assert not verdict.accepted

def test_unknown_theorem():
    with pytest.raises(ValueError, match="Unknown theorem"):
        verify_theorem("thm9.9", W3, xs=[span(W3, "e1")])

def test_verifier_needs_input():
    with pytest.raises(ValueError, match="vertex set"):
        verify_theorem("thm4.1", W3)

def test_dual_apartment_of_the_whole_space():
    members = apartment(W3, W3.standard_frame(), 2).members
    verdict = verify_theorem("thm4.1", W3, xs=members)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty
    assert verdict.message == "N has dimension -1"

def test_dual_apartment_over_a_point():
    N = span(W3, "e1")
    members = parabolic_apartment(W3, N, 2).members
    assert len(members) == 4
    verdict = verify_theorem("thm4.1", W3, xs=members)
    assert verdict.accepted
    assert verdict.certificate.N == N
    assert verdict.certificate.l == 2

def test_dual_apartment_rejects_repeated_hyperplanes():
    members = [
        span(W3, "e1", "e2", "e3"),
        span(W3, "e1", "e2", "f3"),
        span(W3, "e1", "e2", "e3+f3"),
        span(W3, "e1", "f2", "e3"),
    ]
    verdict = verify_theorem("thm4.1", W3, xs=members)
    assert not verdict.accepted
    assert verdict.clause == "local-independence"

def test_dual_apartment_needs_maximal_members():
    verdict = verify_theorem("thm4.1", W3, xs=apartment(W3, W3.standard_frame(), 1).members)
    assert verdict.clause == "hypothesis"

def test_parabolic_apartment_is_recognized():
    a = generated_set(W5, 2, 1, 4)
    verdict = verify_theorem("thm4.2", W5, xs=a.members, l=4, m=1)
    assert verdict.accepted
    assert verdict.certificate.N == a.base
    assert verdict.certificate.members(W5) == a.members

def test_parabolic_apartment_missing_a_member_is_not_pj():
    a = generated_set(W5, 2, 1, 4)
    verdict = verify_theorem("thm4.2", W5, xs=a.members[1:], l=4, m=1)
    assert not verdict.accepted
    assert verdict.clause == "graph-iso"

def test_apartment_through_the_dual_route():
    members = apartment(W3, W3.standard_frame(), 1).members
    verdict = verify_theorem("thm4.2", W3, xs=members, l=3, m=1)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty

def test_parabolic_apartment_needs_l_and_m():
    a = generated_set(W5, 2, 1, 4)
    verdict = verify_theorem("thm4.2", W5, xs=a.members)
    assert verdict.clause == "hypothesis"

def test_frame_generated_set_fails_the_apartment_hypotheses():
    # l - m = 3 but n - k = 4
    f = generated_set(W5, 1, 1, 4).embedding()
    verdict = verify_theorem("thm4.2", W5, embedding=f, l=4, m=1)
    assert verdict.clause == "hypothesis"

def test_top_preserving_embedding_of_an_apartment():
    f = apartment(W4, W4.standard_frame(), 1).embedding()
    verdict = verify_theorem("thm4.3", W4, embedding=f, l=4, m=1)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty
    assert verdict.certificate.is_full_apartment(W4)

def test_embedding_must_match_l_and_m():
    f = apartment(W4, W4.standard_frame(), 1).embedding()
    verdict = verify_theorem("thm4.3", W4, embedding=f, l=4, m=2)
    assert verdict.clause == "hypothesis"

def test_perturbed_apartments_are_rejected():
    members = apartment(W4, W4.standard_frame(), 1).members
    for rng in spawn_rngs(7, 100):
        moved = perturb(W4, members, rng)
        verdict = verify_theorem("thm4.3", W4, xs=moved.members, l=4, m=1)
        assert not verdict.accepted
        assert verdict.clause is not None

def test_frame_spanned_embedding():
    a = generated_set(W5, 1, 1, 4)
    verdict = verify_theorem("thm4.4", W5, embedding=a.embedding(), l=4, m=1)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty
    assert not verdict.certificate.is_full_apartment(W5)
    assert verdict.certificate.members(W5) == a.members

def test_frame_spanned_needs_room():
    # l - m = 2 < 3
    f = apartment(W3, W3.standard_frame(), 1).embedding()
    verdict = verify_theorem("thm4.4", W3, embedding=f, l=3, m=1)
    assert verdict.clause == "hypothesis"

def test_clique_independent_embedding():
    f = apartment(W5, W5.standard_frame(), 1).embedding()
    verdict = verify_theorem("thm4.5", W5, embedding=f, l=5, m=1)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty

def test_clique_independent_needs_the_extra_condition():
    # m + 2 <= n - k and l - m = 3
    f = generated_set(W5, 1, 1, 4).embedding()
    verdict = verify_theorem("thm4.5", W5, embedding=f, l=4, m=1)
    assert not verdict.accepted
    assert verdict.clause == "hypothesis"

def test_pj_n_k_plus_one_outside_big_stars():
    members = apartment(W4, W4.standard_frame(), 1).members
    verdict = verify_theorem("cor4.1", W4, xs=members)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty

def test_pj_n_k_plus_one_needs_codimension_three():
    members = apartment(W3, W3.standard_frame(), 1).members
    verdict = verify_theorem("cor4.1", W3, xs=members)
    assert verdict.clause == "hypothesis"

def test_pj_l_one_outside_big_stars():
    f = generated_set(W5, 1, 1, 4).embedding()
    verdict = verify_theorem("cor4.3", W5, embedding=f, l=4)
    assert verdict.accepted
    assert verdict.certificate.N.is_empty

def test_pj_l_one_needs_m_one():
    f = generated_set(W5, 1, 1, 4).embedding()
    verdict = verify_theorem("cor4.3", W5, embedding=f, l=4, m=2)
    assert verdict.clause == "hypothesis"
