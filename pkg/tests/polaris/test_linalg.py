import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polaris.errors import DimensionMismatch, UnsupportedConfiguration
from polaris.linalg import (
    RowSpace,
    contains,
    enumerate_subspaces,
    extend_basis,
    join_all,
    left_kernel,
    meet_all,
    normalize,
    rank_of,
    rref_canonical,
    solve_coordinates,
)


def matrices(p, rows=4, cols=5):
    return st.lists(
        st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols), min_size=1, max_size=rows
    )


def test_canonical_form_does_not_depend_on_the_spanning_set():
    a = rref_canonical([[1, 1, 0, 0], [0, 1, 1, 0]], 2)
    b = rref_canonical([[1, 0, 1, 0], [1, 1, 0, 0], [0, 1, 1, 0]], 2)
    assert a == b
    assert a.rows == ((1, 0, 1, 0), (0, 1, 1, 0))

def test_rank_over_gf3():
    M = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    assert rank_of(M, 3) == 2
    assert rank_of(M, 5) == 3

def test_modulus_must_be_prime():
    with pytest.raises(UnsupportedConfiguration, match="prime"):
        rref_canonical([[1, 0]], 4)

def test_rows_of_unequal_length_are_rejected():
    with pytest.raises(DimensionMismatch):
        rref_canonical([[1, 0], [1, 0, 1]], 2)

def test_mixing_ambient_dimensions_is_rejected():
    a = rref_canonical([[1, 0, 0]], 2)
    b = rref_canonical([[1, 0, 0, 0]], 2)
    with pytest.raises(DimensionMismatch):
        a.meet(b)

def test_normalize_scales_the_leading_coordinate():
    assert normalize([0, 2, 1], 3) == (0, 1, 2)
    with pytest.raises(ValueError):
        normalize([0, 0], 3)

def test_meet_and_join_of_two_planes_in_gf2_4():
    a = rref_canonical([[1, 0, 0, 0], [0, 1, 0, 0]], 2)
    b = rref_canonical([[0, 1, 0, 0], [0, 0, 1, 0]], 2)
    assert a.meet(b).rows == ((0, 1, 0, 0),)
    assert a.join(b).rank == 3
    assert contains(a.join(b), a)
    assert not contains(a, b)

def test_meet_all_and_join_all():
    lines = [rref_canonical([[1, 0, 0], [0, 1, 0]], 2), rref_canonical([[1, 0, 0], [0, 0, 1]], 2)]
    assert meet_all([s for s in lines]).rows == ((1, 0, 0),)
    assert join_all(lines) == RowSpace.full(2, 3)

@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), matrices(p), matrices(p))))
def test_dimension_formula(data):
    p, A, B = data
    a = rref_canonical(A, p, 5)
    b = rref_canonical(B, p, 5)
    assert a.meet(b).rank + a.join(b).rank == a.rank + b.rank
    assert contains(a, a.meet(b)) and contains(b, a.meet(b))

@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(st.just(p), matrices(p, rows=5, cols=3))))
def test_left_kernel_annihilates(data):
    p, A = data
    M = np.array(A, dtype=np.int64)
    kernel = left_kernel(M, p)
    assert not ((kernel @ M) % p).any()
    assert kernel.shape[0] == M.shape[0] - rank_of(M, p)

def test_solve_coordinates_round_trip():
    basis = np.array([[1, 0, 1], [0, 1, 2]])
    vectors = np.array([[2, 1, 1], [1, 1, 0]])
    coords = solve_coordinates(vectors, basis, 3)
    assert ((coords @ basis - vectors) % 3 == 0).all()
    with pytest.raises(ValueError, match="not in the span"):
        solve_coordinates(np.array([[0, 0, 1]]), basis, 3)

def test_subspace_counts_are_gaussian_binomials():
    # [4 choose 2]_2 = 35, [3 choose 1]_3 = 13
    assert sum(1 for _ in enumerate_subspaces(4, 2, 2)) == 35
    assert sum(1 for _ in enumerate_subspaces(3, 1, 3)) == 13

def test_projective_points_of_a_plane():
    plane = rref_canonical([[1, 0, 0], [0, 1, 0]], 3)
    assert plane.projective_points().shape == (4, 3)

def test_extend_basis_skips_dependent_rows():
    base = np.array([[1, 0, 0]])
    candidates = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]])
    assert extend_basis(base, candidates, 2).tolist() == [[0, 1, 0], [0, 0, 1]]

@settings(max_examples=80, deadline=None)
@given(st.data())
def test_canonical_form_survives_a_row_scramble(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    A = data.draw(matrices(p))
    order = data.draw(st.permutations(range(len(A))))
    scales = data.draw(st.lists(st.integers(1, p - 1), min_size=len(A), max_size=len(A)))
    scrambled = [[(s * x) % p for x in A[i]] for i, s in zip(order, scales)]
    if len(scrambled) > 1:
        scrambled[1] = [(a + b) % p for a, b in zip(scrambled[1], scrambled[0])]
    assert rref_canonical(scrambled, p, 5) == rref_canonical(A, p, 5)

@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(st.just(p), matrices(p), matrices(p, rows=2))))
def test_containment_is_meeting_in_the_smaller_space(data):
    p, A, B = data
    a = rref_canonical(A, p, 5)
    b = rref_canonical(B, p, 5)
    assert contains(a, b) == (a.meet(b) == b)
    assert contains(a, a.meet(b))
    assert contains(a.join(b), b)
