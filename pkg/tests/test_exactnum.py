from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povs_wb.exactnum import (
    DimensionMismatch,
    Subspace,
    complement_basis,
    identity,
    kernel_basis,
    mat,
    mat_mul,
    mat_vec,
    rank,
    solve,
    subspace_equal,
    quotient_maps,
    vec,
)


def test_solve_identity():
    assert solve(identity(2), vec([3, 5])) == vec([3, 5])


def test_solve_underdetermined_verifies():
    m = mat([[1, 1]])
    x = solve(m, vec([2]))
    assert x is not None
    assert mat_vec(m, x) == vec([2])


def test_solve_inconsistent():
    assert solve(mat([[1], [1]]), vec([1, 2])) is None


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve(mat([[1, 0]]), vec([1, 2]))


def test_kernel_of_identity_is_trivial():
    assert kernel_basis(identity(2)).basis == ()


def test_kernel_of_sum_functional():
    k = kernel_basis(mat([[1, 1]]))
    assert k.basis == (vec([1, -1]),)


def test_kernel_of_zero_row_is_full():
    k = kernel_basis(mat([[0, 0]]))
    assert k.dim == 2


def test_complement_of_second_axis():
    s = Subspace.from_vectors(2, [vec([0, 1])])
    assert complement_basis(s).basis == (vec([1, 0]),)


def test_complement_of_trivial_is_full():
    assert complement_basis(Subspace.zero(2)).dim == 2


def test_complement_of_full_is_trivial():
    assert complement_basis(Subspace.full(2)).basis == ()


def test_complement_prefers_smallest_indices():
    # span{(1,1)}: e1 is independent of it, so greedy picks e1
    s = Subspace.from_vectors(2, [vec([1, 1])])
    assert complement_basis(s).basis == (vec([1, 0]),)


def test_subspace_equality_is_scale_invariant():
    a = Subspace.from_vectors(2, [vec([1, -1])])
    b = Subspace.from_vectors(2, [vec([-2, 2])])
    assert subspace_equal(a, b)


def test_subspace_inequality():
    a = Subspace.from_vectors(2, [vec([1, 0])])
    b = Subspace.from_vectors(2, [vec([0, 1])])
    assert not subspace_equal(a, b)


def test_empty_subspaces_equal():
    assert subspace_equal(Subspace.zero(3), Subspace.zero(3))


def test_quotient_maps_compose_to_identity():
    k = Subspace.from_vectors(3, [vec([0, 1, 1])])
    pi, sigma = quotient_maps(k)
    assert mat_mul(pi, sigma) == identity(2)
    for b in k.basis:
        assert all(x == 0 for x in mat_vec(pi, b))


small_entries = st.integers(min_value=-5, max_value=5)


@st.composite
def small_matrix(draw):
    rows = draw(st.integers(min_value=1, max_value=4))
    cols = draw(st.integers(min_value=1, max_value=4))
    return mat([[draw(small_entries) for _ in range(cols)] for _ in range(rows)])


@given(small_matrix())
@settings(max_examples=150, deadline=None)
def test_rank_nullity_and_kernel_annihilation(m):
    k = kernel_basis(m)
    for b in k.basis:
        assert all(x == 0 for x in mat_vec(m, b))
    assert rank(m) + k.dim == len(m[0])


@given(small_matrix())
@settings(max_examples=100, deadline=None)
def test_complement_joins_to_full_space(m):
    s = Subspace.from_vectors(len(m[0]), list(m))
    c = complement_basis(s)
    assert s.sum(c).dim == s.ambient_dim
    assert s.dim + c.dim == s.ambient_dim


@given(small_matrix())
@settings(max_examples=100, deadline=None)
def test_canonicalization_idempotent(m):
    s = Subspace.from_vectors(len(m[0]), list(m))
    again = Subspace.from_vectors(s.ambient_dim, list(s.basis))
    assert s.basis == again.basis


@given(small_matrix())
@settings(max_examples=100, deadline=None)
def test_solve_result_verifies_when_consistent(m):
    b = mat_vec(m, tuple(Q(1) for _ in range(len(m[0]))))
    x = solve(m, b)
    assert x is not None
    assert mat_vec(m, x) == b
