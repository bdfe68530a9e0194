import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverdual.lattice import (
    FiniteAbelianGroup,
    LatticeError,
    Sublattice,
    congruence_kernel,
    determinant,
    fixed_sublattice,
    integer_kernel,
    mat_mul,
    quotient_structure,
    smith_normal_form,
    unimodular_inverse,
)
from oracles import det_index, smith_invariants

small_ints = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(lambda n: matrices(m, n))))
def test_smith_form_reconstructs(M):
    D, U, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert sorted(d for d in map(abs, nz) if d != 1) == smith_invariants(M)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: matrices(r, r)))
def test_quotient_order_matches_determinant(M):
    if determinant(M) == 0:
        return
    S = Sublattice.span(len(M), M)
    assert quotient_structure(len(M), S).order == det_index(M)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: matrices(r, r)), st.integers(2, 6))
def test_congruence_kernel_membership(M, n):
    K = congruence_kernel(M, n, len(M))
    r = len(M)
    for y in itertools.product(range(-2, 3), repeat=r):
        expected = all(sum(M[i][j] * y[j] for j in range(r)) % n == 0 for i in range(r))
        assert (y in K) == expected


def test_integer_kernel_saturated():
    K = integer_kernel([[2, 4]])
    assert K.basis == ((-2, 1),) or K.basis == ((2, -1),)


def test_sublattice_canonical_and_index():
    a = Sublattice.span(2, [(2, 0), (0, 3)])
    b = Sublattice.span(2, [(2, 3), (0, 3), (4, 0)])
    assert a == b
    assert a.index_in(Sublattice.full(2)) == 6
    assert (4, 6) in a and (1, 0) not in a


def test_finite_group_text():
    assert str(FiniteAbelianGroup((2, 2), 1)) == "Z/2 x Z/2 x Z"
    assert str(FiniteAbelianGroup(())) == "trivial"
    with pytest.raises(LatticeError):
        FiniteAbelianGroup((2, 3))


def test_unimodular_inverse_and_fixed():
    g = [[0, 1], [1, 0]]
    assert unimodular_inverse(g) == ((0, 1), (1, 0))
    assert fixed_sublattice(2, g).basis == ((1, 1),)
    with pytest.raises(LatticeError):
        unimodular_inverse([[2, 0], [0, 1]])
