from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from intersum.exactlin import (LinAlgError, Lattice, RationalSubspace, canonical_line, cone_index, det, hnf,
                               integer_kernel, inverse, mat_mul, nullspace, primitive, projected_lattice, rank,
                               rat, rat_str, saturate, solve, sublattice_index)

small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_rat_parsing_and_printing():
    assert rat("3/6") == Fraction(1, 2)
    assert rat(-2) == Fraction(-2)
    assert rat_str(Fraction(4, 2)) == "2"
    assert rat_str(Fraction(-1, 3)) == "-1/3"
    with pytest.raises((ValueError, TypeError)):
        rat("abc")
    with pytest.raises((ValueError, TypeError)):
        rat(0.5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_det_and_rank_match_sympy(A):
    M = sympy.Matrix(A)
    assert det(A) == Fraction(int(M.det()))
    assert rank(A) == M.rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_inverse_is_inverse(A):
    if det(A) == 0:
        with pytest.raises(LinAlgError):
            inverse(A)
        return
    n = len(A)
    assert mat_mul(A, inverse(A)) == [[int(i == j) for j in range(n)] for i in range(n)]


def test_solve_inconsistent_returns_none():
    assert solve([[1, 1], [2, 2]], [1, 3]) is None
    assert solve([[1, 1], [2, 2]], [1, 2]) is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_nullspace_dimension(r, c, data):
    A = data.draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    ns = nullspace(A, c)
    assert len(ns) == c - rank(A)
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in A)


def test_primitive_and_canonical_line():
    assert primitive((2, -4, 6)) == (1, -2, 3)
    assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    w, scale = canonical_line((-2, 4))
    assert w == (1, -2) and scale == -2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_hnf_row_space(r, c, data):
    A = data.draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    H, U = hnf(A)
    assert mat_mul(U, A) == H
    assert abs(det(U)) == 1


def test_integer_kernel_is_saturated():
    K = integer_kernel([[2, 4, 6]], 3)
    assert len(K) == 2
    # the kernel lattice of (1,2,3) has index one inside ker ∩ Z^3
    assert sublattice_index(K, saturate(K, 3)) == 1


def test_subspace_identity_and_sum():
    a = saturate([(2, 2)], 2)
    b = saturate([(-1, -1)], 2)
    assert a == b and hash(a) == hash(b)
    assert a + saturate([(1, 0)], 2) == RationalSubspace.full(2)
    assert RationalSubspace.zero(2).is_subspace_of(a)
    assert a.contains((3, 3)) and not a.contains((1, 0))
    assert a.perp() in ([(1, -1)], [(-1, 1)])
    assert a.annihilates((1, -1))


def test_projected_lattice_unimodular_image():
    L = saturate([(1, 1, 1)], 3)
    P, lat = projected_lattice(L)
    assert len(P) == 2 and lat.dim == 2
    assert sympy.Matrix(P).rank() == 2
    # P Z^3 = Z^2: the gcd of the 2x2 minors is one
    minors = [sympy.Matrix(P)[:, [i, j]].det() for i in range(3) for j in range(i + 1, 3)]
    assert sympy.gcd(minors) == 1
    with pytest.raises(LinAlgError):
        projected_lattice(RationalSubspace.full(2))


def test_indices():
    assert cone_index([(1, 2), (1, 0)]) == 2
    assert sublattice_index([(2, 2)], saturate([(1, 1)], 2)) == 2
    with pytest.raises(LinAlgError):
        cone_index([(1, 1), (2, 2)])
    assert Lattice.standard(2).contains((3, -1))
    assert not Lattice(((2, 0), (0, 1))).contains((1, 0))
