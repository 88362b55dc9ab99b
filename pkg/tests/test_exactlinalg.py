from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from horoalg.exactlinalg import (
    GramError,
    SparseMatrix,
    Subspace,
    diagonal,
    gram_adjoint,
    image_basis,
    intersect,
    kernel_basis,
    rank,
    solve,
)

F = Fraction


def e(i):
    return {i: F(1)}


def test_rank_small_cases():
    assert rank(SparseMatrix(0, 0)) == 0
    assert rank(SparseMatrix.identity(3)) == 3
    assert rank(SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6]])) == 1


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.identity(3)).dim == 0
    assert kernel_basis(SparseMatrix.zero(2, 4)).dim == 4
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
    ker = kernel_basis(m)
    assert ker.dim == 2
    for v in ker.basis:
        assert m.apply(v) == {}


def test_intersect_examples():
    a = Subspace(3, [e(0), e(1)])
    b = Subspace(3, [e(1), e(2)])
    c = intersect(a, b)
    assert c == Subspace(3, [e(1)])
    assert intersect(a, a) == a
    assert intersect(Subspace(4, [e(0), e(1)]), Subspace(4, [e(2), e(3)])).dim == 0
    with pytest.raises(ValueError):
        intersect(Subspace(3, [e(0)]), Subspace(4, [e(0)]))


def test_gram_adjoint_examples():
    m = SparseMatrix.from_dense([[2]])
    a = gram_adjoint(m, diagonal([3]), diagonal([5]))
    assert a[0, 0] == F(10, 3)
    m = SparseMatrix.from_dense([[1, 2, 0], [0, 3, 4]])
    assert gram_adjoint(m, SparseMatrix.identity(3), SparseMatrix.identity(2)) == m.T
    with pytest.raises(GramError):
        gram_adjoint(m, SparseMatrix.from_dense([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), SparseMatrix.identity(2))
    with pytest.raises(GramError):
        gram_adjoint(m, diagonal([1, -1, 1]), SparseMatrix.identity(2))


def test_dependent_basis_rejected():
    with pytest.raises(ValueError):
        Subspace(2, [{0: 1, 1: 1}, {0: 2, 1: 2}])


def test_solve():
    m = SparseMatrix.from_dense([[1, 1], [1, -1]])
    x = solve(m, {0: 2, 1: 0})
    assert x == {0: 1, 1: 1}
    assert solve(SparseMatrix.from_dense([[1, 1], [2, 2]]), {0: 1, 1: 3}) is None


small = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    dense = [[F(draw(small), draw(st.sampled_from([1, 1, 2, 3]))) for _ in range(c)] for _ in range(r)]
    return SparseMatrix(r, c, {(i, j): dense[i][j] for i in range(r) for j in range(c)})


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + ker.dim == m.cols
    for v in ker.basis:
        assert m.apply(v) == {}
    # kernel plus row space fills the column space
    rows = [r for _, r in m.row_items()]
    assert Subspace.span(m.cols, rows + list(ker.basis)).dim == m.cols
    assert rank(m) == rank(m.T) == image_basis(m).dim


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_adjoint_involution(m, data):
    gd = [F(data.draw(st.integers(1, 7)), data.draw(st.integers(1, 5))) for _ in range(m.cols)]
    gc = [F(data.draw(st.integers(1, 7)), data.draw(st.integers(1, 5))) for _ in range(m.rows)]
    a = gram_adjoint(m, diagonal(gd), diagonal(gc))
    assert gram_adjoint(a, diagonal(gc), diagonal(gd)) == m
    # <m x, y>_cod == <x, a y>_dom on basis vectors
    for i in range(m.cols):
        for j in range(m.rows):
            assert m[j, i] * gc[j] == gd[i] * a[i, j]


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=5), matrices(max_dim=5))
def test_intersection_dimension(ma, mb):
    n = 5
    a = Subspace.span(n, [{k: v for k, v in r.items() if k < n} for _, r in ma.row_items()])
    b = Subspace.span(n, [{k: v for k, v in r.items() if k < n} for _, r in mb.row_items()])
    c = intersect(a, b)
    total = Subspace.span(n, list(a.basis) + list(b.basis)).dim
    assert c.dim == a.dim + b.dim - total
    assert c.issubspace(a) and c.issubspace(b)
