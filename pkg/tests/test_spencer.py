from fractions import Fraction
from itertools import combinations

import pytest

from horoalg.horolie import build_embedding, build_model, family_spec, hermitian_form
from horoalg.rootdata import Weight
from horoalg.spencer import (
    SpencerError,
    _rho_column,
    cohomology,
    dd_zero,
    equivariance_check,
    filtration_F1,
    hodge_check,
    kostant_check,
    pair_for,
)

F = Fraction
CRIT2 = [("b3", None, None), ("c", 2, 1), ("c", 3, 1), ("c", 3, 2), ("g2", None, None), ("b-spinor", 3, None)]
_CACHE = {}


def model(fam, m=None, i=None):
    key = (fam, m, i)
    if key not in _CACHE:
        _CACHE[key] = build_model(family_spec(fam, m, i))
    return _CACHE[key]


def _add(acc, key, v):
    acc[key] = acc.get(key, 0) + v
    if not acc[key]:
        del acc[key]


def _naive_d1(x, pair, i, y):
    """d of the cochain z_i -> g_y from (d phi)(a, b) = a.phi(b) - b.phi(a) - phi([a, b])."""
    g = x.g
    m = pair.m_idx
    out = {}
    for a, b in combinations(range(len(m)), 2):
        if b == i:
            for t, v in g.bracket(m[a], pair.gamma_idx[y]).items():
                _add(out, ((a, b), pair.gamma_pos[t]), v)
        if a == i:
            for t, v in g.bracket(m[b], pair.gamma_idx[y]).items():
                _add(out, ((a, b), pair.gamma_pos[t]), -v)
        c = g.bracket(m[a], m[b]).get(m[i])
        if c:
            _add(out, ((a, b), y), -c)
    return out


@pytest.mark.parametrize("fam,m,i", [("g2", None, None), ("c", 2, 1)])
def test_coboundary_matches_definition(fam, m, i):
    x = model(fam, m, i)
    pair = pair_for(x, "m,g")
    sp1, sp2 = pair.space(1), pair.space(2)
    cols = pair.coboundary_columns(1)
    for col_idx, (inp, y) in enumerate(sp1.keys):
        expect = _naive_d1(x, pair, inp[0], y)
        got = {sp2.keys[r]: v for r, v in cols[col_idx].items()}
        assert got == expect
    # d on C^0 is the action
    sp0 = pair.space(0)
    for col_idx, (inp, y) in enumerate(sp0.keys):
        got = {sp1.keys[r]: v for r, v in pair.coboundary_columns(0)[col_idx].items()}
        expect = {}
        for k, zk in enumerate(pair.m_idx):
            for t, v in x.g.bracket(zk, y).items():
                _add(expect, ((k,), t), v)
        assert got == expect


@pytest.mark.parametrize("fam,m,i", CRIT2)
def test_dd_zero(fam, m, i):
    pair = pair_for(model(fam, m, i), "m,g")
    assert dd_zero(pair, 0) and dd_zero(pair, 1)


def test_cochain_bookkeeping():
    pair = pair_for(model("g2"), "m,g")
    sp = pair.space(1)
    assert sp.dim == 7 * 22
    for k in range(sp.dim):
        (z,), y = sp.keys[k]
        assert sp.shift[k] == pair.gamma_degree[y] - pair.m_degree[z]
        assert sp.p_of(k) == sp.shift[k]
    assert sum(sp.p_dims().values()) == sp.dim
    assert pair.space(2).dim == 21 * 22


@pytest.mark.parametrize("fam,m,i", CRIT2)
def test_h1_vanishes(fam, m, i):
    x = model(fam, m, i)
    for which in ("m,g", "l-,l", "l-,u"):
        t = cohomology(pair_for(x, which), q_max=1, workers=1)
        assert t.double_check
        assert t.vanishing(1, p_min=1), which


def test_h1_vanishes_f4():
    x = model("f4")
    t = cohomology(pair_for(x, "m,g"), q_max=1, workers=1)
    assert t.double_check and t.vanishing(1)


def test_h0_is_centralizer_of_m():
    from horoalg.exactlinalg import SparseMatrix, kernel_basis

    x = model("g2")
    g = x.g
    t = cohomology(pair_for(x, "m,g"), q_max=0, workers=1)
    cols = []
    for v in range(g.dim):
        col = {}
        for j, z in enumerate(x.m_idx):
            for k, c in g.bracket(z, v).items():
                col[j * g.dim + k] = c
        cols.append(col)
    cent = kernel_basis(SparseMatrix.from_columns(cols, len(x.m_idx) * g.dim))
    assert sum(t.dim_h(p, 0) for p, q in t.entries) == cent.dim == 3
    # the centre of m is l_-2 + U_-
    assert t.dim_h(-1, 0) == 1 and t.dim_h(0, 0) == 2


def test_total_h1_against_dense_oracle():
    # ungraded dim H^1(m, g) = dim ker d1 - rank d0, by sympy on dense matrices
    sp = pytest.importorskip("sympy")
    x = model("c", 2, 1)
    pair = pair_for(x, "m,g")

    def dense(cols, nrows):
        mat = sp.zeros(nrows, len(cols))
        for j, col in enumerate(cols):
            for i, v in col.items():
                mat[i, j] = sp.Rational(v.numerator, v.denominator)
        return mat

    d0 = dense(pair.coboundary_columns(0), pair.space(1).dim)
    d1 = dense(pair.coboundary_columns(1), pair.space(2).dim)
    total = (d1.shape[1] - d1.rank()) - d0.rank()
    t = cohomology(pair, q_max=1, workers=1)
    assert total == sum(t.dim_h(p, 1) for p, q in t.entries if q == 1)


def test_p_range_padding():
    t = cohomology(pair_for(model("c", 2, 1), "m,g"), p_range=range(0, 7), q_max=1, workers=1)
    assert all((p, 1) in t.entries and t.dim_h(p, 1) == 0 for p in range(1, 7))


def test_workers_do_not_change_table():
    pair = pair_for(model("c", 2, 1), "m,g")
    a = cohomology(pair, q_max=1, workers=1).to_json()
    b = cohomology(pair_for(model("c", 2, 1), "m,g"), q_max=1, workers=2).to_json()
    assert a == b


# -- Hodge decomposition ------------------------------------------------------------------


@pytest.mark.parametrize("fam,m,i", [("g2", None, None), ("c", 2, 1), ("c", 3, 1), ("b3", None, None)])
def test_hodge_both_modes(fam, m, i):
    x = model(fam, m, i)
    grams = [hermitian_form(x, "weight"), hermitian_form(x, "trace", build_embedding(x))]
    for gram in grams:
        pair = pair_for(x, "m,g", gram)
        for q in (1, 2):
            res = hodge_check(pair, q)
            assert res.passed
            assert res.details["dim_image"] + res.details["dim_ker_adjoint"] == res.details["dim_C"]


def test_adjoint_is_adjoint():
    x = model("g2")
    gram = hermitian_form(x, "trace", build_embedding(x))
    pair = pair_for(x, "m,g", gram)
    sp1, sp2 = pair.space(1), pair.space(2)
    d = pair.coboundary_columns(1)
    ds = pair.adjoint_columns(2)
    # <d phi, psi> = <phi, d* psi> on basis pairs
    for j in range(0, sp1.dim, 7):
        for k, v in d[j].items():
            assert v * sp2.gram[k] == ds[k].get(j, 0) * sp1.gram[j]


def test_filtration_double_count():
    for fam, m, i in CRIT2:
        pair = pair_for(model(fam, m, i), "m,g")
        idx, counts = filtration_F1(pair)
        assert counts["direct"] == counts["sum_over_p"] == len(idx)


def test_kostant():
    for fam, m, i in CRIT2 + [("f4", None, None)]:
        res = kostant_check(model(fam, m, i))
        assert res.passed, (fam, res.details)


def test_kostant_lowest_weight_g2():
    res = kostant_check(model("g2"))
    # lambda = pi_1, alpha_2 = -3 pi_1 + 2 pi_2, sigma_alpha(lambda) = lambda
    assert res.details["sigma_alpha_lambda"] == Weight.of(1, 0)
    assert res.details["xi_sigma"] == Weight.of(2, -2)


# -- the action rho_* of g_{>=0} on cochains ---------------------------------------------------


def _rho_matrix(pair, a, q):
    sp = pair.space(q)
    return [_rho_column(pair, a, key, sp.index) for key in sp.keys]


def _apply(cols, vec):
    out = {}
    for j, v in vec.items():
        for k, x in cols[j].items():
            _add(out, k, v * x)
    return out


def _compose(left, right):
    return [_apply(left, col) for col in right]


def _combo(pair, vec, q):
    cols = None
    for a, c in vec.items():
        m = _rho_matrix(pair, a, q)
        part = [{k: c * v for k, v in col.items()} for col in m]
        cols = part if cols is None else [_merge(p, r) for p, r in zip(cols, part)]
    return cols or [dict() for _ in range(pair.space(q).dim)]


def _merge(a, b):
    out = dict(a)
    for k, v in b.items():
        _add(out, k, v)
    return out


def test_rho_is_a_representation():
    x = model("c", 2, 1)
    pair = pair_for(x, "m,g")
    g = x.g
    h = [a for a in range(g.dim) if g.degree[a] >= 0]
    mats = {a: _rho_matrix(pair, a, 1) for a in h}
    for a in h[::2]:
        for b in h[1::3]:
            lhs = [_merge(p, {k: -v for k, v in r.items()})
                   for p, r in zip(_compose(mats[a], mats[b]), _compose(mats[b], mats[a]))]
            rhs = _combo(pair, g.bracket(a, b), 1)
            assert lhs == rhs


@pytest.mark.parametrize("fam,m,i", [("g2", None, None), ("c", 2, 1)])
def test_rho_commutes_with_d_on_g0(fam, m, i):
    x = model(fam, m, i)
    pair = pair_for(x, "m,g")
    for a in x.g0_idx:
        for q in (0, 1):
            d = pair.coboundary_columns(q)
            lhs = _compose(d, _rho_matrix(pair, a, q))
            rhs = _compose(_rho_matrix(pair, a, q + 1), d)
            assert lhs == rhs, x.g.labels[a]


def test_equivariance_weight_mode_cartan():
    x = model("c", 2, 1)
    pair = pair_for(x, "m,g")
    cartan = [a for a in x.g0_idx if x.g.labels[a][0] in "tc"]
    assert cartan and equivariance_check(pair, cartan).passed


@pytest.mark.parametrize("fam,m,i", [("g2", None, None), ("c", 2, 1), ("c", 3, 1), ("b3", None, None)])
def test_equivariance_trace_mode_by_part(fam, m, i):
    x = model(fam, m, i)
    pair = pair_for(x, "m,g", hermitian_form(x, "trace", build_embedding(x)))
    l_set = set(x.l_idx)
    l_g0 = [a for a in x.g0_idx if a in l_set or a == x.c_idx]
    l_f1 = [a for a in x.f1h_idx if a in l_set]
    u_g0 = [a for a in x.g0_idx if a not in l_set and a != x.c_idx]
    assert equivariance_check(pair, l_g0).passed
    assert equivariance_check(pair, l_f1).passed
    # the U parts of g_0 do not commute with d*: the adjoint of ad(u) leaves g
    if u_g0:
        res = equivariance_check(pair, u_g0[:1], qs=(1,))
        assert res.failed


def test_equivariance_needs_full_gamma():
    pair = pair_for(model("g2"), "l-,l")
    with pytest.raises(SpencerError):
        equivariance_check(pair, [0])
