from fractions import Fraction

import pytest
import sympy as sp

from horoalg.chevalley import build_chevalley
from horoalg.exactlinalg import SparseMatrix, kernel_basis, rank
from horoalg.repbuilder import (
    ModuleError,
    build_irrep,
    grade_module,
    verify_module,
)
from horoalg.rootdata import (
    CharacteristicElement,
    Weight,
    build_root_system,
    freudenthal_multiplicities,
    fundamental_weight,
    weyl_dimension,
)


def _module(fam, rank_, lam):
    r = build_root_system(fam, rank_)
    l = build_chevalley(r)
    if isinstance(lam, int):
        lam = fundamental_weight(r, lam)
    return r, l, build_irrep(l, r, lam)


# -- Clifford realization of the spin module of so(2m+1) -------------------------------

def _kron(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = sp.kronecker_product(out, m)
    return out


def clifford_spin(m):
    """Generators M_ab = [g_a, g_b]/4 of so(2m+1) on C^(2^m) (Jordan-Wigner gammas)."""
    x = sp.Matrix([[0, 1], [1, 0]])
    y = sp.Matrix([[0, -sp.I], [sp.I, 0]])
    z = sp.Matrix([[1, 0], [0, -1]])
    one = sp.eye(2)
    gammas = []
    for j in range(m):
        for p in (x, y):
            gammas.append(_kron(*([z] * j + [p] + [one] * (m - j - 1))))
    gammas.append(_kron(*([z] * m)))
    n = len(gammas)
    for a in range(n):
        for b in range(n):
            assert gammas[a] * gammas[b] + gammas[b] * gammas[a] == (2 * sp.eye(2 ** m) if a == b else sp.zeros(2 ** m))
    gens = {}
    for a in range(n):
        for b in range(a + 1, n):
            gens[(a, b)] = (gammas[a] * gammas[b] - gammas[b] * gammas[a]) / 4
    return gens


def _lie_closure_dim(mats):
    """Dimension of the Lie algebra generated by the given square sympy matrices."""
    basis = []
    flat = []

    def add(mat):
        v = {}
        for k, z in enumerate(mat):
            re, im = sp.re(z), sp.im(z)
            if re:
                v[2 * k] = Fraction(int(re.p), int(re.q))
            if im:
                v[2 * k + 1] = Fraction(int(im.p), int(im.q))
        if rank(SparseMatrix.from_rows(flat + [v], 2 * len(mat))) > len(flat):
            flat.append(v)
            basis.append(mat)
            return True
        return False

    for mat in mats:
        add(mat)
    frontier = list(basis)
    while frontier:
        new = []
        for a in frontier:
            for b in list(basis):
                c = a * b - b * a
                if add(c):
                    new.append(c)
        frontier = new
    return len(basis)


def _to_sympy(m: SparseMatrix):
    out = sp.zeros(m.rows, m.cols)
    for (i, j), v in m.entries.items():
        out[i, j] = sp.Rational(v.numerator, v.denominator)
    return out


def _epsilon_coords(w, m):
    # B_m: pi_k = e_1 + ... + e_k (k < m), pi_m = (e_1 + ... + e_m)/2
    return tuple(sum(w[k] for k in range(j, m - 1)) + w[m - 1] / 2 for j in range(m))


def _killing_index(ad_mats, rep_mats, x):
    """Tr_V(x x) / Killing(x, x) for a basis element index x."""
    adx = ad_mats[x]
    rx = rep_mats[x]
    return (rx * rx).trace() / (adx * adx).trace()


@pytest.mark.parametrize("m", [2, 3])
def test_spin_module_matches_clifford_realization(m):
    r, l, v = _module("B", m, m)
    assert v.dim == 2 ** m
    assert verify_module(v, l).passed

    gens = clifford_spin(m)
    n = 2 * m + 1
    # weights: eigenvalues of -i M_{2j,2j+1}, which are diagonal for these gammas
    carts = [-sp.I * gens[(2 * j, 2 * j + 1)] for j in range(m)]
    assert all(c.is_diagonal() for c in carts)
    cliff_weights = sorted(tuple(c[k, k] for c in carts) for k in range(2 ** m))
    ours = sorted(tuple(sp.Rational(x.numerator, x.denominator) for x in _epsilon_coords(w, m)) for w in v.weights)
    assert ours == cliff_weights
    assert len(set(ours)) == 2 ** m and all(abs(x) == sp.Rational(1, 2) for w in ours for x in w)

    # both realizations generate so(2m+1)
    assert _lie_closure_dim(list(gens.values())) == n * (n - 1) // 2
    ours_gens = [_to_sympy(v.action[f"{k}{i + 1}"]) for k in ("e", "f") for i in range(m)]
    assert _lie_closure_dim(ours_gens) == n * (n - 1) // 2 == l.dim

    # Dynkin index: Tr_V(x^2)/Killing(x, x) agrees
    keys = list(gens)
    flat = sp.Matrix([list(gens[k]) for k in keys]).T

    def coords(mat):
        sol = flat.solve_least_squares(sp.Matrix(list(mat)))
        assert flat * sol == sp.Matrix(list(mat))
        return sol

    ad = {}
    for k in keys[:1]:
        cols = [coords(gens[k] * gens[j] - gens[j] * gens[k]) for j in keys]
        ad[k] = sp.Matrix.hstack(*cols)
    cliff_index = _killing_index(ad, gens, keys[0])
    h = l.labels.index("h1")
    ours_index = _killing_index({h: _to_sympy(l.ad(h))}, {h: _to_sympy(v.basis_action[h])}, h)
    assert sp.nsimplify(cliff_index) == ours_index


def test_spin_module_commutant_is_scalar():
    r, l, v = _module("B", 3, 3)
    n = v.dim
    gens = [v.action[f"{k}{i + 1}"] for k in ("e", "f") for i in range(3)]
    # X -> [g, X] for every generator, stacked; kernel = commutant
    entries = {}
    row = 0
    for g in gens:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if g[i, k]:
                        entries[(row, k * n + j)] = entries.get((row, k * n + j), 0) + g[i, k]
                    if g[k, j]:
                        entries[(row, i * n + k)] = entries.get((row, i * n + k), 0) - g[k, j]
                row += 1
    op = SparseMatrix(row, n * n, {k: Fraction(x) for k, x in entries.items() if x})
    assert kernel_basis(op).dim == 1


def test_trivial_module():
    r = build_root_system("B", 3)
    l = build_chevalley(r)
    v = build_irrep(l, r, Weight.zero(3))
    assert v.dim == 1
    assert all(m.nnz() == 0 for m in v.action.values())
    assert all(m.nnz() == 0 for m in v.basis_action)
    assert verify_module(v, l).passed
    graded = grade_module(v, CharacteristicElement(1))
    assert list(graded) == [-1] and graded[-1].dim == 1


@pytest.mark.parametrize(
    "fam,rank_,i",
    [("C", 2, 1), ("C", 3, 2), ("C", 4, 1), ("G2", 2, 1), ("B", 3, 1), ("B", 4, 4), ("A", 2, 1)],
)
def test_dimension_and_census(fam, rank_, i):
    r, l, v = _module(fam, rank_, i)
    lam = fundamental_weight(r, i)
    assert v.dim == weyl_dimension(r, lam)
    assert v.weight_census() == freudenthal_multiplicities(r, lam)
    assert verify_module(v, l).passed


def test_f4_module():
    r = build_root_system("F4", 4)
    v = build_irrep(None, r, fundamental_weight(r, 4))
    assert v.dim == 26
    assert v.weight_census()[Weight.zero(4)] == 2
    assert v.basis_action == ()


def test_c2_standard_dim():
    _, _, v = _module("C", 2, 1)
    assert v.dim == 4


def test_non_dominant_rejected():
    r = build_root_system("C", 2)
    with pytest.raises(Exception):
        build_irrep(None, r, Weight.of(-1, 0))


def test_grade_spin_by_alpha1():
    r, l, v = _module("B", 3, 3)
    e = CharacteristicElement(1)
    assert sorted(set(v.eigenvalues(e))) == [Fraction(-1, 2), Fraction(1, 2)]
    graded = grade_module(v, e)
    assert {d: s.dim for d, s in graded.items()} == {-1: 4, 0: 4}


def test_grade_g2_standard_by_alpha2():
    r, l, v = _module("G2", 2, 1)
    graded = grade_module(v, CharacteristicElement(2))
    assert {d: s.dim for d, s in graded.items()} == {-1: 2, 0: 3, 1: 2}


def test_grade_with_bad_shift():
    r, l, v = _module("B", 3, 3)
    with pytest.raises(ModuleError):
        grade_module(v, CharacteristicElement(1), shift=0)


def test_eigenvalue_spacing_integral():
    for fam, rank_, i in [("B", 3, 3), ("G2", 2, 1), ("C", 3, 1), ("F4", 4, 4)]:
        r = build_root_system(fam, rank_)
        v = build_irrep(None, r, fundamental_weight(r, i))
        for k in range(1, rank_ + 1):
            ev = v.eigenvalues(CharacteristicElement(k))
            assert all((x - ev[0]).denominator == 1 for x in ev)


def test_lowest_eigenspace_is_irreducible_under_degree_zero():
    # generated from any single weight vector by the degree-0 part of l
    r, l, v = _module("G2", 2, 1)
    e = CharacteristicElement(2)
    low = grade_module(v, e)[-1]
    ad0 = [a for a in range(l.dim) if l.labels[a][0] == "h" or (l.labels[a][0] == "e" and l.labels[a][-1] == "0")]
    for start in low.basis:
        span = [start]
        changed = True
        while changed:
            changed = False
            for a in ad0:
                for vec in list(span):
                    img = v.basis_action[a].apply(vec)
                    if img and rank(SparseMatrix.from_columns(span + [img], v.dim)) > len(span):
                        span.append(img)
                        changed = True
        assert len(span) == low.dim


def test_fault_injection_detected():
    r, l, v = _module("C", 2, 1)
    bad = v.with_action_entry("e1", 0, 1, 1)
    res = verify_module(bad, l)
    assert not res.passed and "not represented" in res.failure
    bad = v.with_action_entry(3, 0, 1, 1)
    res = verify_module(bad, l)
    assert not res.passed and l.labels[3] in res.failure
    assert verify_module(v, l, exhaustive=True).passed
