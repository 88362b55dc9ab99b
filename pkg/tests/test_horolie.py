from fractions import Fraction

import pytest

from horoalg.chevalley import GradedLieAlgebra
from horoalg.exactlinalg import SparseMatrix
from horoalg.horolie import (
    B3_TABLE,
    EmbeddingCapExceeded,
    FamilyError,
    b3_table_pattern,
    build_embedding,
    build_model,
    family_spec,
    gradation_table,
    hermitian_form,
    kostant_weights,
    match_b3_table,
    rank_locus_is_origin,
    certify_rank_locus,
    trace_form,
    trace_form_report,
    verify_bracket_rank,
    verify_dimension_identity,
    verify_fundamental,
    verify_gradation,
    verify_structure,
    verify_transitive,
)
from horoalg.rootdata import Weight

F = Fraction

FAMILIES = [
    ("b-spinor", 3, None),
    ("b-spinor", 4, None),
    ("b-spinor", 5, None),
    ("b3", None, None),
    ("c", 2, 1),
    ("c", 3, 1),
    ("c", 3, 2),
    ("c", 4, 2),
    ("f4", None, None),
    ("g2", None, None),
]

_CACHE = {}


def model(fam, m=None, i=None):
    key = (fam, m, i)
    if key not in _CACHE:
        _CACHE[key] = build_model(family_spec(fam, m, i))
    return _CACHE[key]


# lowest U eigenvalue, its multiplicity and the depth of l
EIGEN = {
    ("b-spinor", 3, None): (F(-1), 2, 2),
    ("b-spinor", 4, None): (F(-3, 2), 2, 2),
    ("b-spinor", 5, None): (F(-2), 2, 2),
    ("b3", None, None): (F(-1, 2), 4, 1),
    ("c", 2, 1): (F(-1, 2), 2, 1),
    ("c", 3, 1): (F(-1), 2, 2),
    ("c", 3, 2): (F(-1, 2), 3, 1),
    ("c", 4, 2): (F(-1), 3, 2),
    ("f4", None, None): (F(-2), 3, 3),
    ("g2", None, None): (F(-1), 2, 2),
}


@pytest.mark.parametrize("fam,m,i", FAMILIES)
def test_eigenspace_census(fam, m, i):
    x = model(fam, m, i)
    low, mult, depth = EIGEN[(fam, m, i)]
    dims = x.u_eigenspace_dims()
    assert min(dims) == low and dims[low] == mult
    assert x.l_depth() == depth
    assert verify_gradation(x).passed
    # eigenvalues symmetric about zero (U is self-contragredient up to the grading)
    assert sorted(dims) == sorted(-k for k in dims)


def test_g2_census_values():
    x = model("g2")
    t = gradation_table(x)
    assert t["dim_g"] == 22 and t["dim_m"] == 7
    assert x.u_eigenspace_dims() == {F(-1): 2, F(0): 3, F(1): 2}
    assert t["l_eigenspace_dims"] == {-2: 1, -1: 4, 0: 4, 1: 4, 2: 1}


def test_b3_census_values():
    x = model("b3")
    assert x.u_eigenspace_dims() == {F(-1, 2): 4, F(1, 2): 4}
    assert len(x.l_minus) == 5


@pytest.mark.parametrize("fam,m,i", FAMILIES)
def test_structure_and_degree_rules(fam, m, i):
    x = model(fam, m, i)
    res = verify_structure(x)
    assert res.passed, res.reason
    g = x.g
    # U degree = eigenvalue + mu(U) - 1, c in degree 0
    for a, ev in zip(x.u_idx, x.u_eigenvalues):
        assert g.degree[a] == ev + x.mu_u - 1
    assert g.degree[x.c_idx] == 0
    assert x.g.labels[: x.dim_l] == tuple(g.labels[a] for a in x.l_idx)


@pytest.mark.parametrize("fam,m,i", FAMILIES)
def test_fundamental_and_transitive(fam, m, i):
    x = model(fam, m, i)
    assert verify_fundamental(x).passed
    res = verify_transitive(x)
    assert res.passed and res.details["l_minus1_faithful"]


def test_fundamental_detects_misplaced_u_minus():
    x = model("g2")
    deg = list(x.g.degree)
    for a in x.u_minus:
        deg[a] = -2
    bad = x.with_degrees(deg)
    res = verify_fundamental(bad)
    assert res.failed and "g_-2" in res.reason


def test_transitivity_fails_on_abelian_toy():
    w = Weight.zero(1)
    toy = GradedLieAlgebra(
        labels=("x", "y", "z"),
        table={},
        degree=(-1, -1, 0),
        weights=(w, w, w),
        gram=(F(1), F(1), F(1)),
    )
    res = verify_transitive(toy)
    assert res.failed
    assert res.details["levels"] == [{"degree": 0, "dim_g_p": 1, "rank": 0}]


@pytest.mark.parametrize(
    "fam,m,i,expect",
    [
        # (dim l_-, dim U_-, roots meeting {alpha, beta})
        ("g2", None, None, (5, 2, 6)),
        ("c", 2, 1, (3, 2, 4)),
        ("b3", None, None, (5, 4, 8)),
        ("c", 3, 2, (6, 3, 8)),
        ("f4", None, None, (20, 3, 22)),
    ],
)
def test_dimension_identity_values(fam, m, i, expect):
    x = model(fam, m, i)
    res = verify_dimension_identity(x)
    assert res.passed
    d = res.details
    assert (d["dim_l_minus"], d["dim_u_minus"], d["roots_meeting_alpha_or_beta"]) == expect
    assert d["dim_m"] == expect[0] + expect[1] == expect[2] + 1


@pytest.mark.parametrize("fam,m,i", FAMILIES)
def test_dimension_identity_all(fam, m, i):
    assert verify_dimension_identity(model(fam, m, i)).passed


def test_family_errors():
    for args in [("c", 3, 3), ("c", 2, 0), ("c", None, None), ("b-spinor", 2, None), ("e8", None, None)]:
        with pytest.raises(FamilyError):
            family_spec(*args)


def test_c_family_ordering():
    s = family_spec("c", 3, 1)
    assert (s.alpha_index, s.beta_index, s.u_weight) == (2, 1, 1)
    assert (s.v_alpha_weight, s.v_beta_weight) == (2, 1)
    assert s.label == "C(3,1)" and s.slug == "c-3-1"


# -- embeddings and trace form -------------------------------------------------------------


@pytest.mark.parametrize(
    "fam,m,i,na,nb,cnorm",
    [
        ("g2", None, None, 14, 7, F(14, 3)),
        ("c", 2, 1, 5, 4, F(20, 9)),
        ("c", 3, 1, 14, 6, F(21, 5)),
        ("b3", None, None, 7, 8, F(56, 15)),
    ],
)
def test_embedding_and_trace_form(fam, m, i, na, nb, cnorm):
    x = model(fam, m, i)
    emb = build_embedding(x)
    assert (emb.n_alpha, emb.n_beta) == (na, nb)
    # c-norm is n_alpha n_beta / n
    assert cnorm == F(na * nb, na + nb)
    rep = trace_form_report(x, emb)
    assert rep.passed, rep.details
    assert rep.details["c_norm"] == cnorm
    gram = hermitian_form(x, "trace", emb)
    assert all(v > 0 for v in gram)


def test_embedding_cap():
    with pytest.raises(EmbeddingCapExceeded):
        build_embedding(model("f4"))
    with pytest.raises(EmbeddingCapExceeded):
        build_embedding(model("g2"), cap=20)


def test_trace_form_matrix_units():
    n = 4
    ones = (F(1),) * n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            eij = SparseMatrix(n, n, {(i, j): 1})
            for k in range(n):
                for l in range(n):
                    if k == l:
                        continue
                    ekl = SparseMatrix(n, n, {(k, l): 1})
                    assert trace_form(eij, ekl, ones) == (1 if (i, j) == (k, l) else 0)
    ident = SparseMatrix.identity(n)
    assert trace_form(ident, ident, ones) == 0
    # unequal norms rescale the off-diagonal units
    s = (F(1), F(3), F(2), F(5))
    e01 = SparseMatrix(n, n, {(0, 1): 1})
    assert trace_form(e01, e01, s) == F(1, 3)


def test_hermitian_form_modes():
    x = model("c", 2, 1)
    assert hermitian_form(x, "weight") == x.g.gram
    with pytest.raises(ValueError):
        hermitian_form(x, "trace")
    with pytest.raises(ValueError):
        hermitian_form(x, "other")


# -- B3 bracket table and rank property ---------------------------------------------------------


def test_b3_zero_pattern():
    x = model("b3")
    pattern, _ = b3_table_pattern(x)
    assert len(pattern) == 4 and all(len(r) == 5 for r in pattern)
    assert sum(map(sum, pattern)) == sum(t is not None for row in B3_TABLE for t in row) == 12
    assert match_b3_table(x)
    # the reference image labels are not realizable in weight bases
    assert not match_b3_table(x, targets=True)


def test_rank_weight_vectors():
    assert verify_bracket_rank(model("g2"), 5).details["weight_vector_ranks"] == [2, 2, 2]
    assert verify_bracket_rank(model("b3"), 5).details["weight_vector_ranks"] == [3, 3, 3, 3]


@pytest.mark.parametrize("fam,m,i", FAMILIES)
def test_rank_property(fam, m, i):
    res = verify_bracket_rank(model(fam, m, i), n_samples=200, seed=0)
    assert res.passed and res.details["min_rank"] >= 2


def test_rank_seed_changes_samples_only():
    a = verify_bracket_rank(model("c", 3, 1), 20, seed=1)
    b = verify_bracket_rank(model("c", 3, 1), 20, seed=1)
    assert a.details == b.details
    with pytest.raises(ValueError):
        verify_bracket_rank(model("c", 3, 1), 0)


@pytest.mark.parametrize("fam,m,i", [("g2", None, None), ("c", 2, 1), ("b3", None, None), ("c", 3, 1)])
def test_rank_certificate(fam, m, i):
    assert certify_rank_locus(model(fam, m, i))


def test_rank_locus_counterexamples():
    one = F(1)
    # [[x, y], [0, 0]] has rank 1 everywhere off the origin
    assert not rank_locus_is_origin([[{0: one}, {1: one}], [{}, {}]], 2)
    # [[x, y], [-y, x]] has rank 2 off the origin over Q but not over C (x = i y)
    assert not rank_locus_is_origin([[{0: one}, {1: one}], [{1: -one}, {0: one}]], 2)
    # diag(x, x) in one variable: rank 2 off the origin
    assert rank_locus_is_origin([[{0: one}, {}], [{}, {0: one}]], 1)


def test_kostant_weights():
    for fam, m, i in FAMILIES:
        x = model(fam, m, i)
        k = kostant_weights(x)
        assert k["sigma_alpha_lambda"] == k["lambda"]
        assert k["xi"] == -(k["lambda"] + k["alpha"])
