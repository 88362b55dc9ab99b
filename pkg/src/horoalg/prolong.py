"""Tanaka prolongation computed degree by degree.

An element of degree ``k >= 0`` is a linear map ``X`` on ``m`` raising degrees
by ``k`` and obeying ``X([a, b]) = [X(a), b] + [a, X(b)]``, where for ``Y`` of
degree ``>= 0`` and ``z`` in ``m`` the bracket ``[Y, z]`` means ``Y(z)``.
Values of ``X`` of nonnegative degree ``d`` are written in the coordinates of
the already computed space ``P_d``, so no bracket table on the prolonged
part is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .chevalley import GradedLieAlgebra
from .exactlinalg import SparseMatrix, Subspace, kernel_basis, rank, solve
from .report import CheckResult, outcome

Vec = Dict[int, Fraction]
Map = Dict[int, Vec]  # m position -> coordinates in the target degree space

__all__ = [
    "ProlongationError",
    "NegativePart",
    "ProlongationStep",
    "Prolongation",
    "prolong_step",
    "derivations_of_degree_zero",
    "verify_prolongation",
]


class ProlongationError(ValueError):
    pass


@dataclass(frozen=True)
class NegativePart:
    """A negatively graded Lie algebra ``m`` in its own basis ``0..n-1``."""

    degree: Tuple[int, ...]
    brackets: Dict[Tuple[int, int], Vec] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.degree)

    def bracket(self, a: int, b: int) -> Vec:
        if a == b:
            return {}
        if a < b:
            return self.brackets.get((a, b), {})
        return {k: -v for k, v in self.brackets.get((b, a), {}).items()}

    def of_degree(self, d: int) -> List[int]:
        return [i for i, x in enumerate(self.degree) if x == d]

    @classmethod
    def from_algebra(cls, g: GradedLieAlgebra, m_idx: Sequence[int]) -> "NegativePart":
        pos = {a: i for i, a in enumerate(m_idx)}
        table: Dict[Tuple[int, int], Vec] = {}
        for i, j in combinations(range(len(m_idx)), 2):
            br = g.bracket(m_idx[i], m_idx[j])
            if br:
                try:
                    table[(i, j)] = {pos[k]: v for k, v in br.items()}
                except KeyError:
                    raise ProlongationError("m is not closed under the bracket") from None
        deg = tuple(g.degree[a] for a in m_idx)
        if any(d >= 0 for d in deg):
            raise ProlongationError("m must be negatively graded")
        return cls(deg, table)

    @classmethod
    def abelian(cls, n: int) -> "NegativePart":
        return cls(tuple([-1] * n), {})


@dataclass
class ProlongationStep:
    degree: int
    basis: List[Map]
    injective_on_g_minus1: bool

    @property
    def dim(self) -> int:
        return len(self.basis)


class Prolongation:
    """The tower ``P_0, P_1, ...`` over a fixed ``m``.

    ``g0`` is a list of degree-0 derivations (maps in ``m`` coordinates);
    ``None`` means the full algebra of degree-0 derivations.
    """

    def __init__(self, m: NegativePart, g0: Optional[Sequence[Map]] = None):
        self.m = m
        if g0 is None:
            p0 = derivations_of_degree_zero(m)
        else:
            p0 = [dict(x) for x in g0]
            for x in p0:
                if not _is_derivation(m, {}, x, 0):
                    raise ProlongationError("a supplied degree-0 map is not a derivation of m")
            if _map_rank(m, p0, 0) != len(p0):
                raise ProlongationError("supplied degree-0 maps are linearly dependent")
        self.steps: Dict[int, ProlongationStep] = {0: ProlongationStep(0, p0, _injective(m, p0, 0))}

    def space_dim(self, d: int) -> int:
        if d < 0:
            return len(self.m.of_degree(d))
        return self.steps[d].dim

    def coordinate_index(self, d: int) -> List[int]:
        return self.m.of_degree(d) if d < 0 else list(range(self.steps[d].dim))

    def step(self, k: int) -> ProlongationStep:
        for j in range(1, k + 1):
            if j not in self.steps:
                self.steps[j] = prolong_step(self.m, self, j)
        return self.steps[k]

    def bracket_with_m(self, d: int, c: int, b: int) -> Vec:
        """``[Y_c, z_b]`` for basis element ``c`` of degree ``d`` (an ``m`` position when ``d < 0``)."""
        if d < 0:
            return self.m.bracket(c, b)
        return self.steps[d].basis[c].get(b, {})


def _injective(m: NegativePart, basis: Sequence[Map], k: int) -> bool:
    gm1 = set(m.of_degree(-1))
    restricted = [{b: v for b, v in x.items() if b in gm1} for x in basis]
    return _map_rank(m, restricted, k) == len(basis)


def _flatten(x: Map, width: int) -> Vec:
    return {b * width + c: v for b, vec in x.items() for c, v in vec.items()}


def _map_rank(m: NegativePart, basis: Sequence[Map], k: int) -> int:
    if not basis:
        return 0
    width = 1 + max((c for x in basis for vec in x.values() for c in vec), default=0)
    cols = [_flatten(x, width) for x in basis]
    return rank(SparseMatrix.from_columns(cols, m.dim * width))


def _is_derivation(m: NegativePart, _lower, x: Map, k: int) -> bool:
    """Derivation test for a degree-0 map in ``m`` coordinates."""
    if k != 0:
        raise ProlongationError("only degree-0 maps can be tested directly")
    for b, vec in x.items():
        if any(m.degree[c] != m.degree[b] for c in vec):
            return False
    for a, b in combinations(range(m.dim), 2):
        lhs: Vec = {}
        for c, v in m.bracket(a, b).items():
            for t, y in x.get(c, {}).items():
                lhs[t] = lhs.get(t, 0) + v * y
        rhs: Vec = {}
        for c, v in x.get(a, {}).items():
            for t, y in m.bracket(c, b).items():
                rhs[t] = rhs.get(t, 0) + v * y
        for c, v in x.get(b, {}).items():
            for t, y in m.bracket(a, c).items():
                rhs[t] = rhs.get(t, 0) + v * y
        if {t: v for t, v in lhs.items() if v} != {t: v for t, v in rhs.items() if v}:
            return False
    return True


def derivations_of_degree_zero(m: NegativePart) -> List[Map]:
    """Basis of the degree-preserving derivations of ``m``."""
    variables: List[Tuple[int, int]] = [(b, c) for b in range(m.dim) for c in m.of_degree(m.degree[b])]
    return _solve_derivations(m, variables, lambda d, c, b: m.bracket(c, b), lambda b: m.degree[b], 0)


def _solve_derivations(m: NegativePart, variables, bracket_with_m, target_degree, k) -> List[Map]:
    """Kernel of the derivation system for unknown values ``x[(b, c)]``.

    Equations are indexed by ``(a, b, coordinate)`` for ``a < b``; the value
    ``X(z_b)`` lives in degree ``deg b + k`` and ``[X(z_a), z_b]`` is read
    off through ``bracket_with_m``.
    """
    var_index = {v: i for i, v in enumerate(variables)}
    by_source: Dict[int, List[Tuple[int, int]]] = {}
    for (b, c) in variables:
        by_source.setdefault(b, []).append((b, c))
    rows: Dict[Tuple[int, int, int], Vec] = {}

    def add(key, var, val):
        row = rows.setdefault(key, {})
        i = var_index[var]
        nv = row.get(i, 0) + val
        if nv:
            row[i] = nv
        else:
            row.pop(i, None)

    for a, b in combinations(range(m.dim), 2):
        # X([z_a, z_b])
        for e, coef in m.bracket(a, b).items():
            for (_, c) in by_source.get(e, []):
                add((a, b, c), (e, c), coef)
        # - [X(z_a), z_b]
        da = target_degree(a)
        for (_, c) in by_source.get(a, []):
            for t, v in bracket_with_m(da, c, b).items():
                add((a, b, t), (a, c), -v)
        # - [z_a, X(z_b)] = + [X(z_b), z_a]
        db = target_degree(b)
        for (_, c) in by_source.get(b, []):
            for t, v in bracket_with_m(db, c, a).items():
                add((a, b, t), (b, c), v)
    mat = SparseMatrix.from_rows([r for r in rows.values() if r], len(variables))
    ker = kernel_basis(mat)
    out: List[Map] = []
    for vec in ker.basis:
        x: Map = {}
        for i, v in sorted(vec.items()):
            b, c = variables[i]
            x.setdefault(b, {})[c] = v
        out.append(x)
    return out


def prolong_step(m: NegativePart, lower: Prolongation, k: int) -> ProlongationStep:
    """Degree-``k`` prolongation from the tower through degree ``k - 1``."""
    if k < 1:
        raise ProlongationError("prolongation steps start at degree 1")
    for j in range(k):
        if j not in lower.steps:
            raise ProlongationError(f"degree {j} has not been computed")
    variables: List[Tuple[int, int]] = []
    for b in range(m.dim):
        d = m.degree[b] + k
        for c in lower.coordinate_index(d):
            variables.append((b, c))
    basis = _solve_derivations(m, variables, lower.bracket_with_m, lambda b: m.degree[b] + k, k)
    return ProlongationStep(k, basis, _injective(m, basis, k))


# ---------------------------------------------------------------------------
# comparison with a model
# ---------------------------------------------------------------------------


def _model_g0_maps(g: GradedLieAlgebra, m_idx: Sequence[int], g0: Sequence[int]) -> List[Map]:
    pos = {a: i for i, a in enumerate(m_idx)}
    maps = []
    for z in g0:
        x: Map = {}
        for b, zb in enumerate(m_idx):
            img = g.bracket(z, zb)
            if img:
                x[b] = {pos[t]: v for t, v in img.items()}
        maps.append(x)
    return maps


def _identify(g: GradedLieAlgebra, m_idx: Sequence[int], tower: Prolongation, top: int, g0: Sequence[int]) -> Tuple[bool, Dict[int, int]]:
    """Check that ``ad(g_k)|m`` spans exactly ``P_k`` for ``1 <= k <= top``.

    Builds coordinates of each ``g`` basis element inside ``P_k`` recursively
    (degree 0 elements are the given basis of ``P_0``).
    """
    pos = {a: i for i, a in enumerate(m_idx)}
    coords: Dict[int, Vec] = {z: {i: Fraction(1)} for i, z in enumerate(g0)}
    ranks: Dict[int, int] = {}
    ok = True
    for k in range(1, top + 1):
        step = tower.steps[k]
        width = max([tower.space_dim(m_deg + k) for m_deg in set(tower.m.degree)] + [tower.m.dim]) + 1
        cols = [_flatten(x, width) for x in step.basis]
        basis_mat = SparseMatrix.from_columns(cols, tower.m.dim * width)
        zs = g.indices_of_degree(k)
        for z in zs:
            x: Map = {}
            for b, zb in enumerate(m_idx):
                d = tower.m.degree[b] + k
                img = g.bracket(z, zb)
                vec: Vec = {}
                for t, v in img.items():
                    if d < 0:
                        vec[pos[t]] = vec.get(pos[t], 0) + v
                    else:
                        for c, y in coords[t].items():
                            vec[c] = vec.get(c, 0) + v * y
                vec = {c: v for c, v in vec.items() if v}
                if vec:
                    x[b] = vec
            sol = solve(basis_mat, _flatten(x, width))
            if sol is None:
                ok = False
                coords[z] = {}
            else:
                coords[z] = sol
        r = rank(SparseMatrix.from_columns([coords[z] for z in zs], max(step.dim, 1))) if zs else 0
        ranks[k] = r
        if r != len(zs) or r != step.dim:
            ok = False
    return ok, ranks


def verify_prolongation(
    model,
    extra_degrees: int = 2,
    g0_indices: Optional[Sequence[int]] = None,
    cohomology_table=None,
) -> CheckResult:
    """Criterion route (transitivity and ``H^{p,1} = 0``) against the direct degree-by-degree solve."""
    from .horolie import verify_transitive
    from .spencer import cohomology, pair_for

    g = model.g
    m_idx = list(model.m_idx)
    g0 = list(model.g0_idx) if g0_indices is None else list(g0_indices)
    neg = NegativePart.from_algebra(g, m_idx)
    tower = Prolongation(neg, _model_g0_maps(g, m_idx, g0))
    top = max(g.degree)
    direct_dims: Dict[int, int] = {}
    expected: Dict[int, int] = {}
    injective = True
    for k in range(1, top + extra_degrees + 1):
        st = tower.step(k)
        direct_dims[k] = st.dim
        expected[k] = len(g.indices_of_degree(k))
        injective = injective and st.injective_on_g_minus1
    shrunk = g0_indices is not None
    direct_ok = all(direct_dims[k] == expected[k] for k in direct_dims)
    identified, ranks = (False, {})
    if direct_ok:
        identified, ranks = _identify(g, m_idx, tower, top, g0)
    direct_ok = direct_ok and identified

    # universal degree-0 derivations contain the model's g_0
    universal = derivations_of_degree_zero(neg)
    model_g0 = _model_g0_maps(g, m_idx, list(model.g0_idx))
    r_univ = _map_rank(neg, universal, 0)
    r_both = _map_rank(neg, universal + model_g0, 0)
    contained = r_both == r_univ

    if cohomology_table is None:
        cohomology_table = cohomology(pair_for(model), q_max=1)
    crit_ok = bool(verify_transitive(model)) and cohomology_table.vanishing(1)
    details = {
        "direct_dims": direct_dims,
        "expected_dims": expected,
        "extra_degrees": extra_degrees,
        "ad_g_k_spans_p_k": identified,
        "identification_ranks": ranks,
        "injective_on_g_minus1": injective,
        "dim_g0_used": len(g0),
        "dim_universal_g0": r_univ,
        "universal_g0_contains_model_g0": contained,
        "criterion_route": crit_ok,
        "direct_route": direct_ok,
        "routes_agree": crit_ok == direct_ok,
        "shrunk_g0": shrunk,
    }
    ok = direct_ok and crit_ok and contained and injective
    reason = "direct prolongation disagrees with the model" if not direct_ok else "criterion route fails"
    return outcome("prolongation", ok, details, reason)
