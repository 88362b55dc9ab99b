"""Graded Lie algebras with exact structure constants and the Chevalley basis.

The Chevalley basis is realised inside the smallest fundamental module.
Positive root vectors beyond the simple ones come from the extraspecial
recursion: for a non-simple positive root ``alpha`` let ``k`` be the smallest
index with ``beta = alpha - alpha_k`` a root and ``p`` the largest integer with
``beta - p alpha_k`` a root; then

    e_alpha  =  [e_k, e_beta] / (p + 1)
    e_-alpha = -[f_k, e_-beta] / (p + 1).

This fixes all signs deterministically from the root enumeration order, and
gives ``[e_alpha, e_-alpha] = h_alpha`` (the coroot).  Structure constants are
read off from matrix commutators and checked to be integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactlinalg import SparseMatrix, Subspace, solve
from .repbuilder import lowering_construction
from .rootdata import CharacteristicElement, RootSystem, Weight, fundamental_weight, weyl_dimension

Vec = Dict[int, Fraction]
Recipe = tuple

__all__ = [
    "GradedLieAlgebra",
    "build_chevalley",
    "grade_by",
    "cartan_involution_gram",
    "orthogonal_cartan",
    "LieAlgebraError",
]


class LieAlgebraError(ValueError):
    pass


def _add_into(acc: Vec, vec: Mapping[int, Fraction], c: Fraction = Fraction(1)) -> None:
    for k, v in vec.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class GradedLieAlgebra:
    """Finite-dimensional Lie algebra over Q with a weight-labelled basis.

    ``table`` holds ``[x_a, x_b]`` for ``a < b`` as sparse coefficient vectors;
    antisymmetry is implicit.  ``weights`` are Cartan weights (fundamental
    coordinates, possibly extended by extra charges).  ``recipes`` describe
    each basis element through simple generators, so modules can realise the
    whole basis.
    """

    labels: Tuple[str, ...]
    table: Dict[Tuple[int, int], Vec]
    degree: Tuple[int, ...]
    weights: Tuple[Weight, ...]
    gram: Tuple[Fraction, ...]
    root_system: Optional[RootSystem] = field(default=None, repr=False)
    roots: Tuple[Optional[Tuple[int, ...]], ...] = ()
    recipes: Optional[Tuple[Recipe, ...]] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket(self, a: int, b: int) -> Vec:
        if a == b:
            return {}
        if a < b:
            return self.table.get((a, b), {})
        return {k: -v for k, v in self.table.get((b, a), {}).items()}

    def bracket_vectors(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Vec:
        acc: Vec = {}
        for a, xa in x.items():
            for b, yb in y.items():
                if a != b:
                    _add_into(acc, self.bracket(a, b), xa * yb)
        return acc

    @cached_property
    def _ad_columns(self) -> Tuple[Dict[int, Vec], ...]:
        cols: List[Dict[int, Vec]] = [dict() for _ in range(self.dim)]
        for (a, b), v in self.table.items():
            cols[a][b] = v
            cols[b][a] = {k: -x for k, x in v.items()}
        return tuple(cols)

    def ad(self, a: int) -> SparseMatrix:
        """Matrix of ``ad(x_a)`` on the full basis."""
        cols = self._ad_columns[a]
        ent = {(k, b): x for b, v in cols.items() for k, x in v.items()}
        return SparseMatrix(self.dim, self.dim, ent)

    def ad_column(self, a: int, b: int) -> Vec:
        return self._ad_columns[a].get(b, {})

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.degree)))

    def indices_of_degree(self, d: int) -> List[int]:
        return [i for i, x in enumerate(self.degree) if x == d]

    def graded_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for d in self.degree:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def generator_indices(self) -> List[int]:
        if self.recipes is None:
            return list(range(self.dim))
        return [i for i, r in enumerate(self.recipes) if r and r[0] in ("e", "f", "cartan")]

    def with_degrees(self, degree: Sequence[int]) -> "GradedLieAlgebra":
        if len(degree) != self.dim:
            raise LieAlgebraError("degree map has the wrong length")
        return replace(self, degree=tuple(int(d) for d in degree))

    def with_gram(self, gram: Sequence[Fraction]) -> "GradedLieAlgebra":
        if len(gram) != self.dim or any(g <= 0 for g in gram):
            raise LieAlgebraError("Gram data must be positive and match the dimension")
        return replace(self, gram=tuple(Fraction(g) for g in gram))

    # -- checks ---------------------------------------------------------

    def jacobi_failure(self) -> Optional[Tuple[int, int, int]]:
        """First basis triple violating Jacobi, or None."""
        n = self.dim
        for a, b, c in combinations(range(n), 3):
            acc: Vec = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket(y, z)
                for k, v in inner.items():
                    if k != x:
                        _add_into(acc, self.bracket(x, k), v)
            if acc:
                return (a, b, c)
        return None

    def grading_failure(self) -> Optional[Tuple[int, int]]:
        for (a, b), v in self.table.items():
            d = self.degree[a] + self.degree[b]
            if any(self.degree[k] != d for k in v):
                return (a, b)
        return None

    def weight_failure(self) -> Optional[Tuple[int, int]]:
        for (a, b), v in self.table.items():
            w = self.weights[a] + self.weights[b]
            if any(self.weights[k] != w for k in v):
                return (a, b)
        return None

    def span_of_brackets(self, left: Sequence[int], right: Sequence[int]) -> Subspace:
        vecs = (self.bracket(a, b) for a in left for b in right)
        return Subspace.span(self.dim, vecs)

    def structure_constants_integral(self) -> bool:
        return all(x.denominator == 1 for v in self.table.values() for x in v.values())


# ---------------------------------------------------------------------------
# Chevalley construction
# ---------------------------------------------------------------------------


def _root_label(sign: str, root: Sequence[int]) -> str:
    return "e" + sign + "".join(str(x) for x in root)


def _faithful_weight(r: RootSystem) -> Weight:
    best = min(range(1, r.rank + 1), key=lambda i: (weyl_dimension(r, fundamental_weight(r, i)), i))
    return fundamental_weight(r, best)


def _extraspecial(r: RootSystem, alpha: Sequence[int]) -> Tuple[int, Tuple[int, ...], int]:
    for k in range(r.rank):
        beta = tuple(alpha[j] - (j == k) for j in range(r.rank))
        if beta in r.positive_root_set:
            p = 0
            probe = list(beta)
            while True:
                probe[k] -= 1
                if tuple(probe) in r.positive_root_set:
                    p += 1
                else:
                    break
            return k, beta, p
    raise LieAlgebraError(f"{alpha} has no extraspecial decomposition")


def build_chevalley(r: RootSystem) -> GradedLieAlgebra:
    """Chevalley basis: negative roots, then ``h_1..h_m``, then positive roots."""
    data = lowering_construction(r, _faithful_weight(r))
    n = r.rank
    npos = len(r.positive_roots)
    pos = r.positive_roots
    # index layout
    neg_order = list(reversed(range(npos)))
    idx_neg = {pos[k]: i for i, k in enumerate(neg_order)}
    idx_h = {k: npos + k for k in range(n)}
    idx_pos = {pos[k]: npos + n + k for k in range(npos)}
    dim = 2 * npos + n

    labels: List[str] = [""] * dim
    roots: List[Optional[Tuple[int, ...]]] = [None] * dim
    recipes: List[Recipe] = [()] * dim
    mats: List[Optional[SparseMatrix]] = [None] * dim
    for k in range(n):
        i = idx_h[k]
        labels[i] = f"h{k + 1}"
        roots[i] = (0,) * n
        recipes[i] = ("cartan", ((k, Fraction(1)),))
        mats[i] = data.cartan[k]
    for alpha in pos:
        ip, im = idx_pos[alpha], idx_neg[alpha]
        labels[ip] = _root_label("+", alpha)
        labels[im] = _root_label("-", alpha)
        roots[ip] = tuple(alpha)
        roots[im] = tuple(-x for x in alpha)
        if sum(alpha) == 1:
            k = alpha.index(1)
            recipes[ip] = ("e", k)
            recipes[im] = ("f", k)
            mats[ip] = data.raising[k]
            mats[im] = data.lowering[k]
        else:
            k, beta, p = _extraspecial(r, alpha)
            c = Fraction(1, p + 1)
            recipes[ip] = ("bracket", c, "e", k, idx_pos[beta])
            recipes[im] = ("bracket", -c, "f", k, idx_neg[beta])
            mats[ip] = data.raising[k].commutator(mats[idx_pos[beta]]).scale(c)
            mats[im] = data.lowering[k].commutator(mats[idx_neg[beta]]).scale(-c)

    root_to_idx: Dict[Tuple[int, ...], int] = {}
    for i, rt in enumerate(roots):
        if rt is not None and any(rt):
            root_to_idx[rt] = i
    mod_weights = data.weights

    def decompose(m: SparseMatrix, rt: Tuple[int, ...]) -> Vec:
        if m.is_zero():
            return {}
        if not any(rt):
            if not m.is_diagonal():
                raise LieAlgebraError("Cartan component is not diagonal")
            sys = SparseMatrix.from_rows([{k: w[k] for k in range(n) if w[k]} for w in mod_weights], n)
            sol = solve(sys, {i: m[i, i] for i in range(m.rows) if m[i, i]})
            if sol is None:
                raise LieAlgebraError("diagonal bracket is not in the Cartan subalgebra")
            return {idx_h[k]: v for k, v in sol.items()}
        target = root_to_idx.get(rt)
        if target is None:
            raise LieAlgebraError(f"nonzero bracket of weight {rt} which is not a root")
        tm = mats[target]
        (i, j), v = next(iter(sorted(tm.entries.items())))
        c = m[i, j] / v
        if tm.scale(c) != m:
            raise LieAlgebraError(f"bracket is not proportional to the root vector {labels[target]}")
        return {target: c}

    table: Dict[Tuple[int, int], Vec] = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            rt = tuple(x + y for x, y in zip(roots[a], roots[b]))
            if any(rt) and rt not in root_to_idx:
                continue
            v = decompose(mats[a].commutator(mats[b]), rt)
            if v:
                table[(a, b)] = v

    weights = tuple(r.root_to_weight(rt) for rt in roots)
    alg = GradedLieAlgebra(
        labels=tuple(labels),
        table=table,
        degree=(0,) * dim,
        weights=weights,
        gram=(Fraction(1),) * dim,
        root_system=r,
        roots=tuple(roots),
        recipes=tuple(recipes),
    )
    # coroot normalisation [e_alpha, e_-alpha] = h_alpha
    for alpha in pos:
        v = alg.bracket(idx_pos[alpha], idx_neg[alpha])
        expect = {idx_h[k]: c for k, c in enumerate(r.coroot_coords(alpha)) if c}
        if v != expect:
            raise LieAlgebraError(f"[e_a, e_-a] != h_a for a = {alpha}")
    if not alg.structure_constants_integral():
        raise LieAlgebraError("structure constants are not integral")
    return replace(alg, gram=cartan_involution_gram(alg))


def grade_by(l: GradedLieAlgebra, e: CharacteristicElement) -> GradedLieAlgebra:
    """Degrees from the eigenvalues of ``E_{alpha_i}`` (root coefficient of ``alpha_i``)."""
    r = l.root_system
    if r is None or not 1 <= e.simple_root_index <= r.rank:
        raise LieAlgebraError("characteristic element does not belong to this algebra")
    deg = []
    for w in l.weights:
        x = r.weight_to_root_coords(Weight(w.coords[: r.rank]))[e.k]
        if x.denominator != 1:
            raise LieAlgebraError("non-integral eigenvalue")
        deg.append(int(x))
    return l.with_degrees(deg)


def cartan_form(r: RootSystem) -> List[List[Fraction]]:
    """Invariant form on simple coroots: ``(h_i, h_j) = a_ij / d_j``."""
    return [[Fraction(r.cartan[i][j]) / r.symmetrizer[j] for j in range(r.rank)] for i in range(r.rank)]


def cartan_involution_gram(l: GradedLieAlgebra) -> Tuple[Fraction, ...]:
    """Diagonal Gram: root vectors norm 1, Cartan elements their invariant-form norm."""
    r = l.root_system
    if r is None or l.recipes is None:
        raise LieAlgebraError("not a Chevalley-basis algebra")
    form = cartan_form(r)
    out = []
    for rec in l.recipes:
        if rec and rec[0] == "cartan":
            c = dict(rec[1])
            out.append(sum((c[i] * c[j] * form[i][j] for i in c for j in c), Fraction(0)))
        else:
            out.append(Fraction(1))
    return tuple(out)


def orthogonal_cartan_coefficients(r: RootSystem) -> List[Dict[int, Fraction]]:
    """Gram-Schmidt of ``h_1..h_m`` under the invariant form (rational, unnormalised)."""
    form = cartan_form(r)

    def ip(x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Fraction:
        return sum((a * b * form[i][j] for i, a in x.items() for j, b in y.items()), Fraction(0))

    basis: List[Dict[int, Fraction]] = []
    for k in range(r.rank):
        v: Dict[int, Fraction] = {k: Fraction(1)}
        for u in basis:
            c = ip(v, u) / ip(u, u)
            for i, x in u.items():
                v[i] = v.get(i, 0) - c * x
        v = {i: x for i, x in v.items() if x}
        den = 1
        for x in v.values():
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append({i: x * den for i, x in v.items()})
    return basis


def orthogonal_cartan(l: GradedLieAlgebra) -> GradedLieAlgebra:
    """Replace ``h_1..h_m`` by an orthogonal basis ``t_1..t_m`` of the Cartan subalgebra."""
    r = l.root_system
    if r is None or l.recipes is None:
        raise LieAlgebraError("not a Chevalley-basis algebra")
    hidx = [i for i, rec in enumerate(l.recipes) if rec and rec[0] == "cartan"]
    n = len(hidx)
    coeffs = orthogonal_cartan_coefficients(r)
    # h_k = sum_m inv[k][m] t_m
    mat = [[coeffs[m].get(k, Fraction(0)) for k in range(n)] for m in range(n)]
    # t = mat h, so h_k = sum_m inv[k][m] t_m
    inv = _invert(mat)
    pos_of = {k: hidx[k] for k in range(n)}

    def to_t(vec: Vec) -> Vec:
        out: Vec = {}
        for i, x in vec.items():
            if i in hidx:
                k = hidx.index(i)
                for m in range(n):
                    c = inv[k][m]
                    if c:
                        _add_into(out, {pos_of[m]: c}, x)
            else:
                _add_into(out, {i: x})
        return out

    def bracket_t(a: int, b: int) -> Vec:
        # expand t-elements in h then bracket then re-express
        xa = {hidx[k]: c for k, c in coeffs[hidx.index(a)].items()} if a in hidx else {a: Fraction(1)}
        xb = {hidx[k]: c for k, c in coeffs[hidx.index(b)].items()} if b in hidx else {b: Fraction(1)}
        return to_t(l.bracket_vectors(xa, xb))

    table: Dict[Tuple[int, int], Vec] = {}
    for a in range(l.dim):
        for b in range(a + 1, l.dim):
            v = bracket_t(a, b)
            if v:
                table[(a, b)] = v
    labels = list(l.labels)
    recipes = list(l.recipes)
    for m, i in enumerate(hidx):
        labels[i] = f"t{m + 1}"
        recipes[i] = ("cartan", tuple(sorted(coeffs[m].items())))
    alg = replace(l, labels=tuple(labels), table=table, recipes=tuple(recipes))
    return replace(alg, gram=cartan_involution_gram(alg))


def _invert(mat: List[List[Fraction]]) -> List[List[Fraction]]:
    """Inverse of a small square matrix; returns ``inv`` with ``inv @ mat = I``."""
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]
