"""Irreducible highest-weight modules built by cyclic lowering.

The module ``V(lambda)`` is grown one weight level at a time.  At a weight
``mu`` the candidates are ``f_k b`` for basis vectors ``b`` of weight
``mu + alpha_k``.  Their raising images follow from

    e_j f_k b = f_k e_j b + delta_jk <wt(b), alpha_k^vee> b,

and their contravariant pairings from ``<f_k b, y> = <b, e_k y>``.  A
Gram-Schmidt pass over the candidate Gram matrix keeps an orthogonal basis
and drops dependent candidates (the form is positive definite on the
irreducible quotient, so a vanishing residual norm means dependence).
Lowering matrices are then the adjoints of the raising ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .exactlinalg import SparseMatrix, Subspace, diagonal
from .rootdata import CharacteristicElement, RootSystem, Weight, weyl_dimension

if TYPE_CHECKING:  # pragma: no cover
    from .chevalley import GradedLieAlgebra

Vec = Dict[int, Fraction]

__all__ = [
    "WeightModule",
    "ModuleError",
    "build_irrep",
    "lowering_construction",
    "grade_module",
    "verify_module",
    "ModuleCheck",
]


class ModuleError(ValueError):
    pass


@dataclass(frozen=True)
class LoweringData:
    """Output of the generator-level construction."""

    weights: Tuple[Tuple[int, ...], ...]
    norms: Tuple[Fraction, ...]
    raising: Tuple[SparseMatrix, ...]
    lowering: Tuple[SparseMatrix, ...]
    cartan: Tuple[SparseMatrix, ...]
    origins: Tuple[Tuple[Tuple[Fraction, int, int], ...], ...]
    levels: Tuple[int, ...]


def _primitive_scale(coeffs: Mapping[int, Fraction]) -> Fraction:
    """Positive scalar that turns ``coeffs`` into a primitive integer vector."""
    den = 1
    num = 0
    for v in coeffs.values():
        den = den * v.denominator // gcd(den, v.denominator)
    for v in coeffs.values():
        num = gcd(num, int(v * den))
    return Fraction(den, num or 1)


def lowering_construction(r: RootSystem, lam: Weight) -> LoweringData:
    """Generator matrices ``e_k, f_k, h_k`` of ``V(lambda)`` from Cartan data alone."""
    if len(lam) != r.rank or not (lam.is_integral() and lam.is_dominant()):
        raise ModuleError(f"highest weight {lam} is not dominant integral")
    n = r.rank
    cart = r.cartan
    alpha_w = [tuple(cart[j][k] for j in range(n)) for k in range(n)]

    weights: List[Tuple[int, ...]] = [lam.as_ints()]
    norms: List[Fraction] = [Fraction(1)]
    levels: List[int] = [0]
    origins: List[Tuple[Tuple[Fraction, int, int], ...]] = [()]
    # e_cols[k][b] = e_k b ; f_cols[k][b] = f_k b
    e_cols: List[List[Vec]] = [[{}] for _ in range(n)]
    f_cols: List[List[Vec]] = [[] for _ in range(n)]
    prev = [0]

    while prev:
        by_weight: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
        for b in prev:
            wb = weights[b]
            for k in range(n):
                mu = tuple(wb[j] - alpha_w[k][j] for j in range(n))
                by_weight.setdefault(mu, []).append((k, b))
        new: List[int] = []
        for mu in sorted(by_weight, reverse=True):
            cands = by_weight[mu]
            # raising images of each candidate, vectors on the previous level
            images: List[List[Vec]] = []
            for k, b in cands:
                imgs = []
                for j in range(n):
                    acc: Vec = {}
                    for c, x in e_cols[j][b].items():
                        for t, y in f_cols[k][c].items():
                            acc[t] = acc.get(t, 0) + x * y
                    if j == k and weights[b][k]:
                        acc[b] = acc.get(b, 0) + weights[b][k]
                    imgs.append({t: v for t, v in acc.items() if v})
                images.append(imgs)
            m = len(cands)
            gram = [[Fraction(0)] * m for _ in range(m)]
            for s, (k, b) in enumerate(cands):
                for t in range(s, m):
                    g = images[t][k].get(b, 0) * norms[b]
                    gram[s][t] = gram[t][s] = Fraction(g)
            kept: List[Tuple[Dict[int, Fraction], Fraction]] = []
            for s in range(m):
                coeffs: Dict[int, Fraction] = {s: Fraction(1)}
                for uco, unorm in kept:
                    ip = sum((c * gram[s][t] for t, c in uco.items()), Fraction(0))
                    if ip:
                        f = ip / unorm
                        for t, c in uco.items():
                            coeffs[t] = coeffs.get(t, 0) - f * c
                coeffs = {t: c for t, c in coeffs.items() if c}
                nrm = sum((ci * cj * gram[i][j] for i, ci in coeffs.items() for j, cj in coeffs.items()), Fraction(0))
                if nrm < 0:
                    raise ModuleError("contravariant form is not positive semidefinite")
                if nrm == 0:
                    continue
                sc = _primitive_scale(coeffs)
                coeffs = {t: c * sc for t, c in coeffs.items()}
                nrm *= sc * sc
                kept.append((coeffs, nrm))
            for coeffs, nrm in kept:
                v = len(weights)
                weights.append(mu)
                norms.append(nrm)
                levels.append(levels[prev[0]] + 1)
                origins.append(tuple((c, cands[t][0], cands[t][1]) for t, c in sorted(coeffs.items())))
                for j in range(n):
                    acc: Vec = {}
                    for t, c in coeffs.items():
                        for x, y in images[t][j].items():
                            acc[x] = acc.get(x, 0) + c * y
                    e_cols[j].append({x: y for x, y in acc.items() if y})
                new.append(v)
        # lowering on the previous level as the adjoint of raising
        for k in range(n):
            col = f_cols[k]
            while len(col) < len(weights):
                col.append({})
        for k in range(n):
            for v in new:
                for b, y in e_cols[k][v].items():
                    f_cols[k][b][v] = norms[b] * y / norms[v]
        prev = new

    dim = len(weights)
    expected = weyl_dimension(r, lam)
    if dim != expected:
        raise ModuleError(f"constructed dimension {dim} differs from Weyl dimension {expected}")
    raising = tuple(SparseMatrix.from_columns(e_cols[k], dim) for k in range(n))
    lowering = tuple(SparseMatrix.from_columns(f_cols[k][:dim], dim) for k in range(n))
    cartan_m = tuple(diagonal([w[k] for w in weights]) for k in range(n))
    return LoweringData(
        weights=tuple(weights),
        norms=tuple(norms),
        raising=raising,
        lowering=lowering,
        cartan=cartan_m,
        origins=tuple(origins),
        levels=tuple(levels),
    )


@dataclass(frozen=True)
class WeightModule:
    """Finite-dimensional weight module with exact action matrices.

    ``action`` maps generator names ``e1, f1, h1, ...`` (1-based) to
    matrices.  ``basis_action`` is aligned with the basis of the Lie algebra
    the module was built against, when one was given.  ``norms`` is the
    diagonal contravariant form (``e_k`` adjoint to ``f_k``).
    """

    dim: int
    weights: Tuple[Weight, ...]
    action: Dict[str, SparseMatrix]
    highest_weight: Weight
    norms: Tuple[Fraction, ...] = ()
    origins: Tuple[Tuple[Tuple[Fraction, int, int], ...], ...] = ()
    basis_action: Tuple[SparseMatrix, ...] = ()
    root_system: Optional[RootSystem] = field(default=None, repr=False)

    def generator(self, kind: str, k: int) -> SparseMatrix:
        """Generator matrix with a 0-based simple index."""
        return self.action[f"{kind}{k + 1}"]

    @property
    def rank(self) -> int:
        return len(self.highest_weight)

    def weight_census(self) -> Dict[Weight, int]:
        out: Dict[Weight, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return out

    def indices_of_weight(self, w: Weight) -> List[int]:
        return [i for i, x in enumerate(self.weights) if x == w]

    def eigenvalues(self, e: CharacteristicElement) -> Tuple[Fraction, ...]:
        r = self.root_system
        if r is None:
            raise ModuleError("module carries no root system")
        return tuple(r.weight_to_root_coords(w)[e.k] for w in self.weights)

    def with_action_entry(self, name: Union[str, int], row: int, col: int, delta: object) -> "WeightModule":
        """Copy with one action entry perturbed (fault injection).

        ``name`` is a generator name such as ``"e1"`` or an index into
        ``basis_action``.  Perturbing a generator also perturbs the basis
        element that carries the same matrix.
        """

        def bump(m: SparseMatrix) -> SparseMatrix:
            ent = m.entries
            ent[(row, col)] = ent.get((row, col), Fraction(0)) + Fraction(delta)
            return SparseMatrix(m.rows, m.cols, ent)

        act = dict(self.action)
        basis = list(self.basis_action)
        if isinstance(name, int):
            basis[name] = bump(basis[name])
        else:
            old = act[name]
            act[name] = bump(old)
            basis = [act[name] if m is old else m for m in basis]
        return WeightModule(
            self.dim, self.weights, act, self.highest_weight, self.norms, self.origins, tuple(basis), self.root_system
        )


def _matrices_for_algebra(l: "GradedLieAlgebra", data: LoweringData) -> Tuple[SparseMatrix, ...]:
    """Action of every basis element of ``l`` from its recipe."""
    out: List[Optional[SparseMatrix]] = [None] * l.dim
    dim = len(data.weights)

    def get(a: int) -> SparseMatrix:
        if out[a] is not None:
            return out[a]
        rec = l.recipes[a]
        kind = rec[0]
        if kind == "e":
            m = data.raising[rec[1]]
        elif kind == "f":
            m = data.lowering[rec[1]]
        elif kind == "cartan":
            m = SparseMatrix.zero(dim, dim)
            for k, c in rec[1]:
                m = m + data.cartan[k].scale(c)
        elif kind == "bracket":
            _, coef, gkind, k, other = rec
            g = data.raising[k] if gkind == "e" else data.lowering[k]
            m = g.commutator(get(other)).scale(coef)
        else:  # pragma: no cover
            raise ModuleError(f"unknown recipe {rec!r}")
        out[a] = m
        return m

    return tuple(get(a) for a in range(l.dim))


def build_irrep(l: Optional["GradedLieAlgebra"], r: RootSystem, lam: Weight) -> WeightModule:
    """``V(lambda)`` with generator matrices and, if ``l`` is given, the full basis action."""
    data = lowering_construction(r, lam)
    action: Dict[str, SparseMatrix] = {}
    for k in range(r.rank):
        action[f"e{k + 1}"] = data.raising[k]
        action[f"f{k + 1}"] = data.lowering[k]
        action[f"h{k + 1}"] = data.cartan[k]
    basis_action: Tuple[SparseMatrix, ...] = ()
    if l is not None:
        if l.recipes is None:
            raise ModuleError("algebra carries no generator recipes")
        basis_action = _matrices_for_algebra(l, data)
    return WeightModule(
        dim=len(data.weights),
        weights=tuple(Weight(tuple(Fraction(x) for x in w)) for w in data.weights),
        action=action,
        highest_weight=lam,
        norms=data.norms,
        origins=data.origins,
        basis_action=basis_action,
        root_system=r,
    )


def lowest_eigenvalue_shift(v: WeightModule, e: CharacteristicElement) -> Fraction:
    """``mu(U) - 1`` where ``-mu(U)`` is the lowest eigenvalue of ``E``."""
    return -min(v.eigenvalues(e)) - 1


def grade_module(v: WeightModule, e: CharacteristicElement, shift: Optional[object] = None) -> Dict[int, Subspace]:
    """Eigenspaces of ``E`` relabelled to integer degrees ``eigenvalue + shift``.

    With ``shift=None`` the lowest eigenspace lands in degree -1.
    """
    eig = v.eigenvalues(e)
    s = lowest_eigenvalue_shift(v, e) if shift is None else Fraction(shift)
    groups: Dict[int, List[int]] = {}
    for i, x in enumerate(eig):
        d = x + s
        if d.denominator != 1:
            raise ModuleError(f"eigenvalue {x} with shift {s} is not an integral degree")
        groups.setdefault(int(d), []).append(i)
    return {d: Subspace.coordinate(v.dim, idx) for d, idx in sorted(groups.items())}


@dataclass(frozen=True)
class ModuleCheck:
    passed: bool
    checked: int
    failure: Optional[str] = None


def verify_module(v: WeightModule, l: "GradedLieAlgebra", exhaustive: bool = False) -> ModuleCheck:
    """Check ``[rho(a), rho(b)] = rho([a, b])`` exactly.

    By default ``a`` runs over the simple generators and ``b`` over the whole
    basis; since the generators generate, this spans all bracket relations.
    """
    if l.dim and not v.basis_action:
        raise ModuleError("module has no basis action for this algebra")
    mats = v.basis_action
    gens = l.generator_indices() if not exhaustive else list(range(l.dim))
    checked = 0
    for a in gens:
        for b in range(l.dim):
            if a == b:
                continue
            lhs = mats[a].commutator(mats[b])
            rhs = SparseMatrix.zero(v.dim, v.dim)
            for c, x in l.bracket(a, b).items():
                rhs = rhs + mats[c].scale(x)
            checked += 1
            if lhs != rhs:
                return ModuleCheck(False, checked, f"[{l.labels[a]}, {l.labels[b]}] is not represented")
    # weight labels consistent with the Cartan action
    r = v.root_system
    if r is not None:
        for k in range(r.rank):
            h = v.action[f"h{k + 1}"]
            for i, w in enumerate(v.weights):
                if h[i, i] != w[k] or len(h.row(i)) > 1:
                    return ModuleCheck(False, checked, f"weight label of vector {i} disagrees with h{k + 1}")
    return ModuleCheck(True, checked)
