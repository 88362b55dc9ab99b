"""Generalized Spencer cochain complex of a negatively graded Lie algebra.

For ``m = sum_{p<0} g_p`` and a graded ``m``-module ``Gamma`` the cochains
``Hom(wedge^q m, Gamma)`` carry the bigrading

    C^{p,q} = sum_{j <= -q} Hom(wedge^q_j m, Gamma_{j+p+q-1}),

so an elementary cochain ``z_I^* (x) y`` lies in ``C^{p,q}`` with
``p = s + 1 - q`` where ``s = deg(y) - sum deg(z_i)`` is its degree shift.
The coboundary

    (d phi)(z_0..z_q) = sum_i (-1)^i z_i . phi(..^z_i..)
                      + sum_{i<j} (-1)^{i+j} phi([z_i, z_j], ..^z_i..^z_j..)

preserves ``s`` and every Cartan weight, so all linear algebra is done in
small blocks keyed by ``(s, weight)``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .chevalley import GradedLieAlgebra
from .exactlinalg import SparseMatrix, Subspace, intersect, kernel_basis, rank
from .report import CheckResult, outcome
from .rootdata import Weight

Vec = Dict[int, Fraction]
Key = Tuple[Tuple[int, ...], int]
BlockKey = Tuple[int, Weight]

__all__ = [
    "SpencerError",
    "SpencerPair",
    "CochainSpace",
    "CohomologyTable",
    "pair_for",
    "coboundary_matrix",
    "cohomology",
    "hodge_check",
    "filtration_F1",
    "equivariance_check",
    "kostant_check",
    "dd_zero",
    "worker_count",
]


class SpencerError(ValueError):
    pass


def worker_count() -> int:
    """Worker processes from ``HOROALG_THREADS`` (defaults to the CPU count)."""
    raw = os.environ.get("HOROALG_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise SpencerError(f"HOROALG_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return max(1, os.cpu_count() or 1)


def _sort_sign(seq: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, tuple(items)
    return sign, tuple(items)


def _axpy(acc: Dict, key, c: Fraction) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@dataclass(frozen=True)
class SpencerPair:
    """``m`` and ``Gamma`` as index subsets of one ambient graded Lie algebra ``g``.

    ``Gamma`` must be stable under ``ad(m)``; ``gram`` is a diagonal positive
    form on ``g`` (only its restrictions are used).
    """

    g: GradedLieAlgebra = field(repr=False)
    m_idx: Tuple[int, ...]
    gamma_idx: Tuple[int, ...]
    gram: Tuple[Fraction, ...] = field(repr=False)
    name: str = ""

    @cached_property
    def m_pos(self) -> Dict[int, int]:
        return {a: i for i, a in enumerate(self.m_idx)}

    @cached_property
    def gamma_pos(self) -> Dict[int, int]:
        return {a: i for i, a in enumerate(self.gamma_idx)}

    @property
    def dim_m(self) -> int:
        return len(self.m_idx)

    @property
    def dim_gamma(self) -> int:
        return len(self.gamma_idx)

    @cached_property
    def m_degree(self) -> Tuple[int, ...]:
        return tuple(self.g.degree[a] for a in self.m_idx)

    @cached_property
    def gamma_degree(self) -> Tuple[int, ...]:
        return tuple(self.g.degree[a] for a in self.gamma_idx)

    @cached_property
    def depth(self) -> int:
        return -min(self.m_degree) if self.m_idx else 0

    @cached_property
    def pairs_hitting(self) -> Tuple[Tuple[Tuple[int, int, Fraction], ...], ...]:
        """For each ``m`` position ``c``: the pairs ``a < b`` whose bracket has a ``z_c`` component."""
        out: List[List[Tuple[int, int, Fraction]]] = [[] for _ in self.m_idx]
        for a, b in combinations(range(self.dim_m), 2):
            for k, v in self.g.bracket(self.m_idx[a], self.m_idx[b]).items():
                c = self.m_pos.get(k)
                if c is None:
                    raise SpencerError("m is not closed under the bracket")
                out[c].append((a, b, v))
        return tuple(tuple(x) for x in out)

    @cached_property
    def action(self) -> Tuple[Tuple[Vec, ...], ...]:
        """``action[k][y]``: ``z_k . y`` in ``Gamma`` positions."""
        table = []
        for k, zk in enumerate(self.m_idx):
            row = []
            for y, gy in enumerate(self.gamma_idx):
                img: Vec = {}
                for t, v in self.g.bracket(zk, gy).items():
                    pos = self.gamma_pos.get(t)
                    if pos is None:
                        raise SpencerError("Gamma is not stable under m")
                    if self.gamma_degree[pos] != self.m_degree[k] + self.gamma_degree[y]:
                        raise SpencerError("non-graded action detected")
                    img[pos] = v
                row.append(img)
            table.append(tuple(row))
        return tuple(table)

    @cached_property
    def spaces(self) -> Dict[int, "CochainSpace"]:
        return {}

    def space(self, q: int) -> "CochainSpace":
        sp = self.spaces.get(q)
        if sp is None:
            sp = CochainSpace.build(self, q)
            self.spaces[q] = sp
        return sp

    @cached_property
    def _coboundaries(self) -> Dict[int, List[Vec]]:
        return {}

    def coboundary_columns(self, q: int) -> List[Vec]:
        """Columns of ``d: C^q -> C^{q+1}`` over the full cochain spaces."""
        cols = self._coboundaries.get(q)
        if cols is None:
            src, dst = self.space(q), self.space(q + 1)
            cols = [_coboundary_column(self, key, dst.index) for key in src.keys]
            self._coboundaries[q] = cols
        return cols

    def adjoint_columns(self, q: int) -> List[Vec]:
        """Columns of ``d*: C^q -> C^{q-1}`` for the induced diagonal Gram."""
        src = self.space(q)
        cols: List[Vec] = [dict() for _ in range(src.dim)]
        if q == 0:
            return cols
        low = self.space(q - 1)
        for i, col in enumerate(self.coboundary_columns(q - 1)):
            gi = low.gram[i]
            for j, v in col.items():
                cols[j][i] = v * src.gram[j] / gi
        return cols


def _coboundary_column(pair: SpencerPair, key: Key, index: Mapping[Key, int]) -> Vec:
    inp, y = key
    out: Dict[Key, Fraction] = {}
    members = set(inp)
    # action term
    for k in range(pair.dim_m):
        if k in members:
            continue
        img = pair.action[k][y]
        if not img:
            continue
        sign, j = _sort_sign(inp + (k,))
        pos = j.index(k)
        s = -1 if pos % 2 else 1
        for t, v in img.items():
            _axpy(out, (j, t), s * v)
    # bracket term: d phi(z_J) gets (-1)^{i+j} phi([z_a, z_b], z_R) with I = {c} + R
    for ci, c in enumerate(inp):
        rest = inp[:ci] + inp[ci + 1:]
        eps = -1 if ci % 2 else 1
        rest_set = set(rest)
        for a, b, coef in pair.pairs_hitting[c]:
            if a in rest_set or b in rest_set:
                continue
            j = tuple(sorted(rest + (a, b)))
            s = -1 if (j.index(a) + j.index(b)) % 2 else 1
            _axpy(out, (j, y), s * eps * coef)
    return {index[k]: v for k, v in out.items()}


@dataclass
class CochainSpace:
    """Basis of ``Hom(wedge^q m, Gamma)`` with degree shifts, weights and the induced Gram."""

    q: int
    keys: List[Key]
    index: Dict[Key, int]
    shift: List[int]
    weight: List[Weight]
    gram: List[Fraction]
    blocks: Dict[BlockKey, List[int]]

    @property
    def dim(self) -> int:
        return len(self.keys)

    def p_of(self, i: int) -> int:
        return self.shift[i] + 1 - self.q

    @classmethod
    def build(cls, pair: SpencerPair, q: int) -> "CochainSpace":
        g = pair.g
        keys: List[Key] = []
        shift: List[int] = []
        weight: List[Weight] = []
        gram: List[Fraction] = []
        blocks: Dict[BlockKey, List[int]] = {}
        zero = Weight.zero(len(g.weights[0].coords)) if g.dim else None
        for inp in combinations(range(pair.dim_m), q):
            in_deg = sum(pair.m_degree[i] for i in inp)
            in_w = zero
            in_g = Fraction(1)
            for i in inp:
                in_w = in_w + g.weights[pair.m_idx[i]]
                in_g *= pair.gram[pair.m_idx[i]]
            for y, gy in enumerate(pair.gamma_idx):
                idx = len(keys)
                keys.append((inp, y))
                s = pair.gamma_degree[y] - in_deg
                w = g.weights[gy] - in_w
                shift.append(s)
                weight.append(w)
                gram.append(pair.gram[gy] / in_g)
                blocks.setdefault((s, w), []).append(idx)
        index = {k: i for i, k in enumerate(keys)}
        return cls(q, keys, index, shift, weight, gram, blocks)

    def p_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for s in self.shift:
            p = s + 1 - self.q
            out[p] = out.get(p, 0) + 1
        return dict(sorted(out.items()))


def pair_for(model, which: str = "m,g", gram: Optional[Sequence[Fraction]] = None) -> SpencerPair:
    """Spencer pair of a horospherical model: ``"m,g"``, ``"l-,l"``, ``"l-,u"`` or ``"l-,g"``."""
    g = model.g
    gr = tuple(gram) if gram is not None else g.gram
    if which == "m,g":
        return SpencerPair(g, tuple(model.m_idx), tuple(range(g.dim)), gr, which)
    if which == "l-,l":
        return SpencerPair(g, tuple(model.l_minus), tuple(model.l_idx), gr, which)
    if which == "l-,u":
        return SpencerPair(g, tuple(model.l_minus), tuple(model.u_idx), gr, which)
    if which == "l-,g":
        return SpencerPair(g, tuple(model.l_minus), tuple(range(g.dim)), gr, which)
    raise SpencerError(f"unknown pair {which!r}")


def coboundary_matrix(pair: SpencerPair, p: int, q: int) -> Tuple[SparseMatrix, List[int], List[int]]:
    """Matrix of ``d: C^{p+1,q} -> C^{p,q+1}`` with the global indices of its columns and rows."""
    src, dst = pair.space(q), pair.space(q + 1)
    cols_idx = [i for i in range(src.dim) if src.p_of(i) == p + 1]
    rows_idx = [i for i in range(dst.dim) if dst.p_of(i) == p]
    rpos = {r: k for k, r in enumerate(rows_idx)}
    full = pair.coboundary_columns(q)
    cols = []
    for i in cols_idx:
        col = {}
        for r, v in full[i].items():
            if r not in rpos:
                raise SpencerError("coboundary does not respect the bigrading")
            col[rpos[r]] = v
        cols.append(col)
    return SparseMatrix.from_columns(cols, len(rows_idx)), cols_idx, rows_idx


def _restrict(cols: Sequence[Vec], col_idx: Sequence[int], row_idx: Sequence[int]) -> SparseMatrix:
    rpos = {r: k for k, r in enumerate(row_idx)}
    out = []
    for i in col_idx:
        col = {}
        for r, v in cols[i].items():
            k = rpos.get(r)
            if k is None:
                raise SpencerError("map leaves its (shift, weight) block")
            col[k] = v
        out.append(col)
    return SparseMatrix.from_columns(out, len(row_idx))


def _block_dims(task: Tuple[SparseMatrix, SparseMatrix, SparseMatrix]) -> Tuple[int, int, int]:
    """``(rank d_q, rank d_{q-1}, nullity of [d_q; d*_q])`` for one block."""
    dq, dprev, stacked = task
    return rank(dq), rank(dprev), stacked.cols - rank(stacked)


def _parallel_map(fn: Callable, items: List, workers: int) -> List:
    if workers <= 1 or len(items) < 8:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


@dataclass
class CohomologyTable:
    entries: Dict[Tuple[int, int], Dict[str, object]]
    pair: str = ""
    double_check: bool = True

    def dim_h(self, p: int, q: int) -> int:
        e = self.entries.get((p, q))
        return int(e["dim_H"]) if e else 0

    def vanishing(self, q: int, p_min: int = 1) -> bool:
        return all(e["dim_H"] == 0 for (p, qq), e in self.entries.items() if qq == q and p >= p_min)

    def harmonic_weights(self, p: int, q: int) -> List[Tuple[Weight, int]]:
        e = self.entries.get((p, q))
        return list(e["harmonic_weights"]) if e else []

    def to_json(self) -> Dict[str, object]:
        return {f"{p},{q}": e for (p, q), e in sorted(self.entries.items())}


def cohomology(
    pair: SpencerPair,
    p_range: Optional[Iterable[int]] = None,
    q_max: int = 1,
    workers: Optional[int] = None,
) -> CohomologyTable:
    """``dim H^{p,q}`` for ``q <= q_max`` by ranks, cross-checked against the harmonic space.

    Every nonzero ``C^{p,q}`` has ``p`` between ``min deg Gamma + 1`` and
    ``max deg Gamma + depth(m) * q + 1 - q``; the default range is all of it.
    """
    workers = worker_count() if workers is None else workers
    entries: Dict[Tuple[int, int], Dict[str, object]] = {}
    wanted = None if p_range is None else set(p_range)
    consistent = True
    for q in range(q_max + 1):
        sp = pair.space(q)
        dq = pair.coboundary_columns(q)
        dstar = pair.adjoint_columns(q)
        dprev = pair.coboundary_columns(q - 1) if q > 0 else []
        up = pair.space(q + 1)
        low = pair.space(q - 1) if q > 0 else None
        keys = sorted(sp.blocks, key=lambda k: (k[0], k[1]))
        if wanted is not None:
            keys = [k for k in keys if k[0] + 1 - q in wanted]
        tasks = []
        for bk in keys:
            cols = sp.blocks[bk]
            up_rows = up.blocks.get(bk, [])
            m_q = _restrict(dq, cols, up_rows)
            if low is not None:
                low_cols = low.blocks.get(bk, [])
                m_prev = _restrict(dprev, low_cols, cols)
                ds = _restrict(dstar, cols, low_cols)
            else:
                m_prev = SparseMatrix.zero(len(cols), 0)
                ds = SparseMatrix.zero(0, len(cols))
            stacked = SparseMatrix.from_rows(
                [m_q.row(i) for i in range(m_q.rows)] + [ds.row(i) for i in range(ds.rows)], len(cols)
            )
            tasks.append((m_q, m_prev, stacked))
        results = _parallel_map(_block_dims, tasks, workers)
        for bk, (rq, rprev, harm) in zip(keys, results):
            s, w = bk
            p = s + 1 - q
            e = entries.setdefault(
                (p, q), {"dim_C": 0, "dim_kernel": 0, "dim_image_in": 0, "dim_H": 0, "harmonic_weights": {}}
            )
            n = len(sp.blocks[bk])
            e["dim_C"] += n
            e["dim_kernel"] += n - rq
            e["dim_image_in"] += rprev
            h = n - rq - rprev
            e["dim_H"] += h
            if h != harm:
                consistent = False
            if harm:
                hw = e["harmonic_weights"]
                hw[w] = hw.get(w, 0) + harm
    if wanted is not None:
        for q in range(q_max + 1):
            for p in wanted:
                entries.setdefault(
                    (p, q), {"dim_C": 0, "dim_kernel": 0, "dim_image_in": 0, "dim_H": 0, "harmonic_weights": {}}
                )
    for e in entries.values():
        e["harmonic_weights"] = sorted(e["harmonic_weights"].items())
    return CohomologyTable(dict(sorted(entries.items())), pair.name, consistent)


def dd_zero(pair: SpencerPair, q: int) -> bool:
    """``d_{q+1} d_q = 0`` on every basis cochain of ``C^q``."""
    first = pair.coboundary_columns(q)
    second = pair.coboundary_columns(q + 1)
    for col in first:
        acc: Vec = {}
        for j, v in col.items():
            for k, x in second[j].items():
                _axpy(acc, k, v * x)
        if acc:
            return False
    return True


def hodge_check(pair: SpencerPair, q: int, workers: Optional[int] = None) -> CheckResult:
    """``C^q = im d_{q-1} + ker d*_q`` with zero intersection, block by block."""
    sp = pair.space(q)
    dstar = pair.adjoint_columns(q)
    low = pair.space(q - 1) if q > 0 else None
    dprev = pair.coboundary_columns(q - 1) if q > 0 else []
    total_im = total_ker = total_meet = 0
    ok = True
    for bk in sorted(sp.blocks, key=lambda k: (k[0], k[1])):
        cols = sp.blocks[bk]
        n = len(cols)
        if low is not None and low.blocks.get(bk):
            low_cols = low.blocks[bk]
            m_prev = _restrict(dprev, low_cols, cols)
            ds = _restrict(dstar, cols, low_cols)
            im = Subspace.span(n, m_prev.columns())
            ker = kernel_basis(ds)
        else:
            im = Subspace(n, [], check=False)
            ker = Subspace(n, [{i: Fraction(1)} for i in range(n)], check=False)
        meet = intersect(im, ker).dim if im.dim and ker.dim else 0
        total_im += im.dim
        total_ker += ker.dim
        total_meet += meet
        if im.dim + ker.dim != n or meet:
            ok = False
    return outcome(
        "hodge",
        ok,
        {"q": q, "dim_C": sp.dim, "dim_image": total_im, "dim_ker_adjoint": total_ker, "dim_intersection": total_meet},
        "image of d and kernel of d* are not complementary",
    )


def filtration_F1(pair: SpencerPair) -> Tuple[List[int], Dict[str, int]]:
    """Indices of 2-cochains raising total degree by at least one, with a double count.

    Raising degree by ``s >= 1`` is the union of ``C^{p,2}`` over ``p >= 0``.
    """
    sp = pair.space(2)
    direct = [i for i in range(sp.dim) if sp.shift[i] >= 1]
    by_p = sum(n for p, n in sp.p_dims().items() if p >= 0)
    return direct, {"direct": len(direct), "sum_over_p": by_p}


def _rho_column(pair: SpencerPair, a: int, key: Key, index: Mapping[Key, int]) -> Vec:
    """``rho_*(x_a)`` applied to an elementary cochain, for ``Gamma = g``.

    ``(A phi)(z..) = [A, phi(z..)] - sum_k phi(.., pi_m [A, z_k], ..)``.
    """
    g = pair.g
    inp, y = key
    out: Dict[Key, Fraction] = {}
    for t, v in g.bracket(a, pair.gamma_idx[y]).items():
        _axpy(out, (inp, pair.gamma_pos[t]), v)
    # dual action on the inputs: for each slot holding z_i, every z_k with pi[A, z_k] ∋ z_i
    for slot, i in enumerate(inp):
        for k in range(pair.dim_m):
            coef = g.bracket(a, pair.m_idx[k]).get(pair.m_idx[i])
            if not coef:
                continue
            new = inp[:slot] + (k,) + inp[slot + 1:]
            sign, j = _sort_sign(new)
            if sign:
                _axpy(out, (j, y), -sign * coef)
    return {index[k]: v for k, v in out.items() if k in index}


def equivariance_check(
    pair: SpencerPair,
    elements: Sequence[int],
    qs: Sequence[int] = (1, 2),
    name: str = "equivariance",
    restrict_f1: bool = False,
) -> CheckResult:
    """``d* rho_*(A) = rho_*(A) d*`` on ``C^q`` for each ``A`` in ``elements`` (``Gamma = g``)."""
    if tuple(pair.gamma_idx) != tuple(range(pair.g.dim)):
        raise SpencerError("equivariance needs Gamma = g")
    failures: List[Dict[str, object]] = []
    checked = 0
    for q in qs:
        sp = pair.space(q)
        low = pair.space(q - 1)
        dstar = pair.adjoint_columns(q)
        domain = range(sp.dim)
        if restrict_f1 and q == 2:
            domain = [i for i in range(sp.dim) if sp.shift[i] >= 1]
        for a in elements:
            rho_q: Dict[int, Vec] = {}
            rho_low: Dict[int, Vec] = {}
            bad = 0
            for i in domain:
                lhs: Vec = {}
                rq = rho_q.get(i)
                if rq is None:
                    rq = rho_q[i] = _rho_column(pair, a, sp.keys[i], sp.index)
                for j, v in rq.items():
                    for k, x in dstar[j].items():
                        _axpy(lhs, k, v * x)
                rhs: Vec = {}
                for j, v in dstar[i].items():
                    rl = rho_low.get(j)
                    if rl is None:
                        rl = rho_low[j] = _rho_column(pair, a, low.keys[j], low.index)
                    for k, x in rl.items():
                        _axpy(rhs, k, v * x)
                if lhs != rhs:
                    bad += 1
            checked += 1
            if bad:
                failures.append({"q": q, "element": pair.g.labels[a], "failing_columns": bad})
    return outcome(
        name,
        not failures,
        {"elements": [pair.g.labels[a] for a in elements], "q": list(qs), "checked": checked, "failures": failures},
        "d* does not commute with the action",
    )


def kostant_check(model, table: Optional[CohomologyTable] = None) -> CheckResult:
    """The lowest harmonic weight of ``H^{0,1}(l_-, U)`` against ``xi = -(sigma_alpha(lambda) + alpha)``.

    In cochain weights (output minus input) the expected lowest vector is
    ``e_{-alpha}^* (x) u_{-sigma_alpha(lambda)}`` of weight
    ``alpha - sigma_alpha(lambda)``; the sum of its factor weights is ``xi``.
    """
    from .horolie import kostant_weights

    pair = pair_for(model, "l-,u")
    if table is None:
        table = cohomology(pair, q_max=1)
    kw = kostant_weights(model)
    r = model.root_system
    rank_ = r.rank
    hw = table.harmonic_weights(0, 1)

    def height(w: Weight) -> Fraction:
        return r.weight_height(Weight(w.coords[:rank_]))

    expected_natural = kw["alpha"] - kw["sigma_alpha_lambda"]
    lowest = None
    unique = False
    if hw:
        hs = sorted(height(w) for w, _ in hw)
        lowest = min(hw, key=lambda t: height(t[0]))
        unique = hs.count(hs[0]) == 1 and lowest[1] == 1
    natural_ok = lowest is not None and Weight(lowest[0].coords[:rank_]) == expected_natural and unique

    # the harmonic line at that weight is the elementary cochain e_{-alpha}^* (x) u_{-sigma(lambda)}
    g = model.g
    k = model.spec.alpha_index - 1
    e_minus = next(
        (a for a in model.l_minus if g.roots[a] is not None and g.labels[a].startswith("e-")
         and list(r.weight_to_root_coords(Weight(g.weights[a].coords[:rank_]))) == [-1 if t == k else 0 for t in range(rank_)]),
        None,
    )
    target_w = -kw["sigma_alpha_lambda"]
    u_vecs = [a for a in model.u_idx if Weight(g.weights[a].coords[:rank_]) == target_w]
    elementary_ok = False
    factor_sum = None
    if e_minus is not None and len(u_vecs) == 1 and lowest is not None:
        sp = pair.space(1)
        key = ((pair.m_pos[e_minus],), pair.gamma_pos[u_vecs[0]])
        idx = sp.index[key]
        bk = (sp.shift[idx], sp.weight[idx])
        block = sp.blocks[bk]
        m_q = _restrict(pair.coboundary_columns(1), block, pair.space(2).blocks.get(bk, []))
        low = pair.space(0)
        low_cols = low.blocks.get(bk, [])
        ds = _restrict(pair.adjoint_columns(1), block, low_cols)
        stacked = SparseMatrix.from_rows([m_q.row(i) for i in range(m_q.rows)] + [ds.row(i) for i in range(ds.rows)], len(block))
        harm = kernel_basis(stacked)
        pos = block.index(idx)
        elementary_ok = harm.dim == 1 and set(harm.basis[0]) == {pos}
        factor_sum = Weight(g.weights[u_vecs[0]].coords[:rank_]) + Weight(g.weights[e_minus].coords[:rank_])
    label_ok = factor_sum is not None and factor_sum == kw["xi"]
    ok = natural_ok and elementary_ok and label_ok and table.vanishing(1)
    return outcome(
        "kostant",
        ok,
        {
            "lambda": kw["lambda"],
            "sigma_alpha_lambda": kw["sigma_alpha_lambda"],
            "xi_sigma": kw["xi"],
            "lowest_harmonic_weight": lowest[0] if lowest else None,
            "expected_cochain_weight": expected_natural,
            "lowest_is_simple": unique,
            "spanned_by_elementary_cochain": elementary_ok,
            "factor_weight_sum": factor_sum,
            "dim_H01": table.dim_h(0, 1),
            "H_p1_vanishes_for_p_ge_1": table.vanishing(1),
        },
        "lowest harmonic weight of H^{0,1}(l_-, U) disagrees with xi_sigma",
    )
