"""Root systems of types A, B, C, F4 and G2.

Conventions
-----------
* Cartan matrix entries are ``a_ij = <alpha_j, alpha_i^vee>``.  In
  fundamental-weight coordinates the simple root ``alpha_j`` is column ``j``
  of the Cartan matrix.
* Roots are integer tuples in the simple-root basis; weights are tuples of
  :class:`~fractions.Fraction` in the fundamental-weight basis.
* Simple roots are numbered as in Bourbaki: ``alpha_m`` is short in ``B_m``
  and long in ``C_m``; in ``F4`` the roots ``alpha_1, alpha_2`` are long; in
  ``G2`` the root ``alpha_1`` is short.
* Symmetrizers ``d_i = (alpha_i, alpha_i)/2`` are normalised so long roots
  have ``d = 1``.

Public functions that take a simple-root index ``i`` (``simple_reflection``,
``CharacteristicElement``) count from 1, matching the usual numbering.
Attributes and helpers named ``k`` count from 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Sequence, Tuple

Root = Tuple[int, ...]

__all__ = [
    "RootSystem",
    "Weight",
    "CharacteristicElement",
    "build_root_system",
    "root_degree",
    "simple_reflection",
    "weyl_dimension",
    "freudenthal_multiplicities",
    "fundamental_weight",
    "weyl_orbit_roots",
]


class RootDataError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Weight:
    """Weight in fundamental-weight coordinates."""

    coords: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *coords: object) -> "Weight":
        return cls(tuple(Fraction(c) for c in coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((Fraction(0),) * rank)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, k: int) -> Fraction:
        return self.coords[k]

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def scale(self, c: object) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * a for a in self.coords))

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def is_dominant(self) -> bool:
        return all(a >= 0 for a in self.coords)

    def as_ints(self) -> Tuple[int, ...]:
        if not self.is_integral():
            raise RootDataError(f"weight {self} is not integral")
        return tuple(int(a) for a in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.coords) + ")"


@dataclass(frozen=True)
class CharacteristicElement:
    """The Cartan element ``E_{alpha_i}`` dual to the simple root ``alpha_i`` (1-based)."""

    simple_root_index: int

    @property
    def k(self) -> int:
        return self.simple_root_index - 1


def _cartan_matrix(family: str, rank: int) -> List[List[int]]:
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    if family in ("A", "B", "C"):
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if family == "B" and rank >= 2:
            # alpha_m short: <alpha_m, alpha_{m-1}^vee> = -1, <alpha_{m-1}, alpha_m^vee> = -2
            a[rank - 1][rank - 2] = -2
        if family == "C" and rank >= 2:
            a[rank - 2][rank - 1] = -2
    elif family == "F4":
        a[0][1] = a[1][0] = -1
        a[1][2] = -1
        a[2][1] = -2
        a[2][3] = a[3][2] = -1
    elif family == "G2":
        # alpha_1 short
        a[0][1] = -3
        a[1][0] = -1
    return a


def _admissible(family: str, rank: int) -> bool:
    return (
        (family == "A" and rank >= 1)
        or (family in ("B", "C") and rank >= 2)
        or (family == "F4" and rank == 4)
        or (family == "G2" and rank == 2)
    )


def _symmetrizer(a: Sequence[Sequence[int]]) -> Tuple[Fraction, ...]:
    n = len(a)
    d: List[Fraction] = [Fraction(0)] * n
    d[0] = Fraction(1)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j not in seen and a[i][j] != 0:
                # d_i a_ij = d_j a_ji
                d[j] = d[i] * a[i][j] / a[j][i]
                seen.add(j)
                stack.append(j)
    top = max(d)
    return tuple(x / top for x in d)


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    cartan: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Root, ...]
    symmetrizer: Tuple[Fraction, ...] = field(repr=False)

    # -- coordinates -------------------------------------------------------

    @property
    def name(self) -> str:
        return self.family if self.family in ("F4", "G2") else f"{self.family}{self.rank}"

    @cached_property
    def cartan_inverse(self) -> Tuple[Tuple[Fraction, ...], ...]:
        n = self.rank
        aug = [[Fraction(self.cartan[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for c in range(n):
            p = next(r for r in range(c, n) if aug[r][c] != 0)
            aug[c], aug[p] = aug[p], aug[c]
            pv = aug[c][c]
            aug[c] = [x / pv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return tuple(tuple(row[n:]) for row in aug)

    @cached_property
    def root_index(self) -> Dict[Root, int]:
        """Map from signed root to a position: ``+k`` for positive_roots[k], ``-(k+1)``-style keys avoided."""
        out: Dict[Root, int] = {}
        for k, r in enumerate(self.positive_roots):
            out[r] = k
            out[tuple(-x for x in r)] = -(k + 1)
        return out

    @cached_property
    def positive_root_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    def is_root(self, root: Sequence[int]) -> bool:
        return tuple(root) in self.root_index

    def simple_root(self, k: int) -> Root:
        return tuple(int(j == k) for j in range(self.rank))

    def root_to_weight(self, root: Sequence[object]) -> Weight:
        """Fundamental-weight coordinates of an element given in simple-root coordinates."""
        n = self.rank
        return Weight(tuple(sum(Fraction(self.cartan[i][j]) * Fraction(root[j]) for j in range(n)) for i in range(n)))

    def weight_to_root_coords(self, w: Weight) -> Tuple[Fraction, ...]:
        inv = self.cartan_inverse
        n = self.rank
        return tuple(sum(inv[i][j] * w.coords[j] for j in range(n)) for i in range(n))

    def pairing(self, root: Sequence[int], k: int) -> int:
        """``<beta, alpha_k^vee>`` for ``beta`` in simple-root coordinates."""
        return sum(self.cartan[k][j] * root[j] for j in range(self.rank))

    def inner(self, mu: Weight, nu: Weight) -> Fraction:
        """Invariant form with long roots of squared length 2."""
        c = self.weight_to_root_coords(mu)
        return sum((c[j] * self.symmetrizer[j] * nu.coords[j] for j in range(self.rank)), Fraction(0))

    def root_inner(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        nu = self.root_to_weight(b)
        return sum((Fraction(a[j]) * self.symmetrizer[j] * nu.coords[j] for j in range(self.rank)), Fraction(0))

    def root_length_ratio(self, root: Sequence[int]) -> Fraction:
        """``(beta, beta)/2``; equals 1 on long roots."""
        return self.root_inner(root, root) / 2

    def coroot_coords(self, root: Sequence[int]) -> Tuple[Fraction, ...]:
        """``beta^vee`` in the basis of simple coroots."""
        dl = self.root_length_ratio(root)
        return tuple(Fraction(root[j]) * self.symmetrizer[j] / dl for j in range(self.rank))

    @property
    def rho(self) -> Weight:
        return Weight((Fraction(1),) * self.rank)

    @property
    def highest_root(self) -> Root:
        return max(self.positive_roots, key=lambda r: (sum(r), r))

    @property
    def dimension(self) -> int:
        return 2 * len(self.positive_roots) + self.rank

    def height(self, root: Sequence[object]) -> Fraction:
        return sum((Fraction(x) for x in root), Fraction(0))

    def weight_height(self, w: Weight) -> Fraction:
        return sum(self.weight_to_root_coords(w), Fraction(0))


def _enumerate_positive_roots(a: Sequence[Sequence[int]]) -> Tuple[Root, ...]:
    """Closure of the simple roots under root strings, level by level.

    For a root ``beta`` and simple index ``k`` with ``p`` the largest integer
    such that ``beta - p alpha_k`` is a root, ``beta + alpha_k`` is a root iff
    ``p - <beta, alpha_k^vee> > 0``.
    """
    n = len(a)
    simple = [tuple(int(j == k) for j in range(n)) for k in range(n)]
    found = set(simple)
    order: List[Root] = list(simple)
    level = list(simple)
    while level:
        nxt: List[Root] = []
        for beta in level:
            for k in range(n):
                p = 0
                probe = list(beta)
                while True:
                    probe[k] -= 1
                    if tuple(probe) in found:
                        p += 1
                    else:
                        break
                q = p - sum(a[k][j] * beta[j] for j in range(n))
                if q > 0:
                    new = tuple(beta[j] + (j == k) for j in range(n))
                    if new not in found:
                        found.add(new)
                        nxt.append(new)
        nxt.sort(reverse=True)
        order.extend(nxt)
        level = nxt
    return tuple(order)


def build_root_system(family: str, rank: int) -> RootSystem:
    family = family.upper()
    if not _admissible(family, rank):
        raise RootDataError(f"inadmissible root system {family}{rank}")
    a = _cartan_matrix(family, rank)
    return RootSystem(
        family=family,
        rank=rank,
        cartan=tuple(tuple(r) for r in a),
        positive_roots=_enumerate_positive_roots(a),
        symmetrizer=_symmetrizer(a),
    )


def _check_root(r: RootSystem, root: Sequence[int]) -> Root:
    root = tuple(int(x) for x in root)
    if root not in r.root_index:
        raise RootDataError(f"{root} is not a root of {r.name}")
    return root


def root_degree(r: RootSystem, root: Sequence[int], e: CharacteristicElement) -> int:
    """Eigenvalue of ``E_{alpha_i}`` on the root space: the coefficient of ``alpha_i``."""
    root = _check_root(r, root)
    if not 1 <= e.simple_root_index <= r.rank:
        raise RootDataError(f"simple root index {e.simple_root_index} out of range")
    return root[e.k]


def fundamental_weight(r: RootSystem, i: int) -> Weight:
    """``pi_i`` (1-based)."""
    return Weight(tuple(Fraction(int(j == i - 1)) for j in range(r.rank)))


def simple_reflection(r: RootSystem, i: int, w: Weight) -> Weight:
    """``sigma_i(w) = w - <w, alpha_i^vee> alpha_i`` (1-based ``i``)."""
    if not 1 <= i <= r.rank:
        raise RootDataError(f"simple root index {i} out of range")
    k = i - 1
    wk = w.coords[k]
    return Weight(tuple(w.coords[j] - wk * r.cartan[j][k] for j in range(r.rank)))


def _require_dominant(lam: Weight, r: RootSystem) -> None:
    if len(lam) != r.rank:
        raise RootDataError("weight length does not match rank")
    if not (lam.is_integral() and lam.is_dominant()):
        raise RootDataError(f"weight {lam} is not dominant integral")


def weyl_dimension(r: RootSystem, lam: Weight) -> int:
    _require_dominant(lam, r)
    num = Fraction(1)
    for alpha in r.positive_roots:
        top = sum((alpha[j] * r.symmetrizer[j] * (lam.coords[j] + 1) for j in range(r.rank)), Fraction(0))
        bot = sum((alpha[j] * r.symmetrizer[j] for j in range(r.rank)), Fraction(0))
        num *= top / bot
    assert num.denominator == 1
    return int(num)


def freudenthal_multiplicities(r: RootSystem, lam: Weight) -> Dict[Weight, int]:
    """Weight multiplicities of ``V(lambda)`` by Freudenthal's recursion, level by level."""
    _require_dominant(lam, r)
    n = r.rank
    lam_i = lam.as_ints()
    pos_w = [r.root_to_weight(a).as_ints() for a in r.positive_roots]
    dvec = r.symmetrizer
    inv = r.cartan_inverse

    def form(mu: Tuple[int, ...], nu: Tuple[int, ...]) -> Fraction:
        c = [sum(inv[i][j] * mu[j] for j in range(n)) for i in range(n)]
        return sum((c[j] * dvec[j] * nu[j] for j in range(n)), Fraction(0))

    lr = tuple(x + 1 for x in lam_i)
    lr2 = form(lr, lr)
    simple_w = [tuple(r.cartan[j][k] for j in range(n)) for k in range(n)]
    heights = [sum(a) for a in r.positive_roots]
    mult: Dict[Tuple[int, ...], int] = {lam_i: 1}
    level = [lam_i]
    depth = 0
    while level:
        depth += 1
        cands = sorted({tuple(m[j] - s[j] for j in range(n)) for m in level for s in simple_w})
        nxt = []
        for mu in cands:
            mr = tuple(x + 1 for x in mu)
            den = lr2 - form(mr, mr)
            acc = Fraction(0)
            for a, ht in zip(pos_w, heights):
                k = 1
                while k * ht <= depth:
                    nu = tuple(mu[j] + k * a[j] for j in range(n))
                    mnu = mult.get(nu)
                    if mnu:
                        acc += mnu * form(nu, a)
                    k += 1
            if den == 0:
                if acc != 0:
                    raise RootDataError("Freudenthal recursion hit a zero denominator")
                continue
            m = 2 * acc / den
            if m.denominator != 1 or m < 0:
                raise RootDataError(f"non-integral multiplicity {m} at {mu}")
            if m:
                mult[mu] = int(m)
                nxt.append(mu)
        level = nxt
    return {Weight(tuple(Fraction(x) for x in mu)): m for mu, m in mult.items()}


def weyl_orbit_roots(r: RootSystem) -> frozenset:
    """All roots as the Weyl orbit of the simple roots (independent of the string closure)."""
    found = set()
    stack = [r.simple_root(k) for k in range(r.rank)]
    while stack:
        b = stack.pop()
        if b in found:
            continue
        found.add(b)
        for k in range(r.rank):
            c = r.pairing(b, k)
            nb = tuple(b[j] - c * (j == k) for j in range(r.rank))
            if nb not in found:
                stack.append(nb)
    return frozenset(found)


def dominant_weights(iterable: Iterable[Weight]) -> List[Weight]:
    return sorted(w for w in iterable if w.is_dominant())
