"""Exact sparse linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices are stored as a mapping
``row -> {col: value}`` with no explicit zeros.  Rank and kernels are
computed by fraction-free elimination on integer rows (each row is kept
primitive by dividing out the gcd of its entries), choosing the sparsest
available row as pivot first.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Rational = Fraction
Vector = Dict[int, Fraction]

__all__ = [
    "Rational",
    "SparseMatrix",
    "Subspace",
    "rank",
    "kernel_basis",
    "image_basis",
    "intersect",
    "gram_adjoint",
    "diagonal",
    "solve",
]


class DimensionError(ValueError):
    pass


class GramError(ValueError):
    pass


def _clean(vec: Mapping[int, object]) -> Vector:
    return {k: Fraction(v) for k, v in vec.items() if v != 0}


class SparseMatrix:
    """Immutable sparse rational matrix of shape ``rows x cols``."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        self.rows = rows
        self.cols = cols
        data: Dict[int, Vector] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                if v == 0:
                    continue
                data.setdefault(i, {})[j] = Fraction(v)
        self._rows = data

    # construction helpers -------------------------------------------------

    @classmethod
    def _from_row_dicts(cls, rows: int, cols: int, data: Dict[int, Vector]) -> "SparseMatrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._rows = {i: r for i, r in data.items() if r}
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, object]], cols: int) -> "SparseMatrix":
        data = {}
        for i, r in enumerate(rows):
            c = _clean(r)
            if any(not 0 <= j < cols for j in c):
                raise IndexError("column index out of range")
            if c:
                data[i] = c
        return cls._from_row_dicts(len(rows), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, object]], rows: int) -> "SparseMatrix":
        data: Dict[int, Vector] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v != 0:
                    if not 0 <= i < rows:
                        raise IndexError("row index out of range")
                    data.setdefault(i, {})[j] = Fraction(v)
        return cls._from_row_dicts(rows, len(columns), data)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]]) -> "SparseMatrix":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        return cls.from_rows([{j: v for j, v in enumerate(r) if v != 0} for r in dense], ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls._from_row_dicts(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls._from_row_dicts(rows, cols, {})

    # access ----------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {(i, j): v for i, r in self._rows.items() for j, v in r.items()}

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def row(self, i: int) -> Vector:
        return dict(self._rows.get(i, {}))

    def row_items(self) -> Iterator[Tuple[int, Vector]]:
        """Yield ``(i, row)`` for nonzero rows in increasing order (rows are shared, do not mutate)."""
        for i in sorted(self._rows):
            yield i, self._rows[i]

    def column(self, j: int) -> Vector:
        return {i: r[j] for i, r in self._rows.items() if j in r}

    def columns(self) -> List[Vector]:
        out: List[Vector] = [dict() for _ in range(self.cols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[j][i] = v
        return out

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self._rows.get(i, {}).get(j, Fraction(0))

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._rows

    def is_diagonal(self) -> bool:
        return all(set(r) <= {i} for i, r in self._rows.items())

    def diagonal_entries(self) -> List[Fraction]:
        n = min(self.rows, self.cols)
        return [self[i, i] for i in range(n)]

    # arithmetic ------------------------------------------------------------

    def transpose(self) -> "SparseMatrix":
        data: Dict[int, Vector] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                data.setdefault(j, {})[i] = v
        return SparseMatrix._from_row_dicts(self.cols, self.rows, data)

    @property
    def T(self) -> "SparseMatrix":
        return self.transpose()

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other._rows
        data: Dict[int, Vector] = {}
        for i, r in self._rows.items():
            acc: Vector = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                data[i] = acc
        return SparseMatrix._from_row_dicts(self.rows, other.cols, data)

    def apply(self, vec: Mapping[int, Fraction]) -> Vector:
        """Matrix times sparse column vector."""
        acc: Vector = {}
        for i, r in self._rows.items():
            s = 0
            for j, v in r.items():
                x = vec.get(j)
                if x:
                    s += v * x
            if s:
                acc[i] = Fraction(s)
        return acc

    def _combine(self, other: "SparseMatrix", sign: int) -> "SparseMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            tgt = data.setdefault(i, {})
            for j, v in r.items():
                nv = tgt.get(j, 0) + sign * v
                if nv:
                    tgt[j] = nv
                else:
                    tgt.pop(j, None)
        return SparseMatrix._from_row_dicts(self.rows, self.cols, data)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def scale(self, c: object) -> "SparseMatrix":
        c = Fraction(c)
        if c == 0:
            return SparseMatrix.zero(self.rows, self.cols)
        return SparseMatrix._from_row_dicts(
            self.rows, self.cols, {i: {j: v * c for j, v in r.items()} for i, r in self._rows.items()}
        )

    def commutator(self, other: "SparseMatrix") -> "SparseMatrix":
        return self @ other - other @ self

    def trace(self) -> Fraction:
        return sum((r.get(i, Fraction(0)) for i, r in self._rows.items()), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def diagonal(values: Iterable[object]) -> SparseMatrix:
    vals = [Fraction(v) for v in values]
    n = len(vals)
    return SparseMatrix._from_row_dicts(n, n, {i: {i: v} for i, v in enumerate(vals) if v != 0})


# ---------------------------------------------------------------------------
# fraction-free elimination
# ---------------------------------------------------------------------------


def _integer_row(row: Mapping[int, Fraction]) -> Dict[int, int]:
    """Scale a rational row to a primitive integer row (positive leading entry not enforced)."""
    den = 1
    for v in row.values():
        d = v.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    ints = {k: int(v * den) for k, v in row.items() if v != 0}
    return _primitive(ints)


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class _Echelon:
    """Incremental integer row echelon form keyed by leading column."""

    __slots__ = ("pivots",)

    def __init__(self) -> None:
        self.pivots: Dict[int, Dict[int, int]] = {}

    def reduce(self, row: Dict[int, int]) -> Dict[int, int]:
        pivots = self.pivots
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                return row
            a = p[c]
            b = row[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: fa * v for k, v in row.items()}
            for k, v in p.items():
                nv = new.get(k, 0) - fb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new)
        return row

    def add(self, row: Dict[int, int]) -> bool:
        """Insert a row; returns True when it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rref(self) -> Dict[int, Dict[int, Fraction]]:
        """Reduced row echelon form over the rationals, normalised to pivot 1."""
        out: Dict[int, Dict[int, Fraction]] = {}
        for c in sorted(self.pivots, reverse=True):
            row = {k: Fraction(v) for k, v in self.pivots[c].items()}
            piv = row[c]
            row = {k: v / piv for k, v in row.items()}
            for c2, r2 in out.items():
                f = row.get(c2)
                if f:
                    for k, v in r2.items():
                        nv = row.get(k, 0) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
            out[c] = row
        return out


def _echelon_of_rows(rows: Iterable[Mapping[int, Fraction]]) -> _Echelon:
    ech = _Echelon()
    ints = [_integer_row(r) for r in rows if r]
    # sparse rows first
    ints.sort(key=len)
    for r in ints:
        if r:
            ech.add(r)
    return ech


def rank(m: SparseMatrix) -> int:
    """Exact rank of ``m`` over the rationals."""
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    if m.rows > m.cols:
        m = m.transpose()
    return _echelon_of_rows(r for _, r in m.row_items()).rank


class Subspace:
    """A subspace of Q^n given by a linearly independent list of sparse vectors."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence[Mapping[int, object]] = (), check: bool = True):
        self.ambient_dim = ambient_dim
        vecs = tuple(_clean(v) for v in basis)
        if check:
            for v in vecs:
                if any(not 0 <= k < ambient_dim for k in v):
                    raise IndexError("basis vector outside ambient space")
            if _echelon_of_rows(vecs).rank != len(vecs):
                raise ValueError("basis vectors are linearly dependent")
        self.basis = vecs

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping[int, object]]) -> "Subspace":
        """Subspace spanned by arbitrary vectors; keeps an independent subset in input order."""
        ech = _Echelon()
        kept = []
        for v in vectors:
            c = _clean(v)
            if c and ech.add(_integer_row(c)):
                kept.append(c)
        return cls(ambient_dim, kept, check=False)

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        return cls(ambient_dim, [{i: Fraction(1)} for i in sorted(set(indices))], check=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_matrix(self) -> SparseMatrix:
        """Basis vectors as the rows of a matrix."""
        return SparseMatrix.from_rows(self.basis, self.ambient_dim)

    def contains(self, vec: Mapping[int, object]) -> bool:
        ech = _echelon_of_rows(self.basis)
        c = _clean(vec)
        return not c or not ech.reduce(_integer_row(c))

    def __contains__(self, vec: Mapping[int, object]) -> bool:
        return self.contains(vec)

    def issubspace(self, other: "Subspace") -> bool:
        ech = _echelon_of_rows(other.basis)
        return all(not ech.reduce(_integer_row(v)) for v in self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.issubspace(other)
        )

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: SparseMatrix) -> Subspace:
    """Basis of the right null space ``{v : m v = 0}``."""
    n = m.cols
    ech = _echelon_of_rows(r for _, r in m.row_items())
    rref = ech.rref()
    free = [j for j in range(n) if j not in rref]
    basis = []
    for f in free:
        v: Vector = {f: Fraction(1)}
        for c, row in rref.items():
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return Subspace(n, basis, check=False)


def image_basis(m: SparseMatrix) -> Subspace:
    """Basis of the column space of ``m``."""
    return Subspace.span(m.rows, m.columns())


def solve(m: SparseMatrix, rhs: Mapping[int, object]) -> Optional[Vector]:
    """One solution ``x`` of ``m x = rhs`` or None when inconsistent."""
    aug_col = m.cols
    rows = []
    for i in range(m.rows):
        r = dict(m._rows.get(i, {}))
        b = rhs.get(i, 0)
        if b:
            r[aug_col] = Fraction(b)
        if r:
            rows.append(r)
    ech = _echelon_of_rows(rows)
    rref = ech.rref()
    if aug_col in rref:
        return None
    x: Vector = {}
    for c, row in rref.items():
        b = row.get(aug_col)
        if b:
            x[c] = b
    return x


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Basis of ``a ∩ b`` from the kernel of the stacked system ``A x = B y``."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace(n, [], check=False)
    # columns: a_1..a_r, -b_1..-b_s
    cols = list(a.basis) + [{k: -v for k, v in vb.items()} for vb in b.basis]
    stacked = SparseMatrix.from_columns(cols, n)
    ker = kernel_basis(stacked)
    vecs = []
    for coeffs in ker.basis:
        v: Vector = {}
        for i, c in coeffs.items():
            if i < a.dim:
                for k, x in a.basis[i].items():
                    v[k] = v.get(k, 0) + c * x
        vecs.append(v)
    return Subspace.span(n, vecs)


def _diagonal_of(gram: SparseMatrix, name: str) -> List[Fraction]:
    if gram.rows != gram.cols:
        raise GramError(f"{name} Gram matrix is not square")
    if not gram.is_diagonal():
        raise GramError(f"{name} Gram matrix is not diagonal")
    diag = gram.diagonal_entries()
    if any(d <= 0 for d in diag):
        raise GramError(f"{name} Gram matrix has a non-positive diagonal entry")
    return diag


def gram_adjoint(m: SparseMatrix, gram_dom: SparseMatrix, gram_cod: SparseMatrix) -> SparseMatrix:
    """Adjoint ``A = G_dom^{-1} m^T G_cod`` with respect to diagonal positive Grams.

    ``m`` maps the domain (dimension ``m.cols``) to the codomain (``m.rows``);
    the result satisfies ``<m x, y>_cod == <x, A y>_dom``.
    """
    gd = _diagonal_of(gram_dom, "domain")
    gc = _diagonal_of(gram_cod, "codomain")
    if len(gd) != m.cols or len(gc) != m.rows:
        raise DimensionError("Gram dimensions do not match the matrix")
    return adjoint_from_diagonals(m, gd, gc)


def adjoint_from_diagonals(m: SparseMatrix, gd: Sequence[Fraction], gc: Sequence[Fraction]) -> SparseMatrix:
    data: Dict[int, Vector] = {}
    for i, r in m._rows.items():
        gi = gc[i]
        for j, v in r.items():
            data.setdefault(j, {})[i] = v * gi / gd[j]
    return SparseMatrix._from_row_dicts(m.cols, m.rows, data)
