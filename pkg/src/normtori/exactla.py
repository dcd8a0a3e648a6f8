"""Exact integer linear algebra.

Dense Hermite and Smith normal forms with unimodular transforms, integer
kernels, and finitely generated abelian groups given by presentations.
Large sparse relation matrices (bar-complex differentials) go through
:func:`quotient`, which eliminates unit pivots sparsely before handing the
small remainder to :func:`snf`.

Everything is exact: entries are Python ints and never overflow.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence


class NotInSpanError(ValueError):
    """A vector that should lie in a lattice does not."""


class IntMatrix:
    """Immutable dense integer matrix, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        if isinstance(data, IntMatrix):
            rows, cols, tup = data.rows, data.cols, data._data
        else:
            tup = tuple(tuple(int(x) for x in r) for r in data)
            if rows is None:
                rows = len(tup)
            if cols is None:
                cols = len(tup[0]) if tup else 0
            if len(tup) != rows:
                if tup or rows and cols:
                    raise ValueError(f"expected {rows} rows, got {len(tup)}")
                tup = tuple(() for _ in range(rows))
            for r in tup:
                if len(r) != cols:
                    raise ValueError("ragged matrix")
        self.rows = rows
        self.cols = cols
        self._data = tup

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diag(cls, entries: Sequence[int], rows: int | None = None,
             cols: int | None = None) -> IntMatrix:
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            out[i][i] = d
        return cls(out, rows, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def from_text(cls, text: str) -> IntMatrix:
        """Parse ``"rows cols"`` followed by row-major entries."""
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("matrix text needs a 'rows cols' header")
        rows, cols = int(tokens[0]), int(tokens[1])
        vals = [int(t) for t in tokens[2:]]
        if len(vals) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(vals)}")
        return cls([vals[i * cols:(i + 1) * cols] for i in range(rows)], rows, cols)

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(x) for x in r) for r in self._data]
        return "\n".join(lines) + "\n"

    # -- access ------------------------------------------------------------

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> IntMatrix:
        return IntMatrix([self.col(j) for j in range(self.cols)], self.cols, self.rows)

    def entries(self) -> list[int]:
        return [x for r in self._data for x in r]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic --------------------------------------------------------

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c) if a) for c in ocols] for r in self._data],
            self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(r, v) if a) for r in self._data]

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self._data], self.rows, self.cols)

    def __mul__(self, k: int) -> IntMatrix:
        return IntMatrix([[k * a for a in r] for r in self._data], self.rows, self.cols)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix([[self._data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    @staticmethod
    def hstack(mats: Sequence[IntMatrix], rows: int | None = None) -> IntMatrix:
        if not mats:
            return IntMatrix.zeros(rows or 0, 0)
        r = mats[0].rows
        if any(m.rows != r for m in mats):
            raise ValueError("row count mismatch")
        return IntMatrix([sum((m.row(i) for m in mats), ()) for i in range(r)], r,
                         sum(m.cols for m in mats))

    @staticmethod
    def vstack(mats: Sequence[IntMatrix], cols: int | None = None) -> IntMatrix:
        if not mats:
            return IntMatrix.zeros(0, cols or 0)
        c = mats[0].cols
        if any(m.cols != c for m in mats):
            raise ValueError("column count mismatch")
        return IntMatrix([r for m in mats for r in m._data], sum(m.rows for m in mats), c)

    @staticmethod
    def block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
        n = sum(m.rows for m in mats)
        k = sum(m.cols for m in mats)
        out = [[0] * k for _ in range(n)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.rows):
                out[r0 + i][c0:c0 + m.cols] = m.row(i)
            r0 += m.rows
            c0 += m.cols
        return IntMatrix(out, n, k)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(self.det()) == 1


class SparseIntMatrix:
    """Column-sparse integer matrix: ``columns[j]`` maps row index to entry."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[dict[int, int]]):
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        self.rows = rows
        self.cols = cols
        self.columns = [{i: v for i, v in c.items() if v} for c in columns]

    @classmethod
    def from_dense(cls, a: IntMatrix) -> SparseIntMatrix:
        return cls(a.rows, a.cols,
                   [{i: x for i, x in enumerate(c) if x} for c in a.columns()])

    def to_dense(self) -> IntMatrix:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self.columns):
            for i, v in c.items():
                out[i][j] = v
        return IntMatrix(out, self.rows, self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def apply(self, v: Sequence[int]) -> list[int]:
        out = [0] * self.rows
        for j, c in enumerate(self.columns):
            x = v[j]
            if x:
                for i, a in c.items():
                    out[i] += a * x
        return out


def _as_matrix(a) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix(a)


# -- normal forms ------------------------------------------------------------

def _row_sub(rows: list[list[int]], i: int, k: int, q: int) -> None:
    """rows[i] -= q * rows[k]"""
    ri, rk = rows[i], rows[k]
    for j, x in enumerate(rk):
        if x:
            ri[j] -= q * x


def hnf(a) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``. Pivots of
    ``H`` are positive, entries above a pivot lie in ``[0, pivot)`` and zero
    rows sit at the bottom. Pivot choice is the least absolute value in the
    column, lowest row first.
    """
    a = _as_matrix(a)
    m, n = a.shape
    h = a.tolist()
    u = IntMatrix.identity(m).tolist()
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            piv = None
            for i in range(r, m):
                if h[i][c] and (piv is None or abs(h[i][c]) < abs(h[piv][c])):
                    piv = i
            if piv is None:
                break
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
            p = h[r][c]
            clean = True
            for i in range(r + 1, m):
                if h[i][c]:
                    q = h[i][c] // p
                    _row_sub(h, i, r, q)
                    _row_sub(u, i, r, q)
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if piv is None:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                _row_sub(h, i, r, q)
                _row_sub(u, i, r, q)
        r += 1
    return IntMatrix(h, m, n), IntMatrix(u, m, m)


def _snf_lists(a: IntMatrix):
    """Smith form on lists; returns (D, U, Uinv, V) as nested lists."""
    m, n = a.shape
    d = a.tolist()
    u = IntMatrix.identity(m).tolist()
    ui = IntMatrix.identity(m).tolist()
    v = IntMatrix.identity(n).tolist()

    def row_sub(i, k, q):  # row i -= q row k
        _row_sub(d, i, k, q)
        _row_sub(u, i, k, q)
        for r in ui:  # Uinv column k += q column i
            if r[i]:
                r[k] += q * r[i]

    def row_swap(i, k):
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]
        for r in ui:
            r[i], r[k] = r[k], r[i]

    def col_sub(j, k, q):  # col j -= q col k
        for r in d:
            if r[k]:
                r[j] -= q * r[k]
        for r in v:
            if r[k]:
                r[j] -= q * r[k]

    def col_swap(j, k):
        for r in d:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])
        while True:
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    row_sub(i, t, d[i][t] // p)
            for j in range(t + 1, n):
                if d[t][j]:
                    col_sub(j, t, d[t][j] // p)
            small = None
            for i in range(t + 1, m):
                if d[i][t] and (small is None or abs(d[i][t]) < small[0]):
                    small = (abs(d[i][t]), i, None)
            for j in range(t + 1, n):
                if d[t][j] and (small is None or abs(d[t][j]) < small[0]):
                    small = (abs(d[t][j]), None, j)
            if small is not None:
                if small[1] is not None:
                    row_swap(t, small[1])
                else:
                    col_swap(t, small[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_sub(t, bad, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
            for r in ui:
                r[t] = -r[t]
        t += 1
    return d, u, ui, v


def snf(a) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(D, U, V)`` with ``U @ A @ V == D``.

    ``D`` is diagonal with non-negative entries and ``d_i | d_{i+1}``;
    ``U`` and ``V`` are unimodular.
    """
    a = _as_matrix(a)
    d, u, _, v = _snf_lists(a)
    return IntMatrix(d, a.rows, a.cols), IntMatrix(u, a.rows, a.rows), IntMatrix(v, a.cols, a.cols)


def invariant_factors(a) -> list[int]:
    """Diagonal of the Smith form, zeros included, length ``min(rows, cols)``."""
    d, _, _ = snf(a)
    return [d[i, i] for i in range(min(d.rows, d.cols))]


def rank(a) -> int:
    h, _ = hnf(a)
    return sum(1 for i in range(h.rows) if any(h.row(i)))


def kernel_basis(a) -> IntMatrix:
    """Saturated basis of the integer kernel of ``A``, as columns."""
    a = _as_matrix(a)
    h, u = hnf(a.T)
    r = sum(1 for i in range(h.rows) if any(h.row(i)))
    return IntMatrix([u.row(i) for i in range(r, a.cols)], a.cols - r, a.cols).T


def unimodular_inverse(a) -> IntMatrix:
    a = _as_matrix(a)
    if not a.is_square():
        raise ValueError("not square")
    h, u = hnf(a)
    if h != IntMatrix.identity(a.rows):
        raise ValueError("matrix is not unimodular")
    return u


class SpanSolver:
    """Integer coordinates of vectors in the column span of a matrix."""

    def __init__(self, gens):
        gens = _as_matrix(gens)
        self.ambient = gens.rows
        h, u = hnf(gens.T)
        k = sum(1 for i in range(h.rows) if any(h.row(i)))
        self.rank = k
        self._h = [h.row(i) for i in range(k)]
        self._u = [u.row(i) for i in range(k)]
        self._piv = [next(j for j, x in enumerate(r) if x) for r in self._h]

    def basis(self) -> IntMatrix:
        """Echelon basis of the span, as columns."""
        return IntMatrix(self._h, self.rank, self.ambient).T

    def echelon_coords(self, v: Sequence[int]) -> list[int]:
        """Coordinates with respect to :meth:`basis`; raises if ``v`` is outside."""
        res = list(v)
        y = []
        for r, c in zip(self._h, self._piv):
            q, rem = divmod(res[c], r[c])
            if rem:
                raise NotInSpanError("vector not in the integer span")
            y.append(q)
            if q:
                for j, x in enumerate(r):
                    if x:
                        res[j] -= q * x
        if any(res):
            raise NotInSpanError("vector not in the rational span")
        return y

    def coords(self, v: Sequence[int]) -> list[int]:
        """Coefficients on the original generators (one valid choice)."""
        y = self.echelon_coords(v)
        ngen = len(self._u[0]) if self._u else 0
        x = [0] * ngen
        for q, r in zip(y, self._u):
            if q:
                for j, c in enumerate(r):
                    x[j] += q * c
        return x


# -- abelian groups ------------------------------------------------------------

@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group ``Z/d_1 + ... + Z/d_k + Z^free_rank``.

    Elements are coordinate tuples on the normalized generators: torsion
    coordinates first (reduced modulo ``d_i``), then free ones.
    """

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invalid invariant factor {d}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} break divisibility")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def order(self) -> int | None:
        """Cardinality, or ``None`` when infinite."""
        return None if self.free_rank else prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def exponent_orders(self) -> tuple[int, ...]:
        """Relation order of each generator, 0 for free generators."""
        return self.torsion + (0,) * self.free_rank

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise ValueError("coordinate length mismatch")
        return tuple(x % d if d else x for x, d in zip(v, self.exponent_orders()))

    def element_order(self, v: Sequence[int]) -> int | None:
        from math import gcd, lcm
        v = self.reduce(v)
        if any(v[len(self.torsion):]):
            return None
        return lcm(1, *(d // gcd(d, x) for x, d in zip(v, self.torsion)))

    def relation_matrix(self) -> IntMatrix:
        """Columns ``d_i e_i`` generating the relations."""
        k = len(self.torsion)
        return IntMatrix([[d if i == j else 0 for j in range(k)] for i, d in enumerate(self.torsion)]
                         + [[0] * k for _ in range(self.free_rank)], self.ngens, k)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AbMap:
    """Homomorphism given on normalized generators: ``matrix`` is target x source."""

    source: AbGroup
    target: AbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(f"matrix shape {m.shape} does not fit the groups")
        for j, d in enumerate(self.source.exponent_orders()):
            if d and any(self.target.reduce([d * x for x in m.col(j)])):
                raise ValueError(f"generator {j} of order {d} maps to an element of other order")

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(v))

    def is_zero(self) -> bool:
        return all(not any(self.target.reduce(c)) for c in self.matrix.columns())

    def compose(self, first: AbMap) -> AbMap:
        """``self`` after ``first``."""
        return AbMap(first.source, self.target, self.matrix @ first.matrix)

    @classmethod
    def identity(cls, g: AbGroup) -> AbMap:
        return cls(g, g, IntMatrix.identity(g.ngens))


# -- presentations -------------------------------------------------------------

class Quotient:
    """``Z^ambient / span(relations)`` in invariant-factor form.

    Built by :func:`quotient`. ``coords`` maps an ambient vector to its
    normalized coordinates; ``lift`` returns an ambient vector for a
    normalized generator.
    """

    def __init__(self, ambient, group, subst_log, row_ops, pivot_rows, u, uinv, dense_gens,
                 free_rows):
        self.ambient = ambient
        self.group = group
        self._subst = subst_log
        self._ops = row_ops
        self._pivot_rows = pivot_rows
        self._u = u
        self._uinv = uinv
        # (position in dense SNF, invariant factor): torsion first, then dense free
        self._dense_gens = dense_gens
        self._free_rows = free_rows

    def _reduced(self, v) -> dict[int, int]:
        if isinstance(v, dict):
            w = {i: x for i, x in v.items() if x}
        else:
            if len(v) != self.ambient:
                raise ValueError("vector length does not match the ambient rank")
            w = {i: x for i, x in enumerate(v) if x}
        for i, subst in self._subst:
            x = w.pop(i, 0)
            if x:
                for k, c in subst.items():
                    w[k] = w.get(k, 0) + x * c
        for i, p, q in self._ops:
            x = w.get(p, 0)
            if x:
                w[i] = w.get(i, 0) - q * x
        return w

    def raw_coords(self, v) -> list[int]:
        """Normalized coordinates before reduction modulo invariant factors."""
        w = self._reduced(v)
        vd = [w.get(i, 0) for i in self._pivot_rows]
        out = [sum(a * b for a, b in zip(self._u[t], vd) if b) for t, _ in self._dense_gens]
        out.extend(w.get(i, 0) for i in self._free_rows)
        return out

    def coords(self, v) -> tuple[int, ...]:
        return self.group.reduce(self.raw_coords(v))

    def torsion_coords(self, v) -> tuple[int, ...]:
        """Coordinates of an element known to be torsion; raises otherwise."""
        c = self.raw_coords(v)
        k = len(self.group.torsion)
        if any(c[k:]):
            raise NotInSpanError("element has a nonzero free component")
        return tuple(x % d for x, d in zip(c[:k], self.group.torsion))

    def lift(self, j: int) -> dict[int, int]:
        """Sparse ambient representative of normalized generator ``j``."""
        nd = len(self._dense_gens)
        if j < nd:
            t = self._dense_gens[j][0]
            w = {i: r[t] for i, r in zip(self._pivot_rows, self._uinv) if r[t]}
        else:
            w = {self._free_rows[j - nd]: 1}
        for i, p, q in reversed(self._ops):
            x = w.get(p, 0)
            if x:
                nv = w.get(i, 0) + q * x
                if nv:
                    w[i] = nv
                else:
                    w.pop(i, None)
        return w


def _columns_of(ambient, relations) -> list[dict[int, int]]:
    if isinstance(relations, SparseIntMatrix):
        if relations.rows != ambient:
            raise ValueError("ambient rank mismatch")
        return relations.columns
    if isinstance(relations, IntMatrix):
        if relations.rows != ambient:
            raise ValueError("ambient rank mismatch")
        return SparseIntMatrix.from_dense(relations).columns
    return relations


def quotient(ambient: int, relations) -> Quotient:
    """Present ``Z^ambient`` modulo the span of ``relations``.

    ``relations`` is a :class:`SparseIntMatrix`, an :class:`IntMatrix`, or a
    list of sparse columns (dicts).  Three phases:

    1. unit pivots are eliminated by substituting the pivot generator away,
       choosing the sparsest column and then the sparsest row;
    2. the remaining columns are reduced by Euclidean row operations, which
       leaves at most one nonzero row per column;
    3. the surviving pivot rows go through dense :func:`snf`.
    """
    cols: dict[int, dict[int, int]] = {}
    row_index: dict[int, set[int]] = defaultdict(set)
    for j, c in enumerate(_columns_of(ambient, relations)):
        c = {i: v for i, v in c.items() if v}
        if c:
            cols[j] = c
            for i in c:
                row_index[i].add(j)

    subst_log: list[tuple[int, dict[int, int]]] = []
    eliminated: set[int] = set()
    while True:
        best_j, best_len = None, None
        for j, c in cols.items():
            if best_len is not None and len(c) >= best_len:
                continue
            if any(v == 1 or v == -1 for v in c.values()):
                best_j, best_len = j, len(c)
        if best_j is None:
            break
        pc = cols.pop(best_j)
        i = min((k for k, v in pc.items() if v == 1 or v == -1),
                key=lambda k: (len(row_index[k]), k))
        a = pc[i]
        for k in pc:
            row_index[k].discard(best_j)
        subst_log.append((i, {k: -a * v for k, v in pc.items() if k != i}))
        eliminated.add(i)
        for cj in sorted(row_index[i]):
            c = cols[cj]
            q = c[i] * a
            for k, v in pc.items():
                nv = c.get(k, 0) - q * v
                if nv:
                    if k not in c:
                        row_index[k].add(cj)
                    c[k] = nv
                elif k in c:
                    del c[k]
                    if k != i:
                        row_index[k].discard(cj)
            if not c:
                del cols[cj]
        del row_index[i]

    # phase 2: Euclidean row reduction on what is left
    col_ids = list(cols)
    rows: dict[int, dict[int, int]] = defaultdict(dict)
    for jj, j in enumerate(col_ids):
        for i, v in cols[j].items():
            rows[i][jj] = v
    row_ops: list[tuple[int, int, int]] = []
    pivot_rows: list[int] = []
    done: set[int] = set()
    for jj in range(len(col_ids)):
        active = sorted(i for i in cols[col_ids[jj]] if i not in done)
        active = [i for i in active if rows[i].get(jj)]
        while len(active) > 1:
            p = min(active, key=lambda i: (abs(rows[i][jj]), i))
            rp, a = rows[p], rows[p][jj]
            nxt = [p]
            for i in active:
                if i == p:
                    continue
                ri = rows[i]
                q = ri[jj] // a
                row_ops.append((i, p, q))
                for k, v in rp.items():
                    nv = ri.get(k, 0) - q * v
                    if nv:
                        ri[k] = nv
                    else:
                        ri.pop(k, None)
                        if k > jj:
                            cols[col_ids[k]].pop(i, None)
                    if nv and k > jj:
                        cols[col_ids[k]][i] = nv
                if ri.get(jj):
                    nxt.append(i)
            active = nxt
        if active:
            done.add(active[0])
            pivot_rows.append(active[0])

    pivot_rows.sort()
    a = [[rows[i].get(jj, 0) for jj in range(len(col_ids))] for i in pivot_rows]
    amat = IntMatrix(a, len(pivot_rows), len(col_ids))
    d, u, uinv, _ = _snf_lists(amat)
    diag = [d[t][t] if t < amat.cols else 0 for t in range(amat.rows)]
    torsion = [(t, x) for t, x in enumerate(diag) if x > 1]
    dense_free = [(t, 0) for t, x in enumerate(diag) if x == 0]
    pset = set(pivot_rows)
    free_rows = [i for i in range(ambient) if i not in eliminated and i not in pset]
    group = AbGroup(tuple(x for _, x in torsion), len(dense_free) + len(free_rows))
    return Quotient(ambient, group, subst_log, row_ops, pivot_rows, u, uinv,
                    torsion + dense_free, free_rows)


def cokernel(a) -> AbGroup:
    """``Z^rows / column-span(A)``."""
    a = _as_matrix(a)
    return quotient(a.rows, a).group


class Subquotient:
    """``span(gens) / span(rels)`` inside ``Z^d``, with coordinate maps."""

    def __init__(self, gens, rels):
        gens, rels = _as_matrix(gens), _as_matrix(rels)
        if gens.rows != rels.rows:
            raise ValueError("gens and rels live in different ambient lattices")
        self.ambient = gens.rows
        self.solver = SpanSolver(gens)
        try:
            rel_coords = [self.solver.echelon_coords(c) for c in rels.columns()]
        except NotInSpanError as exc:
            raise NotInSpanError("relations are not contained in the span of the generators") from exc
        self.basis = self.solver.basis()
        self.quotient = quotient(self.solver.rank, [{i: x for i, x in enumerate(c) if x}
                                                    for c in rel_coords])
        self.group = self.quotient.group

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.quotient.coords(self.solver.echelon_coords(v))

    def lift(self, j: int) -> list[int]:
        y = self.quotient.lift(j)
        out = [0] * self.ambient
        for k, c in y.items():
            for i, b in enumerate(self.basis.col(k)):
                if b:
                    out[i] += c * b
        return out


def subquotient(gens, rels) -> Subquotient:
    """``<columns of gens> / <columns of rels>``; rels must lie in the span of gens."""
    return Subquotient(gens, rels)


def ab_joint_kernel(fs: Sequence[AbMap]) -> tuple[AbGroup, AbMap]:
    """Common kernel of maps sharing one source, with its embedding."""
    if not fs:
        raise ValueError("need at least one map")
    src = fs[0].source
    if any(f.source != src for f in fs):
        raise ValueError("maps do not share a source")
    a = src.ngens
    stacked = IntMatrix.vstack([f.matrix for f in fs], cols=a)
    rel_b = IntMatrix.block_diag([f.target.relation_matrix() for f in fs])
    big = IntMatrix.hstack([stacked, rel_b]) if rel_b.cols else stacked
    k = kernel_basis(big)
    gens = k.submatrix(range(a), range(k.cols)) if a else IntMatrix.zeros(0, k.cols)
    sq = Subquotient(gens, src.relation_matrix())
    emb_cols = [src.reduce(sq.lift(j)) for j in range(sq.group.ngens)]
    emb = AbMap(sq.group, src, IntMatrix.from_columns(emb_cols, a))
    return sq.group, emb


def ab_kernel(f: AbMap) -> tuple[AbGroup, AbMap]:
    return ab_joint_kernel([f])
