"""Cohomology of finite groups with coefficients in G-lattices.

Cochains are inhomogeneous and unnormalized: ``C^n = Map(G^n, L)`` with
coordinates ordered by the tuple index ``((g_1 |G| + g_2) |G| + ...) rank + i``
where ``g_k`` are positions in ``G.elements``.  The group law is function
composition, so lattices act on the left.

``H^n`` for ``n >= 1`` is computed as the torsion subgroup of
``C^n / B^n``.  Because ``|G|`` kills ``H^n``, the cocycles are exactly the
saturation of the coboundaries, and only ``d^{n-1}`` has to be reduced.
Every class keeps a representative cocycle so that restriction maps can be
evaluated without recomputing anything.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .exactla import (AbGroup, AbMap, IntMatrix, SparseIntMatrix, Subquotient, kernel_basis,
                      quotient)
from .glattice import GLattice, restrict
from .permgrp import PermGroup

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """A cochain space is larger than the configured budget."""


def _on_group(G: PermGroup, L: GLattice) -> GLattice:
    if L.group is G:
        return L
    return restrict(L, G)


class CochainComplex:
    """Bar cochain complex of ``G`` with coefficients in ``L``."""

    def __init__(self, G: PermGroup, L: GLattice, budget: int = DEFAULT_BUDGET):
        self.group = G
        self.lattice = _on_group(G, L)
        self.budget = budget
        self.order = G.order
        self.rank = self.lattice.rank
        self._mul = G.compose_table
        self._entries = []
        for m in self.lattice.element_matrices():
            self._entries.append([(i, k, m[i, k]) for i in range(m.rows) for k in range(m.cols)
                                  if m[i, k]])
        self._d: dict[int, SparseIntMatrix] = {}
        self._h: dict[int, Cohomology] = {}

    def dim(self, n: int) -> int:
        return self.order ** n * self.rank

    def _check_budget(self, n: int) -> None:
        if self.dim(n) > self.budget:
            raise BudgetExceeded(
                f"C^{n} has dimension {self.dim(n)} > budget {self.budget}; "
                "restrict to a smaller subgroup first")

    def tuple_index(self, t: Sequence[int]) -> int:
        k = 0
        for g in t:
            k = k * self.order + g
        return k

    def d(self, n: int) -> SparseIntMatrix:
        """``d^n: C^n -> C^{n+1}``."""
        if n not in self._d:
            self._check_budget(n + 1)
            N, r = self.order, self.rank
            cols: list[dict[int, int]] = [dict() for _ in range(self.dim(n))]
            mul, ent = self._mul, self._entries
            last_sign = -1 if (n + 1) % 2 else 1
            for t in product(range(N), repeat=n + 1):
                R = self.tuple_index(t) * r
                S0 = self.tuple_index(t[1:]) * r
                for i, k, v in ent[t[0]]:
                    c = cols[S0 + k]
                    c[R + i] = c.get(R + i, 0) + v
                for p in range(1, n + 1):
                    merged = t[:p - 1] + (mul[t[p - 1]][t[p]],) + t[p + 1:]
                    S = self.tuple_index(merged) * r
                    sign = -1 if p % 2 else 1
                    for i in range(r):
                        c = cols[S + i]
                        c[R + i] = c.get(R + i, 0) + sign
                S = self.tuple_index(t[:n]) * r
                for i in range(r):
                    c = cols[S + i]
                    c[R + i] = c.get(R + i, 0) + last_sign
            self._d[n] = SparseIntMatrix(self.dim(n + 1), self.dim(n), cols)
        return self._d[n]

    def coboundary(self, f, n: int, first: Sequence[int] | None = None) -> dict[int, int]:
        """Evaluate ``d^n f`` directly, optionally only on tuples whose first entry is in ``first``."""
        N, r = self.order, self.rank
        fv = f if isinstance(f, dict) else {i: x for i, x in enumerate(f) if x}
        dense = [0] * self.dim(n)
        for i, x in fv.items():
            dense[i] = x
        out: dict[int, int] = {}
        firsts = range(N) if first is None else first
        last_sign = -1 if (n + 1) % 2 else 1
        for g1 in firsts:
            for rest in product(range(N), repeat=n):
                t = (g1,) + rest
                R = self.tuple_index(t) * r
                val = [0] * r
                S0 = self.tuple_index(t[1:]) * r
                for i, k, v in self._entries[g1]:
                    val[i] += v * dense[S0 + k]
                for p in range(1, n + 1):
                    merged = t[:p - 1] + (self._mul[t[p - 1]][t[p]],) + t[p + 1:]
                    S = self.tuple_index(merged) * r
                    sign = -1 if p % 2 else 1
                    for i in range(r):
                        val[i] += sign * dense[S + i]
                S = self.tuple_index(t[:n]) * r
                for i in range(r):
                    val[i] += last_sign * dense[S + i]
                for i, x in enumerate(val):
                    if x:
                        out[R + i] = x
        return out

    def is_cocycle(self, f, n: int) -> bool:
        """Check ``d f = 0`` on tuples starting with the identity or a generator.

        This suffices: ``d(df) = 0`` gives ``df(s x, ...) = s . df(x, ...)``,
        so vanishing spreads from ``x`` to ``s x`` for each generator ``s``.
        """
        G = self.group
        first = sorted({0} | {G.index(s) for s in G.generators})
        return not self.coboundary(f, n, first)

    def h(self, n: int) -> Cohomology:
        if n < 1:
            raise ValueError("use tate0 or fixed_sublattice for degree 0")
        if n not in self._h:
            q = quotient(self.dim(n), self.d(n - 1))
            self._h[n] = Cohomology(self, n, q)
        return self._h[n]


class Cohomology:
    """``H^n(G, L)`` with representative cocycles and a coordinate map."""

    def __init__(self, complex_: CochainComplex, n: int, q):
        self.complex = complex_
        self.degree = n
        self._q = q
        self.abgroup = AbGroup(q.group.torsion)

    @property
    def group(self) -> PermGroup:
        return self.complex.group

    @property
    def lattice(self) -> GLattice:
        return self.complex.lattice

    def lift(self, j: int) -> dict[int, int]:
        """Sparse cocycle representing the ``j``-th invariant-factor generator."""
        return self._q.lift(j)

    def coords(self, cocycle) -> tuple[int, ...]:
        """Class of a cocycle in invariant-factor coordinates."""
        return self._q.torsion_coords(cocycle)

    def __repr__(self) -> str:
        return f"H^{self.degree}(|G|={self.complex.order}, rank {self.complex.rank}) = {self.abgroup}"


def differential(G: PermGroup, L: GLattice, n: int, budget: int = DEFAULT_BUDGET) -> SparseIntMatrix:
    return CochainComplex(G, L, budget).d(n)


def h_n(G: PermGroup, L: GLattice, n: int, budget: int = DEFAULT_BUDGET) -> Cohomology:
    return CochainComplex(G, L, budget).h(n)


def restrict_cochain(src: CochainComplex, dst: CochainComplex, f, n: int) -> dict[int, int]:
    """Restrict an ``n``-cochain on ``G`` to the subgroup of ``dst``."""
    G, U = src.group, dst.group
    gpos = [G.index(u) for u in U.elements]
    fv = f if isinstance(f, dict) else {i: x for i, x in enumerate(f) if x}
    r = src.rank
    out = {}
    for t in product(range(U.order), repeat=n):
        S = src.tuple_index([gpos[x] for x in t]) * r
        R = dst.tuple_index(t) * r
        for i in range(r):
            x = fv.get(S + i)
            if x:
                out[R + i] = x
    return out


def restriction_map(source: Cohomology, target: Cohomology) -> AbMap:
    """Induced map ``H^n(G, L) -> H^n(U, L|_U)`` between computed groups."""
    if source.degree != target.degree:
        raise ValueError("degree mismatch")
    if not target.group.is_subgroup_of(source.group):
        raise ValueError("target group is not a subgroup of the source group")
    n = source.degree
    cols = []
    for j in range(source.abgroup.ngens):
        f = restrict_cochain(source.complex, target.complex, source.lift(j), n)
        cols.append(list(target.coords(f)))
    return AbMap(source.abgroup, target.abgroup,
                 IntMatrix.from_columns(cols, target.abgroup.ngens))


def restriction_on_h(G: PermGroup, U: PermGroup, L: GLattice, n: int,
                     budget: int = DEFAULT_BUDGET) -> AbMap:
    return restriction_map(h_n(G, L, n, budget), h_n(U, L, n, budget))


# -- Tate cohomology in degrees 0 and -1 ------------------------------------------

def _element_matrices(U: PermGroup, L: GLattice) -> list[IntMatrix]:
    if L.group is U:
        return L.element_matrices()
    if not U.is_subgroup_of(L.group):
        raise ValueError("U is not a subgroup of the lattice's group")
    return [L.matrix_of(u) for u in U.elements]


def norm_matrix(U: PermGroup, L: GLattice) -> IntMatrix:
    mats = _element_matrices(U, L)
    out = IntMatrix.zeros(L.rank, L.rank)
    for m in mats:
        out = out + m
    return out


def tate0_presentation(U: PermGroup, L: GLattice) -> Subquotient:
    from .glattice import fixed_sublattice
    fixed = fixed_sublattice(L, U)
    return Subquotient(fixed, norm_matrix(U, L))


def tate0(U: PermGroup, L: GLattice) -> AbGroup:
    """``L^U / N_U L``."""
    return tate0_presentation(U, L).group


def tate_minus1_presentation(U: PermGroup, L: GLattice) -> Subquotient:
    ker = kernel_basis(norm_matrix(U, L))
    eye = IntMatrix.identity(L.rank)
    aug = IntMatrix.hstack([m - eye for m in _element_matrices(U, L)], rows=L.rank)
    return Subquotient(ker, aug)


def tate_minus1(U: PermGroup, L: GLattice) -> AbGroup:
    """``ker(N_U) / I_U L``."""
    return tate_minus1_presentation(U, L).group


def tate(U: PermGroup, L: GLattice, degree: int, budget: int = DEFAULT_BUDGET) -> AbGroup:
    """Tate cohomology in degrees -1, 0 and ordinary cohomology in degrees >= 1."""
    if degree == -1:
        return tate_minus1(U, L)
    if degree == 0:
        return tate0(U, L)
    return h_n(U, L, degree, budget).abgroup
