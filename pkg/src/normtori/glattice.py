"""G-lattices: free abelian groups of finite rank with an integral group action.

A lattice stores one unimodular matrix per group generator.  The full
element -> matrix table is built lazily by breadth-first search over the
group and checked to be a homomorphism for function composition, so a
lattice whose generator matrices do not satisfy the group's relations is
rejected.

Norm-one lattices use the quotient basis ``ebar_1 .. ebar_{d-1}`` of
``Z^d / Z(1, ..., 1)`` with ``ebar_d = -(ebar_1 + ... + ebar_{d-1})``.
"""

from __future__ import annotations

from typing import Sequence

from .exactla import IntMatrix, SpanSolver, kernel_basis, unimodular_inverse
from .permgrp import CosetTable, Perm, PermGroup, lemma1_block_embedding


class LatticeError(ValueError):
    pass


class GLattice:
    """Integral representation of a permutation group.

    ``action[k]`` is the matrix of ``group.generators[k]`` acting on column
    vectors.  ``kind`` records how the lattice was built (``"permutation"``
    lattices also keep the orbit structure in ``perm_blocks``).
    """

    def __init__(self, group: PermGroup, action: Sequence[IntMatrix], rank: int | None = None,
                 kind: str = "matrices", check: bool = True, perm_blocks=None):
        action = [a if isinstance(a, IntMatrix) else IntMatrix(a) for a in action]
        if len(action) != len(group.generators):
            raise LatticeError(f"{len(group.generators)} generators but {len(action)} matrices")
        if rank is None:
            if not action:
                raise LatticeError("rank required when the group has no generators")
            rank = action[0].rows
        for a in action:
            if a.shape != (rank, rank):
                raise LatticeError(f"action matrix of shape {a.shape}, expected rank {rank}")
            if abs(a.det()) != 1:
                raise LatticeError("action matrix is not unimodular")
        self.group = group
        self.rank = rank
        self.action = action
        self.kind = kind
        self.perm_blocks = perm_blocks
        self._table: list[IntMatrix] | None = None
        if check:
            self.element_matrices()

    def element_matrices(self) -> list[IntMatrix]:
        """Matrix of every element of ``group.elements``, homomorphism-checked."""
        if self._table is None:
            G = self.group
            els = G.elements
            table: list[IntMatrix | None] = [None] * len(els)
            table[0] = IntMatrix.identity(self.rank)
            gens = list(zip(G.generators, self.action))
            for k, x in enumerate(els):
                mx = table[k]
                if mx is None:
                    raise AssertionError("enumeration order broke the BFS table")
                for s, ms in gens:
                    j = G.index(s.compose(x))
                    prod = ms @ mx
                    if table[j] is None:
                        table[j] = prod
                    elif table[j] != prod:
                        raise LatticeError("generator matrices do not define a group action")
            self._table = table
        return self._table

    def matrix_of(self, g: Perm) -> IntMatrix:
        return self.element_matrices()[self.group.index(g)]

    def is_permutation(self) -> bool:
        """Every generator acts by a permutation matrix."""
        return all(sorted(a.entries()) == [0] * (self.rank * (self.rank - 1)) + [1] * self.rank
                   for a in self.action)

    def __repr__(self) -> str:
        return f"GLattice(rank={self.rank}, kind={self.kind}, group={self.group!r})"


class LatticeMap:
    """Equivariant homomorphism ``source -> target`` (``matrix`` is target.rank x source.rank)."""

    def __init__(self, source: GLattice, target: GLattice, matrix: IntMatrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = matrix if isinstance(matrix, IntMatrix) else IntMatrix(matrix)
        if self.matrix.shape != (target.rank, source.rank):
            raise LatticeError(f"map matrix shape {self.matrix.shape} does not fit")
        if check and not self.is_equivariant():
            raise LatticeError("map is not equivariant")

    def is_equivariant(self) -> bool:
        return all(at @ self.matrix == self.matrix @ as_
                   for at, as_ in zip(self.target.action, self.source.action))


# -- constructors ---------------------------------------------------------------

def _perm_matrix(p: Perm) -> IntMatrix:
    """``e_i -> e_{p(i)}``."""
    n = p.degree
    out = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        out[p(i) - 1][i - 1] = 1
    return IntMatrix(out, n, n)


def trivial_lattice(G: PermGroup, r: int = 1) -> GLattice:
    return GLattice(G, [IntMatrix.identity(r)] * len(G.generators), rank=r, kind="trivial",
                    perm_blocks=[{"subgroup": "G", "index": 1}] * r)


def permutation_lattice(ct: CosetTable) -> GLattice:
    """``Z[G/H]`` with ``G`` permuting the coset basis."""
    G = ct.group
    return GLattice(G, [_perm_matrix(p) for p in ct.action], rank=ct.index, kind="permutation",
                    perm_blocks=[{"subgroup": ct.subgroup.generator_strings(), "index": ct.index}])


def regular_lattice(G: PermGroup) -> GLattice:
    return permutation_lattice(CosetTable(G, PermGroup([], G.degree)))


def natural_lattice(G: PermGroup, points: Sequence[int] | None = None) -> GLattice:
    """Permutation lattice on ``points`` (an invariant subset, default all points)."""
    pts = list(points) if points is not None else list(range(1, G.degree + 1))
    pos = {x: k for k, x in enumerate(pts, 1)}
    mats = []
    for g in G.generators:
        try:
            mats.append(_perm_matrix(Perm(pos[g(x)] for x in pts)))
        except KeyError:
            raise LatticeError("point set is not invariant under the group") from None
    return GLattice(G, mats, rank=len(pts), kind="permutation",
                    perm_blocks=[{"orbit": orb, "index": len(orb)} for orb in G.orbits()
                                 if set(orb) <= set(pts)])


def _norm_one_from(P: GLattice) -> tuple[GLattice, LatticeMap, LatticeMap]:
    d = P.rank
    proj = [[0] * d for _ in range(d - 1)]
    for i in range(d - 1):
        proj[i][i] = 1
        proj[i][d - 1] = -1
    proj_m = IntMatrix(proj, d - 1, d)
    # action on ebar_i = image of e_i: column i of proj @ A, restricted to i < d
    mats = [(proj_m @ a).submatrix(range(d - 1), range(d - 1)) for a in P.action]
    M = GLattice(P.group, mats, rank=d - 1, kind="norm_one")
    Z = trivial_lattice(P.group, 1)
    incl = LatticeMap(Z, P, IntMatrix([[1]] * d, d, 1))
    return M, LatticeMap(P, M, proj_m), incl


def norm_one_lattice(ct: CosetTable) -> tuple[GLattice, LatticeMap, LatticeMap]:
    """``M = Z[G/H] / Z``: returns ``(M, proj: P -> M, incl: Z -> P)``."""
    return _norm_one_from(permutation_lattice(ct))


def natural_norm_one_lattice(G: PermGroup) -> GLattice:
    """Norm-one lattice of the natural action on ``1..degree``.

    For ``G`` inside ``S_n`` this is the restriction of ``M_n`` to ``G``.
    """
    return _norm_one_from(natural_lattice(G))[0]


def restrict(L: GLattice, U: PermGroup) -> GLattice:
    if not U.is_subgroup_of(L.group):
        raise LatticeError("U is not a subgroup of the lattice's group")
    return GLattice(U, [L.matrix_of(u) for u in U.generators], rank=L.rank, kind=L.kind)


def direct_sum(Ls: Sequence[GLattice]) -> GLattice:
    if not Ls:
        raise LatticeError("empty direct sum")
    G = Ls[0].group
    if any(L.group is not G and L.group.generators != G.generators for L in Ls):
        raise LatticeError("summands over different groups")
    mats = [IntMatrix.block_diag([L.action[k] for L in Ls]) for k in range(len(G.generators))]
    blocks = None
    if all(L.perm_blocks is not None for L in Ls):
        blocks = [b for L in Ls for b in L.perm_blocks]
    return GLattice(G, mats, rank=sum(L.rank for L in Ls),
                    kind="permutation" if blocks is not None else "sum", perm_blocks=blocks)


def dual(L: GLattice) -> GLattice:
    """Inverse-transpose action."""
    mats = [unimodular_inverse(a).T for a in L.action]
    return GLattice(L.group, mats, rank=L.rank, kind=L.kind, perm_blocks=L.perm_blocks)


def fixed_sublattice(L: GLattice, U: PermGroup | None = None) -> IntMatrix:
    """Saturated basis (columns) of the vectors fixed by every element of ``U``."""
    mats = [L.matrix_of(u) for u in U.generators] if U is not None else L.action
    if not mats:
        return IntMatrix.identity(L.rank)
    eye = IntMatrix.identity(L.rank)
    stacked = IntMatrix.vstack([a - eye for a in mats])
    return kernel_basis(stacked)


def sublattice(L: GLattice, basis: IntMatrix, kind: str = "sub") -> GLattice:
    """The invariant saturated sublattice spanned by the columns of ``basis``."""
    solver = SpanSolver(basis)
    mats = []
    for a in L.action:
        img = a @ basis
        mats.append(IntMatrix.from_columns([solver.coords(c) for c in img.columns()], basis.cols))
    return GLattice(L.group, mats, rank=basis.cols, kind=kind)


def check_equivariant_iso(f: LatticeMap) -> bool:
    """True iff ``f`` is unimodular and commutes with every generator."""
    if f.source.rank != f.target.rank:
        return False
    if f.source.group.generators != f.target.group.generators:
        return False
    return f.matrix.is_unimodular() and f.is_equivariant()


def is_homomorphism_consistent(L: GLattice) -> bool:
    try:
        L._table = None
        L.element_matrices()
    except LatticeError:
        return False
    return True


# -- block decomposition ---------------------------------------------------------

def lemma1_iso_matrix(r: int, s: int) -> IntMatrix:
    """Matrix of ``class(x_1, ..., x_s) -> (class(x_1), x_2 - x_1, ..., x_s - x_1)``.

    Source basis: the norm-one basis of ``Z^{rs}/Z``.  Target basis: the
    norm-one basis of ``Z^r/Z`` followed by the standard bases of ``s - 1``
    copies of ``Z^r``.
    """
    n = r * s
    cols = []
    for k in range(n - 1):
        b, i = divmod(k, r)
        col = [0] * (n - 1)
        if b == 0:
            if i < r - 1:
                col[i] = 1
            else:
                for t in range(r - 1):
                    col[t] = -1
            for blk in range(1, s):
                col[r - 1 + (blk - 1) * r + i] = -1
        else:
            col[r - 1 + (b - 1) * r + i] = 1
        cols.append(col)
    return IntMatrix.from_columns(cols, n - 1)


def block_lattices(U: PermGroup, r: int, s: int, check: bool = True):
    """``(M_{rs}|_U, M_r + P_r^{s-1})`` as lattices over the block group ``U``."""
    source = GLattice(U, [ _norm_action(g, r * s) for g in U.generators], rank=r * s - 1,
                      kind="norm_one", check=check)
    block = [Perm(g(x) for x in range(1, r + 1)) for g in U.generators]
    m_r = [_norm_action(p, r) for p in block]
    p_r = [_perm_matrix(p) for p in block]
    mats = [IntMatrix.block_diag([m] + [p] * (s - 1)) for m, p in zip(m_r, p_r)]
    target = GLattice(U, mats, rank=r * s - 1, kind="sum", check=check)
    return source, target


def _norm_action(p: Perm, d: int) -> IntMatrix:
    proj = [[0] * d for _ in range(d - 1)]
    for i in range(d - 1):
        proj[i][i] = 1
        proj[i][d - 1] = -1
    return (IntMatrix(proj, d - 1, d) @ _perm_matrix(p)).submatrix(range(d - 1), range(d - 1))


def lemma1_decomposition(r: int, s: int, enumerate_group: bool = True):
    """Explicit witness of ``M_{rs}|_U = M_r + P_r^{s-1}`` for the block embedding.

    Returns ``(U, iso)``.  With ``enumerate_group=False`` the group is never
    enumerated and the lattices are only checked at generator level.
    """
    U = lemma1_block_embedding(r, s, check_cap=enumerate_group)
    source, target = block_lattices(U, r, s, check=enumerate_group)
    iso = LatticeMap(source, target, lemma1_iso_matrix(r, s), check=False)
    return U, iso
