"""Birational obstructions for tori, computed on character lattices.

Two independent routes to the unramified-type invariant

    Sha2_omega(G, M) = ker( H^2(G, M) -> prod_g H^2(<g>, M) ):

* ``sha2_omega``: the definition, restricting to one maximal cyclic
  subgroup per conjugacy class;
* ``sha_via_flasque``: ``H^1(G, N)`` for a flasque resolution
  ``0 -> M -> S -> N -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cohomology import CochainComplex, DEFAULT_BUDGET, h_n, restriction_map, tate
from .cohomology import tate_minus1
from .exactla import AbGroup, AbMap, IntMatrix, ab_joint_kernel, ab_kernel, cokernel, kernel_basis
from .glattice import (GLattice, LatticeMap, dual, fixed_sublattice, permutation_lattice,
                       restrict, sublattice, trivial_lattice)
from .permgrp import (CosetTable, PermGroup, cyclic_subgroups, maximal_cyclic_reps,
                      subgroup_from_elements, subgroups_up_to_conjugacy, sylow_subgroup)


@dataclass
class ObstructionResult:
    group: PermGroup
    lattice: GLattice
    sha: AbGroup
    route: str
    witness: AbMap
    # representative cocycles (sparse) of the sha generators
    cocycles: list[dict[int, int]] = field(default_factory=list)
    resolution: object = None

    def __post_init__(self):
        if not self.sha.is_finite():
            raise AssertionError("Sha2_omega must be finite")

    def to_json(self, group_label=None, lattice_label=None) -> dict:
        return {
            "group": group_label if group_label is not None else self.group.generator_strings(),
            "lattice": lattice_label if lattice_label is not None else self.lattice.kind,
            "route": self.route,
            "sha_torsion": list(self.sha.torsion),
        }


def sha2_omega(G: PermGroup, L: GLattice, all_elements: bool = False,
               budget: int = DEFAULT_BUDGET) -> ObstructionResult:
    """Kernel of restriction from ``H^2(G, L)`` to cyclic subgroups.

    By default only maximal cyclic subgroups up to conjugacy are used;
    ``all_elements=True`` restricts to ``<g>`` for every ``g`` instead.
    """
    L = L if L.group is G else restrict(L, G)
    H = CochainComplex(G, L, budget).h(2)
    if H.abgroup.is_trivial():
        emb = AbMap(AbGroup(), H.abgroup, IntMatrix.zeros(0, 0))
        return ObstructionResult(G, L, AbGroup(), "direct", emb, [])
    if all_elements:
        subs = [subgroup_from_elements(G, [g]) for g in G.elements]
    else:
        subs = maximal_cyclic_reps(G)
    maps = [restriction_map(H, CochainComplex(C, L, budget).h(2)) for C in subs]
    sha, emb = ab_joint_kernel(maps)
    cocycles = [_combine(H, emb.matrix.col(j)) for j in range(sha.ngens)]
    return ObstructionResult(G, L, sha, "direct", emb, cocycles)


def _combine(H, coeffs) -> dict[int, int]:
    out: dict[int, int] = {}
    for j, c in enumerate(coeffs):
        if c:
            for i, x in H.lift(j).items():
                out[i] = out.get(i, 0) + c * x
    return {i: x for i, x in out.items() if x}


# -- flasque and coflasque lattices ------------------------------------------------

def is_flasque(L: GLattice, subgroups=None) -> bool:
    """``H^-1(G', L) = 0`` for every subgroup ``G'`` (up to conjugacy)."""
    subs = subgroups if subgroups is not None else subgroups_up_to_conjugacy(L.group)
    return all(tate_minus1(U, L).is_trivial() for U in subs)


def is_coflasque(L: GLattice, subgroups=None) -> bool:
    """``H^1(G', L) = 0`` for every subgroup ``G'`` (up to conjugacy)."""
    subs = subgroups if subgroups is not None else subgroups_up_to_conjugacy(L.group)
    return all(U.order == 1 or h_n(U, L, 1).abgroup.is_trivial() for U in subs)


def kernel_lattice(f: LatticeMap) -> tuple[GLattice, LatticeMap]:
    """Kernel of an equivariant map as a lattice, with its inclusion."""
    K = kernel_basis(f.matrix)
    sub = sublattice(f.source, K, kind="kernel")
    return sub, LatticeMap(sub, f.source, K)


@dataclass
class CoflasqueResolution:
    S: GLattice
    Q: GLattice
    proj: LatticeMap  # S -> M
    incl: LatticeMap  # Q -> S
    blocks: list[dict]


def coflasque_resolution(G: PermGroup, M: GLattice, subgroups=None) -> CoflasqueResolution:
    """``0 -> Q -> S -> M -> 0`` with ``S`` a permutation lattice and ``Q`` coflasque.

    For each subgroup representative ``U`` and each basis vector ``b`` of
    ``M^U`` one summand ``Z[G/U]`` maps its coset ``gU`` to ``g b``.  Then
    ``S^U -> M^U`` is onto for every subgroup, which makes the kernel
    coflasque.
    """
    M = M if M.group is G else restrict(M, G)
    subs = subgroups if subgroups is not None else subgroups_up_to_conjugacy(G)
    summands, blocks, proj_cols = [], [], []
    for U in subs:
        fixed = fixed_sublattice(M, U)
        if fixed.cols == 0:
            continue
        ct = CosetTable(G, U)
        P = permutation_lattice(ct)
        for b in fixed.columns():
            summands.append(P)
            blocks.append({"subgroup": U.generator_strings(), "index": ct.index})
            for r in ct.cosets:
                proj_cols.append(M.matrix_of(r).apply(b))
    S = _sum_perm(G, summands, blocks)
    proj = LatticeMap(S, M, IntMatrix.from_columns(proj_cols, M.rank))
    if not cokernel(proj.matrix).is_trivial():
        raise AssertionError("coflasque cover is not surjective")
    Q, incl = kernel_lattice(proj)
    return CoflasqueResolution(S, Q, proj, incl, blocks)


def _sum_perm(G, summands, blocks) -> GLattice:
    if not summands:
        return GLattice(G, [IntMatrix.zeros(0, 0)] * len(G.generators), rank=0,
                        kind="permutation", perm_blocks=[])
    mats = [IntMatrix.block_diag([P.action[k] for P in summands])
            for k in range(len(G.generators))]
    return GLattice(G, mats, rank=sum(P.rank for P in summands), kind="permutation",
                    perm_blocks=blocks)


@dataclass
class FlasqueResolution:
    M: GLattice
    S: GLattice
    N: GLattice
    incl: LatticeMap  # M -> S
    proj: LatticeMap  # S -> N
    blocks: list[dict]

    def check(self, subgroups=None) -> bool:
        """Exactness, permutation structure of ``S`` and flasqueness of ``N``."""
        i, p = self.incl.matrix, self.proj.matrix
        if self.M.rank + self.N.rank != self.S.rank or not (p @ i).is_zero():
            return False
        # p onto and i a split injection; with ranks adding up, ker p = im i
        if not cokernel(p).is_trivial():
            return False
        if cokernel(i) != AbGroup((), self.S.rank - self.M.rank):
            return False
        if not self.S.is_permutation() or sum(b["index"] for b in self.blocks) != self.S.rank:
            return False
        return is_flasque(self.N, subgroups)


def flasque_resolution(G: PermGroup, M: GLattice, subgroups=None) -> FlasqueResolution:
    """Dual of a coflasque resolution of the dual lattice."""
    M = M if M.group is G else restrict(M, G)
    subs = subgroups if subgroups is not None else subgroups_up_to_conjugacy(G)
    cof = coflasque_resolution(G, dual(M), subs)
    S = dual(cof.S)
    N = dual(cof.Q)
    incl = LatticeMap(M, S, cof.proj.matrix.T)
    proj = LatticeMap(S, N, cof.incl.matrix.T)
    return FlasqueResolution(M, S, N, incl, proj, cof.blocks)


def sha_via_flasque(G: PermGroup, M: GLattice, subgroups=None,
                    budget: int = DEFAULT_BUDGET) -> ObstructionResult:
    res = flasque_resolution(G, M, subgroups)
    H = CochainComplex(G, res.N, budget).h(1)
    emb = AbMap.identity(H.abgroup)
    cocycles = [H.lift(j) for j in range(H.abgroup.ngens)]
    return ObstructionResult(G, res.M, H.abgroup, "flasque", emb, cocycles, res)


def sylow_injectivity_check(G: PermGroup, N: GLattice, p: int,
                            budget: int = DEFAULT_BUDGET) -> bool:
    """No element of order ``p`` in the kernel of ``H^1(G, N) -> H^1(Syl_p, N)``."""
    H = CochainComplex(G, N, budget).h(1)
    if H.abgroup.is_trivial():
        return True
    P = sylow_subgroup(G, p)
    K, _ = ab_kernel(restriction_map(H, CochainComplex(P, N, budget).h(1)))
    return K.free_rank == 0 and all(d % p for d in K.torsion)


# -- splitting off a trivial quotient ------------------------------------------------

@dataclass
class TrivialQuotientSplit:
    Ma: GLattice
    incl: LatticeMap  # Ma -> L
    proj: LatticeMap  # L -> Z^t
    t: int
    sha_Ma: AbGroup


def trivial_quotient_split(L: GLattice, G: PermGroup | None = None,
                           budget: int = DEFAULT_BUDGET) -> TrivialQuotientSplit:
    """``0 -> M_a -> L -> Z^t -> 0`` with ``Z^t`` the coinvariants modulo torsion."""
    G = G or L.group
    L = L if L.group is G else restrict(L, G)
    eye = IntMatrix.identity(L.rank)
    aug = IntMatrix.hstack([m - eye for m in L.element_matrices()], rows=L.rank)
    q = kernel_basis(aug.T).T  # rows: invariant linear forms, saturated
    t = q.rows
    Zt = trivial_lattice(G, t)
    proj = LatticeMap(L, Zt, q)
    Ma, incl = kernel_lattice(proj)
    sha = sha2_omega(G, Ma, budget=budget).sha if Ma.rank else AbGroup()
    return TrivialQuotientSplit(Ma, incl, proj, t, sha)


def tate_profile(L: GLattice, subgroups=None, degrees=(-1, 0, 1, 2)) -> list[tuple]:
    """Invariants of ``H^k(U, L)`` for every subgroup representative ``U``."""
    subs = subgroups if subgroups is not None else subgroups_up_to_conjugacy(L.group)
    out = []
    for U in subs:
        out.append(tuple(str(tate(U, L, k)) for k in degrees))
    return out
