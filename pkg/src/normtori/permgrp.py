"""Permutation groups on points ``1..n`` by explicit enumeration.

Conventions
-----------
* Points are 1-based, as in cycle notation.
* ``p * q`` applies ``p`` first, then ``q``.  Cycle strings are composed
  left to right in the same way.
* Group actions on lattices and on cosets are *left* actions for ordinary
  function composition ``p.compose(q)`` (apply ``q`` first, then ``p``).
  :attr:`PermGroup.compose_table` uses that law.

Groups are enumerated by breadth-first closure and refuse to grow beyond a
cap (default 20160), so large symmetric groups are never materialized.
"""

from __future__ import annotations

import re
from itertools import combinations
from math import factorial, gcd
from typing import Iterable, Sequence

DEFAULT_CAP = 20160


class CapExceeded(RuntimeError):
    """Group enumeration would exceed the configured order cap."""


class Perm:
    """Permutation of ``{1..degree}``; ``images[i-1]`` is the image of ``i``."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Perm:
        p = cls.identity(degree)
        for cyc in cycles:
            img = list(range(1, degree + 1))
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
            p = p * cls(img)
        return p

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Perm) -> Perm:
        """Apply ``self`` first, then ``other``."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Perm(o[x - 1] for x in self.images)

    def compose(self, other: Perm) -> Perm:
        """Function composition: apply ``other`` first, then ``self``."""
        return other * self

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, x in enumerate(self.images, 1):
            inv[x - 1] = i
        return Perm(inv)

    def __pow__(self, k: int) -> Perm:
        base = self if k >= 0 else self.inverse()
        out = Perm.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def order(self) -> int:
        from math import lcm
        return lcm(1, *(len(c) for c in self.cycles()))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point."""
        seen, out = set(), []
        for i in range(1, self.degree + 1):
            if i in seen or self(i) == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_string(self, compact: bool | None = None) -> str:
        """Cycle notation; digits run together (``(12)(34)``) when the degree is below 10."""
        if compact is None:
            compact = self.degree <= 9
        sep = "" if compact else " "
        return "".join("(" + sep.join(map(str, c)) + ")" for c in self.cycles())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm({self.cycle_string() or '()'}, degree={self.degree})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation such as ``"(1 2)(3 4)"`` or ``"(12)(34)"``.

    Points inside a cycle are separated by whitespace or commas.  A cycle
    written without separators is read digit by digit, which is only
    allowed for degree at most 9.  Cycles compose left to right.
    """
    stripped = text.strip()
    if not stripped or stripped == "()":
        return Perm.identity(degree)
    if _CYCLE_RE.sub("", stripped).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        body = body.strip()
        if not body:
            continue
        if re.search(r"[\s,]", body):
            pts = [int(t) for t in re.split(r"[\s,]+", body) if t]
        elif body.isdigit() and len(body) > 1 and degree <= 9:
            pts = [int(ch) for ch in body]
        else:
            pts = [int(body)]
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle ({body})")
        for x in pts:
            if not 1 <= x <= degree:
                raise ValueError(f"point {x} out of range 1..{degree}")
        cycles.append(pts)
    return Perm.from_cycles(cycles, degree)


class PermGroup:
    """Finite permutation group given by generators, enumerated on demand."""

    def __init__(self, generators: Sequence[Perm], degree: int | None = None,
                 cap: int = DEFAULT_CAP, name: str | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators have mixed degrees")
        self.degree = degree
        self.generators = [g for g in gens if not g.is_identity()]
        self.cap = cap
        self.name = name
        self._elements: list[Perm] | None = None
        self._index: dict[tuple[int, ...], int] | None = None
        self._compose: list[list[int]] | None = None

    @classmethod
    def from_strings(cls, gens: Sequence[str], degree: int, **kw) -> PermGroup:
        return cls([parse_cycles(s, degree) for s in gens], degree, **kw)

    def generator_strings(self) -> list[str]:
        return [g.cycle_string() for g in self.generators]

    # -- enumeration -------------------------------------------------------

    @property
    def elements(self) -> list[Perm]:
        """All elements, identity first, in breadth-first order."""
        if self._elements is None:
            e = Perm.identity(self.degree)
            elems = [e]
            seen = {e.images: 0}
            k = 0
            while k < len(elems):
                x = elems[k]
                for s in self.generators:
                    y = s.compose(x)
                    if y.images not in seen:
                        if len(elems) >= self.cap:
                            raise CapExceeded(f"group order exceeds cap {self.cap}")
                        seen[y.images] = len(elems)
                        elems.append(y)
                k += 1
            self._elements = elems
            self._index = seen
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def index(self, g: Perm) -> int:
        self.elements
        return self._index[g.images]

    def __contains__(self, g: Perm) -> bool:
        self.elements
        return g.degree == self.degree and g.images in self._index

    @property
    def compose_table(self) -> list[list[int]]:
        """``compose_table[i][j]`` is the index of ``elements[i].compose(elements[j])``."""
        if self._compose is None:
            els = self.elements
            idx = self._index
            self._compose = [[idx[a.compose(b).images] for b in els]
                             for a in els]
        return self._compose

    def inverse_index(self) -> list[int]:
        return [self.index(g.inverse()) for g in self.elements]

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and all(g in other for g in self.generators)

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a, b in combinations(self.generators, 2))

    def is_cyclic(self) -> bool:
        n = self.order
        return any(g.order() == n for g in self.elements)

    def orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for i in range(1, self.degree + 1):
            if i in seen:
                continue
            orb, stack = [i], [i]
            seen.add(i)
            while stack:
                x = stack.pop()
                for s in self.generators:
                    y = s(x)
                    if y not in seen:
                        seen.add(y)
                        orb.append(y)
                        stack.append(y)
            out.append(sorted(orb))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def stabilizer(self, point: int) -> PermGroup:
        return subgroup_from_elements(self, [g for g in self.elements if g(point) == point])

    def is_regular(self) -> bool:
        return self.is_transitive() and self.order == self.degree

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"PermGroup({label}<{', '.join(self.generator_strings())}>, degree={self.degree})"


def generate(gens: Sequence[Perm], degree: int | None = None, cap: int = DEFAULT_CAP) -> PermGroup:
    """Closure of ``gens``; raises :class:`CapExceeded` beyond ``cap``."""
    g = PermGroup(gens, degree, cap=cap)
    g.elements
    return g


def subgroup_from_elements(G: PermGroup, elems: Iterable[Perm]) -> PermGroup:
    """The subgroup generated by ``elems``, with a small generating set.

    Generators are picked greedily from ``elems`` in order, keeping only the
    ones that enlarge the group generated so far.
    """
    gens: list[Perm] = []
    current = {Perm.identity(G.degree).images}
    for g in elems:
        if g.images in current:
            continue
        gens.append(g)
        current = {x.images for x in PermGroup(gens, G.degree, cap=G.cap).elements}
    return generate(gens, G.degree, cap=G.cap)


def _element_set(H: PermGroup) -> frozenset[tuple[int, ...]]:
    return frozenset(g.images for g in H.elements)


def conjugate_set(S: frozenset, x: Perm) -> frozenset:
    xi = x.inverse()
    return frozenset((xi * Perm(s) * x).images for s in S)


# -- cosets ------------------------------------------------------------------

class CosetTable:
    """Left cosets ``g H`` of ``H`` in ``G`` and the permutation action of ``G`` on them.

    Coset 1 is ``H`` itself; the rest follow in order of first appearance
    in ``G.elements``.  ``action[k]`` is the permutation of coset indices
    induced by ``G.generators[k]``.
    """

    def __init__(self, group: PermGroup, subgroup: PermGroup):
        if not subgroup.is_subgroup_of(group):
            raise ValueError("H is not a subgroup of G")
        self.group = group
        self.subgroup = subgroup
        hel = subgroup.elements
        lookup: dict[tuple[int, ...], int] = {}
        reps: list[Perm] = []
        for g in group.elements:
            if g.images in lookup:
                continue
            k = len(reps)
            reps.append(g)
            for h in hel:
                lookup[g.compose(h).images] = k
        self.cosets = reps
        self._lookup = lookup
        self.action = [Perm(lookup[s.compose(r).images] + 1 for r in reps)
                       for s in group.generators]
        if len(reps) * subgroup.order != group.order:
            raise AssertionError("coset count inconsistent with Lagrange")

    @property
    def index(self) -> int:
        return len(self.cosets)

    def coset_of(self, g: Perm) -> int:
        """1-based index of the coset containing ``g``."""
        return self._lookup[g.images] + 1

    def permutation(self, g: Perm) -> Perm:
        return Perm(self._lookup[g.compose(r).images] + 1 for r in self.cosets)


def coset_action(G: PermGroup, H: PermGroup) -> CosetTable:
    return CosetTable(G, H)


# -- subgroup structure ------------------------------------------------------

def cyclic_subgroups(G: PermGroup) -> list[frozenset]:
    """Distinct cyclic subgroups as element sets, in order of first generator."""
    seen: dict[frozenset, None] = {}
    for g in G.elements:
        s = frozenset((g ** k).images for k in range(g.order()))
        seen.setdefault(s, None)
    return list(seen)


def _classes(G: PermGroup, subsets: Sequence[frozenset]) -> list[frozenset]:
    """First representative of each conjugacy class among ``subsets``."""
    reps: list[frozenset] = []
    covered: set[frozenset] = set()
    for s in subsets:
        if s in covered:
            continue
        reps.append(s)
        for x in G.elements:
            covered.add(conjugate_set(s, x))
    return reps


def _group_of(G: PermGroup, S: frozenset) -> PermGroup:
    ordered = [g for g in G.elements if g.images in S]
    return subgroup_from_elements(G, ordered)


def maximal_cyclic_reps(G: PermGroup) -> list[PermGroup]:
    """One representative per conjugacy class of maximal cyclic subgroups."""
    cyc = cyclic_subgroups(G)
    maximal = [c for c in cyc if not any(c < d for d in cyc)]
    return [_group_of(G, c) for c in _classes(G, maximal)]


def all_subgroups(G: PermGroup, max_order: int = 100) -> list[frozenset]:
    """Every subgroup of ``G`` as an element set, sorted by order."""
    if G.order > max_order:
        raise CapExceeded(f"subgroup enumeration limited to order {max_order}")
    cyc = cyclic_subgroups(G)
    found = {frozenset([Perm.identity(G.degree).images])}
    found.update(cyc)
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyc:
                if C <= H:
                    continue
                J = _join(G, H | C)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    index = {g.images: i for i, g in enumerate(G.elements)}
    return sorted(found, key=lambda s: (len(s), sorted(index[x] for x in s)))


def _join(G: PermGroup, S: frozenset) -> frozenset:
    elems = set(S)
    frontier = list(S)
    perms = [Perm(x) for x in S]
    while frontier:
        nxt = []
        for x in frontier:
            px = Perm(x)
            for s in perms:
                y = (px * s).images
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def subgroups_up_to_conjugacy(G: PermGroup, max_order: int = 100) -> list[PermGroup]:
    """One representative per conjugacy class of subgroups, by increasing order."""
    return [_group_of(G, s) for s in _classes(G, all_subgroups(G, max_order))]


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def normalizer_elements(G: PermGroup, S: frozenset) -> list[Perm]:
    return [x for x in G.elements if conjugate_set(S, x) == S]


def sylow_subgroup(G: PermGroup, p: int) -> PermGroup:
    """A Sylow ``p``-subgroup, grown inside normalizers one element at a time."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = G.order
    if n % p:
        raise ValueError(f"{p} does not divide |G| = {n}")
    target = 1
    while n % (target * p) == 0:
        target *= p
    P = frozenset([Perm.identity(G.degree).images])
    while len(P) < target:
        for x in normalizer_elements(G, P):
            if x.images in P:
                continue
            if not _is_power_of(x.order(), p):
                continue
            P = _join(G, P | {x.images})
            break
        else:
            raise AssertionError("no p-element in the normalizer; Sylow theory violated")
    return _group_of(G, P)


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


# -- fixture subgroups ---------------------------------------------------------

def symmetric_group(n: int, cap: int = DEFAULT_CAP) -> PermGroup:
    if n < 2:
        return PermGroup([], n, cap=cap, name=f"S{n}")
    gens = [Perm.from_cycles([list(range(1, n + 1))], n)]
    if n > 2:
        gens.append(Perm.from_cycles([[1, 2]], n))
    return PermGroup(gens, n, cap=cap, name=f"S{n}")


def cyclic_group(n: int) -> PermGroup:
    return PermGroup([Perm.from_cycles([list(range(1, n + 1))], n)] if n > 1 else [], max(n, 1),
                     name=f"C{n}")


def alternating_group(n: int) -> PermGroup:
    gens = [Perm.from_cycles([[1, 2, i]], n) for i in range(3, n + 1)]
    return PermGroup(gens, n, name=f"A{n}")


def lemma1_block_embedding(r: int, s: int, cap: int = DEFAULT_CAP,
                           check_cap: bool = True) -> PermGroup:
    """``S_r`` acting identically on the blocks ``{1..r}, {r+1..2r}, ...`` of ``{1..rs}``."""
    if r < 2 or s < 2:
        raise ValueError("need r, s >= 2")
    if check_cap and factorial(r) > cap:
        raise CapExceeded(f"{r}! exceeds the group cap {cap}")
    n = r * s
    base = [list(range(1, r + 1))]
    if r > 2:
        base.append([1, 2])
    gens = [Perm.from_cycles([[b * r + x for x in cyc] for b in range(s)], n) for cyc in base]
    return PermGroup(gens, n, cap=cap, name=f"S{r} on {s} blocks")


def lemma3_subgroup(m: int) -> PermGroup:
    """``<sigma, tau>``: ``Z/m x Z/m`` acting regularly on an ``m x m`` grid of points."""
    if m < 2:
        raise ValueError("need m >= 2")
    n = m * m
    sigma = Perm.from_cycles([list(range(b * m + 1, b * m + m + 1)) for b in range(m)], n)
    tau = Perm.from_cycles([list(range(c, n + 1, m)) for c in range(1, m + 1)], n)
    return PermGroup([sigma, tau], n, name=f"(Z/{m})^2")


TETRAHEDRON_EDGES = ((1, 2), (3, 4), (1, 3), (2, 4), (1, 4), (2, 3))


def edge_action(vertex_perm: Perm, edges: Sequence[tuple[int, int]] = TETRAHEDRON_EDGES) -> Perm:
    """Induced permutation of edge labels ``1..len(edges)``."""
    lookup = {frozenset(e): k for k, e in enumerate(edges, 1)}
    return Perm(lookup[frozenset((vertex_perm(a), vertex_perm(b)))] for a, b in edges)


def a4_on_edges(edges: Sequence[tuple[int, int]] = TETRAHEDRON_EDGES) -> PermGroup:
    """``A_4`` inside ``S_6`` through its action on the six edges of a tetrahedron."""
    a4 = alternating_group(4)
    return PermGroup([edge_action(g, edges) for g in a4.generators], len(edges), name="A4 on edges")


def klein_in_s6() -> PermGroup:
    return PermGroup.from_strings(["(12)(34)", "(34)(56)"], 6, name="V4 in S6")
