"""Obstruction certificates for the generic norm-one torus ``T_n``.

``certify(n)`` walks the case split for ``n`` and records one step per
argument used; ``verify`` recomputes every non-citation step from the
serialized data alone.

Step kinds:

* ``small_case``: ``n <= 3``, the torus has dimension at most 2;
* ``lemma1_reduction``: ``M_n`` restricted to ``S_r`` acting diagonally on
  ``s = n / r`` blocks is ``M_r`` plus permutation summands, so an obstruction
  for ``T_r`` is one for ``T_n``;
* ``lemma3_sha``: ``Sha2_omega((Z/p)^2, M_{p^2}) = Z/p``;
* ``lemma4_sha``: ``Sha2_omega`` of the Klein subgroup of ``S_6`` on ``M_6``;
* ``external_lemma2``: citation for prime ``p > 3``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from pathlib import Path

from .cohomology import CochainComplex, DEFAULT_BUDGET, restrict_cochain
from .exactla import IntMatrix, NotInSpanError
from .glattice import LatticeMap, block_lattices, check_equivariant_iso, lemma1_decomposition
from .obstruction import (flasque_resolution, sha2_omega, sha_via_flasque,
                          sylow_injectivity_check, trivial_quotient_split)
from .permgrp import (Perm, PermGroup, a4_on_edges, klein_in_s6, lemma3_subgroup,
                      maximal_cyclic_reps, _is_prime)
from .specfiles import SpecError, group_from_spec, lattice_from_spec

SCHEMA = "toruscert/1"
VERDICTS = ("obstructed", "rational_small_case", "external_only")
KINDS = ("lemma1_reduction", "lemma3_sha", "lemma4_sha", "external_lemma2", "small_case")

# largest r for which the block group S_r is enumerated during checks
FULL_CHECK_MAX_R = 5
# largest p for which the flasque route is also run for lemma3 steps
FLASQUE_MAX_P = 3

LEMMA2_CITATION = {
    "reference": "L. Le Bruyn, Generic norm one tori, Nieuw Arch. Wisk. (4) 13 (1995), 401-407",
    "claim": "T_p is not stably rational for every prime p > 3",
}
SMALL_CASE_CITATION = {
    "reference": "V. E. Voskresenskii, Algebraic Tori (1977), 4.74",
    "claim": "algebraic tori of dimension at most 2 are rational",
}


class CertificateError(ValueError):
    """Certificate JSON does not follow the schema."""


@dataclass
class Step:
    kind: str
    params: dict
    evidence: dict = field(default_factory=dict)

    def to_json(self, index: int) -> dict:
        return {"index": index, "kind": self.kind, "params": self.params,
                "evidence": self.evidence}


@dataclass
class Certificate:
    n: int
    verdict: str
    steps: list[Step]

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "n": self.n, "verdict": self.verdict,
                "steps": [s.to_json(i) for i, s in enumerate(self.steps)]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        if not isinstance(data, dict) or data.get("schema") != SCHEMA:
            raise CertificateError(f"missing or unknown schema tag (expected {SCHEMA!r})")
        try:
            n = data["n"]
            verdict = data["verdict"]
            raw = data["steps"]
        except KeyError as exc:
            raise CertificateError(f"missing field {exc}") from exc
        if not isinstance(n, int) or n < 1:
            raise CertificateError("n must be a positive integer")
        if verdict not in VERDICTS:
            raise CertificateError(f"unknown verdict {verdict!r}")
        steps = []
        for i, s in enumerate(raw):
            if not isinstance(s, dict) or s.get("kind") not in KINDS:
                raise CertificateError(f"step {i}: unknown kind")
            if s.get("index", i) != i:
                raise CertificateError(f"step {i}: index out of order")
            steps.append(Step(s["kind"], dict(s.get("params", {})), dict(s.get("evidence", {}))))
        return cls(n, verdict, steps)

    @property
    def external_leaves(self) -> int:
        return sum(s.kind == "external_lemma2" for s in self.steps)


# -- building ------------------------------------------------------------------------

def _primes(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _sparse_json(f: dict[int, int]) -> dict[str, int]:
    return {str(i): x for i, x in sorted(f.items())}


def _sparse_load(f: dict) -> dict[int, int]:
    return {int(i): int(x) for i, x in f.items()}


@lru_cache(maxsize=None)
def _sha_cached(gens: tuple[str, ...], degree: int, lattice_json: str, route: str,
                budget: int = DEFAULT_BUDGET):
    G = group_from_spec({"degree": degree, "generators": list(gens)})
    L = lattice_from_spec(json.loads(lattice_json), G)
    if route == "direct":
        return sha2_omega(G, L, budget=budget)
    return sha_via_flasque(G, L, budget=budget)


def clear_cache() -> None:
    """Forget memoized obstruction computations."""
    _sha_cached.cache_clear()


def _sha(G: PermGroup, lattice: dict, route: str):
    return _sha_cached(tuple(G.generator_strings()), G.degree,
                       json.dumps(lattice, sort_keys=True), route)


def _sha_evidence(G: PermGroup, lattice: dict, routes) -> dict:
    results = {r: _sha(G, lattice, r) for r in routes}
    direct = results["direct"]
    return {
        "group": {"degree": G.degree, "generators": G.generator_strings()},
        "lattice": lattice,
        "sha_torsion": list(direct.sha.torsion),
        "routes": {r: list(res.sha.torsion) for r, res in results.items()},
        "witness_cocycles": [_sparse_json(c) for c in direct.cocycles],
    }


def lemma1_step(n: int, r: int) -> Step:
    s = n // r
    full = r <= FULL_CHECK_MAX_R
    U, iso = lemma1_decomposition(r, s, enumerate_group=full)
    ok = check_equivariant_iso(iso)
    return Step("lemma1_reduction", {"n": n, "r": r, "s": s}, {
        "generators": U.generator_strings(),
        "degree": U.degree,
        "iso_matrix": iso.matrix.tolist(),
        "unimodular": ok,
        "equivariant": ok,
        "verification": "full" if full else "partially_verified",
    })


def lemma3_step(p: int) -> Step:
    U = lemma3_subgroup(p)
    routes = ("direct", "flasque") if p <= FLASQUE_MAX_P else ("direct",)
    ev = _sha_evidence(U, {"kind": "norm_one", "n": p * p}, routes)
    return Step("lemma3_sha", {"p": p, "generators": U.generator_strings()}, ev)


def lemma4_step(slow: bool = False) -> Step:
    U = klein_in_s6()
    lattice = {"kind": "norm_one", "n": 6}
    ev = _sha_evidence(U, lattice, ("direct", "flasque"))
    split = trivial_quotient_split(lattice_from_spec(lattice, U), U)
    ev["split"] = {"t": split.t, "rank_Ma": split.Ma.rank, "sha_Ma": list(split.sha_Ma.torsion)}
    if slow:
        A = a4_on_edges()
        a4 = _sha_evidence(A, lattice, ("direct", "flasque"))
        res = flasque_resolution(A, lattice_from_spec(lattice, A))
        a4["sylow_2_injective"] = sylow_injectivity_check(A, res.N, 2)
        ev["a4"] = a4
    return Step("lemma4_sha", {"generators": U.generator_strings()}, ev)


def certify(n: int, slow: bool = False) -> Certificate:
    """Certificate that ``T_n`` is not stably rational, or that it is rational for ``n <= 3``."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if n <= 3:
        step = Step("small_case", {"n": n, "dimension": n - 1}, {"citation": SMALL_CASE_CITATION})
        return Certificate(n, "rational_small_case", [step])
    primes = _primes(n)
    steps: list[Step] = []
    square = [p for p in primes if n % (p * p) == 0]
    if square:
        p = square[0]
        if n != p * p:
            steps.append(lemma1_step(n, p * p))
        steps.append(lemma3_step(p))
        return Certificate(n, "obstructed", steps)
    big = [p for p in primes if p > 3]
    if big:
        p = big[0]
        if n != p:
            steps.append(lemma1_step(n, p))
        steps.append(Step("external_lemma2", {"p": p}, {"citation": LEMMA2_CITATION}))
        return Certificate(n, "external_only", steps)
    # square-free with prime factors in {2, 3} and n > 3
    assert n == 6
    return Certificate(n, "obstructed", [lemma4_step(slow)])


# -- verification -------------------------------------------------------------------

@dataclass
class VerifyReport:
    ok: bool
    verdict: str | None = None
    failed_step: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


class _Fail(Exception):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def _check_lemma1(step: Step, n: int) -> int:
    pr, ev = step.params, step.evidence
    r, s = int(pr["r"]), int(pr["s"])
    _require(pr.get("n") == n and r * s == n and r >= 2 and s >= 2, "block sizes do not multiply to n")
    gens = ev["generators"]
    full = ev.get("verification") == "full"
    _require(full or ev.get("verification") == "partially_verified", "unknown verification level")
    U = group_from_spec({"degree": n, "generators": gens})
    # the generators must act identically on every block
    for g in U.generators:
        for b in range(s):
            for x in range(1, r + 1):
                _require(g(b * r + x) == b * r + g(x), "generator does not act diagonally on blocks")
    if full:
        _require(r <= FULL_CHECK_MAX_R, "full verification claimed beyond the enumeration bound")
        first = PermGroup([Perm(g(x) for x in range(1, r + 1)) for g in U.generators], r)
        _require(first.order == factorial(r), "block group is not the full symmetric group")
    source, target = block_lattices(U, r, s, check=full)
    iso = LatticeMap(source, target, IntMatrix(ev["iso_matrix"]), check=False)
    _require(check_equivariant_iso(iso), "block isomorphism fails unimodularity or equivariance")
    return r


def _check_witness(G: PermGroup, L, torsion: list[int], cocycles: list[dict]) -> None:
    cx = CochainComplex(G, L)
    H = cx.h(2)
    _require(len(cocycles) == len(torsion), "one witness cocycle per invariant factor expected")
    subs = [CochainComplex(C, L) for C in maximal_cyclic_reps(G)]
    for f, d in zip(cocycles, torsion):
        f = _sparse_load(f)
        _require(all(0 <= i < cx.dim(2) for i in f), "witness index out of range")
        _require(cx.is_cocycle(f, 2), "witness is not a 2-cocycle")
        _require(H.abgroup.element_order(H.coords(f)) == d, "witness class has the wrong order")
        for sc in subs:
            fc = restrict_cochain(cx, sc, f, 2)
            _require(not any(sc.h(2).coords(fc)), "witness does not die on a cyclic subgroup")


def _check_sha(ev: dict, expect_group: PermGroup | None, expect_lattice: dict | None) -> list[int]:
    G = group_from_spec(ev["group"])
    if expect_group is not None:
        _require(G.degree == expect_group.degree
                 and G.generator_strings() == expect_group.generator_strings(),
                 "evidence group differs from the step parameters")
    if expect_lattice is not None:
        _require(ev["lattice"] == expect_lattice, "unexpected lattice in evidence")
    torsion = [int(x) for x in ev["sha_torsion"]]
    routes = ev.get("routes", {})
    _require("direct" in routes, "direct route missing")
    for route, claimed in routes.items():
        _require(route in ("direct", "flasque"), f"unknown route {route!r}")
        res = _sha(G, ev["lattice"], route)
        _require(list(res.sha.torsion) == [int(x) for x in claimed],
                 f"{route} route gives {list(res.sha.torsion)}, certificate says {claimed}")
        _require(list(res.sha.torsion) == torsion, "routes disagree with sha_torsion")
    _require(bool(torsion), "obstruction group is trivial")
    L = lattice_from_spec(ev["lattice"], G)
    _check_witness(G, L, torsion, ev.get("witness_cocycles", []))
    return torsion


def _expected_kinds(n: int) -> tuple[str, list[str]]:
    if n <= 3:
        return "rational_small_case", ["small_case"]
    primes = _primes(n)
    square = [p for p in primes if n % (p * p) == 0]
    if square:
        return "obstructed", (["lemma1_reduction"] if n != square[0] ** 2 else []) + ["lemma3_sha"]
    big = [p for p in primes if p > 3]
    if big:
        return "external_only", (["lemma1_reduction"] if n != big[0] else []) + ["external_lemma2"]
    return "obstructed", ["lemma4_sha"]


def verify_report(cert) -> VerifyReport:
    """Recompute every step of a certificate (object, dict, JSON text or path)."""
    try:
        if isinstance(cert, Certificate):
            c = cert
        else:
            data = cert
            if isinstance(cert, (str, Path)) and not str(cert).lstrip().startswith("{"):
                data = Path(cert).read_text()
            if isinstance(data, str):
                data = json.loads(data)
            c = Certificate.from_json(data)
    except (OSError, json.JSONDecodeError, CertificateError) as exc:
        return VerifyReport(False, message=f"schema: {exc}")
    verdict, kinds = _expected_kinds(c.n)
    if c.verdict != verdict or [s.kind for s in c.steps] != kinds:
        return VerifyReport(False, c.verdict, None,
                            f"step structure {[s.kind for s in c.steps]} / {c.verdict} "
                            f"does not prove the case n={c.n}")
    target = c.n  # degree whose torus the remaining steps must obstruct
    for i, step in enumerate(c.steps):
        try:
            if step.kind == "small_case":
                _require(c.n <= 3 and step.params.get("n") == c.n, "small case requires n <= 3")
                _require(bool(step.evidence.get("citation")), "missing citation")
            elif step.kind == "lemma1_reduction":
                target = _check_lemma1(step, c.n)
            elif step.kind == "lemma3_sha":
                p = int(step.params["p"])
                _require(_is_prime(p) and p * p == target, "lemma3 prime does not match the degree")
                U = lemma3_subgroup(p)
                torsion = _check_sha(step.evidence, U, {"kind": "norm_one", "n": p * p})
                _require(torsion == [p], "expected Z/p")
            elif step.kind == "lemma4_sha":
                _require(target == 6, "lemma4 applies to n = 6 only")
                ev = step.evidence
                _check_sha(ev, klein_in_s6(), {"kind": "norm_one", "n": 6})
                if "split" in ev:
                    G = group_from_spec(ev["group"])
                    sp = trivial_quotient_split(lattice_from_spec(ev["lattice"], G), G)
                    got = {"t": sp.t, "rank_Ma": sp.Ma.rank, "sha_Ma": list(sp.sha_Ma.torsion)}
                    _require(got == ev["split"], f"split recomputes to {got}")
                if "a4" in ev:
                    a4 = ev["a4"]
                    _check_sha(a4, None, {"kind": "norm_one", "n": 6})
                    A = group_from_spec(a4["group"])
                    _require(A.order == 12 and A.degree == 6, "A4 tier group has the wrong order")
                    if "sylow_2_injective" in a4:
                        res = flasque_resolution(A, lattice_from_spec(a4["lattice"], A))
                        _require(sylow_injectivity_check(A, res.N, 2) == a4["sylow_2_injective"],
                                 "Sylow check recomputes differently")
            elif step.kind == "external_lemma2":
                p = int(step.params["p"])
                _require(_is_prime(p) and p > 3 and p == target, "external leaf needs the prime p > 3")
                _require(bool(step.evidence.get("citation")), "missing citation")
        except _Fail as exc:
            return VerifyReport(False, c.verdict, i, str(exc))
        except (KeyError, TypeError, ValueError, SpecError, NotInSpanError) as exc:
            return VerifyReport(False, c.verdict, i, f"malformed evidence: {exc!r}")
    return VerifyReport(True, c.verdict)


def verify(cert) -> bool:
    return verify_report(cert).ok
