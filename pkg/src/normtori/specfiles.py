"""JSON group and lattice spec files, plus the packaged fixtures.

Group file::

    {"degree": 6, "generators": ["(12)(34)", "(34)(56)"], "name": "V4 in S6"}

Lattice file (interpreted over the group given alongside it)::

    {"kind": "norm_one", "n": 6}            natural action on 1..n, modulo Z
    {"kind": "norm_one", "of": "regular"}   Z[G]/Z
    {"kind": "norm_one", "of": {"subgroup": [...]}}   Z[G/H]/Z
    {"kind": "perm", "subgroup": [...]}     Z[G/H] (natural action if omitted)
    {"kind": "regular"}
    {"kind": "trivial", "rank": r}
    {"kind": "matrices", "rank": r, "action": [...]}   one matrix per generator,
        nested lists or "rows cols ..." text
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .exactla import IntMatrix
from .glattice import (GLattice, natural_lattice, natural_norm_one_lattice, norm_one_lattice,
                       permutation_lattice, regular_lattice, trivial_lattice)
from .permgrp import CosetTable, PermGroup, symmetric_group


class SpecError(ValueError):
    """Malformed or inconsistent spec file."""


def fixtures_dir() -> Path:
    return Path(str(resources.files("normtori") / "fixtures"))


def list_fixtures() -> list[str]:
    return sorted(p.name for p in fixtures_dir().glob("*.json"))


def read_json(path_or_name) -> dict:
    """Load JSON from a path, falling back to a packaged fixture of that name."""
    if isinstance(path_or_name, dict):
        return path_or_name
    p = Path(path_or_name)
    if not p.exists():
        cand = fixtures_dir() / p.name
        if not cand.exists() and not p.suffix:
            cand = fixtures_dir() / (p.name + ".json")
        if not cand.exists():
            raise SpecError(f"no such file or fixture: {path_or_name}")
        p = cand
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{p}: invalid JSON ({exc})") from exc


def group_from_spec(spec) -> PermGroup:
    spec = read_json(spec)
    try:
        degree = int(spec["degree"])
        gens = spec["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("group spec needs 'degree' and 'generators'") from exc
    try:
        return PermGroup.from_strings(gens, degree, name=spec.get("name"))
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def group_to_spec(G: PermGroup) -> dict:
    out = {"degree": G.degree, "generators": G.generator_strings()}
    if G.name:
        out["name"] = G.name
    return out


def _matrix(m, rank: int) -> IntMatrix:
    if isinstance(m, str):
        a = IntMatrix.from_text(m)
    else:
        a = IntMatrix(m, rows=rank, cols=rank) if rank == 0 else IntMatrix(m)
    if a.shape != (rank, rank):
        raise SpecError(f"action matrix has shape {a.shape}, expected {rank}x{rank}")
    return a


def lattice_from_spec(spec, G: PermGroup | None = None) -> GLattice:
    spec = read_json(spec)
    kind = spec.get("kind")
    try:
        if kind == "norm_one":
            n = spec.get("n")
            if G is None:
                if n is None:
                    raise SpecError("norm_one lattice without a group needs 'n'")
                G = symmetric_group(int(n))
            of = spec.get("of", "natural")
            if of == "natural":
                if n is not None and int(n) != G.degree:
                    raise SpecError(f"lattice n={n} but group degree is {G.degree}")
                return natural_norm_one_lattice(G)
            if of == "regular":
                return norm_one_lattice(CosetTable(G, PermGroup([], G.degree)))[0]
            if isinstance(of, dict) and "subgroup" in of:
                H = PermGroup.from_strings(of["subgroup"], G.degree)
                return norm_one_lattice(CosetTable(G, H))[0]
            raise SpecError(f"unknown norm_one base {of!r}")
        if G is None:
            raise SpecError(f"lattice kind {kind!r} needs a group")
        if kind == "perm":
            if "subgroup" not in spec:
                return natural_lattice(G)
            H = PermGroup.from_strings(spec["subgroup"], G.degree)
            return permutation_lattice(CosetTable(G, H))
        if kind == "regular":
            return regular_lattice(G)
        if kind == "trivial":
            return trivial_lattice(G, int(spec.get("rank", 1)))
        if kind == "matrices":
            rank = int(spec["rank"])
            mats = [_matrix(m, rank) for m in spec["action"]]
            return GLattice(G, mats, rank=rank)
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad lattice spec: {exc}") from exc
    raise SpecError(f"unknown lattice kind {kind!r}")


def lattice_to_spec(L: GLattice) -> dict:
    return {"kind": "matrices", "rank": L.rank, "action": [a.tolist() for a in L.action]}
