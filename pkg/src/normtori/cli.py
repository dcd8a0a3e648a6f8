"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from .certify import certify, verify_report
from .cohomology import BudgetExceeded, tate
from .exactla import NotInSpanError
from .glattice import LatticeError
from .obstruction import flasque_resolution, sha2_omega, sha_via_flasque
from .permgrp import CapExceeded
from .specfiles import (SpecError, fixtures_dir, group_from_spec, group_to_spec,
                        lattice_from_spec, lattice_to_spec, list_fixtures, read_json)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj))


def _load(args):
    G = group_from_spec(args.group)
    L = lattice_from_spec(args.lattice, G)
    return G, L


def _label(path) -> str:
    return Path(path).stem


def cmd_tate(args) -> int:
    G, L = _load(args)
    H = tate(G, L, args.degree, budget=args.budget)
    _emit({"group_order": G.order, "rank": L.rank, "degree": args.degree,
           "free_rank": H.free_rank, "torsion": list(H.torsion)})
    return EXIT_OK


def cmd_sha(args) -> int:
    G, L = _load(args)
    routes = ["direct", "flasque"] if args.route == "both" else [args.route]
    results = []
    for route in routes:
        res = (sha2_omega(G, L, budget=args.budget) if route == "direct"
               else sha_via_flasque(G, L, budget=args.budget))
        results.append(res)
        _emit(res.to_json(_label(args.group), _label(args.lattice)))
    if len({r.sha for r in results}) > 1:
        print("routes disagree", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_flasque(args) -> int:
    G, L = _load(args)
    res = flasque_resolution(G, L)
    ok = res.check()
    out = {
        "group": group_to_spec(G),
        "M": lattice_to_spec(res.M),
        "S": {**lattice_to_spec(res.S), "blocks": res.blocks},
        "N": lattice_to_spec(res.N),
        "incl": res.incl.matrix.tolist(),
        "proj": res.proj.matrix.tolist(),
        "checked": ok,
    }
    Path(args.output).write_text(json.dumps(out) + "\n")
    _emit({"rank_M": res.M.rank, "rank_S": res.S.rank, "rank_N": res.N.rank, "checked": ok,
           "output": str(args.output)})
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_certify(args) -> int:
    cert = certify(args.n, slow=args.slow)
    if args.output:
        cert.save(args.output)
    _emit({"n": cert.n, "verdict": cert.verdict, "steps": [s.kind for s in cert.steps],
           "external_leaves": cert.external_leaves, "output": args.output})
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        text = Path(args.certificate).read_text()
    except OSError as exc:
        raise SpecError(str(exc)) from exc
    rep = verify_report(text)
    _emit({"ok": rep.ok, "verdict": rep.verdict, "failed_step": rep.failed_step,
           "message": rep.message})
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in list_fixtures():
            spec = read_json(name)
            what = "lattice" if "kind" in spec else "group"
            print(f"{name}\t{what}\t{spec.get('name', spec.get('kind'))}")
    elif args.action == "export":
        dest = Path(args.dest)
        dest.mkdir(parents=True, exist_ok=True)
        for name in list_fixtures():
            shutil.copy(fixtures_dir() / name, dest / name)
        print(f"copied {len(list_fixtures())} fixtures to {dest}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normtori",
                                 description="Cohomological invariants of norm-one tori")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_gm(p):
        p.add_argument("-g", "--group", required=True, help="group JSON file or fixture name")
        p.add_argument("-m", "--lattice", required=True, help="lattice JSON file or fixture name")
        p.add_argument("--budget", type=int, default=200_000,
                       help="maximal cochain dimension (default 200000)")

    p = sub.add_parser("tate", help="Tate cohomology in degrees -1, 0, 1, 2")
    add_gm(p)
    p.add_argument("-n", "--degree", type=int, required=True, choices=[-1, 0, 1, 2])
    p.set_defaults(func=cmd_tate)

    p = sub.add_parser("sha", help="kernel of restriction of H^2 to cyclic subgroups")
    add_gm(p)
    p.add_argument("--route", choices=["direct", "flasque", "both"], default="direct")
    p.set_defaults(func=cmd_sha)

    p = sub.add_parser("flasque-resolve", help="write a checked flasque resolution")
    add_gm(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_flasque)

    p = sub.add_parser("certify", help="obstruction certificate for T_n")
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--slow", action="store_true", help="include the A4 tier for n = 6")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="recompute a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixtures", help="packaged group and lattice files")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("dest", nargs="?", default="fixtures")
    p.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "certify" and args.n < 1:
        print("error: n must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (BudgetExceeded, CapExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SpecError, LatticeError, NotInSpanError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
