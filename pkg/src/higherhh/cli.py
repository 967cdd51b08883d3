"""Command line interface.

Exit codes: 0 when every check passes, 1 when a computed check fails,
2 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, harness
from .field import FieldError
from .loday import LodayError
from .simplicial import SimplicialError
from .algebra import AlgebraError

OK, FAILED, BAD_INPUT = 0, 1, 2


def parse_space(text: str) -> dict:
    """``sphere:2``, ``torus:3``, ``bouquet:1,1,2``, ``klein``, ``cover:3``, ``circle2``, ``point``."""
    kind, _, arg = text.partition(":")
    if kind in ("sphere", "torus"):
        return {"type": kind, "n": int(arg)}
    if kind == "cover":
        return {"type": "cyclic_cover", "n": int(arg)}
    if kind == "bouquet":
        return {"type": "bouquet", "dims": [int(x) for x in arg.split(",")]}
    if kind == "klein":
        return {"type": "klein_bottle"}
    if kind == "circle2":
        return {"type": "circle_two_cell", "orientation": arg or "cyclic"}
    if kind == "point":
        return {"type": "point"}
    if kind == "file":
        return {"type": "explicit", "data": json.loads(Path(arg).read_text())}
    raise ValueError(f"unknown space {text!r}")


def parse_algebra(text: str) -> dict:
    """``trunc:2``, ``poly``, ``quotient:0,1,1``, ``exterior``, ``ground``, ``free:x/0/1,ex/1/1``."""
    kind, _, arg = text.partition(":")
    if kind == "trunc":
        return {"family": "truncated_poly", "m": int(arg)}
    if kind == "poly":
        return {"family": "poly"}
    if kind == "quotient":
        return {"family": "quotient", "coefficients": [int(x) for x in arg.split(",")]}
    if kind in ("exterior", "ground"):
        return {"family": kind}
    if kind == "free":
        gens = []
        for g in arg.split(","):
            name, deg, wt = g.split("/")
            gens.append([name, int(deg), int(wt)])
        return {"family": "free", "generators": gens}
    if kind == "file":
        return {"family": "explicit", "data": json.loads(Path(arg).read_text())}
    raise ValueError(f"unknown algebra {text!r}")


def _common(p):
    p.add_argument("--field", default="Q", help="Q or Fp, e.g. F3")
    p.add_argument("--degree", type=int, default=3, help="degree budget")
    p.add_argument("--weight", type=int, default=2, help="weight budget")
    p.add_argument("--out", help="directory for report files")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--no-cache", action="store_true", help="ignore and skip the report cache")
    p.add_argument("--cache-dir", help=f"cache directory (default ${harness.CACHE_ENV} or ~/.cache/higherhh)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="higherhh", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="Loday homology table of a space and an algebra")
    p.add_argument("--space", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--coefficients", choices=["reduced", "unpointed"], default="reduced")
    p.add_argument("--expect", help="name of a golden table to compare against")
    _common(p)

    p = sub.add_parser("stability", help="compare T^n with its cell bouquet")
    p.add_argument("--algebra", required=True)
    p.add_argument("-n", type=int, required=True)
    _common(p)

    p = sub.add_parser("e2", help="E^2 page for a bundled or file scenario")
    p.add_argument("scenario")
    _common(p)

    p = sub.add_parser("diagonal", help="check the torus diagonal relation")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--mode", type=int, choices=[1, 2, 3], default=3)
    _common(p)

    p = sub.add_parser("validate", help="validate scenario files without running them")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("run", help="run bundled scenarios by name, or scenario files")
    p.add_argument("scenarios", nargs="*", help="names or paths; all bundled ones if omitted")
    _common(p)

    sub.add_parser("scenarios", help="list bundled scenarios")
    return ap


def _load(ref: str) -> dict:
    path = Path(ref)
    if path.suffix in (".json", ".yaml", ".yml") or path.exists():
        return harness.load_scenario(path)
    return harness.bundled_scenario(ref)


def _budgets(args):
    return {"degree": args.degree, "weight": args.weight}


def _run(args, scenario: dict) -> int:
    res = harness.run_scenario(scenario, args.out, not args.no_cache, args.cache_dir, args.jobs)
    rep = res.report
    print(f"{scenario['name']}: {'PASS' if res.passed else 'FAIL'}"
          f"{' (cached)' if res.cached else ''}")
    for name, tab in rep["tables"].items():
        print(f"  {name}: " + " ".join(f"({k})={v}" for k, v in tab.items()))
    if rep.get("first_divergence"):
        d, w, a, b = rep["first_divergence"]
        print(f"  first divergence: degree {d}, weight {w}: {a} vs {b}")
    if "e2" in rep:
        print("  E2: " + " ".join(f"({p},{q};{w})={v}" for p, q, w, v in rep["e2"]["dims"]))
    for name, c in rep["checks"].items():
        print(f"  check {name}: {'pass' if c.get('passed') else 'FAIL'}")
    return OK if res.passed else FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "scenarios":
            for n in harness.bundled_scenario_names():
                print(n)
            return OK
        if args.command == "validate":
            for p in args.paths:
                harness.load_scenario(p)
                print(f"{p}: ok")
            return OK
        if args.command == "homology":
            s = {"name": "homology", "task": "homology", "field": args.field,
                 "space": parse_space(args.space), "algebra": parse_algebra(args.algebra),
                 "coefficients": args.coefficients, "budgets": _budgets(args)}
            if args.expect:
                s["expect"] = {"table": args.expect}
            return _run(args, s)
        if args.command == "stability":
            s = {"name": f"stability_T{args.n}", "task": "stability", "field": args.field,
                 "algebra": parse_algebra(args.algebra), "n": args.n, "budgets": _budgets(args)}
            return _run(args, s)
        if args.command == "diagonal":
            s = {"name": f"diagonal_n{args.n}_k{args.k}", "task": "diagonal", "field": args.field,
                 "n": args.n, "k": args.k, "mode": args.mode}
            return _run(args, s)
        if args.command == "e2":
            s = _load(args.scenario)
            if s["task"] != "e2":
                raise harness.ScenarioError("task", "expected an e2 scenario")
            return _run(args, s)
        refs = args.scenarios or harness.bundled_scenario_names()
        code = OK
        for ref in refs:
            code = max(code, _run(args, _load(ref)))
        return code
    except (harness.ScenarioError, FieldError, LodayError, SimplicialError, AlgebraError,
            KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
