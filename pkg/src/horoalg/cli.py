"""Command-line driver: ``horoalg verify --family ... --check ...``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .checks import CHECK_GROUPS, Options, run_checks
from .horolie import DEFAULT_EMBEDDING_CAP, FamilyError, family_spec

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="horoalg", description="Exact verification of horospherical graded Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="build a family model and run checks")
    v.add_argument("--family", required=True, choices=["b-spinor", "b3", "c", "f4", "g2"])
    v.add_argument("--m", type=int, help="rank parameter for b-spinor and c")
    v.add_argument("--i", type=int, help="index parameter for c")
    v.add_argument("--check", action="append", choices=("all",) + CHECK_GROUPS, help="repeatable; default all")
    v.add_argument("--p-max", type=_nonneg, default=None, help="largest p scanned in cohomology (default: exhaustive)")
    v.add_argument("--gram", choices=["weight", "trace", "both"], default="both")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=_positive, default=200)
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--output", help="write the report to this path instead of stdout")
    v.add_argument("--embedding-dim-cap", type=_positive, default=DEFAULT_EMBEDDING_CAP)
    v.add_argument("--certify-rank", action="store_true", help="add an exact Groebner certificate to the rank check (needs sympy)")
    v.add_argument("--timings", action="store_true", help="include wall times (output is then not byte-stable)")
    return parser


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _type_name(fam: dict) -> str:
    t = fam["l_type"]
    return t if t[-1].isdigit() else f"{t}{fam['rank']}"


def _short(q: str) -> str:
    return q[:-2] if q.endswith("/1") else q


def render_text(report: dict) -> str:
    fam = report["family"]
    dims = report["dimensions"]
    lines = [
        f"family {fam['label']}: L = {_type_name(fam)}, alpha = a{fam['alpha_index']}, beta = a{fam['beta_index']}",
        f"dim g = {dims['dim_g']}, dim l = {dims['dim_l']}, dim U = {dims['dim_u']}, dim m = {dims['dim_m']}",
        "U eigenspaces: " + ", ".join(f"{_short(k)}: {v}" for k, v in dims["u_eigenspace_dims"].items()),
        "g degrees: " + ", ".join(f"{k}: {v}" for k, v in dims["g_degree_dims"].items()),
    ]
    for name, res in report["checks"].items():
        line = f"{name}: {res['status'].upper()}"
        if res.get("reason"):
            line += f" ({res['reason']})"
        lines.append(line)
        table = res["details"].get("table") if isinstance(res.get("details"), dict) else None
        if table:
            h1 = [f"p={k.split(',')[0]}: {e['dim_H']}" for k, e in table.items() if k.endswith(",1")]
            lines.append("  H^{p,1} dims: " + ", ".join(h1))
    lines.append(f"overall: {report['status'].upper()}")
    if "timings_seconds" in report:
        lines.append("timings: " + ", ".join(f"{k} {v}s" for k, v in report["timings_seconds"].items()))
    return "\n".join(lines) + "\n"


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        family_spec(args.family, args.m, args.i)
    except FamilyError as exc:
        print(f"horoalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    checks = args.check or ["all"]
    groups = CHECK_GROUPS if "all" in checks else tuple(c for c in CHECK_GROUPS if c in checks)
    opts = Options(
        family=args.family,
        m=args.m,
        i=args.i,
        checks=groups,
        p_max=args.p_max,
        gram=args.gram,
        seed=args.seed,
        samples=args.samples,
        embedding_dim_cap=args.embedding_dim_cap,
        timings=args.timings,
        certify_rank=args.certify_rank,
    )
    report = run_checks(opts)
    text = render_json(report) if args.format == "json" else render_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
