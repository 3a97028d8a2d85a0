"""Command-line interface.

Exit codes: 0 success (detection outcome lives in the output), 1 self-test
failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import criteria, estimate, qmat, scan, selftest, states
from .states import Family, FamilySpec

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part.strip("-"):
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _read_state(path: str) -> qmat.DensityMatrix:
    try:
        if path == "-":
            return qmat.loads(sys.stdin.read())
        with open(path) as fp:
            return qmat.load(fp)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except qmat.InvalidDensityMatrix as exc:
        lines = [f"  {v}" for v in exc.violations]
        raise InputError("invalid density matrix:\n" + "\n".join(lines))
    except ValueError as exc:
        raise InputError(str(exc))


def _spec(args, family: str) -> FamilySpec:
    fam = Family(family)
    if fam is Family.BELL_DIAGONAL:
        return FamilySpec(fam, c=tuple(args.c))
    return FamilySpec(fam, p=getattr(args, "p", 0.0) or 0.0, d=args.dim)


# -- subcommands -----------------------------------------------------------------


def cmd_check(args) -> int:
    rho = _read_state(args.file)
    report = criteria.full_report(rho, args.tol)
    if args.format == "text":
        print(report.render_text())
        return EXIT_OK
    payload = report.to_dict()
    if args.direction == "a-to-b":
        payload.pop("b_to_a")
    elif args.direction == "b-to-a":
        payload.pop("a_to_b")
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_family(args) -> int:
    if args.name == "random":
        rho = states.random_density(*args.dims, seed=args.seed)
    elif args.name == "random-pure":
        rho = states.random_pure(*args.dims, seed=args.seed, product=args.product)
    else:
        rho = _spec(args, args.name).build()
    print(qmat.dumps(rho))
    return EXIT_OK


def cmd_threshold(args) -> int:
    spec = _spec(args, args.family)
    directions = ["a-to-b", "b-to-a"] if args.direction == "both" else [args.direction]
    results = [scan.find_threshold(spec, d, criterion=args.criterion, strict=False)
               for d in directions]
    if args.format == "json":
        out = []
        for r in results:
            out.append({
                "family": spec.label(),
                "direction": r.direction.value if r.direction else None,
                "criterion": r.criterion,
                "status": r.status,
                "critical_p": r.critical_p,
                "bracket": list(r.bracket) if r.bracket else None,
                "references": [{"label": x.label, "value": x.value, "source": x.source}
                               for x in r.references],
            })
        print(json.dumps(out if len(out) > 1 else out[0], indent=2))
        return EXIT_OK
    for r in results:
        text = f"{r.critical_p:.9f}" if r.critical_p is not None else r.status
        if len(results) > 1:
            text = f"{r.direction.value} {text}"
        print(text)
    return EXIT_OK


def cmd_scan(args) -> int:
    out = sys.stdout
    if args.kind == "sweep":
        spec = _spec(args, args.family)
        grid = np.linspace(args.p_lo, args.p_hi, args.points)
        scan.write_sweep_csv(scan.sweep(spec, grid), out)
    elif args.kind == "bell-diagonal":
        grid = scan.bell_diagonal_boundary(args.c3, args.grid)
        print(f"# detection circle radius {grid.radius:.9g}", file=sys.stderr)
        scan.write_region_csv(grid, out)
    else:
        scan.write_isotropic_csv(scan.isotropic_curve(args.d_values), out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    rho = _read_state(args.file)
    v = estimate.estimated_verdict(rho, args.direction, args.shots, args.seed)
    print(json.dumps(v.to_dict(), indent=2))
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = selftest.run(seed=args.seed, n_states=args.states)
    for s in report.suites:
        print(s.line())
        if not s.passed:
            print(json.dumps({"suite": s.name, "failing_case": s.failing_case}), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# -- parser ------------------------------------------------------------------------

PARAM_FAMILIES = [f.value for f in Family if f is not Family.BELL_DIAGONAL]


def _add_family_params(p: argparse.ArgumentParser, with_p: bool = True) -> None:
    if with_p:
        p.add_argument("--p", type=float, default=0.0, help="mixing parameter in [0, 1]")
    p.add_argument("--c", type=lambda s: _floats(s, 3), default=[0.0, 0.0, 0.0],
                   help="Bell-diagonal correlations c1,c2,c3")
    p.add_argument("--dim", type=int, default=2, help="local dimension (isotropic only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerpurity",
        description="Purity-based EPR steering detection for bipartite density matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run every criterion on a density-matrix JSON file")
    p.add_argument("file", help="path, or - for standard input")
    p.add_argument("--direction", choices=["both", "a-to-b", "b-to-a"], default="both")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--tol", type=float, default=None, help="decision tolerance (default 1e-9)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("family", help="emit a family state as density-matrix JSON")
    p.add_argument("name", choices=[f.value for f in Family] + ["random", "random-pure"])
    _add_family_params(p)
    p.add_argument("--dims", type=lambda s: [int(x) for x in s.split(",")], default=[2, 2],
                   help="d_A,d_B for random states")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--product", action="store_true", help="random-pure: draw a product state")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("threshold", help="critical mixing parameter by bisection")
    p.add_argument("family", choices=PARAM_FAMILIES)
    p.add_argument("--dim", type=int, default=2, help="local dimension (isotropic only)")
    p.add_argument("--direction", choices=["both", "a-to-b", "b-to-a"], default="a-to-b")
    p.add_argument("--criterion", choices=["purity", "lemma1"], default="purity")
    p.add_argument("--format", choices=["plain", "json"], default="plain")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("scan", help="emit CSV plot data")
    kinds = p.add_subparsers(dest="kind", required=True)
    k = kinds.add_parser("sweep", help="margins along a p grid")
    k.add_argument("family", choices=PARAM_FAMILIES)
    k.add_argument("--dim", type=int, default=2)
    k.add_argument("--points", type=int, default=101)
    k.add_argument("--p-lo", type=float, default=0.0)
    k.add_argument("--p-hi", type=float, default=1.0)
    k = kinds.add_parser("bell-diagonal", help="(c1, c2) grid at fixed c3")
    k.add_argument("--c3", type=float, required=True)
    k.add_argument("--grid", type=int, default=401)
    k = kinds.add_parser("isotropic", help="threshold table over local dimensions")
    k.add_argument("--d-values", type=_ints, default=list(range(2, 11)),
                   help="e.g. 2-10 or 2,3,5")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("estimate", help="finite-shot purity-criterion estimate")
    p.add_argument("file", help="path, or - for standard input")
    p.add_argument("--shots", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--direction", choices=["a-to-b", "b-to-a"], default="a-to-b")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("selftest", help="check the basis identities and family formulas")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=int, default=1000, help="random states in the identity suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
