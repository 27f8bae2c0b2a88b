"""Command-line front door.

Subcommands:
    verify   --config cfg.json [--out report.json]     run verification suites
    poly     --family x1-laguerre --n 4 --k 1 ...      emit polynomial tables
    spectrum --preset oscillator3d [--extended] ...    solve and report spectra
    quad     --rule laguerre --n 16 --k 2              emit quadrature rules

Exit codes: 0 success, 1 verification failures, 2 invalid configuration or
arguments, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, quad, solver, xop
from .polycore import Poly, as_rational
from .potentials import PotentialError, make_preset
from .solver import Grid, SolverError
from .verify import ConfigError, VerificationConfig, run_verification, write_atomic

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_SOLVER = 3


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_verify(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        return _fail(f"cannot read config: {exc}", EXIT_BAD_CONFIG)
    except json.JSONDecodeError as exc:
        return _fail(f"config is not valid JSON: {exc}", EXIT_BAD_CONFIG)
    try:
        cfg = VerificationConfig.from_dict(raw)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_BAD_CONFIG)
    report = run_verification(cfg)
    text = report.to_json()
    if args.out:
        write_atomic(args.out, text + "\n")
    else:
        print(text)
    for check in report.checks:
        print(f"[{check['status']:8s}] {check['id']}  metric={check['metric']:.3e}",
              file=sys.stderr)
    print(f"{report.failures} failure(s) / {len(report.checks)} checks",
          file=sys.stderr)
    return EXIT_CHECK_FAILED if report.failures else EXIT_OK


def _family_table(args) -> list:
    fam = args.family
    rows = []
    if fam in ("laguerre", "jacobi"):
        for n in range(0, args.n + 1):
            if fam == "laguerre":
                rows.append(xop.laguerre_classical(n, as_rational(args.k)))
            else:
                rows.append(xop.jacobi_classical(n, as_rational(args.alpha),
                                                 as_rational(args.beta)))
        return rows
    if fam in ("x1-laguerre", "x1-jacobi"):
        if args.n < 1:
            raise ValueError("no degree-0 member: exceptional families start at n=1")
        if fam == "x1-laguerre":
            spec = xop.XFamilySpec(family="laguerre", k=as_rational(args.k))
        else:
            spec = xop.XFamilySpec(family="jacobi", alpha=as_rational(args.alpha),
                                   beta=as_rational(args.beta))
        if args.route == "gram-schmidt":
            return xop.gram_schmidt_family(spec.weight(), args.n)
        return [xop.family_by_route(spec, n, args.route)
                for n in range(1, args.n + 1)]
    raise ValueError(f"unknown family {fam!r}")


def cmd_poly(args) -> int:
    needs_k = args.family in ("laguerre", "x1-laguerre")
    if needs_k and args.k is None:
        return _fail("--k is required for Laguerre families", EXIT_BAD_CONFIG)
    if not needs_k and (args.alpha is None or args.beta is None):
        return _fail("--alpha and --beta are required for Jacobi families",
                     EXIT_BAD_CONFIG)
    try:
        rows = _family_table(args)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(str(exc), EXIT_BAD_CONFIG)
    params = (f"k={args.k}" if needs_k else f"alpha={args.alpha},beta={args.beta}")
    if args.format == "csv":
        text = xop.emit_family_csv(rows, args.route, params)
    else:
        payload = []
        for member in rows:
            if isinstance(member, Poly):
                payload.append({"degree": member.degree,
                                "coefficients": member.to_json()})
            else:
                arr = np.asarray(member, dtype=float)
                payload.append({"degree": len(arr) - 1,
                                "coefficients": [float(c) for c in arr]})
        text = json.dumps({"family": args.family, "route": args.route,
                           "params": params, "members": payload},
                          sort_keys=True, indent=2)
    _emit(text, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as exc:
        return _fail(f"--params is not valid JSON: {exc}", EXIT_BAD_CONFIG)
    if args.l is not None:
        params["l"] = args.l
    try:
        preset = make_preset(args.preset, params)
    except PotentialError as exc:
        return _fail(str(exc), EXIT_BAD_CONFIG)
    try:
        if args.domain:
            a, b = (float(v) for v in args.domain.split(","))
        else:
            a, b = preset.default_domain()
        grid = Grid(a, b, args.grid_n)
    except ValueError as exc:
        return _fail(f"bad grid: {exc}", EXIT_BAD_CONFIG)

    def solve(v, tag):
        return solver.solve_spectrum(v, grid, args.levels,
                                     preset=tag, params=preset.params())

    try:
        if args.extended or args.compare:
            extended_v = _extended_potential(preset, args.exc_level)
        if args.compare:
            rep = solve(preset.potential, args.preset)
            rep_ext = solve(extended_v, args.preset + "-extended")
            rep.mapping = solver.spectrum_compare(rep.eigenvalues,
                                                  rep_ext.eigenvalues, args.match_tol)
            rep.mapping["extended_levels"] = rep_ext.eigenvalues
        elif args.extended:
            rep = solve(extended_v, args.preset + "-extended")
        else:
            rep = solve(preset.potential, args.preset)
    except (SolverError, PotentialError) as exc:
        return _fail(str(exc), EXIT_SOLVER)
    text = rep.to_csv() if args.format == "csv" else rep.to_json(indent=2)
    _emit(text, args.out)
    return EXIT_OK


def _extended_potential(preset, level: int):
    # coulomb/morse extensions are level-dependent; the others ignore n
    if preset.name in ("coulomb", "morse"):
        return lambda x: preset.extended_potential(x, level)
    return lambda x: preset.extended_potential(x)


def cmd_quad(args) -> int:
    try:
        if args.rule == "legendre":
            rec = quad.legendre_recurrence(args.n)
            header = f"rule=legendre,n={args.n}"
        elif args.rule == "laguerre":
            if args.k is None:
                return _fail("--k is required for the laguerre rule", EXIT_BAD_CONFIG)
            rec = quad.recurrence_coefficients(quad.WeightSpec.laguerre(args.k), args.n)
            header = f"rule=laguerre,k={args.k},n={args.n}"
        elif args.rule == "jacobi":
            if args.alpha is None or args.beta is None:
                return _fail("--alpha/--beta are required for the jacobi rule",
                             EXIT_BAD_CONFIG)
            rec = quad.recurrence_coefficients(
                quad.WeightSpec.jacobi(args.alpha, args.beta), args.n)
            header = f"rule=jacobi,alpha={args.alpha},beta={args.beta},n={args.n}"
        else:
            return _fail(f"unknown rule {args.rule!r}", EXIT_BAD_CONFIG)
        rule = quad.golub_welsch(rec, args.n)
    except (ValueError, quad.QuadratureError) as exc:
        return _fail(str(exc), EXIT_BAD_CONFIG)
    _emit(rule.to_csv(header=header), args.out)
    return EXIT_OK


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exopoly",
                                description="exceptional orthogonal polynomial "
                                            "construction and verification")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run verification suites from a JSON config")
    pv.add_argument("--config", required=True)
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_verify)

    pp = sub.add_parser("poly", help="emit polynomial coefficient tables")
    pp.add_argument("--family", required=True,
                    choices=["laguerre", "jacobi", "x1-laguerre", "x1-jacobi"])
    pp.add_argument("--n", type=int, required=True,
                    help="highest member degree to emit")
    pp.add_argument("--k", help='Laguerre parameter, decimal or "num/den"')
    pp.add_argument("--alpha", help='Jacobi parameter, decimal or "num/den"')
    pp.add_argument("--beta", help='Jacobi parameter, decimal or "num/den"')
    pp.add_argument("--route", default="operator",
                    choices=["operator", "nullspace", "gram-schmidt"])
    pp.add_argument("--format", default="csv", choices=["csv", "json"])
    pp.add_argument("--out")
    pp.set_defaults(func=cmd_poly)

    ps = sub.add_parser("spectrum", help="grid-solve a preset potential")
    ps.add_argument("--preset", required=True,
                    choices=["oscillator3d", "coulomb", "morse", "scarf"])
    ps.add_argument("--extended", action="store_true",
                    help="solve the rationally extended potential")
    ps.add_argument("--compare", action="store_true",
                    help="solve both and append the level mapping")
    ps.add_argument("--exc-level", type=int, default=1,
                    help="exceptional state index for the level-dependent "
                         "coulomb/morse extensions")
    ps.add_argument("--l", type=int, help="angular momentum (oscillator/coulomb)")
    ps.add_argument("--params", help="extra preset parameters as a JSON object")
    ps.add_argument("--grid-n", type=int, default=8000)
    ps.add_argument("--domain", help="a,b (defaults to the preset suggestion)")
    ps.add_argument("--levels", type=int, default=4)
    ps.add_argument("--match-tol", type=float, default=1e-2)
    ps.add_argument("--format", default="json", choices=["json", "csv"])
    ps.add_argument("--out")
    ps.set_defaults(func=cmd_spectrum)

    pq = sub.add_parser("quad", help="emit Gauss quadrature rules as CSV")
    pq.add_argument("--rule", required=True,
                    choices=["legendre", "laguerre", "jacobi"])
    pq.add_argument("--n", type=int, required=True)
    pq.add_argument("--k")
    pq.add_argument("--alpha")
    pq.add_argument("--beta")
    pq.add_argument("--out")
    pq.set_defaults(func=cmd_quad)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
