"""Command-line front end for the splitting toolkit.

Verbs
  split       split a scalar base equation into a component system
  check-cr    evaluate the exactness conditions of a component system
  reconstruct invert a component system back to its base equation
  symmetry    verify point-symmetry generators or solve for them
  closure     dimension of the Lie algebra spanned by a generator file
  xcheck      integrate base and system side by side and compare

Exit codes: 0 success or positive verdict, 1 well-formed negative
verdict (conditions fail, not a symmetry, algebra does not close,
tolerance exceeded), 2 usage or input errors.
"""

import argparse
import json
import sys

from .cr import full_report, reconstruct_base
from .errors import (
    DegreeOverflowError,
    FormatError,
    OdesplitError,
    VerdictError,
)
from .fileio import (
    print_generators,
    print_system,
    read_generators,
    read_system,
    scalar_to_system,
    system_to_scalar,
    write_system,
)
from .numeric import (
    correspondence_report,
    integrate_base_complex,
    integrate_system,
)
from .parsing import to_text
from .splitting import split
from .symmetry import closure_dimension, solve_determining, symmetry_residual
from .systems import SPLIT_KINDS, kind_spec


def _cmd_split(args):
    base = system_to_scalar(read_system(args.infile))
    result = split(base, args.variant)
    write_system(result.system, args.out)
    print(
        "wrote %s system with %d equations to %s"
        % (result.system.kind, len(result.system.equations), args.out)
    )
    return 0


def _print_report(report):
    for rec in report.records:
        status = "pass" if rec.passed else "FAIL"
        print("%s %s  %s" % (rec.id.ljust(10), status, rec.text))
    for dev in report.deviations:
        rest = "; ".join(
            "%s = %s" % (key, dev[key]) for key in sorted(dev) if key != "id"
        )
        print("deviation %s: %s" % (dev["id"], rest))
    print("verdict: %s" % ("PASS" if report.verdict else "FAIL"))
    for rec in report.failing():
        print("failing: %s" % rec.id)


def _cmd_check_cr(args):
    system = read_system(args.infile)
    report = full_report(system)
    _print_report(report)
    if args.json is not None:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
            fh.write("\n")
    return 0 if report.verdict else 1


def _cmd_reconstruct(args):
    system = read_system(args.infile)
    base = reconstruct_base(system)
    out = scalar_to_system(base)
    write_system(out, args.out)
    eq = out.equations[0]
    print("recovered base equation: %s = %s" % (to_text(eq.lhs), to_text(eq.rhs)))
    return 0


def _cmd_symmetry_verify(args):
    _, gens = read_generators(args.gen)
    system = read_system(args.sys)
    failures = 0
    for n, gen in enumerate(gens, start=1):
        verdict = symmetry_residual(gen, system)
        if verdict.is_symmetry:
            print("generator %d: symmetry" % n)
        else:
            failures += 1
            print("generator %d: not a symmetry" % n)
            for row, res in enumerate(verdict.residuals):
                if not res.is_zero():
                    print("  residual[%d] = %s" % (row, to_text(res)))
    print("verdict: %s" % ("FAIL" if failures else "PASS"))
    return 1 if failures else 0


def _cmd_symmetry_solve(args):
    system = read_system(args.sys)
    gens = solve_determining(system, args.degree)
    if gens:
        sys.stdout.write(print_generators(gens))
    print("found %d generators" % len(gens), file=sys.stderr)
    return 0


def _generator_degree(gens):
    degree = 0
    for gen in gens:
        for coeff in gen.xi + gen.eta:
            for mono in coeff.num:
                degree = max(degree, sum(e for _, e in mono))
    return degree


def _cmd_closure(args):
    _, gens = read_generators(args.gens)
    degree = args.degree if args.degree is not None else _generator_degree(gens)
    try:
        dim = closure_dimension(gens, degree)
    except DegreeOverflowError as exc:
        print("verdict: FAIL")
        print("the span does not close within degree %d: %s" % (degree, exc))
        return 1
    print("closure dimension: %d" % dim)
    return 0


def _read_initials(path):
    """Read `name = value` float assignments, one per line."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(
                    "%s:%d: expected `name = value`" % (path, lineno)
                )
            name, _, text = line.partition("=")
            try:
                values[name.strip()] = float(text.strip())
            except ValueError:
                raise FormatError(
                    "%s:%d: not a number: %r" % (path, lineno, text.strip())
                ) from None
    return values


def _step_count(r0, r1, step):
    if step == 0:
        raise OdesplitError("step must be nonzero")
    raw = (r1 - r0) / step
    count = round(raw)
    if count < 1 or abs(raw - count) > 1e-9 * max(1.0, abs(raw)):
        raise OdesplitError(
            "the step %g does not divide the interval [%g, %g]" % (step, r0, r1)
        )
    return count


def _cmd_xcheck(args):
    base = system_to_scalar(read_system(args.base))
    system = read_system(args.sys)
    spec = kind_spec(system.kind)
    if spec.pde:
        raise OdesplitError("xcheck integrates ODE variants only")
    initial = _read_initials(args.init)
    grid = (args.r0, args.step, _step_count(args.r0, args.r1, args.step))

    ctx = system.ctx
    ind = ctx.independents[0]
    unit_dep = {spec.dep_unit[dep]: dep for dep in spec.deps}
    re_dep = unit_dep["1"]
    im_dep = unit_dep["i"]
    bctx = base.ctx
    bind = bctx.independents[0]
    bdep = bctx.dependents[0]
    base_initial = {
        bdep: complex(initial.get(re_dep, 0.0), initial.get(im_dep, 0.0)),
        bctx.jet(bdep, (bind,)): complex(
            initial.get(ctx.jet(re_dep, (ind,)), 0.0),
            initial.get(ctx.jet(im_dep, (ind,)), 0.0),
        ),
    }

    base_run = integrate_base_complex(base, base_initial, grid)
    system_run = integrate_system(system, initial, grid)
    report = correspondence_report(base_run, system_run, system.kind)

    for dep in spec.deps:
        print("deviation[%s] = %.6e" % (dep, report.per_component[dep]))
    if report.constraint_drift is not None:
        print("constraint drift = %.6e" % report.constraint_drift)
    print("max deviation = %.6e" % report.max_deviation)
    if args.csv_base is not None:
        base_run.to_csv(args.csv_base)
    if args.csv_sys is not None:
        system_run.to_csv(args.csv_sys)
    if args.tol is not None:
        if report.max_deviation > args.tol:
            print("verdict: FAIL")
            return 1
        print("verdict: PASS")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="odesplit",
        description="split scalar differential equations into component"
        " systems, audit the exactness conditions, and study symmetries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="split a base equation into a system")
    p.add_argument("--variant", required=True, choices=SPLIT_KINDS)
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("check-cr", help="evaluate the exactness conditions")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--json", metavar="FILE", help="write the report as JSON")
    p.set_defaults(func=_cmd_check_cr)

    p = sub.add_parser("reconstruct", help="recover the base equation")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("symmetry", help="verify or solve for symmetries")
    ssub = p.add_subparsers(dest="action", required=True)
    v = ssub.add_parser("verify", help="check generators against a system")
    v.add_argument("--gen", required=True, metavar="FILE")
    v.add_argument("--sys", required=True, metavar="FILE")
    v.set_defaults(func=_cmd_symmetry_verify)
    s = ssub.add_parser("solve", help="solve the determining equations")
    s.add_argument("--degree", required=True, type=int)
    s.add_argument("--sys", required=True, metavar="FILE")
    s.set_defaults(func=_cmd_symmetry_solve)

    p = sub.add_parser("closure", help="dimension of the bracket closure")
    p.add_argument("--gens", required=True, metavar="FILE")
    p.add_argument("--degree", type=int, help="polynomial degree bound")
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("xcheck", help="compare base and system numerically")
    p.add_argument("--base", required=True, metavar="FILE")
    p.add_argument("--sys", required=True, metavar="FILE")
    p.add_argument("--r0", required=True, type=float)
    p.add_argument("--r1", required=True, type=float)
    p.add_argument("--step", required=True, type=float)
    p.add_argument("--init", required=True, metavar="FILE")
    p.add_argument("--tol", type=float, help="fail when the deviation exceeds this")
    p.add_argument("--csv-base", metavar="FILE", help="write the base trajectory")
    p.add_argument("--csv-sys", metavar="FILE", help="write the system trajectory")
    p.set_defaults(func=_cmd_xcheck)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return args.func(args)
    except VerdictError as exc:
        print("verdict: FAIL")
        print(str(exc))
        if exc.report is not None:
            for rec in exc.report.failing():
                print("failing: %s" % rec.id)
        return 1
    except OdesplitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
