"""``flowdirac`` command line: catalog, spectrum, bound, verify, deform.

Exit codes: 0 success, 1 configuration error, 2 capability error,
3 verification failure.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import estimates as est
from .models import (
    ModelConfigError, UnsupportedModel, catalog, catalog_lookup, dirac_square_spectrum, lambda1,
    model_from_json,
)
from .quantities import PI2, Quantity, format_number, is_exact, parse_number
from ._exact import random_rational
from .spinor_calculus import eigen_relation_dim3, run_trials

EXIT_OK, EXIT_CONFIG, EXIT_CAPABILITY, EXIT_VERIFY = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def _number(text):
    try:
        return parse_number(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text):
    x = _number(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _count(text):
    try:
        k = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("must be an integer") from exc
    if k < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return k


def _seed(text):
    try:
        s = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("must be an integer") from exc
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return s


def _load_model(args):
    if args.model_file:
        try:
            text = Path(args.model_file).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read model file: {exc}") from exc
        return model_from_json(text)
    if args.model is None:
        raise ConfigError("give --model (catalog name or JSON) or --model-file")
    text = args.model.strip()
    if text.startswith("{"):
        return model_from_json(text)
    return catalog_lookup(text).model


def _emit(args, doc, table):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(table())


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, Quantity):
        return f"{x} ({float(x):.10g})" if x.exact else f"{float(x):.12g}"
    return str(format_number(x))


# --------------------------------------------------------------------------


def cmd_catalog(args):
    entries = catalog()
    doc = [e.to_json() for e in entries]

    def table():
        lines = [f"{'name':<18} {'kind':<15} {'capability':<13} note"]
        for e in entries:
            lines.append(f"{e.name:<18} {e.model.kind:<15} {e.capability:<13} {e.note}")
        return "\n".join(lines)

    _emit(args, doc, table)
    return EXIT_OK


def cmd_spectrum(args):
    model = _load_model(args)
    count = args.count
    if args.cutoff is not None:
        sl = dirac_square_spectrum(model, args.cutoff)
    else:
        # grow from lambda_1 until enough distinct values are in range
        base = lambda1(model).value
        cut = base.coeff if model.eigen_unit != PI2 else float(base)
        cut = max(cut, Fraction(1) if is_exact(cut) else 1.0)
        while True:
            sl = dirac_square_spectrum(model, cut)
            if len(sl.values) >= (count or 1):
                break
            cut = cut * 2
    doc = sl.to_json(count)
    doc["model_config"] = model.to_json()

    def table():
        lines = [f"{sl.model}: eigenvalues of D^2 up to {format_number(sl.cutoff)}"]
        for row, q, mult in list(zip(doc["values"], sl.quantities(), sl.multiplicities()))[:count]:
            idx = ", ".join(f"{a['family']}{tuple(a['index'])}" for a in row["attained_by"][:4])
            more = " ..." if len(row["attained_by"]) > 4 else ""
            lines.append(f"  {_fmt(q):<32} x{mult:<4} {idx}{more}")
        return "\n".join(lines)

    _emit(args, doc, table)
    return EXIT_OK


def _flow_override(args, model):
    from .models import FlowData, default_flow

    if args.alpha is None and args.beta is None and args.b is None:
        return None
    try:
        base = default_flow(model)
    except UnsupportedModel:
        base = None
    alpha = args.alpha if args.alpha is not None else (base.alpha if base else 0)
    beta = args.beta if args.beta is not None else (base.beta if base else 0)
    if base is not None and base.n != 2:
        if args.b is not None:
            raise ConfigError("--b only applies to 3-dimensional flows")
        return FlowData(base.n, alpha, beta, h=base.h, sasakian=base.sasakian)
    b = args.b if args.b is not None else (base.b_scalar if base else 0)
    sasakian = base.sasakian if base else False
    return FlowData(2, alpha, beta, b, sasakian=sasakian and b * b == 1 and alpha * beta == 0)


def cmd_bound(args):
    model = _load_model(args)
    flow = _flow_override(args, model)
    profile = est.SpinorProfile(args.branch)
    report = est.equality_report(model, flow, profile, args.tolerance)
    doc = report.to_json()

    def table():
        lines = [f"{report.model}: lambda_1(D^2) = {_fmt(report.lambda1)}"]
        for k, v in report.upper.items():
            lines.append(f"  upper  {k:<10} {_fmt(v):<12} sharp={report.flags.get(k)}")
        for k, v in report.lower.items():
            lines.append(f"  lower  {k:<10} {_fmt(v):<12} sharp={report.flags.get(k)}")
        lines.append(f"  scal = {_fmt(report.scal)}")
        lines += [f"  note: {n}" for n in report.notes]
        return "\n".join(lines)

    _emit(args, doc, table)
    return EXIT_OK


def cmd_verify(args):
    eq, n = args.eq, args.n
    allowed = {"dirac": (2, 4, 6), "dirac2": (2, 4)}
    if n not in allowed[eq]:
        raise ConfigError(f"--eq {eq} supports n in {allowed[eq]}")
    summary = run_trials(eq, n, args.trials, args.seed, corrupt=args.corrupt_rules)
    if eq == "dirac2" and n == 2:
        # dim-3 eigen-relation D^2 psi = c psi + c' xi.psi at seeded rational (alpha, 0, b)
        rng = np.random.default_rng(args.seed)
        a, b = random_rational(rng), random_rational(rng)
        c0, cxi = eigen_relation_dim3(a, Fraction(0), b)
        summary["eigen_relation"] = {
            "alpha": format_number(a), "beta": 0, "b": format_number(b),
            "psi": format_number(c0), "xi_psi": format_number(cxi),
            "matches_closed_form": c0 == a * a + b * b / 4 - b * a and cxi == 0,
        }
    summary["corrupted"] = bool(args.corrupt_rules)

    def table():
        status = "PASS" if summary["passed"] else "FAIL"
        return (f"{status} eq={eq} n={n} trials={args.trials} seed={args.seed} "
                f"failures={summary['failures']} formal={summary['formal']}")

    _emit(args, summary, table)
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


def _t_grid(text):
    try:
        lo, hi, k = text.split(":")
        lo, hi, k = parse_number(lo), parse_number(hi), int(k)
    except (ValueError, TypeError) as exc:
        raise ConfigError("--t-range must look like LO:HI:STEPS") from exc
    if not (0 < lo <= hi) or k < 1:
        raise ConfigError("--t-range needs 0 < LO <= HI and STEPS >= 1")
    if k == 1:
        return [lo]
    step = (hi - lo) / (k - 1)
    return [lo + i * step for i in range(k)]


def cmd_deform(args):
    m, alpha = args.m, args.alpha if args.alpha is not None else 0
    if m < 1:
        raise ConfigError("--m must be at least 1")
    grid = _t_grid(args.t_range)
    values = [est.deformed_eigenvalue(m, alpha, t, args.branch) for t in grid]
    rows = [{"t": format_number(t), "eigenvalue": format_number(v)} for t, v in zip(grid, values)]
    ht = est.harmonic_t(m, alpha, args.branch)
    doc = {"m": m, "alpha": format_number(alpha), "branch": args.branch, "scan": rows,
           "harmonic_t": None if ht is None else format_number(ht),
           "minimum_on_grid": format_number(min(values))}

    def table():
        lines = [f"m={m} alpha={format_number(alpha)} branch={args.branch} "
                 f"harmonic t={'none' if ht is None else format_number(ht)}"]
        lines += [f"  t={r['t']!s:<12} eigenvalue={r['eigenvalue']}" for r in rows]
        return "\n".join(lines)

    _emit(args, doc, table)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="flowdirac", description="Dirac eigenvalue bounds on Riemannian flows")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=False):
        sp.add_argument("--format", choices=("json", "table"), default="table")
        if model:
            sp.add_argument("--model", help="catalog name or inline model JSON")
            sp.add_argument("--model-file", help="path to a model JSON file")

    sp = sub.add_parser("catalog", help="list the model catalog")
    common(sp)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("spectrum", help="eigenvalues of D^2 below a cutoff")
    common(sp, model=True)
    sp.add_argument("--cutoff", type=_positive)
    sp.add_argument("--count", type=_count)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("bound", help="compare upper and lower bounds with lambda_1")
    common(sp, model=True)
    sp.add_argument("--alpha", type=_number)
    sp.add_argument("--beta", type=_number)
    sp.add_argument("--b", type=_number)
    sp.add_argument("--branch", choices=(est.SIGMA0, est.SIGMAM), default=est.SIGMA0)
    sp.add_argument("--tolerance", type=_positive, default=1e-9)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="check the Dirac identities on random exact data")
    common(sp)
    sp.add_argument("--eq", choices=("dirac", "dirac2"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=_count, default=100)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--corrupt-rules", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("deform", help="scan D-homothetic deformations")
    common(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--alpha", type=_number)
    sp.add_argument("--branch", choices=(est.SIGMA0, est.SIGMAM), default=est.SIGMA0)
    sp.add_argument("--t-range", default="1/2:4:8")
    sp.set_defaults(func=cmd_deform)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, ModelConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnsupportedModel as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
