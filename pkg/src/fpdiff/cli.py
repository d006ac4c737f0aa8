"""Command-line front end.

Subcommands: ``table``, ``diagnostics``, ``moments``, ``profile`` and
``verify``. Exit status is 0 on success, 2 for invalid options, 3 when a
mesh or quadrature rule cannot be constructed, and 1 when ``verify`` finds
a failing criterion.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys


from fpdiff.analysis import (
    FAMILIES,
    TEST_FUNCTIONS,
    MeshDiagnostics,
    SchemeConfig,
    build_scheme,
    convergence_study,
    format_full,
    format_sig,
    mesh_diagnostics,
    moment_residuals,
    nodal_errors,
)
from fpdiff.gauss_legendre import ConstructionError
from fpdiff.schemes import apply

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3


class UsageError(Exception):
    pass


def _parse_ns(text):
    try:
        ns = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not ns or any(n < 1 for n in ns):
        raise argparse.ArgumentTypeError("--ns needs positive integers")
    return ns


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fpdiff",
        description="Finite-difference schemes for (1 - mu^2) f' )' on [-1, 1].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scheme", choices=FAMILIES, required=True)
    common.add_argument("--mode", choices=("fr", "hr"), default="fr",
                        help="full range or half range (default: fr)")
    common.add_argument("--ns", type=_parse_ns, required=True,
                        help="comma-separated node counts, per half in hr mode")
    common.add_argument("--function", choices=sorted(TEST_FUNCTIONS), default="exp")
    common.add_argument("--format", choices=("csv", "markdown"), default="csv")
    common.add_argument("--digits", type=int, default=3,
                        help="significant digits in markdown output (default: 3)")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    table = sub.add_parser("table", parents=[common], help="convergence table")
    table.add_argument("--dump-mesh", metavar="PATH",
                       help="write the mesh as CSV; '{n}' in PATH is replaced by N")
    table.add_argument("--dump-operator", metavar="PATH",
                       help="write the tridiagonal operator as CSV; '{n}' as for --dump-mesh")
    sub.add_parser("diagnostics", parents=[common], help="mesh regularity constants per N")
    sub.add_parser("moments", parents=[common], help="zeroth and first moment residuals per N")
    sub.add_parser("profile", parents=[common], help="signed nodal errors (mu, error)")
    sub.add_parser("verify", help="run the acceptance criteria")
    return parser


def _rows_to_text(header, rows, fmt, digits):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, (int, str)) else format_full(v) for v in row])
        return buf.getvalue()
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for row in rows:
        cells = [str(v) if isinstance(v, (int, str)) else format_sig(v, digits) for v in row]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _dump_path(template, n, count):
    if "{n}" in template:
        return template.replace("{n}", str(n))
    if count > 1:
        raise UsageError("dump path needs a '{n}' placeholder when --ns has several entries")
    return template


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _build_each(config, ns):
    """Yield (n, Discretization); a construction failure names its N."""
    for n in ns:
        try:
            yield n, build_scheme(config, n)
        except ConstructionError as exc:
            raise ConstructionError(f"N={n}: {exc}") from exc


def _cmd_table(args, config, tf):
    report = convergence_study(config, tf, args.ns)
    text = report.to_csv() if args.format == "csv" else report.to_markdown(args.digits)
    failed = [row for row in report.rows if row.failure]
    if failed:
        raise ConstructionError("; ".join(f"N={r.n}: {r.failure}" for r in failed))
    if args.dump_mesh or args.dump_operator:
        for n, disc in _build_each(config, args.ns):
            if args.dump_mesh:
                _write(_dump_path(args.dump_mesh, n, len(args.ns)), disc.mesh.to_csv())
            if args.dump_operator:
                _write(_dump_path(args.dump_operator, n, len(args.ns)), disc.operator.to_csv())
    return text


def _cmd_diagnostics(args, config, tf):
    names = [f.name for f in dataclasses.fields(MeshDiagnostics)]
    rows = []
    for _, disc in _build_each(config, args.ns):
        diag = mesh_diagnostics(disc.mesh, alpha=disc.alpha)
        rows.append([disc.mesh.count, *(getattr(diag, k) for k in names)])
    return _rows_to_text(["N", *names], rows, args.format, args.digits)


def _cmd_moments(args, config, tf):
    rows = []
    for _, disc in _build_each(config, args.ns):
        if disc.mesh.weights is None:
            raise UsageError(f"{config.family} meshes carry no quadrature weights")
        f = tf.f(disc.mesh.nodes)
        zeroth, first = moment_residuals(disc.mesh, apply(disc.operator, f), f)
        rows.append([disc.mesh.count, zeroth, first])
    return _rows_to_text(["N", "zeroth", "first"], rows, args.format, args.digits)


def _cmd_profile(args, config, tf):
    if len(args.ns) != 1:
        raise UsageError("profile takes a single N")
    (_, disc), = _build_each(config, args.ns)
    err = nodal_errors(disc, tf)
    rows = [[float(mu), float(e)] for mu, e in zip(disc.mesh.nodes, err)]
    return _rows_to_text(["mu", "error"], rows, args.format, args.digits)


COMMANDS = {
    "table": _cmd_table,
    "diagnostics": _cmd_diagnostics,
    "moments": _cmd_moments,
    "profile": _cmd_profile,
}


def _verify():
    from fpdiff.acceptance import run_all

    results = run_all()
    for res in results:
        print(res.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return _verify()

    if args.digits < 1:
        parser.error("--digits must be at least 1")
    if any(b <= a for a, b in zip(args.ns, args.ns[1:])):
        parser.error("--ns must be strictly increasing")
    min_n = 3 if args.scheme == "uniform-shifted" else 2 if args.scheme == "uniform" else 1
    if min(args.ns) < min_n:
        parser.error(f"{args.scheme} needs N >= {min_n}")
    try:
        config = SchemeConfig(args.scheme, args.mode)
    except ValueError as exc:
        parser.error(str(exc))
    tf = TEST_FUNCTIONS[args.function]

    try:
        text = COMMANDS[args.command](args, config, tf)
    except UsageError as exc:
        parser.error(str(exc))
    except ConstructionError as exc:
        print(f"fpdiff: construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    _write(args.output, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
