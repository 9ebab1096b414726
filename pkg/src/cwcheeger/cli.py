"""Homology, Laplacian spectra and boundary expansion of CW complexes.

Exit codes: 0 success, 2 parse/usage error, 3 invalid complex,
4 search budget exceeded, 5 operation not applicable to the input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import cwx
from .complex import (
    NonOrientable,
    Orientable,
    ValidationReport,
    boundary_set,
    check_orientability,
    max_boundary_size,
    validate,
    zoo,
)
from .errors import BudgetExceeded, ComplexValidationError, InapplicableError, ParseError
from .expansion import (
    CheegerReport,
    ExpansionCertificate,
    SweepProfile,
    boundary_expansion,
    cheeger_check,
    coboundary_expansion,
    sweep,
)
from .linalg import SearchBudget, zero_threshold
from .spectral import SpectralReport, betti, laplacian, smallest_nontrivial_eigenvalue, spectrum

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_BUDGET, EXIT_INAPPLICABLE = 0, 2, 3, 4, 5
TEXT_MATRIX_LIMIT = 12
COMMANDS = ("info", "validate", "betti", "spectrum", "expansion", "sweep", "cheeger", "orient")


# --------------------------------------------------------------------------
# formatting


def fmt_real(x: float) -> str:
    """12 significant digits, fixed notation; -0.0 prints as 0."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return np.format_float_positional(x, precision=12, unique=False, fractional=False, trim="k")


def fmt_short(x: float) -> str:
    s = f"{float(x):.10g}"
    return "0" if s in ("-0", "0") else s


def fmt_frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _snap(values, threshold: float) -> np.ndarray:
    v = np.array(values, dtype=float)
    v[np.abs(v) < threshold] = 0.0
    return v


def _ints(values) -> str:
    return " ".join(str(int(x)) for x in values)


def _reals(values) -> str:
    return " ".join(fmt_real(x) for x in values)


def _matrix_lines(prefix: str, mat) -> list[str]:
    return [f"{prefix} {i} " + " ".join(fmt_real(x) if isinstance(x, float) else str(x) for x in row) for i, row in enumerate(mat.tolist())]


def _text_matrix(title: str, mat) -> list[str]:
    if mat.shape[0] > TEXT_MATRIX_LIMIT or mat.shape[1] > TEXT_MATRIX_LIMIT:
        return [f"{title}: {mat.shape[0]}x{mat.shape[1]} (suppressed; use --format machine)"]
    out = [f"{title}:"]
    for row in mat.tolist():
        out.append("  " + " ".join(f"{fmt_short(x):>6}" for x in row))
    return out


def render_machine(report) -> str:
    """Line-oriented ``key value`` rendering with a fixed key order per report type."""
    lines: list[str] = []
    if isinstance(report, CheegerReport):
        lines += [
            "report cheeger",
            f"d {report.d}",
            f"regular_asserted {int(report.regular_asserted)}",
            f"incidence_pm1 {int(report.incidence_pm1)}",
            f"orientable {int(report.orientable)}",
            f"max_low_degree {report.max_low_degree}",
            f"lambda_d {fmt_real(0.0 if report.lambda_is_zero else report.lambda_d)}",
            f"lambda_d_zero {int(report.lambda_is_zero)}",
            f"h_d {fmt_frac(report.h_d)}",
            f"h_numerator {report.certificate.numerator}",
            f"h_denominator {report.certificate.denominator}",
            f"h_witness {_ints(report.certificate.witness.values)}",
            f"m {report.m}",
        ]
        for name, v in (("lower", report.lower), ("upper", report.upper)):
            lines += [
                f"{name}_applicable {int(v.applicable)}",
                f"{name}_failed_hypothesis {v.failed_hypothesis or '-'}",
                f"{name}_lhs {fmt_real(v.lhs)}",
                f"{name}_rhs {fmt_real(v.rhs)}",
                f"{name}_holds {int(v.holds)}",
                f"{name}_slack {fmt_real(0.0 if abs(v.slack) < 1e-12 else v.slack)}",
                f"{name}_verdict {v.status}",
            ]
        if report.sweep is not None:
            lines += [f"sweep_H {fmt_frac(report.sweep.H)}", f"sweep_argmin {report.sweep.argmin}"]
    elif isinstance(report, ExpansionCertificate):
        lines += [
            "report expansion",
            f"n {report.n}",
            f"variant {report.variant}",
            f"h {report.numerator}/{report.denominator}",
            f"h_reduced {fmt_frac(report.h)}",
            f"numerator {report.numerator}",
            f"denominator {report.denominator}",
            f"witness {_ints(report.witness.values)}",
        ]
    elif isinstance(report, SpectralReport):
        lines += [
            "report spectrum",
            f"n {report.n}",
            f"kind {report.kind}",
            f"lambda {fmt_real(0.0 if report.is_zero else report.value)}",
            f"lambda_zero {int(report.is_zero)}",
            f"trivial_dim {report.trivial_dim}",
            f"zero_threshold {fmt_real(report.zero_threshold)}",
            f"restricted_spectrum {_reals(_snap(report.spectrum, report.zero_threshold))}",
            f"eigenvector {_reals(_snap(report.vector.values, 1e-12))}",
        ]
    elif isinstance(report, SweepProfile):
        lines += [
            "report sweep",
            f"num_virtual {report.num_virtual}",
            f"num_real {report.num_real}",
            f"order {_ints(report.order)}",
            f"crossing {_ints(report.crossing)}",
            f"sigma {_ints(report.sigma)}",
            f"H {fmt_frac(report.H)}",
            f"argmin {report.argmin}",
            f"witness {_ints(report.witness.values)}",
            f"m {report.m}",
        ]
    elif isinstance(report, ValidationReport):
        lines += ["report validate", f"ok {int(report.ok)}", f"violations {len(report.violations)}"]
        for v in report.violations:
            row = "-" if v.row is None else v.row
            col = "-" if v.col is None else v.col
            lines.append(f"violation {v.rule} {v.n} {row} {col}")
    elif isinstance(report, Orientable):
        lines += ["report orient", "orientable 1", f"signs {_ints(report.orientation.signs)}"]
    elif isinstance(report, NonOrientable):
        lines += ["report orient", "orientable 0"]
        if report.branch_cell is not None:
            lines.append(f"branch_cell {report.branch_cell}")
        else:
            lines.append(f"cycle {_ints(report.cycle)}")
    else:
        raise TypeError(f"cannot render {type(report).__name__}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands


def _cells(cx, n, alpha) -> str:
    sup = [cx.label(n, int(i)) for i in np.flatnonzero(alpha)]
    return "{" + ", ".join(sup) + "}"


def _cmd_info(cx, args):
    d = cx.dim
    if args.format == "machine":
        lines = ["report info", f"dim {d}", f"cells {_ints(cx.cell_counts)}", f"regular_asserted {int(cx.regular_asserted)}"]
        if d >= 1:
            lines += [f"boundary_set {_ints(boundary_set(cx))}", f"m {max_boundary_size(cx)}"]
        for n in range(1, d + 1):
            lines += _matrix_lines(f"inc_{n}_row", cx.inc(n))
        return "\n".join(lines) + "\n"
    lines = [f"dimension: {d}", "cells: " + ", ".join(f"c_{n} = {c}" for n, c in enumerate(cx.cell_counts))]
    lines.append(f"regular asserted: {'yes' if cx.regular_asserted else 'no'}")
    if d >= 1:
        bs = boundary_set(cx)
        lines.append(f"boundary (d-1)-cells: {len(bs)}")
        lines.append(f"m = {max_boundary_size(cx)}")
    for n in range(1, d + 1):
        lines += _text_matrix(f"I_{n}", cx.inc(n))
    return "\n".join(lines) + "\n"


def _cmd_validate(cx, args):
    report = validate(cx)
    if args.format == "machine":
        out = render_machine(report)
    elif report.ok:
        out = "ok\n"
    else:
        out = "invalid\n" + "".join(f"  {v}\n" for v in report.violations)
    return out, (EXIT_OK if report.ok else EXIT_INVALID)


def _field(args) -> str:
    return {"f2": "F2", "q": "Q"}[args.field]


def _cmd_betti(cx, args):
    field = _field(args)
    dims = [args.dim] if args.dim is not None else list(range(cx.dim + 1))
    values = [(n, betti(cx, n, field, args.reduced)) for n in dims]
    if args.format == "machine":
        lines = ["report betti", f"field {args.field}", f"reduced {int(args.reduced)}"]
        lines += [f"betti_{n} {b}" for n, b in values]
        return "\n".join(lines) + "\n"
    if args.dim is not None:
        return f"{values[0][1]}\n"
    return "".join(f"b_{n}({field}) = {b}\n" for n, b in values)


def _cmd_spectrum(cx, args):
    n = cx.dim if args.dim is None else args.dim
    kind = args.kind or "lower"
    lap = laplacian(cx, n, kind, args.reduced)
    eigs = _snap(spectrum(cx, n, kind, args.reduced), zero_threshold(lap))
    rep = smallest_nontrivial_eigenvalue(cx, n, kind, args.reduced, args.tol) if kind != "full" else None
    if args.format == "machine":
        lines = []
        if rep is not None:
            lines.append(render_machine(rep).rstrip("\n"))
        else:
            lines += ["report spectrum", f"n {n}", f"kind {kind}"]
        lines.append(f"eigenvalues {_reals(eigs)}")
        lines += _matrix_lines("laplacian_row", lap)
        return "\n".join(lines) + "\n"
    lines = [f"{kind} Laplacian, n = {n}"]
    lines += _text_matrix("matrix", lap)
    lines.append("eigenvalues: " + " ".join(fmt_short(x) for x in eigs))
    if rep is not None:
        sym = "lambda_" if kind == "lower" else "lambda^"
        lines.append(f"{sym}{n} = {fmt_short(0.0 if rep.is_zero else rep.value)} (trivial subspace dim {rep.trivial_dim})")
        lines.append("eigenvector: " + " ".join(fmt_short(x) for x in _snap(rep.vector.values, 1e-12)))
    return "\n".join(lines) + "\n"


def _cmd_expansion(cx, args):
    n = cx.dim if args.dim is None else args.dim
    fn = boundary_expansion if args.variant == "boundary" else coboundary_expansion
    cert = fn(cx, n, args.reduced, _budget(args))
    if args.format == "machine":
        return render_machine(cert)
    name = "h" if args.variant == "boundary" else "h^"
    return (
        f"{args.variant} expansion, n = {n}\n"
        f"{name}_{n} = {fmt_frac(cert.h) if cert.h.denominator != 1 else cert.h.numerator} "
        f"(= {cert.numerator}/{cert.denominator})\n"
        f"witness: {_cells(cx, n, cert.witness.values)}\n"
    )


def _cmd_sweep(cx, args):
    rep = smallest_nontrivial_eigenvalue(cx, cx.dim, "lower", args.reduced, args.tol)
    prof = sweep(cx, rep.vector)
    if args.format == "machine":
        return render_machine(prof)
    aug = prof.augmented.augmented
    d = cx.dim
    lines = [
        f"sweep of the lambda_{d} eigenvector (lambda_{d} = {fmt_short(0.0 if rep.is_zero else rep.value)})",
        "order: " + " ".join(aug.label(d, c) for c in prof.order),
        "|C_i|: " + " ".join(str(c) for c in prof.crossing),
        f"H[f] = {prof.H} at i = {prof.argmin}",
        f"witness: {_cells(cx, d, prof.witness.values)}",
        f"m = {prof.m}",
    ]
    return "\n".join(lines) + "\n"


def _cmd_cheeger(cx, args):
    r = cheeger_check(cx, args.reduced, _budget(args))
    if args.format == "machine":
        return render_machine(r)
    yn = {True: "yes", False: "no"}
    cert = r.certificate
    lam = 0.0 if r.lambda_is_zero else r.lambda_d
    h = str(r.h_d.numerator) if r.h_d.denominator == 1 else fmt_frac(r.h_d)
    lines = [
        f"Cheeger-Buser check in top dimension d = {r.d}",
        "hypotheses:",
        f"  regular (asserted)         {yn[r.regular_asserted]}",
        f"  incidence in {{-1,0,1}}      {yn[r.incidence_pm1]}",
        f"  orientable                 {yn[r.orientable]}",
        f"  max (d-1)-degree <= 2      {yn[r.degree_at_most_2]} (max {r.max_low_degree})",
        f"lambda_d = {fmt_short(lam)}",
        f"h_d = {h} (= {cert.numerator}/{cert.denominator})",
        f"  witness: {_cells(cx, r.d, cert.witness.values)}",
        f"m = {r.m}",
    ]
    if r.sweep is not None:
        lines.append(f"H[f] = {r.sweep.H} (sweep cut at i = {r.sweep.argmin})")
    for title, v in (("lower bound lambda_d <= h_d", r.lower), ("upper bound h_d <= sqrt(2 m lambda_d)", r.upper)):
        line = f"{title}: {fmt_short(v.lhs)} <= {fmt_short(v.rhs)} -> {v.status}"
        if not v.applicable:
            line += f" (hypothesis '{v.failed_hypothesis}' fails; inequality {'holds' if v.holds else 'fails'} numerically)"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _cmd_orient(cx, args):
    res = check_orientability(cx)
    if args.format == "machine":
        return render_machine(res)
    d = cx.dim
    if isinstance(res, Orientable):
        return "orientable\nsigns: " + " ".join(f"{s:+d}" for s in res.orientation.signs) + "\n"
    if res.branch_cell is not None:
        return f"not orientable: ({d - 1})-cell {cx.label(d - 1, res.branch_cell)} has 3 or more cofaces\n"
    cells = res.cycle[0::2]
    return "not orientable: odd cycle " + " -> ".join(cx.label(d, c) for c in cells) + "\n"


HANDLERS = {
    "info": _cmd_info,
    "validate": _cmd_validate,
    "betti": _cmd_betti,
    "spectrum": _cmd_spectrum,
    "expansion": _cmd_expansion,
    "sweep": _cmd_sweep,
    "cheeger": _cmd_cheeger,
    "orient": _cmd_orient,
}


def _budget(args) -> SearchBudget:
    if args.budget is None:
        return SearchBudget()
    return SearchBudget(span_bits=args.budget, syndrome_bits=args.budget)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="cwx or facet file")
    common.add_argument("--zoo", help="use a named fixture complex instead of a file")
    common.add_argument("--param", type=int, help="parameter of the --zoo complex")
    common.add_argument("--dim", type=int, help="dimension n (default: top dimension)")
    common.add_argument("--field", choices=("f2", "q"), default="q")
    common.add_argument("--reduced", action="store_true", help="include the (-1)-cell")
    common.add_argument("--kind", choices=("upper", "lower", "full"))
    common.add_argument("--variant", choices=("boundary", "coboundary"), default="boundary")
    common.add_argument("--tol", type=float, default=1e-10, help="Jacobi off-diagonal tolerance")
    common.add_argument("--budget", type=int, help="log2 cap on exact F2 searches")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    parser = argparse.ArgumentParser(
        prog="cwcheeger",
        description=__doc__.splitlines()[0],
        epilog="exit codes: 0 ok, 2 parse error, 3 invalid complex, 4 budget exceeded, 5 not applicable",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load(args):
    if (args.input is None) == (args.zoo is None):
        raise ParseError("give exactly one of an input path or --zoo")
    if args.zoo is not None:
        try:
            return zoo(args.zoo, args.param)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return cwx.load(args.input)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cx = _load(args)
        if args.command != "validate":
            report = validate(cx)
            if not report.ok:
                raise ComplexValidationError("; ".join(map(str, report.violations)), report.violations)
        result = HANDLERS[args.command](cx, args)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
        stdout.write(result)
        return code
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except ComplexValidationError as exc:
        print(f"invalid complex: {exc}", file=stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return EXIT_BUDGET
    except (InapplicableError, ValueError) as exc:
        print(f"not applicable: {exc}", file=stderr)
        return EXIT_INAPPLICABLE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
