"""Command-line front end.

Every command writes its configuration first: a ``config`` key in JSON
documents, ``# key=value`` comment lines in text and CSV output, and a
leading ``{"config": ...}`` line in JSON Lines.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 failed
computation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .adjoint import adjoint_qexp
from .errors import ComputationError
from .forms import coefficient_constant, deligne_check, expand, parse_form, to_expression
from .lseries import bound_scan, required_prec, shifted_L, sign_scan
from .petersson import DEFAULT_NODES, Y_CUTOFF, petersson_inner
from .spaces import decompose, space_basis

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_COMPUTATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _form_arg(text: str):
    try:
        return parse_form(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _space_arg(text: str) -> tuple[int, int]:
    try:
        k, n = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K,N, got {text!r}") from None
    return k, n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="serre-adjoint", description="Serre derivative adjoint and shifted L-series toolkit.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol=True):
        sp.add_argument("--output", help="write to this file instead of stdout")
        if tol:
            sp.add_argument("--tol", type=float, default=1e-10)

    q = sub.add_parser("qexp", help="exact q-expansion of a form")
    q.add_argument("--form", type=_form_arg, required=True)
    q.add_argument("--prec", type=int, default=20)
    q.add_argument("--format", choices=("text", "json"), default="text")
    common(q, tol=False)

    lv = sub.add_parser("lvalue", help="shifted series L_{f,m}(s) with an error bound")
    lv.add_argument("--form", type=_form_arg, required=True)
    lv.add_argument("--k", type=int, help="k with f of weight k+2 (default: from the form)")
    lv.add_argument("--m", type=int, required=True)
    lv.add_argument("--s", type=float, help="default k+1")
    lv.add_argument("--prec", type=int, help="coefficients to expand (default: what tol needs)")
    common(lv)

    ad = sub.add_parser("adjoint", help="coefficients of the adjoint image of a cusp form")
    ad.add_argument("--form", type=_form_arg, required=True)
    ad.add_argument("--k", type=int)
    ad.add_argument("--level", type=int, default=1)
    ad.add_argument("--mmax", type=int, required=True)
    ad.add_argument("--index-normalization", action="store_true", help="divide by the group index (comparison only)")
    common(ad)

    de = sub.add_parser("decompose", help="exact coordinates in an echelon basis")
    de.add_argument("--form", type=_form_arg, required=True)
    de.add_argument("--space", type=_space_arg, required=True, metavar="K,N")
    de.add_argument("--prec", type=int, default=200)
    de.add_argument("--format", choices=("text", "json"), default="text")
    common(de, tol=False)

    pe = sub.add_parser("petersson", help="Petersson inner product by quadrature")
    pe.add_argument("--f", type=_form_arg, required=True)
    pe.add_argument("--g", type=_form_arg, required=True)
    pe.add_argument("--k", type=int)
    pe.add_argument("--level", type=int, default=1)
    pe.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    pe.add_argument("--y-cutoff", type=float, default=Y_CUTOFF)
    common(pe, tol=False)

    sc = sub.add_parser("scan", help="row-per-m scans")
    sc.add_argument("kind", choices=("bound", "sign", "deligne"))
    sc.add_argument("--mmax", type=int, required=True)
    sc.add_argument("--form", type=_form_arg, help="deligne scan only (default delta)")
    sc.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common(sc, tol=False)

    ve = sub.add_parser("verify", help="run the end-to-end checks")
    ve.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], help="comma-separated check numbers")
    ve.add_argument("--format", choices=("text", "json"), default="text")
    common(ve, tol=False)
    return p


def _config(args) -> dict:
    out = {}
    for key, val in sorted(vars(args).items()):
        if key == "output":
            continue
        if hasattr(val, "kind"):
            val = to_expression(val)
        elif isinstance(val, tuple):
            val = list(val)
        out[key] = val
    return out


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _text_header(config: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in config.items())


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _weight_k(args, spec) -> int:
    return args.k if args.k is not None else spec.weight - 2


def _constant(spec):
    c = coefficient_constant(spec)
    return None if c is None else float(c)


def cmd_qexp(args, config):
    f = expand(args.form, args.prec)
    if args.format == "json":
        obj = f.to_json_obj()
        obj["config"] = config
        return EXIT_OK, _dumps(obj)
    lines = [f"{n} {_frac(c)}\n" for n, c in enumerate(f.coeffs)]
    return EXIT_OK, _text_header(config) + "".join(lines)


def cmd_lvalue(args, config):
    k = _weight_k(args, args.form)
    s = args.s if args.s is not None else k + 1
    c = _constant(args.form)
    prec = args.prec or required_prec(k, args.m, args.tol, s, c if c is not None else 1.0)
    f = expand(args.form, prec)
    if c is None:
        # heuristic constant from the coefficients, then make sure there are enough of them
        from .lseries import empirical_coeff_constant

        guess = max(empirical_coeff_constant(f, k + 2), 1e-300)
        need = required_prec(k, args.m, args.tol, s, guess)
        if args.prec is None and need > prec:
            f = expand(args.form, need)
    L = shifted_L(f, k, args.m, s, args.tol, c)
    obj = L.to_json_obj()
    obj["config"] = config
    return EXIT_OK, _dumps(obj)


def cmd_adjoint(args, config):
    k = _weight_k(args, args.form)
    c = _constant(args.form)
    prec = required_prec(k, args.mmax, args.tol, None, c if c is not None else 1.0)
    prec = max(prec, required_prec(k, 1, args.tol, None, c if c is not None else 1.0))
    f = expand(args.form, prec)
    res = adjoint_qexp(f, k, args.level, args.mmax, args.tol, c, args.index_normalization)
    obj = {"config": config, "k": k, "level": args.level, "rows": [r.to_json_obj() for r in res.rows]}
    return EXIT_OK, _dumps(obj)


def cmd_decompose(args, config):
    k, n = args.space
    basis = space_basis(k, n, args.prec)
    coords = decompose(expand(args.form, args.prec), basis)
    if args.format == "json":
        obj = {"config": config, "coords": [_frac(c) for c in coords], "decimal": [float(c) for c in coords]}
        return EXIT_OK, _dumps(obj)
    exact = ", ".join(_frac(c) for c in coords)
    dec = ", ".join(mpmath.nstr(mpmath.mpf(c.numerator) / c.denominator, 15) for c in coords)
    return EXIT_OK, _text_header(config) + f"{exact}\n{dec}\n"


def cmd_petersson(args, config):
    k = args.k if args.k is not None else args.f.weight
    est = petersson_inner(args.f, args.g, k, args.level, args.nodes, args.y_cutoff)
    obj = est.to_json_obj()
    obj["config"] = config
    return EXIT_OK, _dumps(obj)


def cmd_scan(args, config):
    if args.kind == "deligne":
        spec = args.form or parse_form("delta")
        f = expand(spec, args.mmax + 1)
        rep = deligne_check(f, spec.weight, args.mmax)
        fields = ["n", "a_n", "ratio", "ok"]
        rows = []
        for n in range(1, args.mmax + 1):
            a = f.coeffs[n]
            ratio = _deligne_ratio(a, n, spec.weight)
            rows.append({"n": n, "a_n": _frac(a), "ratio": f"{ratio:.12g}", "ok": ratio <= 1})
        passed = rep.passed
    else:
        rep = bound_scan(args.mmax) if args.kind == "bound" else sign_scan(args.mmax)
        fields = ["m", "tau", "L", "statistic", "bound", "ok"]
        rows = [
            {"m": r.m, "tau": r.tau, "L": _frac(r.L), "statistic": f"{r.statistic:.12g}", "bound": f"{r.bound:.12g}", "ok": r.ok}
            for r in rep.rows
        ]
        passed = rep.passed
    if args.format == "jsonl":
        lines = [json.dumps({"config": config}, sort_keys=True)]
        lines += [json.dumps(r, sort_keys=True) for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        buf = io.StringIO()
        buf.write(_text_header(config))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    return (EXIT_OK if passed else EXIT_FAILED), text


def _deligne_ratio(a: Fraction, n: int, weight: int) -> float:
    from .arith import divisor_count

    return float(abs(a)) / (divisor_count(n) * n ** ((weight - 1) / 2))


def cmd_verify(args, config):
    from .verify import run_all

    results = run_all(args.only)
    ok = all(r.passed for r in results)
    if args.format == "json":
        obj = {
            "config": config,
            "passed": ok,
            "checks": [
                {"number": r.number, "label": r.label, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
                for r in results
            ],
        }
        text = _dumps(obj)
    else:
        text = _text_header(config) + "".join(r.line + "\n" for r in results)
        text += f"{sum(r.passed for r in results)}/{len(results)} checks passed\n"
    return (EXIT_OK if ok else EXIT_FAILED), text


COMMANDS = {
    "qexp": cmd_qexp,
    "lvalue": cmd_lvalue,
    "adjoint": cmd_adjoint,
    "decompose": cmd_decompose,
    "petersson": cmd_petersson,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def render(argv) -> tuple[int, str]:
    """Run a command and return ``(exit_code, output_text)`` without printing."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_USAGE, str(exc) + "\n"
    config = {"command": args.command, **_config(args)}
    try:
        code, text = COMMANDS[args.command](args, config)
    except ComputationError as exc:
        return EXIT_COMPUTATION, f"error: {type(exc).__name__}: {exc}\n"
    except ValueError as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return code, ""
    return code, text


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help", "--version") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    code, text = render(argv)
    stream = sys.stderr if code in (EXIT_USAGE, EXIT_COMPUTATION) else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
