"""Command-line front end.

    tritronquee certify [--precision-bits N] [--grid-n-d2 N] [--grid-n-d3 N] [--tail-s S]
                        [--disable NODE ...] [--report FILE] [--format json|text]
    tritronquee eval --x P/Q [--domain auto|D1|D2|D3|D4]
    tritronquee pole
    tritronquee residual --domain D2|D3|D4
    tritronquee oracle-check [--csv FILE]

Exit codes: 0 success, 1 usage error, 2 certificate failure, 3 precision exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from flint import acb, arb

from . import approximant, contraction, report
from .certificates import CertificateFailed
from .scalars import (DEFAULT_PRECISION, MAX_PRECISION, PrecisionExhausted, ball, parse_rational,
                      pow_rational_exp, upper, working_precision)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_PRECISION = 0, 1, 2, 3

# certified displayed error bands, used by ``eval``
E_BAND = {"D2": Fraction(175, 10**9), "D3_weighted": Fraction(401, 10**8), "D4": Fraction(235, 10**7),
          "D1_coeff": Fraction(682, 100000) * Fraction(15, 2)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _positive_int(text):
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tritronquee", description="Certify the Painleve-I tritronquee approximant.")
    p.add_argument("--precision-bits", type=_positive_int, default=DEFAULT_PRECISION)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("certify", help="run the full certificate graph")
    c.add_argument("--grid-n-d2", type=_positive_int, default=20)
    c.add_argument("--grid-n-d3", type=_positive_int, default=5)
    c.add_argument("--tail-s", type=_positive_int, default=50)
    c.add_argument("--disable", action="append", default=[], metavar="NODE",
                   help="skip a graph node (repeatable or comma-separated)")
    c.add_argument("--report", metavar="FILE")
    c.add_argument("--no-oracle", action="store_true", help="leave the oracle section empty")

    e = sub.add_parser("eval", help="y0 with its certified error band")
    e.add_argument("--x", type=_rational, required=True, help="x, or nu/pi on the circle")
    e.add_argument("--domain", choices=("auto", "D1", "D2", "D3", "D4"), default="auto")

    sub.add_parser("pole", help="certified pole enclosure")

    r = sub.add_parser("residual", help="residual bound details")
    r.add_argument("--domain", choices=("D2", "D3", "D4"), required=True)
    r.add_argument("--grid-n", type=_positive_int, default=20)

    o = sub.add_parser("oracle-check", help="non-rigorous cross-validation")
    o.add_argument("--csv", metavar="FILE", help="dump the real-axis trajectory")

    for sp in (c, e, r, o):
        sp.add_argument("--precision-bits", type=_positive_int, default=argparse.SUPPRESS)
        sp.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    return p


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(report.dumps(report.encode(payload)))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- commands ------------------------------------------------------------------------

def cmd_certify(args) -> int:
    disable = [n.strip() for item in args.disable for n in item.split(",") if n.strip()]
    opts = contraction.RunOptions(args.grid_n_d2, args.grid_n_d3, args.tail_s)
    dag = contraction.build_dag(opts)
    unknown = [n for n in disable if n not in dag.nodes]
    if unknown:
        raise UsageError(f"unknown node(s): {', '.join(unknown)}")
    results = dag.run(disable=disable)
    contraction.BoundLedger.from_results(results)       # every check name appears once
    oracle = None
    if not args.no_oracle:
        from .oracle import cross_validate
        oracle = cross_validate()
    meta = {"precision_bits": args.precision_bits, "grid_n_d2": args.grid_n_d2,
            "grid_n_d3": args.grid_n_d3, "tail_s": args.tail_s, "disabled": disable,
            "timestamp": report.timestamp()}
    extras = {"delta_probe": contraction.delta_probe(results)}
    rep = report.build_report(results, meta, oracle, extras)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.dumps(rep))
    ok = rep["meta"]["all_pass"]
    if args.format == "json":
        sys.stdout.write(report.dumps(rep))
    else:
        sys.stdout.write(report.render_text(results))
        sys.stdout.write(f"ledger: {'all pass' if ok else 'FAILED'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def error_band(p: approximant.DomainPoint):
    d = p.domain_id
    if d == "D1":
        return ball(E_BAND["D1_coeff"]) * pow_rational_exp(ball(p.coordinate), Fraction(-43, 4))
    if d == "D2":
        return ball(E_BAND["D2"])
    if d == "D3":
        return ball(E_BAND["D3_weighted"]) * pow_rational_exp(ball(p.coordinate - approximant.X0),
                                                               Fraction(-16, 5))
    return ball(E_BAND["D4"])


def cmd_eval(args) -> int:
    x = args.x
    try:
        if args.domain == "auto":
            p = approximant.DomainPoint.real(x)
        else:
            p = approximant.DomainPoint(args.domain, x)
    except approximant.OutsideDomain as exc:
        raise UsageError(str(exc)) from exc
    y = approximant.y0_eval(p)
    band = error_band(p)
    if isinstance(y, acb):
        mid = {"re": y.real.mid(), "im": y.imag.mid()}
        rad = max(y.real.rad(), y.imag.rad())
    else:
        mid, rad = y.mid(), y.rad()
    total = ball(upper(ball(rad) + band))
    payload = {"x": p.coordinate, "domain": p.domain_id, "y0_mid": mid, "y0_rad": rad,
               "E_bound": band, "total_radius": total}
    enc = report.encode
    mid_txt = enc(mid)["mid"] if isinstance(mid, arb) else f"{enc(mid['re'])['mid']} + {enc(mid['im'])['mid']}i"
    what = "nu/pi" if p.domain_id == "D4" else "x"
    text = (f"{what} = {report.format_rational(p.coordinate)}  (domain {p.domain_id})\n"
            f"y0 = {mid_txt}\n"
            f"ball radius {enc(ball(rad))['mid']}, E bound {enc(band)['mid']}\n"
            f"|y - {mid_txt}| <= {enc(total)['mid']}")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_pole(args) -> int:
    results = contraction.run_chain(only=["pole.location"])
    res = results["pole.location"]
    if not res.passed:
        _emit(args, {"status": res.status, "note": res.note},
              f"pole enclosure not certified: {res.status} {res.note}")
        return EXIT_FAIL
    enc = res.values["enclosure"]
    payload = {"x0": enc.center, "radius_bound": enc.radius_bound, "count": enc.count,
               "on_negative_axis": enc.on_negative_axis, "conditional_notes": enc.justification}
    text = (f"exactly {enc.count} pole in |x - x0| < r, x0 = {report.format_rational(enc.center)}\n"
            f"|x_p - x0| <= {report.encode(enc.radius_bound)['mid']}\n"
            f"note: {enc.justification}")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_residual(args) -> int:
    from .grid_bounds import GridFunction, sup_bound
    from .pieces import L, L0, X_LEFT
    d = args.domain
    cert = approximant.residual_certificate(d)
    R = approximant.residual(d)
    payload = {"domain": d, "exponents": [min(R.exponents()), max(R.exponents())],
               "cancellations": cert.passed}
    if d == "D2":
        payload["calR_sup"] = sup_bound(GridFunction.from_poly(approximant.calR_poly(), "calR"),
                                        L0, L, args.grid_n)
        payload["grid_n"] = args.grid_n
    elif d == "D3":
        payload["R_sup"] = sup_bound(GridFunction.from_poly(R, "R"), X_LEFT, L0, args.grid_n)
        payload["grid_n"] = args.grid_n
    else:
        payload["sum_abs_Rj_rj"] = ball(approximant.residual_d4_bound())
    lines = [f"{k}: {report.encode(v)}" for k, v in payload.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_oracle(args) -> int:
    from . import oracle
    res = oracle.cross_validate()
    if args.csv:
        from .pieces import X_LEFT
        oracle.write_trajectory_csv(oracle.trajectory_from_L(X_LEFT), args.csv)
    lines = [f"{'pass' if v else 'FAIL'} {k}" for k, v in res["checks"].items()]
    lines.append(f"max |y_oracle - y0| on D2 u D3: {report.encode(res['max_deviation_D2_D3'])}")
    lines.append(f"pole estimate: {report.encode(res['pole_estimate'])}")
    _emit(args, res, "\n".join(lines))
    return EXIT_OK if res["status"] == "pass" else EXIT_FAIL


COMMANDS = {"certify": cmd_certify, "eval": cmd_eval, "pole": cmd_pole, "residual": cmd_residual,
            "oracle-check": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.precision_bits > MAX_PRECISION:
            raise UsageError(f"--precision-bits must be at most {MAX_PRECISION}")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        with working_precision(args.precision_bits):
            return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tritronquee: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"tritronquee: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except CertificateFailed as exc:
        print(f"tritronquee: certificate failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
