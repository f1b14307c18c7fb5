"""Command-line front end with JSON/CSV reports.

Exit status: 0 = all checks pass, 2 = mathematical anomaly found (e.g. a
digit outside {0,1}), 1 = usage or evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .engine import (
    DELTA,
    SequenceSpec,
    certify_pair,
    closed_form_check,
    corollary_check,
    digits_from_trace,
    first_bad_digit,
    generate,
    normality_probe,
    verify_pair,
)
from .discovery import (
    bisect_jump,
    halfint_form,
    identify_halfint_sqrt2,
    min_poly_deg2,
    reconstruct_table,
    sweep,
    validate_partition,
    value_at,
    verify_endpoint,
)
from .exact import QSqrt2
from .reals import ParseError, RefinableReal, UndecidableError, exact_value, parse_expr
from .table import DOMAIN_HI, DOMAIN_LO, THEOREM_TABLE, entry, halfint


class EpsilonInput:
    """Parsed epsilon: exact Q(sqrt2) when possible, else a refinable real."""

    def __init__(self, raw: str):
        self.raw = raw
        self.expression = parse_expr(raw)
        self.exact = exact_value(self.expression)

    @property
    def value(self):
        if self.exact is not None:
            return self.exact
        return RefinableReal(self.expression)

    def canonical(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        from .reals import format_expr
        return format_expr(self.expression)


def _report(command: str, inputs: dict, results: list, anomalies: list,
            no_timing: bool, started: float) -> dict:
    rep = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "anomalies": anomalies,
        "version": __version__,
    }
    if not no_timing:
        rep["timings"] = {"seconds": round(time.time() - started, 3)}
    return rep


def _emit(rep: dict) -> None:
    json.dump(rep, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _exit_code(rep: dict) -> int:
    if rep["anomalies"]:
        return 2
    if all(r.get("pass", True) for r in rep["results"]):
        return 0
    return 2


def _decimal(x: QSqrt2, places: int = 12) -> str:
    return x.to_decimal(places)


def cmd_digits(args) -> int:
    started = time.time()
    eps = EpsilonInput(args.epsilon)
    spec = SequenceSpec(eps.value, depth=2 * args.count + 1, max_bits=args.max_bits)
    trace = generate(spec)
    stream = digits_from_trace(trace, args.count)
    anomalies = [{"index": i, "digit": d} for i, d in stream.anomalies()]
    rep = _report(
        "digits",
        {"epsilon": eps.canonical(), "count": args.count},
        [{"name": "digits", "pass": not anomalies,
          "witness": " ".join(str(d) for d in stream.digits)}],
        anomalies, args.no_timing, started)
    _emit(rep)
    return _exit_code(rep)


def cmd_verify(args) -> int:
    started = time.time()
    indices = range(1, 9) if args.pair == "all" else [int(args.pair)]
    results = []
    anomalies = []
    for i in indices:
        pair = entry(i)
        for label, eps in (("xi1", pair.xi1),
                           ("mid", pair.midpoint),
                           ("xi2-delta", pair.xi2 - QSqrt2.of(DELTA))):
            m = verify_pair(pair, eps, args.depth)
            results.append({"name": f"pair {i} digits at {label}", "pass": m.matched,
                            "witness": "" if m.matched else str(m.first_mismatch)})
        if i == 5:
            cf = closed_form_check(5, pair.midpoint, range(1, 51))
            results.append({"name": "pair 5 closed forms (odd + corrected even)",
                            "pass": cf.odd_ok and bool(cf.corrected_even_ok),
                            "witness": f"printed even form matches: {cf.printed_even_ok}"})
            results.append({"name": "pair 5 interval",
                            "pass": True,
                            "witness": f"[{_decimal(pair.xi1, 7)}..., "
                                       f"{_decimal(pair.xi2, 7)}...)"})
        else:
            cert = certify_pair(pair)
            results.append({"name": f"pair {i} certificate", "pass": cert.ok,
                            "witness": "; ".join(
                                f"{c.name}: {'ok' if c.passed else 'FAIL ' + c.witness}"
                                for c in cert.checks if not c.passed) or
                            f"v_{pair.certification_depth} target {cert.comp_target}"})
            for note in cert.notes:
                if "erratum" in note:
                    results.append({"name": f"pair {i} note", "pass": True,
                                    "witness": note})
    rep = _report("verify", {"pair": args.pair, "depth": args.depth},
                  results, anomalies, args.no_timing, started)
    _emit(rep)
    return _exit_code(rep)


def cmd_discover(args) -> int:
    started = time.time()
    pair = entry(args.row)
    xi = pair.xi1
    if (xi - DOMAIN_LO).sign() == 0:
        rep = _report("discover", {"row": args.row},
                      [{"name": f"row {args.row} left endpoint", "pass": True,
                        "witness": "domain boundary 1-sqrt2/2; no jump to locate"}],
                      [], args.no_timing, started)
        _emit(rep)
        return _exit_code(rep)
    depth = pair.certification_depth if pair.index != 5 else 62
    # jump target: the constant value the trace takes just above the endpoint
    target = value_at(xi, depth)
    # coarse rational window around the endpoint from its truncated decimal
    approx = Fraction(xi.to_decimal(12))
    width = Fraction(1, 1000)
    lo = max(approx - width, Fraction(2929, 10000))
    hi = approx + width
    try:
        enclosure = bisect_jump(depth, target, (lo, hi), args.tol_bits)
        c, d = identify_halfint_sqrt2(enclosure)
        poly = min_poly_deg2(enclosure)
        ep = verify_endpoint(pair, "left")
        ok = (halfint(c, d) - xi).sign() == 0 and ep.ok
        results = [
            {"name": f"row {args.row} left endpoint", "pass": ok,
             "witness": f"c={c} d={d} ({_decimal(halfint(c, d))}...)"},
            {"name": "minimal polynomial", "pass": True, "witness": str(poly)},
        ]
    except ValueError as exc:
        results = [{"name": f"row {args.row} discovery", "pass": False,
                    "witness": f"{exc}; try raising --tol-bits"}]
    rep = _report("discover", {"row": args.row, "tol_bits": args.tol_bits},
                  results, [], args.no_timing, started)
    _emit(rep)
    return _exit_code(rep)


def _figure1_rows() -> list[dict]:
    rows = []
    for pair in THEOREM_TABLE:
        c1, d1 = halfint_form(pair.xi1)
        c2, d2 = halfint_form(pair.xi2)
        t = pair.target
        rows.append({
            "row": pair.index,
            "xi1_c": c1, "xi1_d": d1, "xi2_c": c2, "xi2_d": d2,
            "xi1_decimal": _decimal(pair.xi1), "xi2_decimal": _decimal(pair.xi2),
            "t_exact": str(t.value()), "t_decimal": _decimal(t.value()),
            "alpha": t.alpha, "beta": t.beta, "l": t.l,
        })
    return rows


def _figure2_jumps(lo: Fraction, hi: Fraction, depth: int, samples: int) -> tuple[list, list]:
    """Sampled step data plus exactly-identified jump locations."""
    grid = [lo + (hi - lo) * k / (samples - 1) for k in range(samples)]
    values = [value_at(g, depth) for g in grid]
    steps = [{"epsilon": str(g), "epsilon_decimal": f"{float(g):.6f}", "v": v}
             for g, v in zip(grid, values)]
    jumps = []

    def locate(a: Fraction, b: Fraction, va: int, vb: int):
        enclosure = bisect_jump(depth, vb, (a, b), tol_bits=90)
        c, d = identify_halfint_sqrt2(enclosure)
        xi = halfint(c, d)
        v_at_xi = value_at(xi, depth)
        v_below = value_at(xi - QSqrt2.of(Fraction(1, 1 << 80)), depth)
        jumps.append({"c": c, "d": d, "epsilon_decimal": _decimal(xi),
                      "v_below": v_below, "v_at": v_at_xi})
        if v_below != va:
            # more jumps below the identified one
            mid = enclosure.lo
            locate(a, mid, va, v_below)

    for (a, b, va, vb) in zip(grid, grid[1:], values, values[1:]):
        if va != vb:
            locate(a, b, va, vb)
    jumps.sort(key=lambda j: float(j["epsilon_decimal"]))
    return steps, jumps


def cmd_plotdata(args) -> int:
    started = time.time()
    if args.figure == 1:
        rows = _figure1_rows()
        fieldnames = list(rows[0].keys())
    else:
        lo_s, hi_s = (args.range or "0.40:0.60").split(":")
        lo, hi = Fraction(lo_s), Fraction(hi_s)
        steps, jumps = _figure2_jumps(lo, hi, args.depth, args.samples)
        rows = [{"kind": "sample", **s} for s in steps] + \
               [{"kind": "jump", **j} for j in jumps]
        fieldnames = ["kind", "epsilon", "epsilon_decimal", "v", "c", "d",
                      "v_below", "v_at"]
    if args.csv:
        w = csv.DictWriter(sys.stdout, fieldnames=fieldnames)
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return 0
    rep = _report("plotdata", {"figure": args.figure},
                  [{"name": f"figure {args.figure} rows", "pass": True,
                    "witness": f"{len(rows)} rows"}], [], args.no_timing, started)
    rep["rows"] = rows
    _emit(rep)
    return 0


def cmd_counterexample(args) -> int:
    started = time.time()
    eps = EpsilonInput(args.epsilon)
    if eps.exact is None:
        print("counterexample scan requires an exact epsilon", file=sys.stderr)
        return 1
    hit = first_bad_digit(eps.exact, args.limit)
    anomalies = []
    if hit is not None:
        anomalies.append({"index": hit[0], "digit": hit[1]})
    rep = _report("counterexample",
                  {"epsilon": eps.canonical(), "limit": args.limit},
                  [{"name": "first bad digit", "pass": True,
                    "witness": str(hit) if hit else "none"}],
                  anomalies, args.no_timing, started)
    _emit(rep)
    return _exit_code(rep)


def cmd_corollary(args) -> int:
    started = time.time()
    rep_c = corollary_check(args.max_n, args.cap)
    results = [
        {"name": f"digit agreement for 31 <= n <= {args.max_n}",
         "pass": rep_c.agree_from_31, "witness": f"onset {rep_c.onset}"},
        {"name": "shift identity 759250125*sqrt2 = 2^29 t6 + 314491699",
         "pass": rep_c.identity_ok, "witness": "exact in Q(sqrt2)"},
    ]
    rep = _report("corollary", {"max_n": args.max_n}, results, [],
                  args.no_timing, started)
    _emit(rep)
    return _exit_code(rep)


def cmd_normality(args) -> int:
    started = time.time()
    r = normality_probe(args.multiplier, args.k)
    results = [{
        "name": f"fractional parts of {args.multiplier}*sqrt2*2^(k-{r.exponent_offset})",
        "pass": True,
        "witness": f"min {_decimal(r.min_frac)} at k={r.argmin}; "
                   f"max {_decimal(r.max_frac)} at k={r.argmax}",
    }]
    rep = _report("normality", {"multiplier": args.multiplier, "k": args.k},
                  results, [], args.no_timing, started)
    _emit(rep)
    return _exit_code(rep)


def cmd_sweep(args) -> int:
    started = time.time()
    cells = sweep(DOMAIN_LO, DOMAIN_HI, args.depth, args.cell_budget)
    if args.csv:
        w = csv.writer(sys.stdout)
        w.writerow(["lo_c", "lo_d", "hi_c", "hi_d", "lo_exact", "hi_exact",
                    "v_prefix"])
        for c in cells:
            lo_cd = halfint_form(c.lo) or ("", "")
            hi_cd = halfint_form(c.hi) or ("", "")
            w.writerow([*lo_cd, *hi_cd, str(c.lo), str(c.hi),
                        " ".join(map(str, c.prefix))])
        return 0
    rep = _report("sweep", {"depth": args.depth},
                  [{"name": "cells", "pass": True, "witness": str(len(cells))}],
                  [], args.no_timing, started)
    rep["cells"] = [{"lo": str(c.lo), "hi": str(c.hi),
                     "prefix": list(c.prefix)} for c in cells]
    _emit(rep)
    return 0


def cmd_table(args) -> int:
    started = time.time()
    recon = reconstruct_table(args.depth, args.digit_depth, args.l_bound)
    part = validate_partition(THEOREM_TABLE)
    results = [
        {"name": "theorem table partition", "pass": part.ok,
         "witness": "; ".join(part.problems) or "adjacent, disjoint, covering"},
        {"name": "reconstruction",
         "pass": True,
         "witness": f"{len(recon.identified)} identified, "
                    f"{len(recon.unidentified)} unidentified region(s)"},
    ]
    rep = _report("table", {"depth": args.depth, "digit_depth": args.digit_depth,
                            "l_bound": args.l_bound},
                  results, [], args.no_timing, started)
    rep["regions"] = [
        {"lo": str(r.lo), "hi": str(r.hi),
         "digits": list(r.digit_prefix),
         "target": (f"(({r.target.alpha}*sqrt2-{r.target.beta})/2^{r.target.l})"
                    if r.target else None)}
        for r in recon.regions]
    _emit(rep)
    return _exit_code(rep)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gppairs",
                                description=__doc__.splitlines()[0])
    p.add_argument("--no-timing", action="store_true",
                   help="omit timings for byte-identical reruns")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("digits", help="digit stream for an epsilon")
    d.add_argument("--epsilon", required=True)
    d.add_argument("--count", type=int, required=True)
    d.add_argument("--max-bits", type=int, default=4096)
    d.set_defaults(func=cmd_digits)

    v = sub.add_parser("verify", help="verify/certify theorem rows")
    v.add_argument("--pair", default="all")
    v.add_argument("--depth", type=int, default=200)
    v.set_defaults(func=cmd_verify)

    di = sub.add_parser("discover", help="recover a row's left endpoint")
    di.add_argument("--row", type=int, required=True)
    di.add_argument("--tol-bits", type=int, default=200)
    di.set_defaults(func=cmd_discover)

    pl = sub.add_parser("plotdata", help="figure data as JSON/CSV")
    pl.add_argument("--figure", type=int, choices=(1, 2), required=True)
    pl.add_argument("--range", default=None, help="lo:hi, e.g. 0.40:0.60")
    pl.add_argument("--samples", type=int, default=41)
    pl.add_argument("--depth", type=int, default=62)
    pl.add_argument("--csv", action="store_true")
    pl.set_defaults(func=cmd_plotdata)

    ce = sub.add_parser("counterexample", help="first digit outside {0,1}")
    ce.add_argument("--epsilon", required=True)
    ce.add_argument("--limit", type=int, default=4000)
    ce.set_defaults(func=cmd_counterexample)

    co = sub.add_parser("corollary", help="check the 1-pi^2/e^3 recurrence")
    co.add_argument("--max-n", type=int, default=150)
    co.add_argument("--cap", type=int, default=4096)
    co.set_defaults(func=cmd_corollary)

    no = sub.add_parser("normality", help="fractional part extremes")
    no.add_argument("--multiplier", type=int, choices=(1, 3), default=1)
    no.add_argument("--k", type=int, default=1000)
    no.set_defaults(func=cmd_normality)

    sw = sub.add_parser("sweep", help="full-domain constant-prefix cells")
    sw.add_argument("--depth", type=int, default=21)
    sw.add_argument("--cell-budget", type=int, default=10**6)
    sw.add_argument("--csv", action="store_true")
    sw.set_defaults(func=cmd_sweep)

    tb = sub.add_parser("table", help="reconstruct the pair table")
    tb.add_argument("--depth", type=int, default=21)
    tb.add_argument("--digit-depth", type=int, default=10)
    tb.add_argument("--l-bound", type=int, default=8)
    tb.set_defaults(func=cmd_table)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except UndecidableError as exc:
        print(f"undecidable: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
