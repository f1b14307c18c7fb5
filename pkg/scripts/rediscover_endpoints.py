#!/usr/bin/env python3
"""Recover every interior interval endpoint from scratch: full-domain sweep
at depth 62, then bisection + algebraic identification as a cross-check."""

from fractions import Fraction

from gppairs import DOMAIN_HI, DOMAIN_LO, THEOREM_TABLE, bisect_jump, identify_halfint_sqrt2, min_poly_deg2, sweep
from gppairs.discovery import halfint_form, value_at


def main() -> int:
    cells = sweep(DOMAIN_LO, DOMAIN_HI, depth=62)
    print(f"full-domain sweep at depth 62: {len(cells)} cells")
    expected = [halfint_form(p.xi1) for p in THEOREM_TABLE]
    ok = True
    for cell, want in zip(cells, expected):
        got = halfint_form(cell.lo)
        tag = "ok" if got == want else f"MISMATCH (expected {want})"
        print(f"  cell starts at (c,d)={got}  {tag}")
        ok &= got == want

    print("\nbisection + identification cross-check:")
    for pair in THEOREM_TABLE[1:]:
        xi = pair.xi1
        approx = Fraction(xi.to_decimal(12))
        target = value_at(xi, 62)
        enc = bisect_jump(62, target, (approx - Fraction(1, 1000),
                                       approx + Fraction(1, 1000)), tol_bits=200)
        c, d = identify_halfint_sqrt2(enc)
        poly = min_poly_deg2(enc)
        match = halfint_form(xi) == (c, d)
        print(f"  row {pair.index}: (c,d)=({c},{d}) minpoly {poly}  "
              f"{'ok' if match else 'MISMATCH'}")
        ok &= match
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
