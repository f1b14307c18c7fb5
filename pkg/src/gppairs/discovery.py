"""Endpoint-hunting machinery: exact piecewise-constant epsilon sweep,
bisection on trace values, algebraic identification of jump points,
degree-2 minimal polynomials, and partition validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .engine import SequenceSpec, digits_of_target, exact_step, generate
from .exact import QSqrt2, floor_q, isqrt
from .reals import RealInterval
from .table import DOMAIN_HI, DOMAIN_LO, AlgebraicTarget, GPPairEntry


class SweepBudgetError(RuntimeError):
    def __init__(self, depth_reached: int, cells: int, budget: int):
        super().__init__(
            f"cell budget {budget} exceeded at depth {depth_reached} ({cells} cells)")
        self.depth_reached = depth_reached


class IdentificationError(ValueError):
    pass


@dataclass(frozen=True)
class SweepCell:
    """Maximal half-open interval [lo, hi) on which v_1..v_N is constant."""

    lo: QSqrt2
    hi: QSqrt2
    prefix: tuple[int, ...]

    @property
    def midpoint(self) -> QSqrt2:
        return (self.lo + self.hi) / 2


def halfint_form(x: QSqrt2) -> tuple[int, int] | None:
    """(c, d) with x = (c/2)*sqrt2 - d, or None if x is not of that form."""
    c = x.b * 2
    d = -x.a
    if c.denominator == 1 and d.denominator == 1:
        return int(c), int(d)
    return None


def sweep(lo: QSqrt2, hi: QSqrt2, depth: int, cell_budget: int = 10**6) -> list[SweepCell]:
    """Exact partition of [lo, hi) into maximal constant-prefix cells.

    Breakpoints arise only at odd steps, at eps = (m/2)*sqrt2 - v for the
    integers m interior to the image interval; even steps add no epsilon
    dependence.  A breakpoint belongs to its upper cell (half-open cells,
    floor jumps are right-continuous here).
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    if not (lo - hi).sign() < 0:
        raise ValueError("empty sweep domain")
    cells: list[tuple[QSqrt2, QSqrt2, list[int]]] = [(lo, hi, [1])]
    for n in range(1, depth):
        if n % 2 == 0:
            half = QSqrt2(Fraction(1, 2), Fraction(0))
            for cell in cells:
                cell[2].append(exact_step(cell[2][-1], n, half))
            continue
        new: list[tuple[QSqrt2, QSqrt2, list[int]]] = []
        for (clo, chi, prefix) in cells:
            v = prefix[-1]
            cur_lo = clo
            # value at eps = clo: floor(sqrt2*(v+clo)) = floor(2*b + (v+a)*sqrt2)
            cur_m = floor_q(QSqrt2(2 * clo.b, v + clo.a))
            while True:
                split = QSqrt2(Fraction(-v), Fraction(cur_m + 1, 2))
                if not (split - chi).sign() < 0:
                    break
                new.append((cur_lo, split, prefix + [cur_m]))
                cur_lo = split
                cur_m += 1
                if len(new) > cell_budget:
                    raise SweepBudgetError(n + 1, len(new), cell_budget)
            new.append((cur_lo, chi, prefix + [cur_m]))
        cells = new
        if len(cells) > cell_budget:
            raise SweepBudgetError(n + 1, len(cells), cell_budget)
    return [SweepCell(c[0], c[1], tuple(c[2])) for c in cells]


def value_at(epsilon, index: int) -> int:
    """v_index(epsilon) by direct exact generation."""
    eps = epsilon if isinstance(epsilon, QSqrt2) else QSqrt2.of(Fraction(epsilon))
    return generate(SequenceSpec(eps, depth=index)).values[index - 1]


def bisect_jump(target_index: int, target_value: int,
                window: tuple[Fraction, Fraction], tol_bits: int) -> RealInterval:
    """Enclosure of inf{eps : v_n(eps) >= target_value} by interval halving.

    Every probe is an exact trace evaluation at a rational midpoint.
    """
    lo, hi = Fraction(window[0]), Fraction(window[1])
    if not (value_at(lo, target_index) < target_value <= value_at(hi, target_index)):
        raise ValueError(
            f"window does not bracket the jump: v({lo})={value_at(lo, target_index)}, "
            f"v({hi})={value_at(hi, target_index)}, target {target_value}")
    tol = Fraction(1, 1 << tol_bits)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if value_at(mid, target_index) >= target_value:
            hi = mid
        else:
            lo = mid
    return RealInterval(lo, hi, tol_bits)


# --- integer lattice reduction (exact, small dimension) ---------------------

def lll_reduce(basis: list[list[int]]) -> list[list[int]]:
    """Exact LLL (delta = 3/4) over the integers; small fixed dimensions."""
    b = [list(row) for row in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        star: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            vi = [Fraction(x) for x in b[i]]
            for j in range(i):
                denom = dot(star[j], star[j])
                mu[i][j] = Fraction(dot(b[i], star[j])) / denom
                vi = [x - mu[i][j] * y for x, y in zip(vi, star[j])]
            star.append(vi)
        return star, mu

    k = 1
    while k < n:
        star, mu = gram_schmidt()
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
        star, mu = gram_schmidt()
        if dot(star[k], star[k]) >= (Fraction(3, 4) - mu[k][k - 1] ** 2) * dot(star[k - 1], star[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            k = max(k - 1, 1)
    return b


def _width_bits(iv: RealInterval) -> int:
    w = iv.width
    if w == 0:
        return 400
    return max(8, w.denominator.bit_length() - w.numerator.bit_length())


def _sqrt2_half_gap(bound: int, threshold: Fraction) -> bool:
    """True if some nonzero |q*(sqrt2/2) - p| with |q| <= 2*bound is below
    threshold (i.e. a second identification candidate could fit)."""
    # best approximations of sqrt2/2 come from Pell-style convergents
    p0, q0 = 0, 1
    p1, q1 = 1, 1
    while q1 <= 2 * bound:
        err = QSqrt2(Fraction(-p1), Fraction(q1, 2))
        if err.sign() < 0:
            err = -err
        if (err - QSqrt2.of(threshold)).sign() < 0:
            return True
        p0, q0, p1, q1 = p1, q1, 2 * p1 + p0, 2 * q1 + q0
    return False


def identify_halfint_sqrt2(x: RealInterval, bound: int = 1 << 34) -> tuple[int, int]:
    """The unique (c, d) with (c/2)*sqrt2 - d inside the interval.

    Uses an exact integer-relation search on (sqrt2/2, 1, x); the candidate
    is verified by exact interval membership and uniqueness by the best
    approximation gap of sqrt2/2.
    """
    mid = x.mid
    wb = _width_bits(x)
    for sb in (wb - 4, wb - 12, wb + 8, wb // 2 + 16):
        if sb < 16:
            continue
        s = 1 << sb
        t_scaled = isqrt(2 * s * s) // 2
        x_scaled = mid.numerator * s // mid.denominator
        rows = lll_reduce([[1, 0, 0, t_scaled], [0, 1, 0, s], [0, 0, 1, x_scaled]])
        for row in sorted(rows, key=lambda r: sum(v * v for v in r)):
            if abs(row[2]) != 1:
                continue
            if row[2] == -1:
                c, d = row[0], -row[1]
            else:
                c, d = -row[0], row[1]
            if abs(c) > bound or abs(d) > bound:
                continue
            cand = QSqrt2(Fraction(-d), Fraction(c, 2))
            if x.contains(cand):
                if _sqrt2_half_gap(bound, x.width):
                    raise IdentificationError(
                        "interval admits multiple (c,d) candidates; tighten it")
                return c, d
    raise IdentificationError(
        "no (c/2)*sqrt2 - d candidate found in the interval; tighten it")


@dataclass(frozen=True)
class QuadPoly:
    """Content-free integer quadratic a2 x^2 + a1 x + a0 with a2 > 0."""

    a2: int
    a1: int
    a0: int

    def eval_q(self, x: QSqrt2) -> QSqrt2:
        return x * x * self.a2 + x * self.a1 + QSqrt2.of(self.a0)

    def __str__(self):
        return f"{self.a2}*x^2 + {self.a1}*x + {self.a0}"


def min_poly_deg2(x: RealInterval, coeff_bound: int = 1 << 34) -> QuadPoly:
    """Integer quadratic annihilating the enclosed value, by integer-relation
    search on (x^2, x, 1); exact root membership is verified when the root
    lies in Q(sqrt2)."""
    mid = x.mid
    wb = _width_bits(x)
    for sb in (wb - 4, wb - 12, wb // 2 + 16):
        if sb < 16:
            continue
        s = 1 << sb
        x1 = mid.numerator * s // mid.denominator
        m2 = mid * mid
        x2 = m2.numerator * s // m2.denominator
        rows = lll_reduce([[1, 0, 0, x2], [0, 1, 0, x1], [0, 0, 1, s]])
        for row in sorted(rows, key=lambda r: sum(v * v for v in r)):
            a2, a1, a0 = row[0], row[1], row[2]
            if (a2, a1, a0) == (0, 0, 0):
                continue
            if max(abs(a2), abs(a1), abs(a0)) > coeff_bound:
                continue
            if a2 < 0 or (a2 == 0 and a1 < 0):
                a2, a1, a0 = -a2, -a1, -a0
            g = gcd(gcd(abs(a2), abs(a1)), abs(a0))
            a2, a1, a0 = a2 // g, a1 // g, a0 // g
            # residual must be explained by the interval width
            pm = a2 * mid * mid + a1 * mid + a0
            slope = abs(2 * a2 * mid + a1) + abs(a2)
            if abs(pm) <= slope * x.width * 4 + Fraction(1, 1 << (sb - 8)):
                poly = QuadPoly(a2, a1, a0)
                _verify_quad_root(poly, x)
                return poly
    raise IdentificationError("no degree-2 polynomial matches the enclosure")


def _verify_quad_root(poly: QuadPoly, x: RealInterval) -> None:
    """If the root is in Q(sqrt2), require it to lie in the interval and be
    an exact root."""
    if poly.a2 == 0:
        return
    disc = poly.a1 * poly.a1 - 4 * poly.a2 * poly.a0
    if disc < 0 or disc % 2 != 0:
        return
    s = isqrt(disc // 2)
    if 2 * s * s != disc:
        return
    for sgn in (1, -1):
        root = QSqrt2(Fraction(-poly.a1, 2 * poly.a2), Fraction(sgn * s, 2 * poly.a2))
        if x.contains(root):
            if poly.eval_q(root) != QSqrt2.of(0):
                raise IdentificationError(
                    f"{poly} does not annihilate its Q(sqrt2) root {root}")
            return
    raise IdentificationError(f"{poly} has no root inside the enclosure")


@dataclass(frozen=True)
class EndpointReport:
    pair_index: int
    side: str
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)


def verify_endpoint(pair: GPPairEntry, side: str,
                    delta: Fraction = Fraction(1, 1 << 60)) -> EndpointReport:
    """Exact confirmation that an endpoint is a sharp (comp) breakpoint,
    plus a local sweep showing exactly one breakpoint at the endpoint."""
    from .engine import _comp_value

    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    xi = pair.xi1 if side == "left" else pair.xi2
    checks: list[tuple[str, bool, str]] = []

    if pair.index != 5:
        target = _comp_value(pair.target)
        depth = pair.certification_depth
        inner = xi if side == "left" else xi - QSqrt2.of(delta)
        outer = xi - QSqrt2.of(delta) if side == "left" else xi
        v_inner = value_at(inner, depth)
        v_outer = value_at(outer, depth)
        checks.append(("(comp) holds inside", v_inner == target,
                       f"v_{depth}={v_inner} target={target}"))
        at_boundary = (side == "left" and not (xi - DOMAIN_LO).sign() > 0) or \
                      (side == "right" and not (xi - DOMAIN_HI).sign() < 0)
        if not at_boundary:
            checks.append(("(comp) fails outside", v_outer != target,
                           f"v_{depth}={v_outer}"))
    else:
        checks.append(("interval bounds ordered", (pair.xi1 - pair.xi2).sign() < 0,
                       "direct case: no (comp) check"))

    # local sweep around xi: exactly one breakpoint, located at xi
    depth = pair.certification_depth if pair.index != 5 else 62
    lo = xi - QSqrt2.of(delta)
    hi = xi + QSqrt2.of(delta)
    boundary_clipped = False
    if (lo - DOMAIN_LO).sign() < 0:
        lo, boundary_clipped = DOMAIN_LO, True
    if (hi - DOMAIN_HI).sign() > 0:
        hi, boundary_clipped = DOMAIN_HI, True
    if boundary_clipped and not (lo - hi).sign() < 0:
        checks.append(("local sweep", True, "window degenerate at domain boundary"))
    else:
        cells = sweep(lo, hi, depth)
        breakpoints = [c.lo for c in cells[1:]]
        one = len(breakpoints) <= 1
        at_xi = all((bp - xi).sign() == 0 for bp in breakpoints)
        checks.append(("single local breakpoint at xi", one and at_xi,
                       f"{len(breakpoints)} breakpoint(s)"))
    return EndpointReport(pair.index, side, tuple(checks))


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    problems: tuple[str, ...]


def validate_partition(entries) -> PartitionReport:
    """Adjacent, disjoint, and covering [1-sqrt2/2, sqrt2/2), exactly."""
    problems = []
    es = list(entries)
    es.sort(key=_sort_key_xi1())
    if (es[0].xi1 - DOMAIN_LO).sign() != 0:
        problems.append(f"first interval starts at {es[0].xi1}, not 1-sqrt2/2")
    if (es[-1].xi2 - DOMAIN_HI).sign() != 0:
        problems.append(f"last interval ends at {es[-1].xi2}, not sqrt2/2")
    for a, b in zip(es, es[1:]):
        cmp = (a.xi2 - b.xi1).sign()
        if cmp < 0:
            problems.append(f"gap between rows {a.index} and {b.index} at {a.xi2}")
        elif cmp > 0:
            problems.append(f"overlap between rows {a.index} and {b.index} at {b.xi1}")
    for e in es:
        if not (e.xi1 - e.xi2).sign() < 0:
            problems.append(f"row {e.index} has xi1 >= xi2")
    return PartitionReport(not problems, tuple(problems))


def _sort_key_xi1():
    import functools

    def cmp(a, b):
        return (a.xi1 - b.xi1).sign()

    return functools.cmp_to_key(cmp)


@dataclass(frozen=True)
class Region:
    lo: QSqrt2
    hi: QSqrt2
    digit_prefix: tuple[int, ...]
    target: AlgebraicTarget | None  # None: unidentified


@dataclass(frozen=True)
class ReconstructionReport:
    regions: tuple[Region, ...]

    @property
    def identified(self) -> tuple[Region, ...]:
        return tuple(r for r in self.regions if r.target is not None)

    @property
    def unidentified(self) -> tuple[Region, ...]:
        return tuple(r for r in self.regions if r.target is None)


def _candidate_targets(l_bound: int) -> list[AlgebraicTarget]:
    """All structured targets with l <= l_bound plus the bare sqrt2."""
    out = [AlgebraicTarget(1, 0, 0)]  # t = sqrt2, the direct case
    for l in range(0, l_bound + 1):
        two_l1 = 1 << (l + 1)
        for alpha in range(1, 2 * two_l1, 2):
            beta = two_l1 - alpha
            t = AlgebraicTarget(alpha, beta, l)
            v = t.value()
            if v.sign() >= 0 and (v - 2).sign() < 0:
                out.append(t)
    return out


def reconstruct_table(depth: int, digit_depth: int, l_bound: int,
                      cell_budget: int = 10**6) -> ReconstructionReport:
    """Sweep the domain, group cells by digit prefix, and identify each
    region's target among structured candidates; unmatched regions are
    reported as unidentified."""
    if depth < 2 * digit_depth + 1:
        raise ValueError("depth must be >= 2*digit_depth + 1")
    cells = sweep(DOMAIN_LO, DOMAIN_HI, depth, cell_budget)

    def prefix_digits(cell: SweepCell) -> tuple[int, ...]:
        p = cell.prefix
        return tuple(p[2 * n] - 2 * p[2 * n - 2] for n in range(1, digit_depth + 1))

    regions: list[tuple[QSqrt2, QSqrt2, tuple[int, ...]]] = []
    for cell in cells:
        dp = prefix_digits(cell)
        if regions and regions[-1][2] == dp:
            regions[-1] = (regions[-1][0], cell.hi, dp)
        else:
            regions.append((cell.lo, cell.hi, dp))

    candidates = _candidate_targets(l_bound)
    cand_digits = [(t, digits_of_target(t, digit_depth).digits) for t in candidates]
    out = []
    for (lo, hi, dp) in regions:
        match = next((t for t, dd in cand_digits if dd == dp), None)
        out.append(Region(lo, hi, dp, match))
    return ReconstructionReport(tuple(out))
