"""Sequence generation, digit extraction, pair verification/certification,
counterexample scanning, normality probes, and the corollary check.

The step rule throughout: v_{n+1} = floor(sqrt2*(v_n + eps)) for odd n,
floor(sqrt2*(v_n + 1/2)) for even n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import QSqrt2, floor_q, floor_scaled_sqrt2, frac_q
from .reals import RefinableReal, UndecidableError, certified_floor
from .table import DOMAIN_HI, DOMAIN_LO, AlgebraicTarget, GPPairEntry

HALF = Fraction(1, 2)
SQRT2 = QSqrt2.sqrt2()
DELTA = Fraction(1, 1 << 60)  # endpoint-sharpness margin


def _as_eps(eps) -> QSqrt2 | RefinableReal:
    if isinstance(eps, (int, Fraction)):
        return QSqrt2(Fraction(eps), Fraction(0))
    return eps


@dataclass(frozen=True)
class SequenceSpec:
    """Recurrence configuration: offset eps on odd steps, 1/2 on even ones."""

    epsilon: QSqrt2 | RefinableReal
    depth: int
    initial: int = 1
    max_bits: int = 4096

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _as_eps(self.epsilon))
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.initial < 1:
            raise ValueError("initial must be >= 1")


@dataclass(frozen=True)
class SequenceTrace:
    values: tuple[int, ...]
    spec: SequenceSpec

    def v(self, n: int) -> int:
        """1-based access: v(1) is the initial value."""
        return self.values[n - 1]


def exact_step(v: int, n: int, eps: QSqrt2) -> int:
    """One recurrence step with exact epsilon."""
    off_a, off_b = (eps.a, eps.b) if n % 2 == 1 else (HALF, Fraction(0))
    # sqrt2*(v + a + b*sqrt2) = 2b + (v + a)*sqrt2
    return floor_q(QSqrt2(2 * off_b, v + off_a))


def generate(spec: SequenceSpec) -> SequenceTrace:
    """Exact trace v_1..v_depth; interval epsilons get certified floors."""
    eps = spec.epsilon
    values = [spec.initial]
    if isinstance(eps, QSqrt2):
        for n in range(1, spec.depth):
            values.append(exact_step(values[-1], n, eps))
    else:
        half = QSqrt2(HALF, Fraction(0))
        for n in range(1, spec.depth):
            v = values[-1]
            start = max(64, v.bit_length() + 32)
            try:
                if n % 2 == 1:
                    values.append(certified_floor(
                        eps, addend=v, max_bits=spec.max_bits, start_bits=start))
                else:
                    values.append(certified_floor(
                        None, exact_offset=half, addend=v,
                        max_bits=spec.max_bits, start_bits=start))
            except UndecidableError as exc:
                raise UndecidableError(exc.max_bits, exc.lo, exc.hi) from None
    return SequenceTrace(tuple(values), spec)


@dataclass(frozen=True)
class DigitStream:
    digits: tuple[int, ...]
    source: str

    def anomalies(self) -> list[tuple[int, int]]:
        """(index, digit) pairs with digit outside {0, 1}; 1-based index."""
        return [(i + 1, d) for i, d in enumerate(self.digits) if d not in (0, 1)]


def digits_from_trace(trace: SequenceTrace, count: int | None = None) -> DigitStream:
    """d_n = v_{2n+1} - 2 v_{2n-1}; no range check (values -1 and 2 are
    meaningful counterexample outputs)."""
    avail = (len(trace.values) - 1) // 2
    if count is None:
        count = avail
    if count > avail:
        raise ValueError(f"trace depth {len(trace.values)} supports only "
                         f"{avail} digits, requested {count}")
    v = trace.values
    return DigitStream(
        tuple(v[2 * n] - 2 * v[2 * n - 2] for n in range(1, count + 1)),
        source="trace",
    )


def digits_of_target(t: AlgebraicTarget | QSqrt2, count: int) -> DigitStream:
    """Binary digits d_n = floor(t 2^{n-1}) - 2 floor(t 2^{n-2}) of t in [0,2)."""
    x = t.value() if isinstance(t, AlgebraicTarget) else t
    if x.sign() < 0 or (x - 2).sign() >= 0:
        raise ValueError(f"target {x} outside [0, 2)")
    out = []
    prev = floor_q(QSqrt2(x.a / 2, x.b / 2))
    scale = 1
    for _ in range(count):
        cur = floor_q(QSqrt2(x.a * scale, x.b * scale))
        out.append(cur - 2 * prev)
        prev = cur
        scale *= 2
    return DigitStream(tuple(out), source="target")


@dataclass(frozen=True)
class MatchReport:
    pair_index: int
    depth: int
    matched: bool
    eps_in_interval: bool | None
    first_mismatch: tuple[int, int, int] | None  # (n, target digit, trace digit)


def verify_pair(pair: GPPairEntry, epsilon, depth: int) -> MatchReport:
    """Compare trace digits against the target's digits for n = 1..depth."""
    eps = _as_eps(epsilon)
    in_interval = None
    if isinstance(eps, QSqrt2):
        in_interval = (eps - pair.xi1).sign() >= 0 and (eps - pair.xi2).sign() < 0
    trace = generate(SequenceSpec(eps, depth=2 * depth + 1))
    got = digits_from_trace(trace, depth).digits
    want = digits_of_target(pair.target, depth).digits
    for n, (w, g) in enumerate(zip(want, got), start=1):
        if w != g:
            return MatchReport(pair.index, depth, False, in_interval, (n, w, g))
    return MatchReport(pair.index, depth, True, in_interval, None)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class Certificate:
    pair_index: int
    checks: tuple[CheckResult, ...]
    comp_target: int | None = None
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def _comp_value(target: AlgebraicTarget) -> int:
    """floor(alpha*sqrt2) + 2*alpha, the required v_{2(l+2)} value."""
    return floor_scaled_sqrt2(target.alpha, 0) + 2 * target.alpha


def _odd_form_value(t: QSqrt2, k: int) -> int:
    # floor(t*2^{k-1}) + 2^k, exact for any k >= 0
    s = Fraction(1 << (k - 1)) if k >= 1 else Fraction(1, 2)
    return floor_q(QSqrt2(t.a * s, t.b * s)) + (1 << k)


def certify_pair(pair: GPPairEntry, delta: Fraction = DELTA) -> Certificate:
    """Finite exact checks that, with the two universal lemmas, establish the
    pair for all n.  Rows other than 5 only; row 5 uses closed_form_check."""
    if pair.index == 5:
        raise ValueError("row 5 is the direct case; use closed_form_check")
    t = pair.target
    checks: list[CheckResult] = []
    notes: list[str] = []

    ok = t.structure_ok()
    checks.append(CheckResult(
        "structure alpha odd, alpha+beta=2^(l+1)", ok,
        f"alpha={t.alpha} beta={t.beta} l={t.l}"))
    if not ok:
        return Certificate(pair.index, tuple(checks))

    in_dom = (pair.xi1 - DOMAIN_LO).sign() >= 0 and (pair.xi2 - DOMAIN_HI).sign() <= 0 \
        and (pair.xi1 - pair.xi2).sign() < 0
    checks.append(CheckResult("interval within [1-sqrt2/2, sqrt2/2)", in_dom,
                              f"[{pair.xi1}, {pair.xi2})"))

    comp_target = _comp_value(t)
    depth = pair.certification_depth

    def v_comp(eps: QSqrt2) -> int:
        return generate(SequenceSpec(eps, depth=depth)).values[depth - 1]

    at_lo = pair.xi1
    at_hi = pair.xi2 - QSqrt2.of(delta)
    checks.append(CheckResult("(comp) holds at xi1", v_comp(at_lo) == comp_target,
                              f"v_{depth}(xi1)={v_comp(at_lo)} target={comp_target}"))
    checks.append(CheckResult("(comp) holds at xi2-delta",
                              v_comp(at_hi) == comp_target,
                              f"v_{depth}(xi2-delta)={v_comp(at_hi)}"))

    if (pair.xi1 - DOMAIN_LO).sign() > 0:
        below = pair.xi1 - QSqrt2.of(delta)
        checks.append(CheckResult("(comp) fails at xi1-delta",
                                  v_comp(below) != comp_target,
                                  f"v_{depth}(xi1-delta)={v_comp(below)}"))
    else:
        notes.append("left endpoint is the domain boundary 1-sqrt2/2; "
                     "sharpness there comes from the (conditio) constraint")
    if (pair.xi2 - DOMAIN_HI).sign() < 0:
        checks.append(CheckResult("(comp) fails at xi2",
                                  v_comp(pair.xi2) != comp_target,
                                  f"v_{depth}(xi2)={v_comp(pair.xi2)}"))
    else:
        notes.append("right endpoint is the domain boundary sqrt2/2; "
                     "sharpness there comes from the (conditio) constraint")

    # initial odd-form cases: v_{2k+1} = floor(t*2^{k-1}) + 2^k for 0<=k<=l+1
    tv = t.value()
    for eps, label in ((at_lo, "xi1"), (at_hi, "xi2-delta")):
        tr = generate(SequenceSpec(eps, depth=2 * (t.l + 1) + 2))
        bad = [k for k in range(0, t.l + 2)
               if tr.v(2 * k + 1) != _odd_form_value(tv, k)]
        checks.append(CheckResult(f"(odd) for 0<=k<=l+1 at {label}", not bad,
                                  f"failing k={bad}" if bad else "all k"))

    # odd-indexed prefix identical across the interval
    tr1 = generate(SequenceSpec(at_lo, depth=2 * (t.l + 1) + 2))
    tr2 = generate(SequenceSpec(at_hi, depth=2 * (t.l + 1) + 2))
    stable = all(tr1.v(2 * k + 1) == tr2.v(2 * k + 1) for k in range(0, t.l + 2))
    checks.append(CheckResult("odd prefix stable on [xi1, xi2)", stable))

    if pair.index == 6 and comp_target != 2749487923:
        notes.append(
            f"computed floor(alpha*sqrt2)+2*alpha = {comp_target}; the "
            "literature prints 2749487923 - recorded as a suspected erratum")

    return Certificate(pair.index, tuple(checks), comp_target, tuple(notes))


@dataclass(frozen=True)
class ClosedFormReport:
    pair_index: int
    even_ok: bool
    odd_ok: bool
    even_mismatches: tuple[tuple[int, int, int], ...]  # (k, expected, actual)
    odd_mismatches: tuple[tuple[int, int, int], ...]
    printed_even_ok: bool | None = None  # row 5 only
    corrected_even_ok: bool | None = None


def closed_form_check(index: int, epsilon, k_range) -> ClosedFormReport:
    """Check the even/odd closed forms against a generated trace.

    Row 5 evaluates both the printed even form floor(t*2^{k-2})+2^{k-2} and
    the shift-corrected floor(t*2^{k-1})+2^{k-1}, reporting each.
    """
    from .table import entry
    pair = entry(index)
    t = pair.target
    tv = t.value()
    ks = sorted(k_range)
    if index != 5 and ks and ks[0] < t.l + 2:
        raise ValueError(f"row {index} closed forms need k >= {t.l + 2}")
    depth = 2 * ks[-1] + 2
    tr = generate(SequenceSpec(_as_eps(epsilon), depth=depth))

    def fl(scale: Fraction) -> int:
        return floor_q(QSqrt2(tv.a * scale, tv.b * scale))

    odd_bad = []
    for k in ks:
        want = fl(Fraction(1 << (k - 1)) if k >= 1 else Fraction(1, 2)) + (1 << k)
        if tr.v(2 * k + 1) != want:
            odd_bad.append((k, want, tr.v(2 * k + 1)))

    if index != 5:
        even_bad = []
        for k in ks:
            want = fl(Fraction(1 << (k - 2)) if k >= 2 else Fraction(1, 1 << (2 - k)))
            want += t.gamma * (1 << (k - t.l - 2)) if k >= t.l + 2 else 0
            if tr.v(2 * k) != want:
                even_bad.append((k, want, tr.v(2 * k)))
        return ClosedFormReport(index, not even_bad, not odd_bad,
                                tuple(even_bad), tuple(odd_bad))

    printed_bad = []
    corrected_bad = []
    for k in ks:
        if k >= 2:
            printed = fl(Fraction(1 << (k - 2))) + (1 << (k - 2))
            if tr.v(2 * k) != printed:
                printed_bad.append((k, printed, tr.v(2 * k)))
        else:
            # addend 2^{k-2} is non-integral at k=1: the printed form cannot hold
            printed_bad.append((k, -1, tr.v(2 * k)))
        corrected = fl(Fraction(1 << (k - 1)) if k >= 1 else Fraction(1, 2)) + (1 << (k - 1))
        if tr.v(2 * k) != corrected:
            corrected_bad.append((k, corrected, tr.v(2 * k)))
    return ClosedFormReport(index, not corrected_bad, not odd_bad,
                            tuple(corrected_bad), tuple(odd_bad),
                            printed_even_ok=not printed_bad,
                            corrected_even_ok=not corrected_bad)


@dataclass(frozen=True)
class LemmaReport:
    samples: int
    violations: tuple[str, ...]
    branch_checks_ok: bool
    conditio_ok: bool

    @property
    def ok(self) -> bool:
        return not self.violations and self.branch_checks_ok and self.conditio_ok


def _in_unit(x: QSqrt2) -> bool:
    return x.sign() >= 0 and (x - 1).sign() < 0


def lemma_checks(sample_count: int, seed: int = 0) -> LemmaReport:
    """Exact checks of 0 <= {x} - sqrt2 {x/2} + sqrt2/2 < 1 and of the
    (conditio) bound, on random samples plus symbolic branch endpoints."""
    rng = random.Random(seed)
    half_s2 = QSqrt2(Fraction(0), HALF)
    violations = []
    for i in range(sample_count):
        if i % 2 == 0:
            x = QSqrt2(Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**3)),
                       Fraction(0))
        else:
            x = QSqrt2(Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 100)),
                       Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 100)))
        g = frac_q(x) - SQRT2 * frac_q(x / 2) + half_s2
        if not _in_unit(g):
            violations.append(f"x={x}: value {g}")

    # branch endpoints for f = {x/2} in {0, 1/2-eta, 1/2, 1-eta}; {x} = 2f or
    # 2f-1 by the two-branch case analysis
    eta = Fraction(1, 1 << 64)
    branch_ok = True
    for f in (Fraction(0), HALF - eta, HALF, 1 - eta):
        fx = 2 * f if f < HALF else 2 * f - 1
        g = QSqrt2.of(fx) - SQRT2 * QSqrt2.of(f) + half_s2
        if not _in_unit(g):
            branch_ok = False

    # (conditio): 0 <= (1-sqrt2) f + sqrt2 eps < 1 at extreme f and eps
    cond_ok = True
    one_minus_s2 = QSqrt2.of(1) - SQRT2
    for f in (QSqrt2.of(Fraction(0)), QSqrt2.of(1 - eta)):
        for eps in (DOMAIN_LO, DOMAIN_HI - QSqrt2.of(eta)):
            g = one_minus_s2 * f + SQRT2 * eps
            if not _in_unit(g):
                cond_ok = False

    return LemmaReport(sample_count, tuple(violations), branch_ok, cond_ok)


def first_bad_digit(epsilon, limit: int) -> tuple[int, int] | None:
    """First n <= limit with d_n outside {0,1}, streaming the trace."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    eps = _as_eps(epsilon)
    if not isinstance(eps, QSqrt2):
        raise TypeError("first_bad_digit requires an exact epsilon")
    v = 1
    prev_odd = 1
    n = 1
    while True:
        v = exact_step(v, n, eps)
        n += 1
        if n % 2 == 1:
            m = (n - 1) // 2
            d = v - 2 * prev_odd
            if d not in (0, 1):
                return (m, d)
            if m >= limit:
                return None
            prev_odd = v


ALPHA6 = 759250125
BETA6 = 314491699


@dataclass(frozen=True)
class CorollaryReport:
    depth: int
    agree_from_31: bool
    disagreements_below_31: tuple[int, ...]
    onset: int
    identity_ok: bool

    @property
    def ok(self) -> bool:
        return self.agree_from_31 and self.identity_ok and self.onset <= 31


def multiple_sqrt2_digit(alpha: int, k: int, int_bits: int) -> int:
    """MSB-first binary digit k of alpha*sqrt2, whose integer part has
    int_bits bits."""
    def fl(j: int) -> int:
        return floor_scaled_sqrt2(alpha, j)
    j = k - int_bits
    return fl(j) - 2 * fl(j - 1)


def corollary_check(depth: int = 150, cap: int = 4096) -> CorollaryReport:
    """w-trace with eps = 1 - pi^2/e^3 versus the binary digits of
    759250125*sqrt2 (31 integer bits; digit n+1 compared against d_n)."""
    if depth < 32:
        raise ValueError("depth must be >= 32")
    eps = RefinableReal("1-pi^2/e^3")
    trace = generate(SequenceSpec(eps, depth=2 * depth + 1, max_bits=cap))
    stream = digits_from_trace(trace, depth).digits

    # integer part of alpha6*sqrt2 lies just above 2^30: 31 bits
    t_floor = floor_scaled_sqrt2(ALPHA6, 0)
    int_bits = t_floor.bit_length()
    bad = [n for n in range(1, depth + 1)
           if stream[n - 1] != multiple_sqrt2_digit(ALPHA6, n + 1, int_bits)]
    onset = (max(bad) + 1) if bad else 1

    # exact identity in Q(sqrt2): 2^29 t6 + beta6 = alpha6*sqrt2
    t6 = AlgebraicTarget(ALPHA6, BETA6, 29).value()
    identity_ok = (t6 * (1 << 29) + QSqrt2.of(BETA6)) == QSqrt2(Fraction(0), Fraction(ALPHA6))

    return CorollaryReport(
        depth,
        agree_from_31=all(n < 31 for n in bad),
        disagreements_below_31=tuple(n for n in bad if n < 31),
        onset=onset,
        identity_ok=identity_ok,
    )


@dataclass(frozen=True)
class NormalityReport:
    multiplier: int
    exponent_offset: int
    depth: int
    min_frac: QSqrt2
    max_frac: QSqrt2
    argmin: int
    argmax: int


def normality_probe(multiplier: int, depth: int) -> NormalityReport:
    """Extremes of {multiplier*sqrt2*2^(k-offset)} for k = 1..depth, exact.

    Empirical probe only; no normality claim is made.
    """
    if multiplier not in (1, 3):
        raise ValueError("multiplier must be 1 or 3")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    offset = 1 if multiplier == 1 else 2
    best_min = best_max = None
    argmin = argmax = 0
    for k in range(1, depth + 1):
        e = k - offset
        coeff = Fraction(multiplier * (1 << e)) if e >= 0 else Fraction(multiplier, 1 << -e)
        f = frac_q(QSqrt2(Fraction(0), coeff))
        if best_min is None or (f - best_min).sign() < 0:
            best_min, argmin = f, k
        if best_max is None or (f - best_max).sign() > 0:
            best_max, argmax = f, k
    return NormalityReport(multiplier, offset, depth, best_min, best_max,
                           argmin, argmax)
