"""Exact Q(sqrt2) arithmetic: sign, floor, isqrt, parsing."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gppairs.exact import (
    QSqrt2,
    floor_q,
    floor_scaled_sqrt2,
    format_qsqrt2,
    frac_q,
    isqrt,
    parse_qsqrt2,
)

rationals = st.fractions(
    min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**4)
qsqrt2s = st.builds(QSqrt2, rationals, rationals)


class TestIsqrt:
    def test_small_values(self):
        assert [isqrt(n) for n in range(10)] == [0, 1, 1, 1, 2, 2, 2, 2, 2, 3]

    def test_negative_raises(self):
        with pytest.raises(ValueError):
            isqrt(-1)

    @given(st.integers(min_value=0, max_value=10**40))
    def test_bracketing(self, n):
        r = isqrt(n)
        assert r * r <= n < (r + 1) * (r + 1)

    def test_huge_perfect_square(self):
        n = (10**50 + 3) ** 2
        assert isqrt(n) == 10**50 + 3
        assert isqrt(n - 1) == 10**50 + 2


class TestSign:
    def test_zero(self):
        assert QSqrt2.of(0).sign() == 0

    def test_cancellation_near_zero(self):
        # convergents of sqrt2 straddle it: 1393^2 = 2*985^2 - 1 (below),
        # 3363^2 = 2*2378^2 + 1 (above); both differences are ~1e-7
        assert (QSqrt2.of(Fraction(1393, 985)) - QSqrt2.sqrt2()).sign() == -1
        assert (QSqrt2.of(Fraction(3363, 2378)) - QSqrt2.sqrt2()).sign() == 1

    @given(qsqrt2s)
    def test_sign_matches_float(self, x):
        approx = float(x.a) + float(x.b) * math.sqrt(2)
        if abs(approx) > 1e-6:
            assert x.sign() == (1 if approx > 0 else -1)

    @given(qsqrt2s)
    def test_sign_antisymmetry(self, x):
        assert (-x).sign() == -x.sign()


class TestFieldOps:
    @given(qsqrt2s, qsqrt2s)
    def test_add_sub_roundtrip(self, x, y):
        assert (x + y) - y == x

    @given(qsqrt2s, qsqrt2s)
    def test_mul_div_roundtrip(self, x, y):
        if y.sign() != 0:
            assert ((x * y) / y) == x

    @given(qsqrt2s)
    def test_sqrt2_squares_to_two(self, x):
        s2 = QSqrt2.sqrt2()
        assert s2 * s2 == QSqrt2.of(2)
        assert (x * s2) * s2 == x * 2

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            QSqrt2.of(1) / QSqrt2.of(0)

    def test_as_fraction(self):
        assert QSqrt2.of(Fraction(3, 4)).as_fraction() == Fraction(3, 4)
        with pytest.raises(ValueError):
            QSqrt2.sqrt2().as_fraction()


class TestFloor:
    def test_examples(self):
        assert floor_q(QSqrt2.sqrt2()) == 1
        assert floor_q(QSqrt2.of(0, 100)) == 141
        assert floor_q(QSqrt2.of(Fraction(-1, 2))) == -1
        assert floor_q(-QSqrt2.sqrt2()) == -2

    @given(qsqrt2s)
    def test_floor_bracketing(self, x):
        n = floor_q(x)
        assert (x - n).sign() >= 0
        assert (x - (n + 1)).sign() < 0

    @given(qsqrt2s, st.integers(min_value=-1000, max_value=1000))
    def test_floor_shift_invariance(self, x, k):
        assert floor_q(x + k) == floor_q(x) + k

    @given(qsqrt2s)
    def test_frac_in_unit_interval(self, x):
        f = frac_q(x)
        assert f.sign() >= 0
        assert (f - 1).sign() < 0

    @given(st.fractions(min_value=Fraction(0), max_value=Fraction(10**6),
                        max_denominator=10**4))
    def test_rational_floor_agrees(self, q):
        assert floor_q(QSqrt2.of(q)) == q.numerator // q.denominator


class TestFloorScaled:
    def test_binary_digits_of_sqrt2(self):
        # floor(sqrt2 * 2^m) successive bits: sqrt2 = (1.0110101000...)_2
        bits = [floor_scaled_sqrt2(1, m) - 2 * floor_scaled_sqrt2(1, m - 1)
                for m in range(1, 11)]
        assert bits == [0, 1, 1, 0, 1, 0, 1, 0, 0, 0]

    @given(st.integers(min_value=0, max_value=10**9),
           st.integers(min_value=-20, max_value=20))
    def test_agrees_with_floor_q(self, alpha, m):
        scale = Fraction(2) ** m
        assert floor_scaled_sqrt2(alpha, m) == floor_q(QSqrt2.of(0, alpha * scale))

    def test_negative_alpha_raises(self):
        with pytest.raises(ValueError):
            floor_scaled_sqrt2(-1, 0)


class TestFormatParse:
    @pytest.mark.parametrize("text, value", [
        ("0", QSqrt2.of(0)),
        ("sqrt2", QSqrt2.sqrt2()),
        ("-sqrt2", -QSqrt2.sqrt2()),
        ("1-1/2*sqrt2", QSqrt2.of(1, Fraction(-1, 2))),
        ("-218+309/2*sqrt2", QSqrt2.of(-218, Fraction(309, 2))),
        ("3/4", QSqrt2.of(Fraction(3, 4))),
    ])
    def test_parse_examples(self, text, value):
        assert parse_qsqrt2(text) == value

    @given(qsqrt2s)
    def test_roundtrip(self, x):
        assert parse_qsqrt2(format_qsqrt2(x)) == x

    @pytest.mark.parametrize("bad", ["", "sqrt3", "1+", "+ +"])
    def test_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            parse_qsqrt2(bad)


class TestDecimal:
    def test_sqrt2_digits(self):
        assert QSqrt2.sqrt2().to_decimal(12) == "1.414213562373"

    def test_truncation_of_negative(self):
        assert QSqrt2.of(Fraction(-1, 3)).to_decimal(4) == "-0.3334"
