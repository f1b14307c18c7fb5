"""Recurrence traces, digit extraction, verification, certification."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gppairs.engine import (
    SequenceSpec,
    certify_pair,
    closed_form_check,
    digits_from_trace,
    digits_of_target,
    first_bad_digit,
    generate,
    lemma_checks,
    multiple_sqrt2_digit,
    normality_probe,
    verify_pair,
)
from gppairs.exact import QSqrt2, floor_scaled_sqrt2
from gppairs.reals import RefinableReal
from gppairs.table import THEOREM_TABLE, entry

eps_values = st.fractions(min_value=Fraction(2929, 10000),
                          max_value=Fraction(7071, 10000),
                          max_denominator=10**6)


class TestGenerate:
    def test_classic_half_trace(self):
        tr = generate(SequenceSpec(Fraction(1, 2), depth=7))
        assert tr.values == (1, 2, 3, 4, 6, 9, 13)

    def test_epsilon_only_enters_odd_steps(self):
        a = generate(SequenceSpec(Fraction(45, 100), depth=8))
        b = generate(SequenceSpec(Fraction(46, 100), depth=8))
        # traces agree here: the two epsilons sit in the same sweep cell
        assert a.values == b.values

    def test_interval_epsilon_matches_exact(self):
        exact = generate(SequenceSpec(Fraction(1, 3), depth=30)).values
        interval = generate(SequenceSpec(RefinableReal("1/3"), depth=30)).values
        assert exact == interval

    def test_rejects_bad_spec(self):
        with pytest.raises(ValueError):
            SequenceSpec(Fraction(1, 2), depth=0)

    @given(eps_values)
    @settings(max_examples=50, deadline=None)
    def test_growth_rate(self, eps):
        # v_{n+2} is close to 2 v_n: digits d_n = v_{2n+1} - 2 v_{2n-1} stay small
        tr = generate(SequenceSpec(eps, depth=41)).values
        for n in range(0, 37, 2):
            assert 2 * tr[n] - 2 <= tr[n + 2] <= 2 * tr[n] + 3


class TestDigits:
    def test_sqrt2_digits_from_half(self):
        tr = generate(SequenceSpec(Fraction(1, 2), depth=21))
        assert digits_from_trace(tr, 10).digits == (1, 0, 1, 1, 0, 1, 0, 1, 0, 0)

    def test_digit_count_limited_by_depth(self):
        tr = generate(SequenceSpec(Fraction(1, 2), depth=5))
        with pytest.raises(ValueError):
            digits_from_trace(tr, 3)

    def test_target_digits_sqrt2(self):
        d = digits_of_target(QSqrt2.sqrt2(), 10)
        assert d.digits == (1, 0, 1, 1, 0, 1, 0, 1, 0, 0)

    def test_target_digits_match_traces_on_table(self):
        for pair in THEOREM_TABLE:
            tr = generate(SequenceSpec(pair.midpoint, depth=41))
            assert digits_from_trace(tr, 20).digits == \
                digits_of_target(pair.target, 20).digits

    def test_target_domain_check(self):
        with pytest.raises(ValueError):
            digits_of_target(QSqrt2.of(2), 5)

    def test_anomaly_detection(self):
        tr = generate(SequenceSpec(Fraction(2928, 10000), depth=2 * 3067 + 1))
        stream = digits_from_trace(tr, 3067)
        assert stream.anomalies() == [(3067, -1)]


class TestVerifyPair:
    @pytest.mark.parametrize("index", range(1, 9))
    def test_midpoint_depth_50(self, index):
        pair = entry(index)
        rep = verify_pair(pair, pair.midpoint, 50)
        assert rep.matched and rep.eps_in_interval

    def test_outside_interval_mismatch(self):
        pair = entry(5)
        rep = verify_pair(pair, Fraction(2928, 10000), 60)
        assert not rep.matched
        assert rep.eps_in_interval is False
        assert rep.first_mismatch is not None

    def test_interval_epsilon(self):
        pair = entry(5)
        rep = verify_pair(pair, RefinableReal("1/2"), 40)
        assert rep.matched
        assert rep.eps_in_interval is None  # unknown for interval epsilons


class TestCertify:
    @pytest.mark.parametrize("index", [1, 2, 3, 4, 6, 7, 8])
    def test_rows_certify(self, index):
        cert = certify_pair(entry(index))
        assert cert.ok, [c for c in cert.checks if not c.passed]

    def test_row5_rejected(self):
        with pytest.raises(ValueError):
            certify_pair(entry(5))

    def test_row6_erratum_note(self):
        cert = certify_pair(entry(6))
        assert cert.comp_target == 2592242074
        assert any("2749487923" in n for n in cert.notes)

    def test_domain_boundary_notes(self):
        assert any("domain boundary" in n for n in certify_pair(entry(1)).notes)
        assert any("domain boundary" in n for n in certify_pair(entry(8)).notes)
        assert not certify_pair(entry(3)).notes

    def test_perturbed_row_fails(self):
        from gppairs.table import GPPairEntry
        pair = entry(3)
        shifted = GPPairEntry(3, pair.xi1 + QSqrt2.of(Fraction(1, 100)),
                              pair.xi2, pair.target)
        assert not certify_pair(shifted).ok


class TestClosedForms:
    @pytest.mark.parametrize("index", [2, 7])
    def test_even_and_odd_forms(self, index):
        pair = entry(index)
        rep = closed_form_check(index, pair.midpoint,
                                range(pair.target.l + 2, pair.target.l + 30))
        assert rep.even_ok and rep.odd_ok

    def test_row5_printed_even_form_fails_shift_corrected_holds(self):
        pair = entry(5)
        rep = closed_form_check(5, pair.midpoint, range(1, 51))
        assert rep.odd_ok
        assert rep.corrected_even_ok
        assert rep.printed_even_ok is False

    def test_small_k_rejected_for_structured_rows(self):
        with pytest.raises(ValueError):
            closed_form_check(2, entry(2).midpoint, range(1, 10))


class TestLemmas:
    def test_clean_run(self):
        rep = lemma_checks(2000, seed=7)
        assert rep.ok
        assert rep.violations == ()


class TestCounterexamples:
    def test_limit_none(self):
        assert first_bad_digit(Fraction(1, 2), 200) is None

    def test_requires_exact(self):
        with pytest.raises(TypeError):
            first_bad_digit(RefinableReal("pi/6"), 10)

    def test_bad_limit(self):
        with pytest.raises(ValueError):
            first_bad_digit(Fraction(1, 2), 0)


class TestNormality:
    def test_small_probe(self):
        rep = normality_probe(1, 64)
        assert 1 <= rep.argmin <= 64 and 1 <= rep.argmax <= 64
        assert rep.min_frac.sign() >= 0
        assert (rep.max_frac - 1).sign() < 0

    def test_multiplier_validation(self):
        with pytest.raises(ValueError):
            normality_probe(2, 10)


class TestMultipleSqrt2Digit:
    def test_msb_digits_of_alpha6(self):
        alpha = 759250125
        int_bits = floor_scaled_sqrt2(alpha, 0).bit_length()
        assert int_bits == 31
        digits = [multiple_sqrt2_digit(alpha, k, int_bits) for k in range(1, 32)]
        value = int("".join(map(str, digits)), 2)
        assert value == floor_scaled_sqrt2(alpha, 0)
