"""Sweeping, bisection, algebraic identification, partition validation."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gppairs.discovery import (
    IdentificationError,
    QuadPoly,
    SweepBudgetError,
    bisect_jump,
    halfint_form,
    identify_halfint_sqrt2,
    lll_reduce,
    min_poly_deg2,
    reconstruct_table,
    sweep,
    validate_partition,
    value_at,
    verify_endpoint,
)
from gppairs.engine import SequenceSpec, generate
from gppairs.exact import QSqrt2
from gppairs.reals import RealInterval
from gppairs.table import DOMAIN_HI, DOMAIN_LO, THEOREM_TABLE, GPPairEntry, entry, halfint


def _enclose(x: QSqrt2, bits: int) -> RealInterval:
    """Exact dyadic enclosure of a Q(sqrt2) value, width 2^-bits."""
    from gppairs.exact import floor_q
    s = 1 << bits
    n = floor_q(x * s)
    return RealInterval(Fraction(n, s), Fraction(n + 1, s), bits)


class TestSweep:
    def test_depth2_splits_at_sqrt2_minus_1(self):
        cells = sweep(DOMAIN_LO, DOMAIN_HI, 2)
        assert len(cells) == 2
        assert halfint_form(cells[1].lo) == (2, 1)
        assert cells[0].prefix == (1, 1)
        assert cells[1].prefix == (1, 2)

    def test_depth3_even_step_adds_no_cells(self):
        assert len(sweep(DOMAIN_LO, DOMAIN_HI, 3)) == 2

    def test_full_sweep_depth62_gives_theorem_boundaries(self):
        cells = sweep(DOMAIN_LO, DOMAIN_HI, 62)
        assert len(cells) == 8
        for cell, pair in zip(cells, THEOREM_TABLE):
            assert (cell.lo - pair.xi1).sign() == 0
            assert (cell.hi - pair.xi2).sign() == 0

    def test_cells_tile_and_are_maximal(self):
        cells = sweep(DOMAIN_LO, DOMAIN_HI, 21)
        assert (cells[0].lo - DOMAIN_LO).sign() == 0
        assert (cells[-1].hi - DOMAIN_HI).sign() == 0
        for a, b in zip(cells, cells[1:]):
            assert (a.hi - b.lo).sign() == 0
            assert a.prefix != b.prefix  # maximality

    def test_prefix_matches_direct_generation(self):
        tiny = QSqrt2.of(Fraction(1, 1 << 80))
        for cell in sweep(DOMAIN_LO, DOMAIN_HI, 21):
            n = len(cell.prefix)
            for eps in (cell.lo, cell.midpoint, cell.hi - tiny):
                tr = generate(SequenceSpec(eps, depth=n))
                assert tr.values == cell.prefix

    def test_budget_error(self):
        with pytest.raises(SweepBudgetError):
            sweep(DOMAIN_LO, DOMAIN_HI, 62, cell_budget=3)

    def test_empty_domain_rejected(self):
        with pytest.raises(ValueError):
            sweep(DOMAIN_HI, DOMAIN_LO, 5)


class TestBisect:
    def test_sqrt2_minus_1_jump(self):
        enc = bisect_jump(2, 2, (Fraction(3, 10), Fraction(5, 10)), 80)
        assert enc.contains(QSqrt2.of(-1, 1))
        assert enc.width <= Fraction(1, 1 << 80)

    def test_bracket_error(self):
        with pytest.raises(ValueError):
            bisect_jump(2, 2, (Fraction(45, 100), Fraction(5, 10)), 40)

    def test_agrees_with_sweep_breakpoint(self):
        cells = sweep(DOMAIN_LO, DOMAIN_HI, 21)
        bp = cells[3].lo  # an interior breakpoint
        target = cells[3].prefix[-1]
        enc = bisect_jump(21, target,
                          (Fraction(44, 100), Fraction(46, 100)), 100)
        assert enc.contains(bp)


class TestIdentify:
    @pytest.mark.parametrize("c, d", [(2, 1), (1, 0), (309, 218),
                                      (1296121037, 916495974)])
    def test_known_endpoints(self, c, d):
        enc = _enclose(halfint(c, d), 140)
        assert identify_halfint_sqrt2(enc) == (c, d)

    def test_random_roundtrip(self):
        rng = random.Random(42)
        for _ in range(100):
            c = rng.randrange(1, 1 << 32)
            d = rng.randrange(0, 1 << 32)
            enc = _enclose(halfint(c, d), 160)
            assert identify_halfint_sqrt2(enc) == (c, d)

    def test_wide_interval_rejected(self):
        wide = RealInterval(Fraction(0), Fraction(1), 0)
        with pytest.raises(IdentificationError):
            identify_halfint_sqrt2(wide)


class TestMinPoly:
    def test_half_sqrt2(self):
        enc = _enclose(halfint(1, 0), 120)
        assert min_poly_deg2(enc) == QuadPoly(2, 0, -1)

    def test_sqrt2_minus_1(self):
        enc = _enclose(halfint(2, 1), 120)
        assert min_poly_deg2(enc) == QuadPoly(1, 2, -1)

    def test_annihilates_identified_value(self):
        for c, d in [(19, 13), (77, 54), (1296121037, 916495974)]:
            enc = _enclose(halfint(c, d), 200)
            poly = min_poly_deg2(enc)
            assert poly.eval_q(halfint(c, d)) == QSqrt2.of(0)
            # canonical form 2x^2 + 4dx + (2d^2 - c^2), already content-free here
            assert (poly.a2, poly.a1, poly.a0) == (2, 4 * d, 2 * d * d - c * c)


class TestLLL:
    def test_reduction_preserves_lattice_and_shortens(self):
        basis = [[1, 0, 0, 10**12], [0, 1, 0, 10**12 + 7], [0, 0, 1, 3]]
        red = lll_reduce(basis)
        assert len(red) == 3
        norms = [sum(v * v for v in row) for row in red]
        assert min(norms) < 10**12  # found a genuinely short vector


class TestEndpoints:
    @pytest.mark.parametrize("index", [2, 6, 8])
    def test_left_endpoints(self, index):
        rep = verify_endpoint(entry(index), "left")
        assert rep.ok, rep.checks

    @pytest.mark.parametrize("index", [1, 4, 7])
    def test_right_endpoints(self, index):
        rep = verify_endpoint(entry(index), "right")
        assert rep.ok, rep.checks

    def test_row5_bounds_only(self):
        rep = verify_endpoint(entry(5), "left")
        assert rep.ok
        assert any("direct case" in w for _, _, w in rep.checks)

    def test_bad_side(self):
        with pytest.raises(ValueError):
            verify_endpoint(entry(2), "middle")


class TestPartition:
    def test_theorem_table_valid(self):
        rep = validate_partition(THEOREM_TABLE)
        assert rep.ok and rep.problems == ()

    def test_gap_detected(self):
        pruned = [p for p in THEOREM_TABLE if p.index != 3]
        rep = validate_partition(pruned)
        assert not rep.ok
        assert any("gap" in p for p in rep.problems)

    def test_overlap_detected(self):
        rows = list(THEOREM_TABLE)
        p4 = rows[3]
        rows[3] = GPPairEntry(4, p4.xi1, p4.xi2 + QSqrt2.of(Fraction(1, 1000)),
                              p4.target)
        rep = validate_partition(rows)
        assert not rep.ok
        assert any("overlap" in p for p in rep.problems)


class TestReconstruct:
    def test_shallow_reconstruction(self):
        rep = reconstruct_table(21, 10, l_bound=8)
        assert len(rep.regions) == 6
        assert not rep.unidentified
        found = {(r.target.alpha, r.target.beta, r.target.l)
                 for r in rep.identified}
        # rows 1-4 and 8 exactly; the merged central region matches sqrt2
        assert {(1, 1, 0), (11, 5, 3), (45, 19, 5), (181, 75, 7),
                (3, 1, 1), (1, 0, 0)} == found

    def test_coarse_self_consistency(self):
        from gppairs.engine import digits_of_target
        rep = reconstruct_table(9, 4, l_bound=4)
        for region in rep.identified:
            assert digits_of_target(region.target, 4).digits == region.digit_prefix

    def test_depth_precondition(self):
        with pytest.raises(ValueError):
            reconstruct_table(10, 10, l_bound=2)


class TestMonotonicity:
    @given(st.tuples(
        st.fractions(min_value=Fraction(2929, 10**4), max_value=Fraction(7070, 10**4),
                     max_denominator=10**5),
        st.fractions(min_value=Fraction(2929, 10**4), max_value=Fraction(7070, 10**4),
                     max_denominator=10**5)))
    @settings(max_examples=100, deadline=None)
    def test_v_n_nondecreasing_in_eps(self, pair):
        lo, hi = min(pair), max(pair)
        for n in (5, 12, 21):
            assert value_at(lo, n) <= value_at(hi, n)
