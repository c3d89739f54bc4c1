"""Sudler products, the renormalisation subsequence, and the decomposition."""

import math

import mpmath
import pytest

from sudler import (
    A_n,
    B_n,
    B_star,
    C_infinity_trunc,
    C_n,
    PrecisionExhausted,
    Q_n,
    decompose,
    make_ctx,
    profile,
    ratio_PFn_minus1,
    sudler_P,
    sudler_P_rational,
)
from sudler.products import u_t

mpmath.mp.dps = 60
MP_OMEGA = (mpmath.sqrt(5) - 1) / 2


def test_empty_product(ctx):
    res = sudler_P(0, ctx)
    assert res.value == 1.0
    assert res.log_value == 0.0
    assert res.err == 0.0


def test_single_term_against_mpmath(ctx):
    want = float(2 * mpmath.sin(mpmath.pi * MP_OMEGA))
    got = sudler_P(1, ctx)
    assert abs(got.value - want) < 1e-15
    assert got.err < 1e-14


def test_small_products_against_mpmath(ctx):
    for k in (2, 3, 5, 21, 100):
        want = mpmath.mpf(1)
        for r in range(1, k + 1):
            want *= abs(2 * mpmath.sin(mpmath.pi * r * MP_OMEGA))
        got = sudler_P(k, ctx)
        assert abs(got.log_value - float(mpmath.log(want))) < max(1e-14, got.err)


def test_err_budget_enforced():
    ctx64 = make_ctx(64)
    with pytest.raises(PrecisionExhausted):
        sudler_P(200_000, ctx64)


class TestRational:
    def test_recovers_denominator(self):
        assert abs(sudler_P_rational(1, 5, 4) - 5.0) < 5e-12

    def test_zero_at_and_beyond_q(self):
        assert sudler_P_rational(1, 5, 5) == 0.0
        assert sudler_P_rational(1, 5, 50) == 0.0

    def test_half(self):
        assert abs(sudler_P_rational(1, 2, 1) - 2.0) < 1e-15

    def test_nontrivial_numerator(self):
        assert abs(sudler_P_rational(3, 7, 6) - 7.0) < 1e-13

    def test_rejects_non_reduced(self):
        with pytest.raises(ValueError):
            sudler_P_rational(2, 4, 3)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            sudler_P_rational(5, 3, 2)

    def test_partial_against_mpmath(self):
        want = mpmath.mpf(1)
        for r in range(1, 8):
            want *= abs(2 * mpmath.sin(mpmath.pi * r * 3 / mpmath.mpf(11)))
        assert abs(sudler_P_rational(3, 11, 7) - float(want)) < 1e-13


class TestDecomposition:
    def test_level_one_exact(self, ctx):
        d = decompose(1, ctx)
        assert d.B == 1.0 and d.C == 1.0
        assert d.A == d.Q
        assert d.residual == 0.0

    def test_level_two_collapses_to_level_one(self, ctx):
        # F_2 = F_1 = 1 and sin(pi omega^2) = sin(pi omega)
        assert abs(Q_n(2, ctx).value - Q_n(1, ctx).value) < 1e-15

    def test_q1_is_single_term(self, ctx):
        assert Q_n(1, ctx).value == sudler_P(1, ctx).value

    def test_mid_level_residual(self, ctx):
        d = decompose(15, ctx)
        assert abs(d.rel_residual) < 1e-10

    def test_a_factor_near_limit(self, ctx):
        assert abs(A_n(25, ctx) - 2 * math.pi / math.sqrt(5)) < 1e-6

    def test_a_factor_direct(self, ctx):
        want = float(2 * mpmath.sin(mpmath.pi * MP_OMEGA))
        assert abs(A_n(1, ctx) - want) < 1e-15

    def test_b_empty_levels(self, ctx):
        assert B_n(1, ctx) == 1.0
        assert B_n(2, ctx) == 1.0
        assert B_star(1, ctx) == 1.0

    def test_b_against_direct_ratio(self, ctx):
        """B_n recomputed from raw s_nt / (2 sin pi t/F_n) ratios."""
        from sudler import s_nt

        for n in (5, 9):
            fn = ctx.fibs.fib(n)
            log_sum = math.fsum(
                math.log(s_nt(n, t, ctx) / (2.0 * math.sin(math.pi * t / fn)))
                for t in range(1, fn)
            )
            assert abs(math.log(B_n(n, ctx)) - log_sum) < 1e-12

    def test_c_empty_levels(self, ctx):
        assert C_n(1, ctx) == 1.0
        assert C_n(2, ctx) == 1.0

    def test_c_in_unit_interval(self, ctx):
        for n in range(3, 16):
            assert 0.0 < C_n(n, ctx) < 1.0

    def test_c_is_sqrt_of_full_product(self, ctx):
        """C_n^2 must equal the full-period product over t = 1..F_n - 1."""
        from sudler import s_nt

        for n in (4, 7, 10):
            fn = ctx.fibs.fib(n)
            s0 = s_nt(n, 0, ctx)
            full = math.fsum(
                math.log(1.0 - (s0 / s_nt(n, t, ctx)) ** 2) for t in range(1, fn)
            )
            assert abs(2.0 * math.log(C_n(n, ctx)) - full) < 1e-11


class TestCLimit:
    def test_u_sequence(self, ctx):
        want = float(2 * mpmath.sqrt(5) - 2 * (MP_OMEGA - mpmath.mpf(1) / 2))
        assert abs(u_t(1, ctx) - want) < 1e-14

    def test_first_factor_bound(self, ctx):
        assert 1.0 / u_t(1, ctx) ** 2 < 0.056

    def test_partials_monotone_and_bounded(self, ctx):
        prev = 1.0
        value = 1.0
        for t in range(1, 2001):
            value *= 1.0 - 1.0 / u_t(t, ctx) ** 2
            assert 0.862 < value < 1.0
            assert value < prev
            prev = value
        assert abs(C_infinity_trunc(2000, ctx) - value) < 1e-13

    def test_c_n_converges_to_limit(self, ctx):
        assert abs(C_n(20, ctx) - C_infinity_trunc(10**5, ctx)) < 1e-2


class TestRatioPFnMinus1:
    def test_base_case(self, ctx):
        assert ratio_PFn_minus1(2, ctx) == 1.0  # P_0 / F_2

    def test_identity_with_decomposition(self, ctx):
        for n in (5, 10, 15):
            lhs = ratio_PFn_minus1(n, ctx) * A_n(n, ctx)
            assert abs(lhs - Q_n(n, ctx).value) < 1e-9

    def test_limit_form(self, ctx):
        """The empirical limit matches c sqrt(5) / (2 pi), not c/(2 pi sqrt 5)."""
        c = Q_n(20, ctx).value
        r = ratio_PFn_minus1(20, ctx)
        assert abs(r - c * math.sqrt(5) / (2 * math.pi)) < 1e-3
        assert abs(r - c / (2 * math.pi * math.sqrt(5))) > 0.5


class TestProfile:
    def test_matches_direct_products_bitwise(self, ctx):
        series = dict((k, lp) for k, _p, lp in profile(10, 1, ctx))
        for k in (1, 2, 34, 55):
            assert series[k] == sudler_P(k, ctx).log_value

    def test_stride_selects_expected_indices(self, ctx):
        ks = [k for k, _p, _lp in profile(7, 5, ctx)]
        assert ks == [1, 6, 11]

    def test_workers_do_not_change_values(self, ctx):
        one = list(profile(12, 7, ctx, workers=1))
        four = list(profile(12, 7, ctx, workers=4))
        assert one == four

    def test_windowed_peaks_sit_before_fibonacci_indices(self, ctx):
        """Within each window (F_{n-1}, F_n] the largest P_k is at F_n - 1."""
        values = {k: p for k, p, _lp in profile(13, 1, ctx)}
        for n in range(7, 14):
            lo, hi = ctx.fibs.fib(n - 1), ctx.fibs.fib(n)
            argmax = max(range(lo + 1, hi + 1), key=values.__getitem__)
            assert argmax == hi - 1
