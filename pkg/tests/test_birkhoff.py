"""Partial sums, discrepancy, cotangent sums, Lagrange forms, identities."""

import math
from fractions import Fraction

import mpmath
import pytest

from sudler import (
    S_nt,
    S_nt_split,
    birkhoff_S,
    cot2_sum,
    cot_profile,
    cot_sum,
    frac_sum_convergent,
    identity_suite,
    lagrange_k_sin_sum,
    lagrange_sin_sum,
    sudler_P,
    sum_series,
)
from sudler.birkhoff import PARTIAL_SUM_K, direct_k_sin_sum, direct_sin_sum, discrepancy_scan

mpmath.mp.dps = 60
MP_OMEGA = (mpmath.sqrt(5) - 1) / 2


class TestPartialSums:
    def test_empty_sum(self, ctx):
        assert S_nt(9, 0, 0.0, ctx) == 0.0

    def test_increments_match_definition(self, ctx):
        from sudler import frac_r_omega

        n = 9
        series = sum_series(n, 30, 0.0, ctx)
        pw = ctx.omega_pow_float(n)
        for t in range(1, 31):
            term = math.sin(math.pi * pw * (frac_r_omega(t, ctx).to_float() - 0.5))
            prev = series.values[t - 2] if t > 1 else 0.0
            assert abs(series.values[t - 1] - prev - term) < 1e-15

    def test_direct_vs_split(self, ctx):
        memo = {}
        for n in (6, 10):
            fn = ctx.fibs.fib(n)
            for t in range(1, fn):
                direct = S_nt(n, t, 0.0, ctx)
                split = S_nt_split(n, t, ctx, memo)
                assert abs(direct - split) < 1e-12

    def test_check_split_flag(self, ctx):
        S_nt(10, 100, 0.0, ctx, check_split=True)
        with pytest.raises(ValueError):
            S_nt(10, 100, 0.25, ctx, check_split=True)

    def test_growth_bound(self, ctx):
        for n in (12, 16):
            fn = ctx.fibs.fib(n)
            pw = ctx.omega_pow_float(n)
            series = sum_series(n, fn - 1, 0.0, ctx)
            for t, v in enumerate(series.values, start=1):
                assert abs(v) < PARTIAL_SUM_K * pw * (math.log(t) + 1.0)

    def test_theta_dependence_against_mpmath(self, ctx):
        n, t, theta = 8, 40, 0.3125
        want = mpmath.mpf(0)
        for r in range(1, t + 1):
            x = theta + r * MP_OMEGA
            want += mpmath.sin(mpmath.pi * MP_OMEGA**n * (x - mpmath.floor(x) - mpmath.mpf(1) / 2))
        assert abs(S_nt(n, t, theta, ctx) - float(want)) < 1e-14


class TestDiscrepancy:
    def test_exact_rational_example(self):
        # alpha = 1/2, q = 2, theta = 0: ({1/2}-1/2) + ({1}-1/2) = -1/2
        assert frac_sum_convergent(2, Fraction(1, 2), 0) == -0.5

    def test_golden_small(self, ctx):
        val = frac_sum_convergent(144, ctx.omega_float, 0.0)
        assert abs(val) < 1.5

    def test_golden_random_thetas(self, ctx):
        for i, q in enumerate((13, 144, 987)):
            hi, lo = discrepancy_scan(q, 200, seed=i, ctx=ctx)
            assert -1.5 < lo <= hi < 1.5

    def test_exact_vs_fraction_path(self, ctx):
        # the scan's dyadic rotation matches frac_sum_convergent term by term
        w62 = (ctx.omega.mantissa + (1 << (ctx.P - 63))) >> (ctx.P - 62)
        alpha = Fraction(w62, 1 << 62)
        got = frac_sum_convergent(55, alpha, Fraction(1, 8))
        brute = math.fsum(
            float((Fraction(1, 8) + i * alpha) % 1) - 0.5 for i in range(1, 56)
        )
        assert abs(got - brute) < 1e-12


class TestCotSums:
    def test_single_term_level(self, ctx):
        want = float(mpmath.cot(mpmath.pi * MP_OMEGA))
        assert abs(cot_sum(2, ctx).value - want) < 1e-14

    def test_term_by_term_oracle(self, ctx):
        for n in (4, 6):
            fn = ctx.fibs.fib(n)
            want = mpmath.mpf(0)
            want2 = mpmath.mpf(0)
            for r in range(1, fn + 1):
                x = r * MP_OMEGA
                c = mpmath.cot(mpmath.pi * (x - mpmath.floor(x)))
                want += c
                want2 += c * c
            assert abs(cot_sum(n, ctx).value - float(want)) < 1e-12
            if n >= 4:
                assert abs(cot2_sum(n, ctx) - float(want2)) < 1e-11

    def test_normalized_windows(self, ctx):
        for n in range(2, 20):
            assert -0.71 < cot_sum(n, ctx).normalized < 0.71

    def test_cot2_terms_positive_structure(self, ctx):
        assert cot2_sum(5, ctx) > 0

    def test_cot_profile_consistency(self, ctx):
        n = 8
        rows = list(cot_profile(n, ctx))
        sign = (-1.0) ** n
        assert rows[0][0] == 1
        assert abs(rows[0][1] - sign * float(mpmath.cot(mpmath.pi * MP_OMEGA))) < 1e-13
        # final partial = full sum minus the r = F_n term
        full = cot_sum(n, ctx).value
        from sudler import frac_r_omega

        last_term_angle = frac_r_omega(ctx.fibs.fib(n), ctx).to_float()
        last_term = math.cos(math.pi * last_term_angle) / math.sin(math.pi * last_term_angle)
        assert abs(rows[-1][1] - sign * (full - last_term)) < 1e-10


def test_birkhoff_sum_is_twice_log(ctx):
    assert birkhoff_S(100, ctx) == 2.0 * sudler_P(100, ctx).log_value
    want = float(2 * mpmath.log(2 * mpmath.sin(mpmath.pi * MP_OMEGA)))
    assert abs(birkhoff_S(1, ctx) - want) < 1e-15


class TestLagrange:
    def test_hand_values(self):
        # theta=0, x=pi/2, n=2: sin(pi/2) + sin(pi) = 1
        assert abs(lagrange_sin_sum(0.0, math.pi / 2, 2) - 1.0) < 1e-15
        # k-weighted: theta=0, x=pi, n=1: 1*sin(pi) = 0
        assert abs(lagrange_k_sin_sum(0.0, math.pi, 1)) < 1e-15

    def test_singular_angle_rejected(self):
        with pytest.raises(ValueError):
            lagrange_sin_sum(0.1, 0.0, 5)
        with pytest.raises(ValueError):
            lagrange_k_sin_sum(0.1, 0.0, 5)

    def test_random_against_direct(self):
        import random

        rng = random.Random(7)
        for _ in range(100):
            n = rng.randint(1, 50)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            x = rng.uniform(0.2, 2.0)
            assert abs(lagrange_sin_sum(theta, x, n) - direct_sin_sum(theta, x, n)) < 1e-12
            assert abs(lagrange_k_sin_sum(theta, x, n) - direct_k_sin_sum(theta, x, n)) < 1e-12


class TestIdentitySuite:
    def test_integer_point_products(self):
        import numpy as np

        # n = 5: prod 2 sin(pi r/5) = 5 and prod 2 sin(2 pi r/5) = +5
        r = np.arange(1, 5)
        assert abs(float(np.prod(2 * np.sin(np.pi * r / 5))) - 5.0) < 1e-12
        assert abs(float(np.prod(2 * np.sin(2 * np.pi * r / 5))) - 5.0) < 1e-12
        # n = 4: prod_{r != 2} 2 sin(2 pi r/4) = -4
        rs = np.array([1, 3])
        assert abs(float(np.prod(2 * np.sin(2 * np.pi * rs / 4))) - (-4.0)) < 1e-12

    def test_suite_tolerance(self):
        checks = identity_suite(120, seed=11, phis_per_n=6)
        assert {c.name for c in checks} == {
            "sin-sum-closed-form",
            "weighted-sin-sum-closed-form",
            "sine-shift-product",
            "cot-shift-sum",
            "cos-shift-product-odd",
            "cos-shift-product-even",
            "sine-double-shift-product-odd",
            "sine-double-shift-product-even",
            "sine-roots-product",
            "sine-double-roots-odd",
            "sine-double-roots-even",
        }
        assert max(c.max_rel_dev for c in checks) < 1e-11

    def test_deterministic_for_seed(self):
        a = identity_suite(40, seed=5)
        b = identity_suite(40, seed=5)
        assert a == b
