"""Special-function layer: gamma, pochhammer, 2F1, Gauss summation, beta.

Frozen reference values were generated with mpmath at 40 significant
digits; property tests check the identities the rest of the library
leans on.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskpoisson.specfun import (
    ConvergenceError,
    beta_integral,
    gamma,
    gauss_value,
    hyp2f1,
    hyp2f1_dx,
    pochhammer,
)

GAMMA_CASES = [
    (0.5, 1.772453850905516),
    (1.5, 0.886226925452758),
    (-0.5, -3.544907701811032),
    (-2.5, -0.9453087204829419),
    (3.7, 4.170651783796604),
    (10.0, 362880.0),
    (25.0, 6.204484017332394e+23),
    (-9.5, 2.772127911575102e-06),
    (0.001, 999.4237724845955),
]

HYP2F1_CASES = [
    (1.0, 1.0, 2.0, 0.5, 1.3862943611198906),
    (0.25, 1.25, 2.0, 0.81, 1.235607249797406),
    (1.25, 2.25, 3.0, 0.81, 4.1215729637999505),
    (-0.45, 2.55, 4.0, 0.9, 0.662990241878252),
    (0.45, 0.95, 1.1, 0.99, 5.109652059287174),
    (-0.5, 1.5, 2.5, -0.8, 1.2133888595895335),
    (2.0, 3.0, 0.5, 0.2, 7.027276131671597),
]

GAUSS_CASES = [
    (1.0, 1.0, 3.0, 2.0),
    (0.25, 1.25, 2.0, 1.573787465354795),
    (-0.45, 2.55, 4.0, 0.6002497638820886),
    (0.25, 0.25, 1.0, 1.1803405990160962),
    (1.25, 2.25, 4.0, 7.1944569844790625),
]

BETA_CASES = [
    (0.0, 0.0, 1.0),
    (1.0, 1.0, 0.16666666666666666),
    (-0.5, 0.0, 2.0),
    (2.5, -0.25, 0.4915447116863968),
    (0.5, 0.5, 0.39269908169872414),
]


class TestGamma:
    @pytest.mark.parametrize("x,want", GAMMA_CASES)
    def test_frozen_values(self, x, want):
        assert gamma(x) == pytest.approx(want, rel=1e-12)

    def test_integers(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)
        assert gamma(4.0) == pytest.approx(6.0, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_pole_errors(self, x):
        with pytest.raises(ValueError):
            gamma(x)

    @given(st.floats(min_value=-9.9, max_value=29.0).filter(
        lambda x: min(abs(x - round(x)), 1.0) > 1e-3 or x > 0.5))
    @settings(max_examples=200)
    def test_recurrence(self, x):
        assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-10)

    @given(st.floats(min_value=0.01, max_value=0.99))
    @settings(max_examples=200)
    def test_reflection(self, x):
        lhs = gamma(x) * gamma(1.0 - x) * math.sin(math.pi * x) / math.pi
        assert lhs == pytest.approx(1.0, rel=1e-10)


class TestPochhammer:
    def test_base_cases(self):
        assert pochhammer(3.7, 0) == 1.0
        assert pochhammer(2.0, 3) == 24.0
        assert pochhammer(0.5, 4) == pytest.approx(gamma(4.5) / gamma(0.5), rel=1e-13)

    def test_nonpositive_integer_base(self):
        assert pochhammer(0.0, 3) == 0.0
        assert pochhammer(-2.0, 3) == pytest.approx(-2.0 * -1.0 * 0.0)
        assert pochhammer(-2.0, 2) == pytest.approx(2.0)

    @given(st.floats(min_value=-5.0, max_value=5.0),
           st.integers(min_value=0, max_value=8),
           st.integers(min_value=0, max_value=8))
    @settings(max_examples=200)
    def test_composition(self, a, k, m):
        lhs = pochhammer(a, k) * pochhammer(a + k, m)
        rhs = pochhammer(a, k + m)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestHyp2f1:
    @pytest.mark.parametrize("a,b,c,x,want", HYP2F1_CASES)
    def test_frozen_values(self, a, b, c, x, want):
        assert hyp2f1(a, b, c, x) == pytest.approx(want, rel=1e-12)

    def test_euler_region_near_one(self):
        # c - a - b = -0.5 < 0: the direct series is useless at x close to 1,
        # the Euler transform handles it.
        got = hyp2f1(1.25, 2.25, 3.0, 0.998)
        assert got == pytest.approx(71.2735646755187, rel=1e-9)

    def test_extreme_argument_needs_loose_tol(self):
        # At x = 1 - 1e-6 the transformed series sheds terms like k^(-3/2),
        # so the default tolerance exceeds the term cap; a loose tolerance
        # returns a truncation-limited value.
        with pytest.raises(ConvergenceError):
            hyp2f1(1.25, 2.25, 3.0, 0.999999)
        got = hyp2f1(1.25, 2.25, 3.0, 0.999999, tol=1e-6)
        assert got == pytest.approx(3445.570547029391, rel=2e-2)

    def test_x_zero(self):
        assert hyp2f1(0.3, -1.7, 2.2, 0.0) == 1.0

    def test_a_zero_collapses(self):
        assert hyp2f1(0.0, 1.3, 2.2, 0.77) == pytest.approx(1.0, rel=1e-14)

    def test_terminating_polynomial(self):
        # a = -2 terminates: 1 - 2b/c x + b(b+1)/(c(c+1)) x^2
        b, c, x = 1.5, 2.5, 0.6
        want = 1.0 - 2.0 * b / c * x + b * (b + 1.0) / (c * (c + 1.0)) * x * x
        assert hyp2f1(-2.0, b, c, x) == pytest.approx(want, rel=1e-13)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            hyp2f1(0.5, 0.5, 1.0, 1.2)
        with pytest.raises(ValueError):
            hyp2f1(0.5, 0.5, -3.0, 0.5)

    def test_at_one_needs_convergent_series(self):
        # c - a - b > 0: the value at x = 1 is the Gauss sum.
        assert hyp2f1(0.25, 1.25, 2.0, 1.0) == pytest.approx(
            gauss_value(0.25, 1.25, 2.0), rel=1e-10)

    @given(st.floats(min_value=0.1, max_value=2.0),
           st.floats(min_value=0.1, max_value=2.0),
           st.floats(min_value=-0.9, max_value=0.9))
    @settings(max_examples=150)
    def test_euler_transformation_consistency(self, a, b, x):
        # Pick c with c - a - b < 0 so both routes are defined.
        c = a + b - 0.75
        if c <= 0.05:
            return
        direct = hyp2f1(a, b, c, x)
        euler = (1.0 - x) ** (c - a - b) * hyp2f1(c - a, c - b, c, x)
        assert euler == pytest.approx(direct, rel=1e-9)

    def test_derivative_identity(self):
        for a, b, c, x, want in [
            (0.25, 1.25, 2.0, 0.5, 0.29192842348996595),
            (-0.45, 2.55, 4.0, 0.3, -0.32794556600826935),
        ]:
            assert hyp2f1_dx(a, b, c, x) == pytest.approx(want, rel=1e-8)

    def test_derivative_matches_finite_difference(self):
        a, b, c, x, h = 0.7, 1.1, 2.3, 0.4, 1e-6
        fd = (hyp2f1(a, b, c, x + h) - hyp2f1(a, b, c, x - h)) / (2.0 * h)
        assert hyp2f1_dx(a, b, c, x) == pytest.approx(fd, rel=1e-8)


class TestGaussValue:
    @pytest.mark.parametrize("a,b,c,want", GAUSS_CASES)
    def test_frozen_values(self, a, b, c, want):
        assert gauss_value(a, b, c) == pytest.approx(want, rel=1e-12)

    def test_a_zero(self):
        assert gauss_value(0.0, 1.3, 2.2) == pytest.approx(1.0, rel=1e-14)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            gauss_value(1.0, 1.0, 2.0)  # c - a - b = 0

    @pytest.mark.parametrize("a,b,c", [(1.0, 1.0, 4.0), (-0.45, 2.55, 4.0),
                                       (0.25, 0.25, 3.0)])
    def test_partial_sums_converge(self, a, b, c):
        # Gauss summation: series terms decay like k^{-(c-a-b)-1}, so with
        # c - a - b around 2 the partial sums settle within 1e-8 by 10^5 terms.
        total, term = 0.0, 1.0
        for k in range(100000):
            total += term
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0))
        assert total == pytest.approx(gauss_value(a, b, c), abs=1e-8)


class TestBetaIntegral:
    @pytest.mark.parametrize("s,t,want", BETA_CASES)
    def test_frozen_values(self, s, t, want):
        assert beta_integral(s, t) == pytest.approx(want, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            beta_integral(-1.0, 0.0)
        with pytest.raises(ValueError):
            beta_integral(0.0, -1.5)

    @pytest.mark.parametrize("s,t", [(1.0, 1.0), (0.5, 0.5), (2.5, 0.0)])
    def test_matches_quadrature(self, s, t):
        r = np.linspace(0.0, 1.0, 200001)
        vals = (1.0 - r) ** s * r ** t
        quad = np.trapezoid(vals, r)
        assert beta_integral(s, t) == pytest.approx(quad, rel=1e-6)
