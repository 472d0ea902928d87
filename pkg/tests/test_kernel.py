import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_lab.kernel import (
    NEAR_ONE,
    DomainError,
    Order,
    alpha_log,
    binary_tsallis,
    g_of_t,
    kappa,
    phi_uv,
    pinsker_series_coeff,
)

mpmath.mp.dps = 40


def mp_alpha_log(z, a):
    z, a = mpmath.mpf(z), mpmath.mpf(a)
    if a == 1:
        return mpmath.log(z)
    return (z ** (1 - a) - 1) / (1 - a)


class TestOrder:
    @pytest.mark.parametrize("bad", [0, -1.0, math.inf, math.nan])
    def test_rejects_nonpositive_or_nonfinite(self, bad):
        with pytest.raises(DomainError):
            Order(bad)

    def test_near_one_band(self):
        assert Order(1 + 0.5 * NEAR_ONE).near_one
        assert not Order(1 + 2 * NEAR_ONE).near_one


class TestAlphaLog:
    @pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 2.0, 7.0])
    def test_one_maps_to_zero(self, a):
        assert alpha_log(1.0, a) == 0.0

    def test_closed_form_at_two(self):
        assert alpha_log(2.0, 2) == pytest.approx(0.5, rel=1e-15)

    def test_natural_log_at_one(self):
        assert alpha_log(math.e, 1) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("z", [1e-6, 0.3, 1.7, 40.0])
    @pytest.mark.parametrize("a", [0.2, 0.999, 1 + 1e-5, 1.5, 4.0])
    def test_matches_high_precision(self, z, a):
        ref = float(mp_alpha_log(z, a))
        assert alpha_log(z, a) == pytest.approx(ref, rel=1e-13, abs=1e-15)

    def test_continuous_across_near_one_band(self):
        z = 3.0
        inside = alpha_log(z, 1 + 0.99 * NEAR_ONE)
        outside = alpha_log(z, 1 + 1.01 * NEAR_ONE)
        assert abs(inside - outside) < 1e-6

    def test_vectorized(self):
        out = alpha_log(np.array([1.0, 2.0]), 2.0)
        np.testing.assert_allclose(out, [0.0, 0.5])

    @pytest.mark.parametrize("z", [0.0, -1.0, math.nan])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            alpha_log(z, 2.0)

    @settings(max_examples=200, deadline=None)
    @given(x=st.floats(1e-3, 1e3), y=st.floats(1e-3, 1e3), a=st.floats(0.05, 5.0))
    def test_pseudo_additivity(self, x, y, a):
        # ln_a(xy) = ln_a x + ln_a y + (1 - a) ln_a x ln_a y
        lhs = alpha_log(x * y, a)
        lx, ly = alpha_log(x, a), alpha_log(y, a)
        rhs = lx + ly + (1 - a) * lx * ly
        # the right side can cancel large terms, so scale by their size
        scale = abs(lx) + abs(ly) + abs((1 - a) * lx * ly)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, scale)


class TestBinaryTsallis:
    @pytest.mark.parametrize("a", [0.3, 1.0, 2.0])
    def test_endpoints_vanish(self, a):
        assert binary_tsallis(0.0, a) == 0.0
        assert binary_tsallis(1.0, a) == 0.0

    def test_half_at_order_two(self):
        assert binary_tsallis(0.5, 2.0) == pytest.approx(0.5, rel=1e-15)

    def test_shannon_limit(self):
        assert binary_tsallis(0.5, 1.0) == pytest.approx(math.log(2), rel=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(k=st.integers(0, 2**20), a=st.floats(0.05, 6.0))
    def test_symmetry(self, k, a):
        # dyadic u so that 1 - u is exact
        u = k / 2**20
        assert binary_tsallis(u, a) == pytest.approx(binary_tsallis(1 - u, a), abs=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            binary_tsallis(1.2, 2.0)


class TestG:
    @pytest.mark.parametrize("t,expected", [(0.0, 0.0), (1.0, 1.0), (0.6, 0.2)])
    def test_values(self, t, expected):
        assert g_of_t(t) == pytest.approx(expected, abs=1e-16)

    def test_no_cancellation_for_small_t(self):
        t = 1e-9
        assert g_of_t(t) == pytest.approx(t * t / 2, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            g_of_t(1.5)


class TestKappa:
    @pytest.mark.parametrize("a,expected", [(0.5, 2.0), (0.25, 2 / 3), (0.75, 2.0), (0.1, 2 / 9)])
    def test_values(self, a, expected):
        assert kappa(a) == pytest.approx(expected, rel=1e-15)

    def test_branches_meet_at_half(self):
        assert kappa(0.5 - 1e-12) == pytest.approx(kappa(0.5 + 1e-12), abs=1e-10)

    @pytest.mark.parametrize("a", [1.0, 1.5])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            kappa(a)


class TestPhi:
    def test_zero_order(self):
        u = np.linspace(0.05, 0.95, 7)
        np.testing.assert_allclose(phi_uv(u[:, None], u[None, :], 0.0), 0.0, atol=1e-15)

    @pytest.mark.parametrize("a", [0.1, 0.3, 0.5])
    def test_diagonal_vanishes(self, a):
        u = np.linspace(0, 1, 11)
        np.testing.assert_allclose(phi_uv(u, u, a), 0.0, atol=1e-15)

    def test_example_nonpositive(self):
        assert phi_uv(0.9, 0.2, 0.5) <= 0

    def test_rejects_order_above_half(self):
        with pytest.raises(DomainError):
            phi_uv(0.5, 0.5, 0.6)


class TestSeriesCoefficients:
    def test_first_two(self):
        assert pinsker_series_coeff(1) == 0.5
        assert pinsker_series_coeff(2) == 0.125

    def test_match_binomial(self):
        for n in range(1, 30):
            ref = float(mpmath.binomial(mpmath.mpf(1) / 2, n) * (-1) ** (n + 1))
            assert pinsker_series_coeff(n) == pytest.approx(ref, rel=1e-14)

    def test_all_positive(self):
        assert all(pinsker_series_coeff(n) > 0 for n in range(1, 51))

    def test_series_sums_to_g(self):
        t = 0.5
        total = sum(pinsker_series_coeff(n) * t ** (2 * n) for n in range(1, 60))
        assert total == pytest.approx(g_of_t(t), rel=1e-14)

    @pytest.mark.parametrize("n", [0, -2, 1.5])
    def test_domain(self, n):
        with pytest.raises(DomainError):
            pinsker_series_coeff(n)
