import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_lab import bounds as B
from entropy_lab import classical as C
from entropy_lab.harness.sampling import sample_density_pair, sample_joint, substream
from entropy_lab.kernel import DomainError, binary_tsallis, g_of_t, kappa


class TestPinsker:
    def test_zero_distance(self):
        assert B.pinsker_lower_bound(1.0, 0.0, 0.5) == 0.0

    def test_examples(self):
        assert B.pinsker_lower_bound(1.0, 0.6, 0.5) == pytest.approx(0.4, rel=1e-15)
        assert B.pinsker_lower_bound(2.0, 1.2, 0.5) == pytest.approx(0.8, rel=1e-15)

    @pytest.mark.parametrize("a", [0.25, 0.75])
    def test_quadratic_term(self, a):
        tau = 0.3
        assert B.pinsker_series_bound(1.0, tau, a, 1) == pytest.approx(kappa(a) / 2 * tau**2, rel=1e-15)

    def test_partial_sums_increase_to_full_bound(self):
        sums = [B.pinsker_series_bound(1.0, 0.5, 0.5, n) for n in range(1, 31)]
        assert all(x <= y for x, y in zip(sums, sums[1:]))
        assert sums[-1] <= B.pinsker_lower_bound(1.0, 0.5, 0.5)
        assert abs(sums[-1] - B.pinsker_lower_bound(1.0, 0.5, 0.5)) < 1e-9

    def test_requires_order_below_one(self):
        with pytest.raises(DomainError):
            B.pinsker_lower_bound(1.0, 0.2, 1.5)

    def test_tau_cannot_exceed_theta(self):
        with pytest.raises(DomainError):
            B.pinsker_lower_bound(1.0, 1.5, 0.5)

    def test_symmetric_two_point_pair_is_tight_at_half(self):
        # H_1/2 of (1+t, 1-t)/2 against (1-t, 1+t)/2 equals 2 g(t)
        t = 0.4
        P, Q = np.array([1 + t, 1 - t]) / 2, np.array([1 - t, 1 + t]) / 2
        assert C.tsallis_rel_entropy(P, Q, 0.5) == pytest.approx(B.pinsker_lower_bound(1.0, t, 0.5), rel=1e-12)


class TestRenyiPinsker:
    def test_zero(self):
        assert B.renyi_pinsker_bound(0.0, 0.3) == 0.0

    def test_example(self):
        assert B.renyi_pinsker_bound(0.6, 0.5) == pytest.approx(-2 * math.log(0.8), rel=1e-14)

    @pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
    def test_dominates_tsallis_form(self, a):
        for tau in np.linspace(0, 1, 21):
            assert B.renyi_pinsker_bound(tau, a) >= kappa(a) * g_of_t(tau) - 1e-15


class TestMinProb:
    def test_zero_distance(self):
        assert B.min_prob_upper_bound(0.3, 0.0, 2) == 0.0
        assert B.min_prob_upper_bound_log_form(0.3, 0.0, 2) == 0.0

    def test_examples(self):
        assert B.min_prob_upper_bound(0.25, 0.2, 2) == pytest.approx(0.32, rel=1e-14)
        assert B.min_prob_upper_bound(0.2, 0.5, 2) == pytest.approx(1.75, rel=1e-14)

    @pytest.mark.parametrize("a", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("q0", [0.05, 0.2, 0.4])
    def test_continuous_at_branch_point(self, a, q0):
        lo = B.min_prob_upper_bound(q0, q0 * (1 - 1e-12), a)
        hi = B.min_prob_upper_bound(q0, q0 * (1 + 1e-12), a)
        assert abs(lo - hi) <= 1e-10

    @settings(max_examples=200, deadline=None)
    @given(q0=st.floats(0.01, 0.5), frac=st.floats(0, 1), a=st.floats(1.05, 5.0))
    def test_log_form_agrees(self, q0, frac, a):
        tau = frac * (1 - q0)
        ref = B.min_prob_upper_bound(q0, tau, a)
        assert B.min_prob_upper_bound_log_form(q0, tau, a) == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            B.min_prob_upper_bound(0.3, 0.1, 0.5)
        with pytest.raises(DomainError):
            B.min_prob_upper_bound(0.3, 0.8, 2)

    def test_bounds_random_pairs(self):
        rng = substream(2, "min-prob")
        for _ in range(200):
            P, Q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
            q0, tau = C.minimal_probability(Q, P), C.trace_distance_classical(P, Q)
            for a in (1.5, 2.0, 3.0):
                bound = B.min_prob_upper_bound(q0, tau, a)
                assert C.tsallis_rel_entropy(P, Q, a) <= bound + 1e-12
                assert C.renyi_rel_entropy(P, Q, a) <= bound + 1e-12


class TestFano:
    def test_zero_error(self):
        for a in (0.5, 1.0, 2.0):
            assert B.fano_bound(0.0, 3, a) == 0.0

    def test_example(self):
        assert B.fano_bound(0.5, 2, 2) == pytest.approx(0.5, rel=1e-15)

    def test_shannon_limit(self):
        Pe, N = 0.2, 4
        ref = -Pe * math.log(Pe) - (1 - Pe) * math.log(1 - Pe) + Pe * math.log(N - 1)
        assert B.fano_bound(Pe, N, 1.0) == pytest.approx(ref, rel=1e-14)

    def test_improves_on_linear_error_form(self):
        # with Pe in place of Pe^a the a > 1 bound only grows
        for a in (1.5, 3.0):
            for Pe in np.linspace(0, 1, 11):
                looser = binary_tsallis(Pe, a) + Pe * (1 - 3.0 ** (1 - a)) / (a - 1)
                assert B.fano_bound(Pe, 4, a) <= looser + 1e-15

    def test_diagonal_joint_intermediate(self):
        assert B.fano_intermediate(np.diag([0.2, 0.8]), 2.0) == 0.0

    @pytest.mark.parametrize("a", [0.3, 0.7, 1.5, 3.0])
    def test_sandwich_on_random_joints(self, a):
        rng = substream(9, "fano", a)
        for _ in range(100):
            J = sample_joint(4, rng)
            mid = B.fano_intermediate(J, a)
            assert C.conditional_tsallis_entropy(J, a) <= mid + 1e-10
            assert mid <= B.fano_bound(C.error_probability(J), 4, a) + 1e-10


class TestFanoMonotonicity:
    """The a > 1 bound is nondecreasing in Pe only up to (N - 1)/N."""

    @pytest.mark.parametrize("N", [2, 3, 5])
    @pytest.mark.parametrize("a", [1.5, 2.0, 4.0])
    def test_nondecreasing_up_to_limit(self, N, a):
        grid = np.linspace(0, B.fano_monotone_limit(N), 200)
        vals = [B.fano_bound(p, N, a) for p in grid]
        assert all(y >= x - 1e-14 for x, y in zip(vals, vals[1:]))

    def test_decreases_past_half_for_binary_alphabet(self):
        # N/(N+1) = 2/3 would claim monotonicity here; h_2 peaks at 1/2
        assert B.fano_bound(0.6, 2, 2.0) < B.fano_bound(0.5, 2, 2.0)
        assert B.fano_bound(2 / 3, 2, 2.0) < B.fano_bound(0.5, 2, 2.0)

    def test_fannes_at_qubit_decreases_inside_domain(self):
        assert B.fannes_domain(2, 2.0) == pytest.approx(2 / 3)
        assert B.fannes_bound(0.65, 2, 2.0) < B.fannes_bound(0.5, 2, 2.0)


class TestFannes:
    def test_zero(self):
        assert B.fannes_bound(0.0, 3, 0.5) == 0.0

    def test_half_order_qubit_closed_form(self):
        tau = 0.1
        ln_half_2 = 2 * (math.sqrt(2) - 1)
        ref = 2 * math.sqrt(tau) - tau + math.sqrt(tau) * ln_half_2
        assert B.fannes_bound(tau, 2, 0.5) == pytest.approx(ref, rel=1e-14)

    def test_near_one_limit(self):
        tau, d = 0.2, 3
        ref = -tau * math.log(tau) - (1 - tau) * math.log(1 - tau) + tau * math.log(d - 1)
        assert B.fannes_bound(tau, d, 1 + 1e-4) == pytest.approx(ref, rel=1e-3)

    def test_domain_above_one(self):
        with pytest.raises(DomainError):
            B.fannes_bound(0.95, 2, 2.0)

    @pytest.mark.parametrize("a", [0.3, 0.7, 1.5, 2.5])
    def test_random_states(self, a):
        rng = substream(4, "fannes", a)
        for _ in range(100):
            rho, sigma = sample_density_pair(3, rng)
            rep = B.check_fannes(a, rho=rho, sigma=sigma)
            assert rep.satisfied in (True, None)


class TestYanagi:
    def test_zero(self):
        assert B.yanagi_comparison_bound(0.0, 2, 0.5) == 0.0

    def test_edge_example(self):
        tau = 0.125
        assert B.yanagi_comparison_bound(tau, 2, 0.5) == pytest.approx(4 * math.sqrt(tau) - 4 * tau, rel=1e-14)

    def test_validity_range(self):
        assert B.yanagi_comparison_bound(0.125, 2, 0.5) is not None
        assert B.yanagi_comparison_bound(0.126, 2, 0.5) is None

    def test_order_above_one(self):
        with pytest.raises(DomainError):
            B.yanagi_comparison_bound(0.1, 2, 2.0)


class TestReports:
    def test_pinsker_report(self):
        rho, sigma = np.diag([0.8, 0.2]), np.diag([0.3, 0.7])
        rep = B.check_pinsker(rho, sigma, 0.5)
        assert rep.in_domain and rep.satisfied
        assert rep.slack == pytest.approx(rep.measured - rep.bound)

    def test_pinsker_out_of_domain(self):
        rep = B.check_pinsker(np.diag([0.8, 0.2]), np.diag([0.3, 0.7]), 2.0)
        assert not rep.in_domain and rep.satisfied is None and rep.slack is None

    def test_min_prob_equal_pair(self):
        P = np.array([0.2, 0.8])
        rep = B.check_min_prob(P, P, 2.0)
        assert rep.measured == rep.bound == rep.slack == 0.0

    def test_fannes_out_of_domain(self):
        rep = B.check_fannes(2.0, tau=0.95, d=2)
        assert rep.in_domain is False and rep.satisfied is None

    def test_violation_is_reported(self):
        rep = B.BoundReport("pinsker", measured=0.1, bound=0.2, direction="lower", in_domain=True)
        assert rep.satisfied is False
        assert rep.slack == pytest.approx(-0.1)

    def test_row(self):
        rep = B.check_fano(np.array([[0.3, 0.1], [0.1, 0.5]]), 2.0)
        row = rep.to_row()
        assert row["kind"] == "fano" and row["in_domain"] is True
        assert set(row) >= {"measured", "bound", "slack"}
