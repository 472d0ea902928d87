import functools
import importlib
import math
from contextlib import ExitStack
from unittest import mock

import numpy as np
import pytest

from entropy_lab import bounds, classical, quantum
from entropy_lab.harness import oracles, properties, sampling, scans
from entropy_lab.harness.mutations import MUTATIONS, mutated
from entropy_lab.harness.properties import REGISTRY, ConfigError, SamplerConfig, run_property_suite
from entropy_lab.kernel import DomainError


class TestSampling:
    def test_single_letter(self):
        np.testing.assert_array_equal(sampling.sample_distribution(1, sampling.substream(0)), [1.0])

    def test_simplex_mean(self):
        rng = sampling.substream(1, "mean")
        mean = np.mean([sampling.sample_distribution(3, rng) for _ in range(100_000)], axis=0)
        np.testing.assert_allclose(mean, 1 / 3, atol=0.01)

    def test_substreams_are_deterministic_and_distinct(self):
        a = sampling.substream(5, "x", 1).random(4)
        b = sampling.substream(5, "x", 1).random(4)
        c = sampling.substream(5, "x", 2).random(4)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_pure_density(self):
        rho = sampling.sample_density(4, 1, sampling.substream(2))
        assert quantum.quantum_tsallis_entropy(rho, 2.0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 8])
    def test_full_rank_density(self, d):
        rho = sampling.sample_density(d, d, sampling.substream(3, d))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() > 0

    def test_haar_unitary(self):
        U = sampling.haar_unitary(5, sampling.substream(4))
        np.testing.assert_allclose(U.conj().T @ U, np.eye(5), atol=1e-12)

    @pytest.mark.parametrize("mode", ["independent", "close", "commuting", "low-rank", "any"])
    def test_pair_modes(self, mode):
        rho, sigma = sampling.sample_density_pair(3, sampling.substream(6, mode), mode)
        for X in (rho, sigma):
            assert np.trace(X).real == pytest.approx(1.0, abs=1e-12)

    def test_commuting_mode_commutes(self):
        rho, sigma = sampling.sample_density_pair(4, sampling.substream(7), "commuting")
        np.testing.assert_allclose(rho @ sigma, sigma @ rho, atol=1e-12)

    @pytest.mark.parametrize("mode", ["uniform", "fano", "coupling", "diagonal-heavy", "any"])
    def test_joint_modes(self, mode):
        J = sampling.sample_joint(4, sampling.substream(8, mode), mode)
        assert J.shape == (4, 4) and J.min() >= 0
        assert J.sum() == pytest.approx(1.0, abs=1e-12)


class TestOracle:
    def test_zero_distance(self):
        assert oracles.brute_force_min_prob_oracle(0.25, 0.0, 2.0, 4) == 0.0

    def test_approaches_bound_from_below(self):
        bound = bounds.min_prob_upper_bound(0.25, 0.2, 2.0)
        vals = [oracles.brute_force_min_prob_oracle(0.25, 0.2, 2.0, 4, g) for g in (20, 40, 80)]
        assert all(v <= bound + 1e-12 for v in vals)
        assert vals[-1] == pytest.approx(0.32, abs=1e-9)

    def test_maximizer_concentrates(self):
        res = oracles.oracle_maximizer(0.2, 0.5, 2.0, 4)
        assert sum(1 for x in res.x_parts if x > 0) == 1
        assert max(res.x_parts) == pytest.approx(0.5)

    def test_rejects_infeasible(self):
        with pytest.raises(DomainError):
            oracles.brute_force_min_prob_oracle(0.3, 0.1, 2.0, 4)


class TestExtremal:
    def test_near_branch_example(self):
        inst = oracles.extremal_min_prob_instance(0.25, 0.2, 2.0, 4)
        np.testing.assert_allclose(inst.Q_base, 0.25)
        np.testing.assert_allclose(inst.P_extremal, [0.45, 0.05, 0.25, 0.25])
        assert inst.attained
        assert inst.value == pytest.approx(0.32, abs=1e-12)

    def test_far_branch_example(self):
        inst = oracles.extremal_min_prob_instance(0.2, 0.5, 2.0, 4)
        assert inst.attained
        assert inst.value == pytest.approx(1.75, abs=1e-12)

    def test_zero_distance(self):
        inst = oracles.extremal_min_prob_instance(0.2, 0.0, 3.0, 5)
        np.testing.assert_array_equal(inst.P_extremal, inst.Q_base)
        assert inst.value == inst.bound == 0.0

    @pytest.mark.parametrize("N", [3, 4, 6])
    @pytest.mark.parametrize("a", [1.5, 2.0, 3.0])
    def test_dominates_grid_values(self, N, a):
        q0 = 1 / (2 * N)
        for tau in (0.3 * q0, q0, 2 * q0, 0.9 * (1 - q0)):
            inst = oracles.extremal_min_prob_instance(q0, tau, a, N)
            assert classical.minimal_probability(inst.Q_base, inst.P_extremal) == pytest.approx(q0)
            assert classical.trace_distance_classical(inst.P_extremal, inst.Q_base) == pytest.approx(tau)
            assert inst.value <= inst.bound + 1e-12
            if inst.attained:
                assert inst.value >= oracles.brute_force_min_prob_oracle(q0, tau, a, N, 20) - 1e-12

    def test_not_attained_without_room(self):
        # the remainder 1 - q0 - tau is positive but smaller than q0
        inst = oracles.extremal_min_prob_instance(1 / 6, 0.75, 1.5, 3)
        assert not inst.attained
        assert inst.value < inst.bound


class TestScans:
    def test_fannes_comparison_limit(self):
        rows = scans.fannes_comparison_scan(2, 0.5, [1e-6])
        assert rows[0]["relative_difference"] == pytest.approx(math.sqrt(2) - 1, abs=1e-3)

    def test_fannes_comparison_edge(self):
        rows = scans.fannes_comparison_scan(2, 0.5, [0.125])
        assert rows[0]["yanagi"] >= rows[0]["fannes"]

    def test_both_vanish_at_zero(self):
        row = scans.fannes_comparison_scan(2, 0.5, [0.0])[0]
        assert row["fannes"] == 0.0 and row["yanagi"] == 0.0

    def test_empty_grid(self):
        assert scans.fannes_comparison_scan(2, 0.5, []) == []

    def test_alpha_limit_errors_shrink(self):
        P, Q = np.array([0.6, 0.3, 0.1]), np.array([0.2, 0.5, 0.3])
        rows = scans.alpha_limit_scan(P, Q)
        for side in (rows[:5], rows[5:]):
            errs = [r["tsallis_error"] for r in side]
            assert all(b < a for a, b in zip(errs, errs[1:]))
            assert errs[0] < 10 ** -1
        assert scans.observed_order(rows) == pytest.approx(1.0, abs=0.05)

    def test_alpha_limit_quantum(self):
        rng = sampling.substream(0, "scan")
        rho, sigma = sampling.sample_density(3, 3, rng), sampling.sample_density(3, 3, rng)
        rows = scans.alpha_limit_scan(rho, sigma, quantum_inputs=True)
        assert rows[0]["limit"] == pytest.approx(quantum.quantum_relative_entropy(rho, sigma))

    def test_pinsker_tightness_at_half(self):
        rows = scans.pinsker_tightness_scan(0.5, [0.1, 0.5, 0.9])
        for r in rows:
            assert r["ratio"] == pytest.approx(1.0, abs=1e-12)


class TestConfig:
    def test_defaults(self):
        cfg = SamplerConfig()
        assert cfg.trials >= 1 and 2 in cfg.dims

    @pytest.mark.parametrize("bad", [{"trials": 0}, {"alphas": [0.0]}, {"dims": []}, {"seed": -1},
                                     {"properties": ["nope"]}, {"color": "red"}, {"trials": 1.5}])
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            SamplerConfig.from_mapping(bad)

    def test_from_toml(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text('seed = 9\ntrials = 3\ndims = [2]\nalphas = [0.5, 2.0]\n', encoding="utf-8")
        cfg = SamplerConfig.from_toml(p)
        assert (cfg.seed, cfg.trials, cfg.dims, cfg.alphas) == (9, 3, (2,), (0.5, 2.0))

    def test_malformed_toml(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text("seed = = 1", encoding="utf-8")
        with pytest.raises(ConfigError):
            SamplerConfig.from_toml(p)


def _small_config(**kw):
    base = dict(trials=2, dims=(2, 3), alphas=(0.3, 0.5, 2.0))
    base.update(kw)
    return SamplerConfig(**base)


class TestSuite:
    def test_small_run_is_clean(self):
        result = run_property_suite(_small_config())
        assert result.ok, result.violations_csv()
        assert {s.property for s in result.stats} == set(REGISTRY)

    def test_same_seed_same_summary(self):
        cfg = _small_config(seed=123)
        assert run_property_suite(cfg).summary_json() == run_property_suite(cfg).summary_json()

    def test_summary_echoes_seed(self):
        assert '"seed": 77' in run_property_suite(_small_config(seed=77, properties=("kernel.alpha-log",))).summary_json()

    def test_violations_are_recorded(self):
        with mutated("kappa"):
            result = run_property_suite(_small_config(properties=("bounds.pinsker",)))
        assert not result.ok
        rec = result.violations[0]
        assert rec.property == "bounds.pinsker" and rec.slack < 0
        assert "rho" in rec.inputs
        assert result.violations_csv().startswith("property,cell,trial")

    @pytest.mark.parametrize("name", sorted(MUTATIONS))
    def test_mutation_restored(self, name):
        before = (bounds.kernel.kappa(0.5), bounds.kernel.pinsker_series_coeff(1), bounds._use_near_branch(0.2, 0.1))
        with mutated(name):
            pass
        after = (bounds.kernel.kappa(0.5), bounds.kernel.pinsker_series_coeff(1), bounds._use_near_branch(0.2, 0.1))
        assert before == after


class TestCoverageAudit:
    def test_every_core_operation_is_exercised(self):
        counts = {name: 0 for name in properties.CORE_OPERATIONS}

        def counting(name, fn):
            @functools.wraps(fn)
            def wrapper(*args, **kwargs):
                counts[name] += 1
                return fn(*args, **kwargs)

            return wrapper

        with ExitStack() as stack:
            for name in properties.CORE_OPERATIONS:
                mod_name, attr = name.split(".")
                mod = importlib.import_module(f"entropy_lab.{mod_name}")
                stack.enter_context(mock.patch.object(mod, attr, counting(name, getattr(mod, attr))))
            run_property_suite(SamplerConfig(trials=1))
        missing = sorted(k for k, v in counts.items() if v == 0)
        assert not missing, f"operations never exercised: {missing}"

    def test_declared_coverage(self):
        declared = set()
        for prop in REGISTRY.values():
            assert prop.covers, prop.id
            declared.update(prop.covers)
        assert set(properties.CORE_OPERATIONS) <= declared
