"""Scenario-based state reconstruction from visibility Stokes parameters."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vistokes import (
    CoherenceTriple,
    IdlerPrep,
    InfeasibleDataError,
    Scenario,
    ScenarioMismatchError,
    SetupConfig,
    SignalPrep,
    VisibilityStokes,
    analytic_visibilities_mixed,
    embed,
    enumerate_consistent_states,
    fidelity,
    reconstruct_hv_asymmetric,
    reconstruct_pure,
    reconstruct_symmetric,
    standard_stokes,
    visibility_stokes,
)
from conftest import random_coherent_config, random_mixed_config

seeds = st.integers(min_value=0, max_value=999)


def stokes_of(cfg):
    return visibility_stokes(analytic_visibilities_mixed(cfg),
                             transmission=cfg.transmission, spread_tol=1e-9)


def hv_config(rng, which="H"):
    """Config whose environment keeps one polarization fully coherent."""
    q = rng.uniform(0.0, 1.0)
    if which == "H":
        triple = CoherenceTriple(q, 1.0, q, 0.0)
    else:
        triple = CoherenceTriple(q, q, 1.0, 0.0)
    return random_mixed_config(rng, triple=triple), q


def symmetric_config(rng):
    """Config whose environment couples identically to both polarizations."""
    m = rng.uniform(1.0 / math.sqrt(2.0), 1.0)
    triple = CoherenceTriple(2.0 * m**2 - 1.0, m, m, 0.0)
    return random_mixed_config(rng, triple=triple), 2.0 * m**2 - 1.0


class TestPure:
    @given(seeds)
    def test_recovers_configured_state(self, seed):
        cfg = random_coherent_config(np.random.default_rng(seed))
        result = reconstruct_pure(stokes_of(cfg))
        true_rho = cfg.idler.reduced_density()
        assert result.scenario is Scenario.PURE_COHERENT
        assert result.q == 1.0
        assert fidelity(result.rho, true_rho) >= 1.0 - 1e-9
        truth = standard_stokes(true_rho)
        assert result.bloch.as_array() == pytest.approx(truth.as_array(), abs=1e-9)

    def test_gate_rejects_mixed_data(self):
        cfg = random_mixed_config(np.random.default_rng(5), min_transmission=1.0,
                                  triple=CoherenceTriple(0.4, 0.7, 0.6, 0.1))
        with pytest.raises(ScenarioMismatchError):
            reconstruct_pure(stokes_of(cfg))

    def test_gate_widens_with_tol(self):
        vs = VisibilityStokes(0.999, 0.0, 0.0, 0.999)
        with pytest.raises(ScenarioMismatchError):
            reconstruct_pure(vs)
        result = reconstruct_pure(vs, tol=1e-2)
        assert result.bloch.z == pytest.approx(1.0)

    def test_zero_vector_infeasible(self):
        # finite-precision s0 = 1 with a vanishing vector has no pure preimage
        with pytest.raises(InfeasibleDataError):
            reconstruct_pure(VisibilityStokes(1.0, 0.0, 0.0, 0.0), tol=1.0)


class TestHvAsymmetric:
    @given(seeds, st.sampled_from(["H", "V"]))
    def test_recovers_state_and_overlap(self, seed, which):
        cfg, q_true = hv_config(np.random.default_rng(seed), which)
        result = reconstruct_hv_asymmetric(stokes_of(cfg), which=which)
        truth = standard_stokes(cfg.idler.reduced_density())
        assert result.scenario is Scenario.HV_ASYMMETRIC
        assert result.bloch.as_array() == pytest.approx(truth.as_array(), abs=1e-9)
        if not result.q_indeterminate:
            assert result.q == pytest.approx(q_true, abs=1e-9)

    def test_z_combines_sz_and_s0(self):
        vs = VisibilityStokes(0.82, 0.1, 0.0, 0.3)
        result = reconstruct_hv_asymmetric(vs, which="H")
        assert result.bloch.z == pytest.approx(vs.sz + vs.s0 - 1.0, abs=1e-12)
        mirror = reconstruct_hv_asymmetric(vs, which="V")
        assert mirror.bloch.z == pytest.approx(vs.sz - vs.s0 + 1.0, abs=1e-12)

    def test_q_indeterminate_when_only_coherent_component(self):
        # alpha = 1 under which="H": nothing couples to the environment
        result = reconstruct_hv_asymmetric(VisibilityStokes(1.0, 0.0, 0.0, 1.0), "H")
        assert result.q is None and result.q_indeterminate

    def test_bad_which(self):
        with pytest.raises(ValueError):
            reconstruct_hv_asymmetric(VisibilityStokes(1.0, 0.0, 0.0, 1.0), "X")

    def test_infeasible_population(self):
        with pytest.raises(InfeasibleDataError):
            reconstruct_hv_asymmetric(VisibilityStokes(1.0, 0.0, 0.0, 1.0009), "H")

    def test_infeasible_overlap_above_one(self):
        with pytest.raises(InfeasibleDataError):
            reconstruct_hv_asymmetric(VisibilityStokes(1.0009, 0.0, 0.0, 0.0), "H")

    def test_infeasible_s0_below_population(self):
        with pytest.raises(InfeasibleDataError):
            reconstruct_hv_asymmetric(VisibilityStokes(0.5, 0.0, 0.0, 0.9), "H")


class TestSymmetric:
    @given(seeds)
    def test_recovers_overlap_and_transverse_components(self, seed):
        cfg, q_true = symmetric_config(np.random.default_rng(seed))
        result = reconstruct_symmetric(stokes_of(cfg))
        truth = standard_stokes(cfg.idler.reduced_density())
        assert result.scenario is Scenario.SYMMETRIC_COUPLING
        assert result.q == pytest.approx(q_true, abs=1e-9)
        assert result.bloch.x == pytest.approx(truth.x, abs=1e-9)
        assert result.bloch.y == pytest.approx(truth.y, abs=1e-9)
        # the z component is rescaled by q by construction; the gap is reported
        assert result.bloch.z == pytest.approx(q_true * truth.z, abs=1e-9)
        assert "z_rescale" in result.residuals

    def test_gate_rejects_low_s0(self):
        with pytest.raises(ScenarioMismatchError):
            reconstruct_symmetric(VisibilityStokes(0.4, 0.0, 0.0, 0.0))

    def test_fully_mixed_boundary(self):
        result = reconstruct_symmetric(VisibilityStokes(0.5, 0.25, 0.0, 0.0))
        assert result.q == pytest.approx(0.0, abs=1e-12)
        assert result.bloch.r == pytest.approx(0.0, abs=1e-12)


class TestEnumerateConsistentStates:
    def target(self, seed=3):
        cfg = random_mixed_config(np.random.default_rng(seed), min_transmission=1.0,
                                  triple=CoherenceTriple(0.5, 0.8, 0.7, 0.2))
        return cfg, stokes_of(cfg)

    def test_samples_reproduce_target_through_fresh_embedding(self):
        _, vs = self.target()
        samples = enumerate_consistent_states(vs, samples=40, seed=9)
        assert len(samples) == 40
        for s in samples:
            replay = SetupConfig(
                pump_ratio=1.0, transmission=1.0, theta=0.0,
                signal=SignalPrep.unbiased(0.0),
                idler=IdlerPrep(alpha=s.alpha, beta=s.beta, xi=s.xi,
                                env=embed(s.triple, dim=3)))
            got = visibility_stokes(analytic_visibilities_mixed(replay), spread_tol=1e-9)
            assert got.s0 == pytest.approx(vs.s0, abs=1e-8)
            assert got.vector == pytest.approx(vs.vector, abs=1e-8)

    def test_samples_lie_in_consistency_ball(self):
        _, vs = self.target(seed=12)
        for s in enumerate_consistent_states(vs, samples=60, seed=4):
            gap = np.linalg.norm(s.bloch.as_array() - vs.vector)
            assert gap <= 1.0 - vs.s0 + 1e-9

    def test_seeded_determinism(self):
        _, vs = self.target(seed=7)
        first = enumerate_consistent_states(vs, samples=10, seed=21)
        second = enumerate_consistent_states(vs, samples=10, seed=21)
        for a, b in zip(first, second):
            assert a.triple == b.triple
            assert (a.alpha, a.beta, a.xi) == (b.alpha, b.beta, b.xi)

    def test_pure_input_collapses_to_single_state(self):
        vs = VisibilityStokes(1.0, 0.6, 0.0, 0.8)
        samples = enumerate_consistent_states(vs, samples=7, seed=0)
        assert len(samples) == 7
        assert all(s.triple == CoherenceTriple(1.0, 1.0, 1.0, 0.0) for s in samples)
        assert samples[0].bloch.as_array() == pytest.approx([0.6, 0.0, 0.8])

    def test_decoupled_input_spans_states_freely(self):
        vs = VisibilityStokes(0.0, 0.0, 0.0, 0.0)
        samples = enumerate_consistent_states(vs, samples=50, seed=13)
        zs = {round(s.bloch.z, 6) for s in samples}
        assert len(zs) > 10
        assert all(s.triple.m_h == 0.0 and s.triple.m_v == 0.0 for s in samples)

    def test_norm_violating_input_raises(self):
        vs = VisibilityStokes(0.8, 0.9, 0.0, 0.0)
        with pytest.raises(InfeasibleDataError):
            enumerate_consistent_states(vs, samples=3, seed=1)

    def test_samples_must_be_positive(self):
        with pytest.raises(ValueError):
            enumerate_consistent_states(VisibilityStokes(0.5, 0.3, 0.0, 0.4), samples=0)


class TestResultSerialization:
    def test_json_dict_round_trip(self):
        cfg = random_coherent_config(np.random.default_rng(31))
        result = reconstruct_pure(stokes_of(cfg))
        payload = result.to_json_dict()
        assert payload["scenario"] == "pure-coherent"
        assert payload["q"] == 1.0 and payload["q_indeterminate"] is False
        flat = payload["density_matrix_re_im"]
        assert len(flat) == 8
        rho = (np.array(flat[0::2]) + 1j * np.array(flat[1::2])).reshape(2, 2)
        assert rho == pytest.approx(result.rho.entries, abs=1e-15)
        assert set(payload["bloch"]) == {"x", "y", "z"}
