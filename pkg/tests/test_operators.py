"""Operator form of the visibility measurements on polarization x environment."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vistokes import (
    BASIS_LABELS,
    BASIS_PAIRS,
    EnvironmentVectors,
    analytic_visibilities_mixed,
    idler_joint_state,
    incoherence_operator,
    random_feasible_triple,
    embed,
    stokes_operators,
    visibility_operator,
    visibility_stokes,
)
from conftest import random_amplitude_pair, random_mixed_config

seeds = st.integers(min_value=0, max_value=499)


def random_case(seed):
    """Environment, prep, and the joint ket the operators act on."""
    rng = np.random.default_rng(seed)
    env = embed(random_feasible_triple(rng), dim=3)
    alpha, beta = random_amplitude_pair(rng)
    xi = rng.uniform(0.0, 2.0 * math.pi)
    return env, (alpha, beta, xi), idler_joint_state(alpha, beta, xi, env)


class TestVisibilityOperator:
    @given(seeds)
    def test_expectation_is_squared_visibility(self, seed):
        rng = np.random.default_rng(seed)
        cfg = random_mixed_config(rng, min_transmission=0.3)
        env = cfg.idler.env
        psi = idler_joint_state(cfg.idler.alpha, cfg.idler.beta, cfg.idler.xi, env)
        vis = analytic_visibilities_mixed(cfg).as_dict()
        for k in BASIS_LABELS:
            op = visibility_operator(k, env, transmission=cfg.transmission)
            assert op.expectation(psi) == pytest.approx(vis[k] ** 2, abs=1e-12)

    @given(seeds)
    def test_projector_at_unit_transmission(self, seed):
        env, _, _ = random_case(seed)
        for k in BASIS_LABELS:
            assert visibility_operator(k, env).matrix.is_projector()

    def test_scaled_by_transmission_squared(self):
        env = EnvironmentVectors.coherent(3)
        strong = visibility_operator("D", env, transmission=1.0)
        weak = visibility_operator("D", env, transmission=0.5)
        assert weak.matrix.entries == pytest.approx(0.25 * strong.matrix.entries)
        assert not weak.matrix.is_projector()
        assert weak.label == "D" and weak.transmission == 0.5

    def test_custom_ket_and_label(self):
        env = EnvironmentVectors.coherent(3)
        ket = np.array([1.0, 1.0]) / math.sqrt(2.0)
        op = visibility_operator(ket, env)
        ref = visibility_operator("D", env)
        assert op.matrix.entries == pytest.approx(ref.matrix.entries)
        assert op.label == "custom"
        named = visibility_operator(ket, env, label="diag")
        assert named.label == "diag"

    def test_rejects_bad_transmission(self):
        env = EnvironmentVectors.coherent(3)
        with pytest.raises(ValueError):
            visibility_operator("H", env, transmission=1.2)

    @given(seeds)
    def test_pair_sum_equals_s0_operator(self, seed):
        env, _, _ = random_case(seed)
        s0_hat = stokes_operators(env).s0
        for k, k_perp in BASIS_PAIRS:
            total = (visibility_operator(k, env).matrix.entries
                     + visibility_operator(k_perp, env).matrix.entries)
            assert total == pytest.approx(s0_hat.entries, abs=1e-12)


class TestStokesOperators:
    @given(seeds)
    def test_expectations_match_fringe_derived_parameters(self, seed):
        rng = np.random.default_rng(seed)
        cfg = random_mixed_config(rng, min_transmission=0.3)
        env = cfg.idler.env
        psi = idler_joint_state(cfg.idler.alpha, cfg.idler.beta, cfg.idler.xi, env)
        vs = visibility_stokes(analytic_visibilities_mixed(cfg),
                               transmission=cfg.transmission, spread_tol=1e-9)
        raw = vs.raw()
        got = stokes_operators(env, transmission=cfg.transmission).expectations(psi)
        assert got == pytest.approx((raw.s0, raw.sx, raw.sy, raw.sz), abs=1e-12)

    @given(seeds)
    def test_hermitian_and_projector_structure(self, seed):
        env, _, _ = random_case(seed)
        ops = stokes_operators(env)
        for op in (ops.s0, ops.sx, ops.sy, ops.sz):
            assert op.is_hermitian()
        assert ops.s0.is_projector()
        # sx, sy, sz square to S0_hat, not to themselves
        sq = ops.sx.entries @ ops.sx.entries
        assert sq == pytest.approx(ops.s0.entries, abs=1e-12)


class TestIncoherenceOperator:
    @given(seeds)
    def test_complement_of_s0(self, seed):
        env, (alpha, beta, xi), psi = random_case(seed)
        inc = incoherence_operator(env)
        s0_val = stokes_operators(env).expectations(psi)[0]
        assert inc.expectation(psi) == pytest.approx(1.0 - s0_val, abs=1e-12)
        assert inc.matrix.is_projector()

    def test_coherent_environment_gives_zero(self):
        env = EnvironmentVectors.coherent(4)
        psi = idler_joint_state(0.6, 0.8, 1.1, env)
        assert incoherence_operator(env).expectation(psi) == pytest.approx(0.0, abs=1e-12)


class TestIdlerJointState:
    @given(seeds)
    def test_matches_interferometer_prep(self, seed):
        rng = np.random.default_rng(seed)
        cfg = random_mixed_config(rng)
        direct = idler_joint_state(cfg.idler.alpha, cfg.idler.beta, cfg.idler.xi,
                                   cfg.idler.env)
        assert direct.amplitudes == pytest.approx(
            np.asarray(cfg.idler.joint_ket()).ravel(), abs=1e-15)
        assert direct.dims == (2, cfg.idler.env.dim)

    def test_rejects_unnormalized_amplitudes(self):
        with pytest.raises(ValueError):
            idler_joint_state(1.0, 0.5, 0.0, EnvironmentVectors.coherent(3))
