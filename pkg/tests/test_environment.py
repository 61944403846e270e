"""Coherence triples: feasibility, Gram embeddings, and the 2-D quadratic."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from vistokes import (
    CoherenceTriple,
    EnvironmentVectors,
    InfeasibleTripleError,
    check_feasible,
    embed,
    feasible_q_interval,
    gram_matrix,
    random_feasible_triple,
    solve_q_2d,
)

unit = st.floats(min_value=0.0, max_value=1.0)
phases = st.floats(min_value=0.0, max_value=2.0 * math.pi)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


class TestCoherenceTriple:
    def test_range_validation(self):
        with pytest.raises(ValueError):
            CoherenceTriple(1.2, 0.5, 0.5)
        with pytest.raises(ValueError):
            CoherenceTriple(0.5, -0.1, 0.5)

    def test_slack_known_values(self):
        assert CoherenceTriple(1.0, 1.0, 1.0, 0.0).slack == pytest.approx(0.0)
        assert CoherenceTriple(0.0, 0.0, 0.0, 0.0).slack == pytest.approx(1.0)
        # q = 0 with both couplings maximal is the classic intransitive case
        assert CoherenceTriple(0.0, 1.0, 1.0, 0.0).slack == pytest.approx(-1.0)

    @given(unit, unit, unit, phases)
    def test_slack_equals_gram_determinant(self, q, mh, mv, dphi):
        t = CoherenceTriple(q, mh, mv, dphi)
        det = float(np.linalg.det(gram_matrix(t)).real)
        assert t.slack == pytest.approx(det, abs=1e-12)

    def test_check_feasible_reports_signed_slack(self):
        bad = CoherenceTriple(0.0, 1.0, 1.0, 0.0)
        rep = check_feasible(bad)
        assert not rep.feasible and rep.slack == pytest.approx(-1.0)
        good = check_feasible(CoherenceTriple(0.5, 0.5, 0.5, 0.0))
        assert good.feasible and good.slack == pytest.approx(0.5)


class TestEnvironmentVectors:
    def test_coherent_factory(self):
        env = EnvironmentVectors.coherent(4)
        assert env.dim == 4
        t = env.triple()
        assert (t.q, t.m_h, t.m_v) == (1.0, 1.0, 1.0)

    def test_unit_norm_required(self):
        bad = np.array([1.0, 1.0, 0.0])
        good = np.array([1.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            EnvironmentVectors(bad, good, good)

    def test_hv_overlap_phase_convention(self):
        e0 = np.array([1.0, 0.0, 0.0])
        e1 = np.array([1j, 0.0, 0.0])
        with pytest.raises(ValueError):
            EnvironmentVectors(e0, e1, e0)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ValueError):
            EnvironmentVectors(np.array([1.0, 0.0]), np.array([1.0, 0.0, 0.0]),
                               np.array([1.0, 0.0, 0.0]))


class TestEmbed:
    @given(st.integers(min_value=0, max_value=199))
    def test_round_trip_recovers_triple(self, seed):
        rng = np.random.default_rng(seed)
        t = random_feasible_triple(rng)
        env = embed(t, dim=3)
        back = env.triple()
        assert back.q == pytest.approx(t.q, abs=1e-10)
        assert back.m_h == pytest.approx(t.m_h, abs=1e-10)
        assert back.m_v == pytest.approx(t.m_v, abs=1e-10)
        if t.m_h > 1e-6 and t.m_v > 1e-6:
            assert math.cos(back.delta_phi) == pytest.approx(math.cos(t.delta_phi), abs=1e-8)
            assert math.sin(back.delta_phi) == pytest.approx(math.sin(t.delta_phi), abs=1e-8)

    def test_padding_to_higher_dimension(self):
        t = CoherenceTriple(0.7, 0.6, 0.5, 1.0)
        env = embed(t, dim=5)
        assert env.dim == 5
        assert env.triple().q == pytest.approx(0.7, abs=1e-10)

    def test_rejects_small_dimension(self):
        with pytest.raises(ValueError):
            embed(CoherenceTriple(1.0, 1.0, 1.0), dim=2)

    def test_infeasible_raises_with_slack(self):
        bad = CoherenceTriple(0.0, 1.0, 1.0, 0.0)
        with pytest.raises(InfeasibleTripleError) as err:
            embed(bad)
        assert err.value.slack == pytest.approx(-1.0)
        assert err.value.triple == bad

    def test_boundary_triple_embeds(self):
        # coherent case sits exactly on the feasibility boundary
        env = embed(CoherenceTriple(1.0, 1.0, 1.0, 0.0))
        assert env.triple().q == pytest.approx(1.0, abs=1e-10)

    @given(st.integers(min_value=0, max_value=49))
    def test_overlaps_invariant_under_global_unitary(self, seed):
        rng = np.random.default_rng(seed)
        t = random_feasible_triple(rng)
        env = embed(t, dim=3)
        u = random_unitary(rng, 3)
        # a common rotation of all three vectors leaves every overlap alone
        gh = np.vdot(u @ env.e_h, u @ env.e_psi)
        gv = np.vdot(u @ env.e_v, u @ env.e_psi)
        qq = np.vdot(u @ env.e_h, u @ env.e_v)
        assert gh == pytest.approx(env.g_h, abs=1e-12)
        assert gv == pytest.approx(env.g_v, abs=1e-12)
        assert qq == pytest.approx(env.q, abs=1e-12)


class TestQuadratic2D:
    def test_symmetric_couplings_minus_root(self):
        for m in (0.75, 0.85, 0.95, 1.0):
            roots = solve_q_2d(m, m)
            assert max(roots.accepted) == pytest.approx(1.0, abs=1e-12)
            assert min(roots.accepted) == pytest.approx(2.0 * m * m - 1.0, abs=1e-12)

    def test_minus_root_rejected_when_inadmissible(self):
        roots = solve_q_2d(0.5, 0.5)
        assert min(roots.rejected) == pytest.approx(-0.5, abs=1e-12)
        assert all(0.0 <= q <= 1.0 for q in roots.accepted)

    @given(unit, unit)
    def test_accepted_roots_have_zero_slack(self, mh, mv):
        roots = solve_q_2d(mh, mv)
        assert roots.accepted, "q_plus is always admissible"
        for q in roots.accepted:
            slack = CoherenceTriple(q, mh, mv, 0.0).slack
            assert abs(slack) < 1e-10


class TestFeasibleQInterval:
    @given(unit, unit, phases, unit)
    def test_membership_matches_slack_sign(self, mh, mv, dphi, q):
        interval = feasible_q_interval(mh, mv, dphi)
        slack = CoherenceTriple(q, mh, mv, dphi).slack
        inside = interval is not None and interval[0] <= q <= interval[1]
        if slack > 1e-9:
            assert inside
        if slack < -1e-9:
            assert not inside

    @given(unit, unit, phases)
    def test_endpoints_are_feasible(self, mh, mv, dphi):
        interval = feasible_q_interval(mh, mv, dphi)
        assume(interval is not None)
        lo, hi = interval
        assert lo <= hi
        for q in (lo, hi, 0.5 * (lo + hi)):
            assert CoherenceTriple(q, mh, mv, dphi).slack >= -1e-9


class TestRandomFeasibleTriple:
    def test_always_feasible_and_seeded(self):
        rng = np.random.default_rng(11)
        triples = [random_feasible_triple(rng) for _ in range(200)]
        assert all(t.is_feasible for t in triples)
        again = [random_feasible_triple(np.random.default_rng(11)) for _ in range(1)]
        assert again[0] == triples[0]

    def test_fixed_q_respected(self):
        rng = np.random.default_rng(12)
        for q in (0.0, 0.3, 1.0):
            t = random_feasible_triple(rng, q=q)
            assert t.q == q
            assert t.is_feasible
