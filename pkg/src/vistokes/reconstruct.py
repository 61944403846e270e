"""State reconstruction from visibility Stokes parameters.

The data alone never determine the idler state: every visibility Stokes
vector is consistent with a ball of density matrices.  Each reconstruction
here therefore takes an explicit coherence scenario chosen by the caller:

  pure-coherent       fully coherent environment, state is pure, r = S
  hv-asymmetric       one polarization fully coherent (m_H = 1 or m_V = 1),
                      which forces q = m_V (resp. m_H) and delta_phi = 0
  symmetric-coupling  e_psi couples symmetrically to e_H and e_V, giving
                      s0 = (1 + q)/2
  unknown-environment no assumption; Monte-Carlo enumeration of consistent
                      states
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .environment import CoherenceTriple, embed, feasible_q_interval
from .linalg import DensityMatrix2
from .polarization import wrap_phase
from .stokes import BlochVector, VisibilityStokes

SCENARIO_GATE_TOL = 1e-6
BALL_EDGE_TOL = 1e-9


class Scenario(str, enum.Enum):
    PURE_COHERENT = "pure-coherent"
    HV_ASYMMETRIC = "hv-asymmetric"
    SYMMETRIC_COUPLING = "symmetric-coupling"
    UNKNOWN_ENVIRONMENT = "unknown-environment"


class ScenarioMismatchError(Exception):
    """The data violate a precondition of the requested scenario."""


class InfeasibleDataError(Exception):
    """The data cannot come from any state under the requested scenario."""


@dataclass(frozen=True)
class ReconstructionResult:
    """A reconstructed state with its scenario and diagnostics.

    ``q`` is the recovered environment overlap where the scenario determines
    it; ``q_indeterminate`` marks the cases where the data cannot constrain
    it (e.g. beta = 0 under hv-asymmetric).  ``residuals`` collects scenario
    specific diagnostics, all zero for exact single-experiment data.
    """

    rho: DensityMatrix2
    bloch: BlochVector
    scenario: Scenario
    q: float | None = None
    q_indeterminate: bool = False
    residuals: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        flat = []
        for entry in self.rho.entries.reshape(-1):
            flat.extend([float(entry.real), float(entry.imag)])
        return {
            "scenario": self.scenario.value,
            "density_matrix_re_im": flat,
            "bloch": {"x": self.bloch.x, "y": self.bloch.y, "z": self.bloch.z},
            "q": self.q,
            "q_indeterminate": self.q_indeterminate,
            "residuals": dict(self.residuals),
        }


def _bloch_or_raise(x: float, y: float, z: float) -> BlochVector:
    norm = math.sqrt(x * x + y * y + z * z)
    if norm > 1.0 + BALL_EDGE_TOL:
        raise InfeasibleDataError(
            f"derived Bloch vector has norm {norm}, outside the unit ball")
    if norm > 1.0:
        x, y, z = (v / norm for v in (x, y, z))
    return BlochVector(x, y, z)


def reconstruct_pure(vs: VisibilityStokes, tol: float = SCENARIO_GATE_TOL) -> ReconstructionResult:
    """Pure-coherent scenario: the visibility vector is the Bloch vector."""
    if abs(vs.s0 - 1.0) > tol:
        raise ScenarioMismatchError(
            f"s0 = {vs.s0} is not 1 within {tol}; data are not pure-coherent")
    norm = float(np.linalg.norm(vs.vector))
    if norm <= 0.0:
        raise InfeasibleDataError("zero visibility vector cannot be a pure state")
    x, y, z = (float(v) / norm for v in vs.vector)
    bloch = BlochVector(x, y, z)
    return ReconstructionResult(
        rho=bloch.density(),
        bloch=bloch,
        scenario=Scenario.PURE_COHERENT,
        q=1.0,
        residuals={"vector_rescale": abs(norm - 1.0)},
    )


def reconstruct_hv_asymmetric(
    vs: VisibilityStokes,
    which: str = "H",
    tol: float = SCENARIO_GATE_TOL,
) -> ReconstructionResult:
    """One fully coherent polarization: m_H = 1 (which="H") or m_V = 1 ("V").

    For m_H = 1 the Bloch vector is (sx, sy, sz + s0 - 1); feasibility forces
    the environment to satisfy q = m_V and delta_phi = 0, and q is recovered
    as sqrt(s0 - alpha^2)/beta.  The mirror case swaps the roles of H and V.
    """
    if which not in ("H", "V"):
        raise ValueError('which must be "H" or "V"')
    if which == "H":
        z = vs.sz + vs.s0 - 1.0
        weight_coh = (1.0 + z) / 2.0      # alpha^2, the coherent component
    else:
        z = vs.sz - vs.s0 + 1.0
        weight_coh = (1.0 - z) / 2.0      # beta^2
    if not -tol <= weight_coh <= 1.0 + tol:
        raise InfeasibleDataError(
            f"derived population {weight_coh} outside [0, 1]")
    weight_raw = weight_coh
    weight_coh = min(max(weight_coh, 0.0), 1.0)
    weight_env = 1.0 - weight_coh         # the polarization coupled to the env
    bloch = _bloch_or_raise(vs.sx, vs.sy, z)

    q: float | None
    q_indeterminate = False
    q_sq_num = vs.s0 - weight_coh
    if weight_env < 1e-12:
        q = None
        q_indeterminate = True
    else:
        if q_sq_num < -tol:
            raise InfeasibleDataError(
                f"s0 = {vs.s0} below the coherent population {weight_coh}")
        q = math.sqrt(max(q_sq_num, 0.0) / weight_env)
        if q > 1.0 + tol:
            raise InfeasibleDataError(f"recovered q = {q} exceeds 1")
        q = min(q, 1.0)
    return ReconstructionResult(
        rho=bloch.density(),
        bloch=bloch,
        scenario=Scenario.HV_ASYMMETRIC,
        q=q,
        q_indeterminate=q_indeterminate,
        residuals={"population_clip": abs(weight_raw - weight_coh)},
    )


def reconstruct_symmetric(
    vs: VisibilityStokes,
    tol: float = SCENARIO_GATE_TOL,
) -> ReconstructionResult:
    """Symmetric coupling: s0 = (1 + q)/2, Bloch vector = (q/s0) (sx, sy, sz).

    The rescaling recovers x and y exactly but maps the z component to
    q (alpha^2 - beta^2) rather than alpha^2 - beta^2; the difference is
    surfaced as the z_rescale residual together with the unscaled sz/s0.
    """
    if vs.s0 < 0.5 - BALL_EDGE_TOL:
        raise ScenarioMismatchError(
            f"s0 = {vs.s0} < 1/2 is impossible under symmetric coupling (q >= 0)")
    q = min(max(2.0 * vs.s0 - 1.0, 0.0), 1.0)
    scale = q / vs.s0
    x, y, z = (scale * float(v) for v in vs.vector)
    bloch = _bloch_or_raise(x, y, z)
    z_unscaled = float(vs.sz / vs.s0)
    return ReconstructionResult(
        rho=bloch.density(),
        bloch=bloch,
        scenario=Scenario.SYMMETRIC_COUPLING,
        q=q,
        residuals={
            "z_unscaled": z_unscaled,
            "z_rescale": abs(z - z_unscaled),
        },
    )


@dataclass(frozen=True)
class ConsistentSample:
    """One environment + state pair reproducing the target visibilities."""

    rho: DensityMatrix2
    bloch: BlochVector
    alpha: float
    beta: float
    xi: float
    triple: CoherenceTriple


def _forward_visibility_stokes(alpha, beta, xi, env) -> tuple[float, float, float, float]:
    """Visibility Stokes of a prep (alpha, beta, xi) in environment env, P=T=1."""
    a = alpha * env.g_h
    b = beta * np.exp(-1j * xi) * env.g_v
    s0 = (alpha * env.m_h)**2 + (beta * env.m_v)**2
    sx = 2.0 * (np.conj(a) * b).real
    sy = 2.0 * (np.conj(a) * b * 1j).real
    sz = (alpha * env.m_h)**2 - (beta * env.m_v)**2
    return float(s0), float(sx), float(sy), float(sz)


def enumerate_consistent_states(
    vs: VisibilityStokes,
    samples: int = 100,
    seed=None,
    match_tol: float = 1e-9,
    env_dim: int = 3,
) -> list[ConsistentSample]:
    """Monte-Carlo enumeration of states consistent with vs, no assumptions.

    Each sample draws a feasible environment and a prep that together
    reproduce the target parameters; the pair is kept only after a forward
    check through an explicit environment embedding.  Inputs violating the
    single-experiment norm identity beyond match_tol yield no samples.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    s0, sx, sy, sz = vs.s0, vs.sx, vs.sy, vs.sz
    out: list[ConsistentSample] = []
    max_tries = 1000 * samples
    tries = 0

    if s0 >= 1.0 - BALL_EDGE_TOL:
        pure = reconstruct_pure(vs, tol=max(1e-6, 2.0 * BALL_EDGE_TOL))
        triple = CoherenceTriple(1.0, 1.0, 1.0, 0.0)
        alpha = math.sqrt((1.0 + pure.bloch.z) / 2.0)
        beta = math.sqrt(max(1.0 - alpha**2, 0.0))
        xi = wrap_phase(math.atan2(pure.bloch.y, pure.bloch.x))
        sample = ConsistentSample(pure.rho, pure.bloch, alpha, beta, xi, triple)
        return [sample] * samples

    while len(out) < samples and tries < max_tries:
        tries += 1
        if s0 <= 1e-12:
            # decoupled environment: every state is consistent
            alpha_sq = rng.uniform(0.0, 1.0)
            alpha, beta = math.sqrt(alpha_sq), math.sqrt(1.0 - alpha_sq)
            xi = rng.uniform(0.0, 2.0 * math.pi)
            m_h = m_v = 0.0
            delta_phi = 0.0
            q = rng.uniform(0.0, 1.0)
        else:
            lo = math.sqrt((s0 + sz) / (2.0 - s0 + sz)) if s0 + sz > 0.0 else 0.0
            m_h = rng.uniform(lo, 1.0)
            if m_h < 1e-9:
                continue
            alpha_sq = (s0 + sz) / (2.0 * m_h**2)
            if not -1e-12 <= alpha_sq <= 1.0 + 1e-12:
                continue
            alpha_sq = min(max(alpha_sq, 0.0), 1.0)
            beta_sq = 1.0 - alpha_sq
            alpha, beta = math.sqrt(alpha_sq), math.sqrt(beta_sq)
            if beta_sq < 1e-12:
                m_v = 0.0
            else:
                m_v_sq = (s0 - sz) / (2.0 * beta_sq)
                if m_v_sq > 1.0 + 1e-9:
                    continue
                m_v = math.sqrt(min(m_v_sq, 1.0))
            delta_phi = rng.uniform(0.0, 2.0 * math.pi)
            xi = wrap_phase(math.atan2(sy, sx) - delta_phi)
            interval = feasible_q_interval(m_h, m_v, delta_phi)
            if interval is None:
                continue
            q_lo, q_hi = interval
            q = rng.uniform(q_lo, q_hi)
        triple = CoherenceTriple(q, m_h, m_v, delta_phi)
        env = embed(triple, dim=env_dim)
        got = _forward_visibility_stokes(alpha, beta, xi, env)
        if max(abs(g - t) for g, t in zip(got, (s0, sx, sy, sz))) > match_tol:
            continue
        x = 2.0 * alpha * beta * q * math.cos(xi)
        y = 2.0 * alpha * beta * q * math.sin(xi)
        z = alpha**2 - beta**2
        bloch = BlochVector(x, y, z)
        out.append(ConsistentSample(
            rho=bloch.density(), bloch=bloch,
            alpha=alpha, beta=beta, xi=xi, triple=triple,
        ))
    if not out:
        raise InfeasibleDataError(
            "no feasible environment reproduces the requested parameters; "
            "check the norm identity of the input")
    return out
