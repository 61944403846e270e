"""State-vector model of the imbalanced induced-coherence interferometer.

Two sources can emit one photon pair each.  Source 1 emits a signal photon
into path a with polarization (delta, epsilon, zeta) and an idler into path
b' whose H/V components couple to environment modes e_H/e_V.  The idler
passes a lossy element (amplitude transmission T, reflected branch w), then a
dichroic mirror relabels its path to c.  Source 2, pumped with relative
strength P, emits a polarization-entangled pair (|HH> + e^{i theta}|VV>)/sqrt(2)
whose idler also occupies path c but couples to the environment mode e_psi.
The two signal paths interfere on a polarization-blind symmetric beam splitter
swept by a pump phase phi; detection projects one output port onto a
polarization analysis state.

Conventions fixed here and relied on by the analytic forms:
  * joint factor order (signal path, signal pol, idler path, idler pol,
    environment), row-major with path slowest;
  * the beam splitter is the Hadamard matrix on the signal path qubit, so the
    upper (detected) port is the antisymmetric combination and the
    source-1 x source-2 cross amplitude carries the factor -1/2;
  * the dichroic mirror is the identity relabeling b' -> c.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .environment import EnvironmentVectors
from .linalg import OperatorMatrix, StateVector, partial_trace
from .polarization import (
    BasisVisibilities,
    PolarizationState,
    basis_ket,
    conjugate_basis_state,
    wrap_phase,
)

PORT_LOWER = 0
PORT_UPPER = 1

AXIS_SIGNAL_PATH = 0
AXIS_SIGNAL_POL = 1
AXIS_IDLER_PATH = 2
AXIS_IDLER_POL = 3
AXIS_ENVIRONMENT = 4

# Signal path (a, b) -> output ports (lower, upper); upper row is (1, -1)/sqrt(2).
BS_MATRIX = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
BS_MATRIX.setflags(write=False)

_DARK_ATOL = 1e-14


@dataclass(frozen=True)
class SignalPrep:
    """Source-1 signal polarization delta|H> + epsilon e^{i zeta}|V>."""

    delta: float
    epsilon: float
    zeta: float = 0.0

    def __post_init__(self) -> None:
        if self.delta < 0.0 or self.epsilon < 0.0:
            raise ValueError("signal amplitudes must be non-negative")
        if abs(self.delta**2 + self.epsilon**2 - 1.0) > 1e-12:
            raise ValueError("delta^2 + epsilon^2 must equal 1 within 1e-12")
        object.__setattr__(self, "zeta", wrap_phase(self.zeta))

    @classmethod
    def unbiased(cls, zeta: float = 0.0) -> "SignalPrep":
        """Equal-weight prep, mutually unbiased to H/V for any zeta."""
        s = 1.0 / math.sqrt(2.0)
        return cls(s, s, zeta)

    @classmethod
    def from_ket(cls, ket: np.ndarray) -> "SignalPrep":
        """Prep from an arbitrary unit 2-vector, dropping the global phase."""
        ket = basis_ket(ket)
        delta, epsilon = abs(ket[0]), abs(ket[1])
        zeta = float(np.angle(ket[1]) - np.angle(ket[0])) if epsilon > 0.0 else 0.0
        return cls(delta, epsilon, zeta)

    def ket(self) -> np.ndarray:
        return np.array([self.delta, self.epsilon * cmath.exp(1j * self.zeta)])


@dataclass(frozen=True)
class IdlerPrep:
    """Source-1 idler polarization (alpha, beta, xi) and its environment coupling."""

    alpha: float
    beta: float
    xi: float
    env: EnvironmentVectors

    def __post_init__(self) -> None:
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("idler amplitudes must be non-negative")
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise ValueError("alpha^2 + beta^2 must equal 1 within 1e-12")
        object.__setattr__(self, "xi", wrap_phase(self.xi))

    def polarization(self) -> PolarizationState:
        return PolarizationState(self.alpha, self.beta, self.xi)

    def joint_ket(self) -> np.ndarray:
        """Polarization (x) environment vector: alpha|H>e_H + beta e^{i xi}|V>e_V."""
        out = np.zeros(2 * self.env.dim, dtype=complex)
        out[: self.env.dim] = self.alpha * self.env.e_h
        out[self.env.dim:] = self.beta * cmath.exp(1j * self.xi) * self.env.e_v
        return out

    def reduced_density(self):
        """Polarization state after tracing the environment: coherences damped by q."""
        return self.polarization().density(self.env.q)


@dataclass(frozen=True)
class SetupConfig:
    """Full interferometer configuration."""

    pump_ratio: float
    transmission: float
    signal: SignalPrep
    idler: IdlerPrep
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.pump_ratio < 0.0:
            raise ValueError("pump ratio P must be non-negative")
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError("transmission T must lie in [0, 1]")
        object.__setattr__(self, "theta", wrap_phase(self.theta))

    @property
    def normalization(self) -> float:
        """Overall amplitude normalization 1/sqrt(1 + P^2)."""
        return 1.0 / math.sqrt(1.0 + self.pump_ratio**2)

    def with_signal(self, prep: SignalPrep) -> "SetupConfig":
        return replace(self, signal=prep)


def unbiased_prep(k, partner=None) -> SignalPrep:
    """Signal prep mutually unbiased to the basis {k, partner}.

    Uses (|k> + |k_perp>)/sqrt(2); any such state gives the same fringe
    visibility for both basis states, only shifting the fringe phase.
    """
    ket = basis_ket(k)
    if partner is None:
        perp = np.array([-np.conj(ket[1]), np.conj(ket[0])])
    else:
        perp = basis_ket(partner)
        if abs(np.vdot(ket, perp)) > 1e-12:
            raise ValueError("basis states must be orthogonal")
    return SignalPrep.from_ket((ket + perp) / math.sqrt(2.0))


class _Components(NamedTuple):
    psi_s: np.ndarray       # signal (path(x)pol) after the beam splitter, dim 4
    psi_i: np.ndarray       # source-1 idler on path c, (path(x)pol(x)env)
    psi_w: np.ndarray       # loss branch on path w, same factors
    psi_two: np.ndarray     # source-2 pair, full joint vector
    dims: tuple[int, int, int, int, int]


def _components(cfg: SetupConfig) -> _Components:
    d = cfg.idler.env.dim
    dims = (2, 2, 2, 2, d)

    path_a = np.array([1.0, 0.0], dtype=complex)
    path_b = np.array([0.0, 1.0], dtype=complex)
    path_c = path_a
    path_w = path_b

    psi_s = np.kron(BS_MATRIX @ path_a, cfg.signal.ket())

    pol_env = cfg.idler.joint_ket()
    psi_i = np.kron(path_c, pol_env)
    psi_w = np.kron(path_w, pol_env)

    # (|H H> + e^{i theta}|V V>)/sqrt(2) with the pair idler on path c, env e_psi.
    ph = cmath.exp(1j * cfg.theta)
    ket_h = np.array([1.0, 0.0], dtype=complex)
    ket_v = np.array([0.0, 1.0], dtype=complex)
    e_psi = cfg.idler.env.e_psi
    s = 1.0 / math.sqrt(2.0)
    psi_two = s * (
        np.kron(np.kron(BS_MATRIX @ path_b, ket_h), np.kron(path_c, np.kron(ket_h, e_psi)))
        + ph * np.kron(np.kron(BS_MATRIX @ path_b, ket_v), np.kron(path_c, np.kron(ket_v, e_psi)))
    )
    return _Components(psi_s, psi_i, psi_w, psi_two, dims)


def _joint_labels(d: int):
    return (("a", "b"), ("H", "V"), ("c", "w"), ("H", "V"), tuple(f"e{i}" for i in range(d)))


def build_state(cfg: SetupConfig, phi: float) -> StateVector:
    """Normalized pre-measurement state at pump phase phi.

    The loss branch and both source terms are kept explicitly; nothing is
    post-selected away.
    """
    comp = _components(cfg)
    p, t = cfg.pump_ratio, cfg.transmission
    refl = math.sqrt(max(1.0 - t * t, 0.0))
    ph = cmath.exp(1j * phi)
    amps = cfg.normalization * (
        t * ph * np.kron(comp.psi_s, comp.psi_i)
        + refl * ph * np.kron(comp.psi_s, comp.psi_w)
        + p * comp.psi_two
    )
    return StateVector(amps, comp.dims, _joint_labels(cfg.idler.env.dim))


def _project_signal(joint: np.ndarray, port: int, ket: np.ndarray) -> np.ndarray:
    """<port, ket|_signal applied to a joint vector; returns the idler-space part."""
    t = joint.reshape(2, 2, -1)
    return np.tensordot(np.conj(ket), t[port], axes=(0, 0))


@dataclass(frozen=True)
class InterferenceCoefficients:
    """Constant term c and interference amplitude z of one detection fringe.

    The detection probability is N^2 (c + 2 P T Re(e^{-i phi} z)).
    """

    c: float
    z: complex


def coefficients(cfg: SetupConfig, k, port: int = PORT_UPPER) -> InterferenceCoefficients:
    """Fringe coefficients for analysis state k on the given output port."""
    if port not in (PORT_LOWER, PORT_UPPER):
        raise ValueError("port must be 0 (lower) or 1 (upper)")
    ket = basis_ket(k)
    comp = _components(cfg)
    p, t = cfg.pump_ratio, cfg.transmission

    amp_s = complex(np.conj(ket) @ comp.psi_s.reshape(2, 2)[port])
    rest = _project_signal(comp.psi_two, port, ket)

    c1 = abs(amp_s) ** 2
    c2 = float(np.vdot(rest, rest).real)
    c = c1 + p * p * c2
    z = complex(np.conj(amp_s) * np.vdot(comp.psi_i, rest))
    if c < 2.0 * p * t * abs(z) - 1e-12:
        raise ValueError("interference amplitude exceeds the constant term")
    return InterferenceCoefficients(c, z)


def detection_probability(cfg: SetupConfig, k, phi, port: int = PORT_UPPER):
    """Click probability for analysis state k at pump phase phi (scalar or array)."""
    co = coefficients(cfg, k, port)
    p, t = cfg.pump_ratio, cfg.transmission
    phi_arr = np.asarray(phi, dtype=float)
    osc = co.z.real * np.cos(phi_arr) + co.z.imag * np.sin(phi_arr)
    out = cfg.normalization**2 * (co.c + 2.0 * p * t * osc)
    return float(out) if np.isscalar(phi) or phi_arr.ndim == 0 else out


def _visibility_from(cfg: SetupConfig, co: InterferenceCoefficients) -> float:
    if co.c <= _DARK_ATOL:
        return math.nan
    return 2.0 * cfg.pump_ratio * cfg.transmission * abs(co.z) / co.c


def simulated_visibility(cfg: SetupConfig, k, port: int = PORT_UPPER) -> float:
    """Exact fringe visibility (max-min)/(max+min); NaN on a dark port."""
    return _visibility_from(cfg, coefficients(cfg, k, port))


def analytic_visibilities(cfg: SetupConfig) -> BasisVisibilities:
    """Closed-form visibilities of the six named fringes, one common prep.

    Valid for a fully coherent environment (q = m_h = m_v = 1).  Dark ports,
    which need P = 0 together with an orthogonal prep, come out as NaN.
    """
    tr = cfg.idler.env.triple()
    if abs(tr.q - 1.0) > 1e-9 or abs(tr.m_h - 1.0) > 1e-9 or abs(tr.m_v - 1.0) > 1e-9:
        raise ValueError("closed pure-case forms need a fully coherent environment; "
                         "use analytic_visibilities_mixed")
    p, t = cfg.pump_ratio, cfg.transmission
    dl, ep, zeta = cfg.signal.delta, cfg.signal.epsilon, cfg.signal.zeta
    al, be = cfg.idler.alpha, cfg.idler.beta
    xr = cfg.idler.xi - cfg.theta
    s2 = math.sqrt(2.0)

    def _ratio(num: float, den: float) -> float:
        return math.nan if den <= 4.0 * _DARK_ATOL else num / den

    vh = _ratio(2.0 * s2 * dl * p * t * al, p * p + 2.0 * dl * dl)
    vv = _ratio(2.0 * s2 * ep * p * t * be, p * p + 2.0 * ep * ep)

    def _da(sign: float) -> float:
        bias = 2.0 * dl * ep * math.cos(zeta)
        den = 1.0 + p * p + sign * bias
        pref = _ratio(2.0 * p * t * math.sqrt(max(1.0 + sign * bias, 0.0)), den)
        return pref * math.sqrt(max(1.0 + sign * 2.0 * al * be * math.cos(xr), 0.0) / 2.0)

    def _lr(sign: float) -> float:
        bias = 2.0 * dl * ep * math.sin(zeta)
        den = 1.0 + p * p - sign * bias
        pref = _ratio(2.0 * p * t * math.sqrt(max(1.0 - sign * bias, 0.0)), den)
        return pref * math.sqrt(max(1.0 + sign * 2.0 * al * be * math.sin(xr), 0.0) / 2.0)

    return BasisVisibilities(h=vh, v=vv, d=_da(1.0), a=_da(-1.0), l=_lr(1.0), r=_lr(-1.0))


def analytic_visibilities_mixed(cfg: SetupConfig) -> BasisVisibilities:
    """Closed-form visibilities under per-basis unbiased preps, any environment.

    Each fringe k sees V_k = (2P/(1+P^2)) T |<psi_idler| (|k*> (x) |e_psi>)|, which
    at P = 1 is the plain overlap form.  The zeta choice is immaterial here
    because each pair is measured with a prep unbiased to it.
    """
    p, t = cfg.pump_ratio, cfg.transmission
    pref = 2.0 * p / (1.0 + p * p) * t
    al, be, xi = cfg.idler.alpha, cfg.idler.beta, cfg.idler.xi
    env = cfg.idler.env
    a = al * env.g_h
    b = be * cmath.exp(-1j * (xi - cfg.theta)) * env.g_v
    s2 = math.sqrt(2.0)
    return BasisVisibilities(
        h=pref * al * env.m_h,
        v=pref * be * env.m_v,
        d=pref * abs(a + b) / s2,
        a=pref * abs(a - b) / s2,
        l=pref * abs(a + 1j * b) / s2,
        r=pref * abs(a - 1j * b) / s2,
    )


def post_measurement_state(cfg: SetupConfig, phi: float = 0.0) -> OperatorMatrix:
    """Idler state (path (x) polarization) after tracing signal and environment.

    Independent of phi: the two signal paths stay orthogonal through the beam
    splitter, so no cross term survives the signal trace.
    """
    rho = build_state(cfg, phi).outer()
    return partial_trace(rho, keep=(AXIS_IDLER_PATH, AXIS_IDLER_POL))


def post_measurement_closed_form(cfg: SetupConfig) -> OperatorMatrix:
    """Closed form of the traced idler state, path (x) polarization.

    The source-1 amplitude splits over paths c and w as (T, sqrt(1-T^2));
    because both carry the pump phase, the c/w cross block survives the trace
    with weight T sqrt(1-T^2).  Source 2 adds the maximally mixed polarization
    on path c with weight P^2.  The source-1 x source-2 cross terms die with
    the orthogonal signal paths.
    """
    p, t = cfg.pump_ratio, cfg.transmission
    refl = math.sqrt(max(1.0 - t * t, 0.0))
    rho_pol = cfg.idler.reduced_density().entries
    branch = np.array([[t * t, t * refl], [t * refl, refl * refl]], dtype=complex)
    path_c = np.zeros((2, 2), dtype=complex)
    path_c[0, 0] = 1.0
    entries = cfg.normalization**2 * (
        np.kron(branch, rho_pol) + p * p * np.kron(path_c, np.eye(2) / 2.0)
    )
    return OperatorMatrix(entries, (2, 2), (("c", "w"), ("H", "V")))
