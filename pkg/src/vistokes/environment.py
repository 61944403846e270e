"""Environment mode overlaps: coherence triples, feasibility and embeddings.

The undetected photon's H and V components couple to environment states e_H
and e_V, and the reference source emits into an environment state e_psi.
Observable quantities depend on the pairwise overlaps only:

    q      = <e_H|e_V>                 (real, >= 0 by phase convention)
    m_H    = |<e_H|e_psi>|
    m_V    = |<e_V|e_psi>|
    dphi   = arg<e_H|e_psi> - arg<e_V|e_psi>

A triple of overlaps is realizable by actual vectors iff its 3x3 Gram matrix
is positive semidefinite, which with unit diagonal reduces to the scalar
transitivity slack

    1 - (q^2 + m_H^2 + m_V^2) + 2 q m_H m_V cos(dphi) >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polarization import wrap_phase

FEASIBILITY_ATOL = 1e-12


class InfeasibleTripleError(ValueError):
    """Overlap triple admits no vector realization."""

    def __init__(self, triple: "CoherenceTriple", slack: float):
        self.triple = triple
        self.slack = slack
        super().__init__(
            f"coherence triple (q={triple.q}, m_h={triple.m_h}, m_v={triple.m_v}, "
            f"delta_phi={triple.delta_phi}) infeasible: slack {slack}"
        )


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class CoherenceTriple:
    """Overlap magnitudes (q, m_h, m_v) and relative phase delta_phi."""

    q: float
    m_h: float
    m_v: float
    delta_phi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _check_unit_interval("q", self.q))
        object.__setattr__(self, "m_h", _check_unit_interval("m_h", self.m_h))
        object.__setattr__(self, "m_v", _check_unit_interval("m_v", self.m_v))
        object.__setattr__(self, "delta_phi", wrap_phase(self.delta_phi))

    @property
    def slack(self) -> float:
        q, mh, mv = self.q, self.m_h, self.m_v
        return 1.0 - (q * q + mh * mh + mv * mv) + 2.0 * q * mh * mv * math.cos(self.delta_phi)

    @property
    def is_feasible(self) -> bool:
        return self.slack >= -FEASIBILITY_ATOL


@dataclass(frozen=True)
class FeasibilityCheck:
    feasible: bool
    slack: float


def check_feasible(triple: CoherenceTriple) -> FeasibilityCheck:
    """Transitivity check with the signed slack (negative means infeasible)."""
    slack = triple.slack
    return FeasibilityCheck(slack >= -FEASIBILITY_ATOL, slack)


def gram_matrix(triple: CoherenceTriple) -> np.ndarray:
    """Gram matrix of (e_H, e_V, e_psi) under the canonical phase convention.

    Phases: <e_H|e_V> real >= 0, <e_V|e_psi> real >= 0, so arg<e_H|e_psi> = delta_phi.
    """
    gh = triple.m_h * np.exp(1j * triple.delta_phi)
    gv = triple.m_v
    return np.array([
        [1.0, triple.q, gh],
        [triple.q, 1.0, gv],
        [np.conj(gh), gv, 1.0],
    ], dtype=complex)


@dataclass(frozen=True)
class EnvironmentVectors:
    """Explicit unit vectors (e_h, e_v, e_psi) in a common mode space."""

    e_h: np.ndarray
    e_v: np.ndarray
    e_psi: np.ndarray

    def __post_init__(self) -> None:
        vecs = []
        for name in ("e_h", "e_v", "e_psi"):
            v = np.array(getattr(self, name), dtype=complex).ravel()
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(f"{name} must be a unit vector within 1e-12")
            v.setflags(write=False)
            vecs.append(v)
            object.__setattr__(self, name, v)
        if len({v.size for v in vecs}) != 1:
            raise ValueError("environment vectors must share one dimension")
        hv = np.vdot(vecs[0], vecs[1])
        if abs(hv.imag) > 1e-12 or hv.real < -1e-12 or hv.real > 1.0 + 1e-12:
            raise ValueError("<e_h|e_v> must be real in [0, 1] (phase convention)")

    @property
    def dim(self) -> int:
        return self.e_h.size

    @property
    def q(self) -> float:
        return float(min(max(np.vdot(self.e_h, self.e_v).real, 0.0), 1.0))

    @property
    def g_h(self) -> complex:
        """<e_h|e_psi>, phase included."""
        return complex(np.vdot(self.e_h, self.e_psi))

    @property
    def g_v(self) -> complex:
        """<e_v|e_psi>, phase included."""
        return complex(np.vdot(self.e_v, self.e_psi))

    @property
    def m_h(self) -> float:
        return min(abs(self.g_h), 1.0)

    @property
    def m_v(self) -> float:
        return min(abs(self.g_v), 1.0)

    @property
    def delta_phi(self) -> float:
        gh, gv = self.g_h, self.g_v
        if abs(gh) == 0.0 or abs(gv) == 0.0:
            return 0.0
        return wrap_phase(float(np.angle(gh) - np.angle(gv)))

    def triple(self) -> CoherenceTriple:
        return CoherenceTriple(self.q, self.m_h, self.m_v, self.delta_phi)

    @classmethod
    def coherent(cls, dim: int = 3) -> "EnvironmentVectors":
        """Fully coherent environment: one shared mode, q = m_h = m_v = 1."""
        e0 = np.zeros(dim, dtype=complex)
        e0[0] = 1.0
        return cls(e0, e0.copy(), e0.copy())


def embed(triple: CoherenceTriple, dim: int = 3) -> EnvironmentVectors:
    """Realize a feasible triple as explicit vectors in C^dim (dim >= 3).

    The Gram matrix is factored through its eigendecomposition; eigenvalues in
    [-1e-12, 0) are boundary noise and are clamped to zero.
    """
    if dim < 3:
        raise ValueError("embedding dimension must be at least 3")
    slack = triple.slack
    if slack < -FEASIBILITY_ATOL:
        raise InfeasibleTripleError(triple, slack)
    g = gram_matrix(triple)
    vals, vecs = np.linalg.eigh(g)
    vals = np.clip(vals, 0.0, None)
    # Columns of sqrt(L) U^dagger have pairwise inner products equal to G.
    root = np.sqrt(vals)
    realization = [np.conj(vecs[i, :]) * root for i in range(3)]
    padded = [np.pad(v, (0, dim - 3)) for v in realization]
    return EnvironmentVectors(*padded)


@dataclass(frozen=True)
class QuadraticRoots:
    """Roots of the 2-mode consistency quadratic in q, split by admissibility."""

    accepted: tuple[float, ...]
    rejected: tuple[float, ...]


def solve_q_2d(m_h: float, m_v: float) -> QuadraticRoots:
    """Solve for q when the environment span is exactly two-dimensional.

    Zero slack at dphi = 0 gives q^2 - 2 m_h m_v q + (m_h^2 + m_v^2 - 1) = 0;
    the minus root is admissible only when m_h^2 + m_v^2 >= 1.
    """
    m_h = _check_unit_interval("m_h", m_h)
    m_v = _check_unit_interval("m_v", m_v)
    disc = (1.0 - m_h * m_h) * (1.0 - m_v * m_v)
    root = math.sqrt(max(disc, 0.0))
    q_plus = m_h * m_v + root
    q_minus = m_h * m_v - root
    accepted, rejected = [], []
    for q in dict.fromkeys((q_plus, q_minus)):  # deduplicate the disc == 0 case
        if -1e-12 <= q <= 1.0 + 1e-12:
            accepted.append(min(max(q, 0.0), 1.0))
        else:
            rejected.append(q)
    return QuadraticRoots(tuple(accepted), tuple(rejected))


def feasible_q_interval(m_h: float, m_v: float, delta_phi: float) -> tuple[float, float] | None:
    """Range of q compatible with (m_h, m_v, delta_phi), clipped to [0, 1]."""
    c = math.cos(delta_phi)
    disc = m_h * m_h * m_v * m_v * c * c + 1.0 - m_h * m_h - m_v * m_v
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    lo = max(m_h * m_v * c - root, 0.0)
    hi = min(m_h * m_v * c + root, 1.0)
    if hi < lo:
        return None
    return (lo, hi)


def random_feasible_triple(rng: np.random.Generator, q: float | None = None,
                           max_tries: int = 100_000) -> CoherenceTriple:
    """Draw a feasible triple; with q fixed, (m_h, m_v, dphi) are drawn around it.

    Sampling is seeded-deterministic but makes no uniformity claim over the
    feasible region.
    """
    if q is not None and q >= 1.0:
        # q = 1 collapses e_h onto e_v, forcing m_v = m_h and dphi = 0
        return CoherenceTriple(1.0, (m := rng.uniform()), m, 0.0)
    for _ in range(max_tries):
        if q is None:
            cand = CoherenceTriple(rng.uniform(), rng.uniform(), rng.uniform(),
                                   rng.uniform(0.0, 2.0 * math.pi))
            if cand.slack >= 0.0:
                return cand
            continue
        m_h = rng.uniform()
        dphi = rng.uniform(0.0, 2.0 * math.pi)
        c = math.cos(dphi)
        disc = (1.0 - q * q) * (1.0 - m_h * m_h) - q * q * m_h * m_h * (1.0 - c * c)
        if disc < 0.0:
            continue
        root = math.sqrt(disc)
        lo = max(q * m_h * c - root, 0.0)
        hi = min(q * m_h * c + root, 1.0)
        if hi < lo:
            continue
        cand = CoherenceTriple(q, m_h, rng.uniform(lo, hi), dphi)
        if cand.slack >= 0.0:
            return cand
    raise RuntimeError("no feasible triple found; check the fixed q")
