"""Visibility measurement operators on the idler polarization (x) environment.

The squared fringe visibility in basis k is the expectation, in the idler's
pre-measurement joint state, of V_k_hat = T^2 |k*><k*| (x) |e_psi><e_psi|,
where k* is the componentwise complex conjugate of k.  Their differences and
sums give operators whose expectations are the visibility Stokes parameters;
at T = 1 every one of them, including the incoherence complement, is a
projector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .environment import EnvironmentVectors
from .linalg import OperatorMatrix, StateVector, expectation
from .polarization import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    basis_ket,
    conjugate_basis_state,
)

__all__ = [
    "VisibilityOperator",
    "visibility_operator",
    "incoherence_operator",
    "StokesOperators",
    "stokes_operators",
    "conjugate_basis_state",
]


@dataclass(frozen=True)
class VisibilityOperator:
    """T^2-weighted projector whose expectation is a squared visibility."""

    matrix: OperatorMatrix
    label: str
    transmission: float

    def expectation(self, psi: StateVector) -> float:
        return expectation(self.matrix, psi)


def _env_projector(env: EnvironmentVectors) -> np.ndarray:
    return np.outer(env.e_psi, np.conj(env.e_psi))


def _labels(env: EnvironmentVectors):
    return (("H", "V"), tuple(f"e{i}" for i in range(env.dim)))


def visibility_operator(k, env: EnvironmentVectors, transmission: float = 1.0,
                        label: str | None = None) -> VisibilityOperator:
    """V_k_hat = T^2 |k*><k*| (x) |e_psi><e_psi| on polarization (x) environment."""
    if not 0.0 <= transmission <= 1.0:
        raise ValueError("transmission must lie in [0, 1]")
    ket = conjugate_basis_state(basis_ket(k))
    pol = np.outer(ket, np.conj(ket))
    entries = transmission**2 * np.kron(pol, _env_projector(env))
    mat = OperatorMatrix(entries, (2, env.dim), _labels(env))
    name = label if label is not None else (k if isinstance(k, str) else "custom")
    return VisibilityOperator(matrix=mat, label=name, transmission=transmission)


def incoherence_operator(env: EnvironmentVectors, transmission: float = 1.0) -> VisibilityOperator:
    """The complement 1 - S0_hat; its expectation is the incoherence 1 - S0."""
    eye = np.eye(2 * env.dim, dtype=complex)
    s0 = transmission**2 * np.kron(IDENTITY_2, _env_projector(env))
    mat = OperatorMatrix(eye - s0, (2, env.dim), _labels(env))
    return VisibilityOperator(matrix=mat, label="incoherence", transmission=transmission)


@dataclass(frozen=True)
class StokesOperators:
    """The four visibility Stokes operators S0_hat, Sx_hat, Sy_hat, Sz_hat."""

    s0: OperatorMatrix
    sx: OperatorMatrix
    sy: OperatorMatrix
    sz: OperatorMatrix

    def expectations(self, psi: StateVector) -> tuple[float, float, float, float]:
        return (expectation(self.s0, psi), expectation(self.sx, psi),
                expectation(self.sy, psi), expectation(self.sz, psi))


def stokes_operators(env: EnvironmentVectors, transmission: float = 1.0) -> StokesOperators:
    """S_a_hat = T^2 (sigma_a (x) |e_psi><e_psi|), with sigma_0 the identity."""
    if not 0.0 <= transmission <= 1.0:
        raise ValueError("transmission must lie in [0, 1]")
    proj = _env_projector(env)
    t2 = transmission**2
    labels = _labels(env)

    def _op(pauli: np.ndarray) -> OperatorMatrix:
        return OperatorMatrix(t2 * np.kron(pauli, proj), (2, env.dim), labels)

    return StokesOperators(
        s0=_op(np.asarray(IDENTITY_2)),
        sx=_op(np.asarray(PAULI_X)),
        sy=_op(np.asarray(PAULI_Y)),
        sz=_op(np.asarray(PAULI_Z)),
    )


def idler_joint_state(alpha: float, beta: float, xi: float,
                      env: EnvironmentVectors) -> StateVector:
    """The idler polarization (x) environment ket the operators act on."""
    amps = np.zeros(2 * env.dim, dtype=complex)
    amps[: env.dim] = alpha * env.e_h
    amps[env.dim:] = beta * np.exp(1j * xi) * env.e_v
    if abs(alpha**2 + beta**2 - 1.0) > 1e-12:
        raise ValueError("alpha^2 + beta^2 must equal 1")
    return StateVector(amps, (2, env.dim), _labels(env))
