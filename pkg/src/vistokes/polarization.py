"""Polarization-qubit constants and the (alpha, beta, xi) pure-state parametrization.

Component convention: kets are (H-amplitude, V-amplitude).  The circular pair
is fixed so that the fringe labeled L/R on the detected photon reports the
partner photon's sigma_y component with the conventional sign, i.e.
S_y = V_L^2 - V_R^2 equals Tr(sigma_y rho) of the undetected qubit.  With the
textbook sigma_y below that requires L = (|H> - i|V>)/sqrt(2); componentwise
conjugation then swaps L and R while fixing H, V, D, A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix2

TWO_PI = 2.0 * math.pi

_SQ2 = 1.0 / math.sqrt(2.0)

KET_H = np.array([1.0, 0.0], dtype=complex)
KET_V = np.array([0.0, 1.0], dtype=complex)
KET_D = np.array([_SQ2, _SQ2], dtype=complex)
KET_A = np.array([_SQ2, -_SQ2], dtype=complex)
KET_L = np.array([_SQ2, -1j * _SQ2], dtype=complex)
KET_R = np.array([_SQ2, 1j * _SQ2], dtype=complex)

BASIS_VECTORS: dict[str, np.ndarray] = {
    "H": KET_H, "V": KET_V, "D": KET_D, "A": KET_A, "L": KET_L, "R": KET_R,
}
BASIS_LABELS: tuple[str, ...] = ("H", "V", "D", "A", "L", "R")
BASIS_PAIRS: tuple[tuple[str, str], ...] = (("H", "V"), ("D", "A"), ("L", "R"))

# Label of the componentwise conjugate of each analysis state.
CONJUGATE_LABEL: dict[str, str] = {"H": "H", "V": "V", "D": "D", "A": "A", "L": "R", "R": "L"}

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

for _v in BASIS_VECTORS.values():
    _v.setflags(write=False)
for _m in (PAULI_X, PAULI_Y, PAULI_Z, IDENTITY_2):
    _m.setflags(write=False)


def wrap_phase(x: float) -> float:
    """Map an angle to [0, 2*pi)."""
    out = math.fmod(float(x), TWO_PI)
    if out < 0.0:
        out += TWO_PI
    return 0.0 if out == TWO_PI else out


def conjugate_basis_state(k: np.ndarray) -> np.ndarray:
    """Componentwise complex conjugate in the H/V representation."""
    k = np.asarray(k, dtype=complex).ravel()
    if k.size != 2:
        raise ValueError("polarization ket must have two components")
    return np.conj(k)


def basis_ket(k: "str | np.ndarray") -> np.ndarray:
    """Resolve a basis label or explicit 2-vector to a unit ket."""
    if isinstance(k, str):
        try:
            return BASIS_VECTORS[k]
        except KeyError:
            raise ValueError(f"unknown basis label {k!r}; expected one of {BASIS_LABELS}") from None
    v = np.asarray(k, dtype=complex).ravel()
    if v.size != 2:
        raise ValueError("polarization ket must have two components")
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("polarization ket must be normalized")
    return v


@dataclass(frozen=True)
class PolarizationState:
    """Pure qubit alpha|H> + beta e^{i xi}|V> with alpha, beta >= 0."""

    alpha: float
    beta: float
    xi: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("amplitudes must be non-negative")
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise ValueError("alpha^2 + beta^2 must equal 1 within 1e-12")
        object.__setattr__(self, "xi", wrap_phase(self.xi))

    @classmethod
    def from_ket(cls, ket: np.ndarray) -> "PolarizationState":
        """Strip the global phase: H amplitude made real non-negative."""
        v = np.asarray(ket, dtype=complex).ravel()
        if v.size != 2 or abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("expected a normalized 2-component ket")
        alpha, beta = abs(v[0]), abs(v[1])
        ph_h = np.angle(v[0]) if alpha > 0.0 else 0.0
        ph_v = np.angle(v[1]) if beta > 0.0 else 0.0
        return cls(alpha, beta, wrap_phase(ph_v - ph_h))

    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta * np.exp(1j * self.xi)], dtype=complex)

    def density(self, q: float = 1.0) -> DensityMatrix2:
        """Density matrix after contact with an environment of H/V overlap q.

        q = 1 reproduces the pure projector; q < 1 damps the coherences only.
        """
        if not 0.0 <= q <= 1.0 + 1e-12:
            raise ValueError("overlap q must lie in [0, 1]")
        off = self.alpha * self.beta * q * np.exp(-1j * self.xi)
        return DensityMatrix2(np.array([
            [self.alpha**2, off],
            [np.conj(off), self.beta**2],
        ]))


@dataclass(frozen=True)
class BasisVisibilities:
    """Fringe visibilities for the six named analysis states.

    NaN marks a dark port (no mean signal, visibility undefined).
    """

    h: float
    v: float
    d: float
    a: float
    l: float
    r: float

    def as_dict(self) -> dict[str, float]:
        return {"H": self.h, "V": self.v, "D": self.d, "A": self.a, "L": self.l, "R": self.r}

    def pair_sums(self) -> tuple[float, float, float]:
        """V_k^2 + V_kperp^2 for the three conjugate pairs."""
        return (self.h**2 + self.v**2, self.d**2 + self.a**2, self.l**2 + self.r**2)

    def any_undefined(self) -> bool:
        return any(math.isnan(x) for x in (self.h, self.v, self.d, self.a, self.l, self.r))
