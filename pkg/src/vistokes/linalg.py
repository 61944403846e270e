"""Dense complex linear algebra for small multipartite Hilbert spaces.

Everything here is plain numpy on explicitly-dimensioned tensor factors.
State vectors and operators carry their factor dimensions (and optional
per-factor basis labels) so that tensor products, partial traces and
index arithmetic stay auditable.  Basis ordering is row-major with the
first factor slowest.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

NORM_ATOL = 1e-12
HERM_ATOL = 1e-12

Labels = tuple[tuple[str, ...], ...]


class DimensionError(ValueError):
    """Shape or factor-dimension mismatch."""


class NonHermitianError(ValueError):
    """Expectation value requested for a non-Hermitian operator."""


class InvalidDensityMatrixError(ValueError):
    """Matrix fails Hermiticity, unit-trace or positivity checks."""


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if shape is not None:
        arr = arr.reshape(shape)
    arr.setflags(write=False)
    return arr


def _check_labels(labels: Labels | None, dims: tuple[int, ...]) -> None:
    if labels is None:
        return
    if len(labels) != len(dims):
        raise DimensionError("one label tuple per tensor factor required")
    for names, d in zip(labels, dims):
        if len(names) != d:
            raise DimensionError(f"factor of dimension {d} got {len(names)} labels")


@dataclass(frozen=True)
class StateVector:
    """Pure state (or sub-normalized branch) over a product of factors."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    labels: Labels | None = None

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise DimensionError("factor dimensions must be positive")
        if amps.size != prod(dims):
            raise DimensionError(f"{amps.size} amplitudes for dims {dims}")
        _check_labels(self.labels, dims)
        nrm = float(np.linalg.norm(amps))
        if nrm > 1.0 + NORM_ATOL:
            raise ValueError(f"state norm {nrm} exceeds 1 (super-normalized)")
        object.__setattr__(self, "amplitudes", _frozen_array(amps))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / nrm, self.dims, self.labels)

    def inner(self, other: "StateVector") -> complex:
        """<self|other> with conjugation on self."""
        if self.dims != other.dims:
            raise DimensionError(f"dims {self.dims} != {other.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def reshaped(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def outer(self) -> "OperatorMatrix":
        """Rank-one operator |self><self|."""
        m = np.outer(self.amplitudes, np.conj(self.amplitudes))
        return OperatorMatrix(m, self.dims, self.labels)

    def basis_labels(self) -> list[tuple[str, ...]]:
        """Enumerate product basis labels in amplitude order."""
        if self.labels is None:
            raise ValueError("state carries no labels")
        out: list[tuple[str, ...]] = [()]
        for names in self.labels:
            out = [prefix + (n,) for prefix in out for n in names]
        return out


@dataclass(frozen=True)
class OperatorMatrix:
    """Square operator over a product of factors. Flags are checked, not assumed."""

    entries: np.ndarray
    dims: tuple[int, ...]
    labels: Labels | None = None

    def __post_init__(self) -> None:
        mat = np.asarray(self.entries, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        n = prod(dims)
        if mat.shape != (n, n):
            raise DimensionError(f"entries shape {mat.shape} but dims {dims} need {(n, n)}")
        _check_labels(self.labels, dims)
        object.__setattr__(self, "entries", _frozen_array(mat))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.dims, self.labels)

    def is_hermitian(self, atol: float = HERM_ATOL) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0.0, atol=atol))

    def is_unitary(self, atol: float = HERM_ATOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.allclose(self.entries.conj().T @ self.entries, eye, rtol=0.0, atol=atol))

    def is_projector(self, atol: float = HERM_ATOL) -> bool:
        sq = self.entries @ self.entries
        return self.is_hermitian(atol) and bool(np.allclose(sq, self.entries, rtol=0.0, atol=atol))

    def apply(self, psi: StateVector) -> StateVector:
        if psi.dims != self.dims:
            raise DimensionError(f"operator dims {self.dims} != state dims {psi.dims}")
        return StateVector(self.entries @ psi.amplitudes, self.dims, psi.labels)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


@dataclass(frozen=True)
class DensityMatrix2:
    """Validated single-qubit density matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.entries, dtype=complex)
        if mat.shape != (2, 2):
            raise InvalidDensityMatrixError(f"expected 2x2, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, rtol=0.0, atol=1e-12):
            raise InvalidDensityMatrixError("not Hermitian within 1e-12")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > 1e-12:
            raise InvalidDensityMatrixError(f"trace {tr} differs from 1 beyond 1e-12")
        if np.linalg.eigvalsh(mat).min() < -1e-12:
            raise InvalidDensityMatrixError("negative eigenvalue beyond -1e-12")
        object.__setattr__(self, "entries", _frozen_array(mat))

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "DensityMatrix2":
        m = 0.5 * np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]])
        return cls(m)

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix2":
        return cls(0.5 * np.eye(2))

    @classmethod
    def from_ket(cls, ket: Sequence[complex]) -> "DensityMatrix2":
        v = np.asarray(ket, dtype=complex).ravel()
        if v.size != 2:
            raise InvalidDensityMatrixError("ket must have two components")
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            raise InvalidDensityMatrixError("ket must be normalized")
        return cls(np.outer(v, v.conj()))

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def tensor(a, b):
    """Kronecker product of two StateVectors or two OperatorMatrix objects."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        labels = a.labels + b.labels if a.labels is not None and b.labels is not None else None
        return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims, labels)
    if isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix):
        labels = a.labels + b.labels if a.labels is not None and b.labels is not None else None
        return OperatorMatrix(np.kron(a.entries, b.entries), a.dims + b.dims, labels)
    raise TypeError("tensor expects two StateVectors or two OperatorMatrix objects")


def partial_trace(op: OperatorMatrix, keep: Sequence[int]) -> OperatorMatrix:
    """Trace out all factors not listed in `keep` (kept order preserved, ascending)."""
    n = len(op.dims)
    keep_t = tuple(sorted(int(k) for k in keep))
    if len(set(keep_t)) != len(keep_t):
        raise DimensionError("duplicate subsystem index in keep")
    if any(k < 0 or k >= n for k in keep_t):
        raise DimensionError(f"subsystem index out of range for {n} factors")
    if not keep_t:
        raise DimensionError("must keep at least one factor")

    tens = op.entries.reshape(op.dims + op.dims)
    # Row axis i and column axis n+i share one einsum index when traced out.
    row = list(range(n))
    col = [n + i if i in keep_t else i for i in range(n)]
    out_axes = [i for i in keep_t] + [n + i for i in keep_t]
    res = np.einsum(tens, row + col, out_axes)
    kept_dims = tuple(op.dims[i] for i in keep_t)
    m = prod(kept_dims)
    labels = tuple(op.labels[i] for i in keep_t) if op.labels is not None else None
    return OperatorMatrix(res.reshape(m, m), kept_dims, labels)


def expectation(op: OperatorMatrix, psi: StateVector) -> float:
    """<psi|op|psi> for Hermitian op; the residual imaginary part must be < 1e-12."""
    if not op.is_hermitian():
        raise NonHermitianError("expectation requires a Hermitian operator")
    if op.dims != psi.dims:
        raise DimensionError(f"operator dims {op.dims} != state dims {psi.dims}")
    val = complex(np.vdot(psi.amplitudes, op.entries @ psi.amplitudes))
    if abs(val.imag) >= 1e-12:
        raise ValueError(f"imaginary residue {val.imag} too large for Hermitian form")
    return float(val.real)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: DensityMatrix2, sigma: DensityMatrix2) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1]."""
    sr = _psd_sqrt(rho.entries)
    inner = _psd_sqrt(sr @ sigma.entries @ sr)
    val = float(np.trace(inner).real) ** 2
    return min(max(val, 0.0), 1.0)
