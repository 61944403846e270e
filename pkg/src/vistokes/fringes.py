"""Fringe synthesis, least-squares fitting, and fringe file I/O.

A fringe is a set of (phase, value) samples of p(phi) = A cos phi + B sin phi
+ C = C + D sin(phi + omega), with A = D sin omega and B = D cos omega.
Fitting recovers (A, B, C) by linear least squares; the visibility is
sqrt(A^2 + B^2)/C and omega = atan2(A, B).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .interferometer import PORT_LOWER, PORT_UPPER, SetupConfig, detection_probability
from .polarization import wrap_phase

FRINGE_CSV_HEADER = ("phase", "value", "basis", "port")

PORT_LABELS = {PORT_LOWER: "lower", PORT_UPPER: "upper"}
PORT_INDICES = {label: idx for idx, label in PORT_LABELS.items()}

VISIBILITY_CLAMP_TOL = 1e-9


class FitError(Exception):
    """Base class for fringe-fit failures."""


class DarkPortError(FitError):
    """Fitted mean intensity is consistent with zero; visibility undefined."""


class DegenerateGridError(FitError):
    """Phase grid cannot separate the cos, sin, and constant components."""


@dataclass(frozen=True)
class FringeRecord:
    """Sampled fringe: phases (rad) and values (probabilities or rates).

    ``counts_per_point`` records the Poisson normalization when the values are
    noisy; it is metadata only and is not preserved by the CSV round trip.
    """

    phases: np.ndarray
    values: np.ndarray
    basis: str
    port: str = "upper"
    counts_per_point: int | None = None

    def __post_init__(self) -> None:
        phases = np.asarray(self.phases, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if phases.ndim != 1 or values.ndim != 1:
            raise ValueError("phases and values must be one-dimensional")
        if phases.shape != values.shape:
            raise ValueError("phases and values must have equal length")
        if phases.size < 5:
            raise ValueError("a fringe needs at least 5 samples")
        if not (np.all(np.isfinite(phases)) and np.all(np.isfinite(values))):
            raise ValueError("phases and values must be finite")
        if np.any(phases < -1e-9) or np.any(phases > 2.0 * math.pi + 1e-9):
            raise ValueError("phases must lie in [0, 2 pi)")
        if np.any(values < 0.0):
            raise ValueError("fringe values must be non-negative")
        # probabilities stay at or below 1; noisy normalized counts get
        # three-sigma headroom (counts metadata is lost on CSV read, so the
        # default allows typical shot noise without admitting raw rates)
        headroom = 5e-3 if self.counts_per_point is None \
            else 3.0 / math.sqrt(self.counts_per_point)
        if np.any(values > 1.0 + headroom):
            raise ValueError("fringe values exceed 1 beyond noise headroom")
        if self.port not in PORT_INDICES:
            raise ValueError(f"port must be one of {sorted(PORT_INDICES)}")
        phases.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.phases.size)


@dataclass(frozen=True)
class FringeFit:
    """Least-squares fringe parameters and derived visibility."""

    a: float                 # cos phi coefficient
    b: float                 # sin phi coefficient
    c: float                 # constant term (mean intensity)
    visibility: float        # sqrt(a^2 + b^2) / c, unclamped
    phase_offset: float      # omega with a = D sin omega, b = D cos omega
    residual_rms: float

    @property
    def exceeds_unit(self) -> bool:
        return self.visibility > 1.0 + VISIBILITY_CLAMP_TOL

    def clamped(self) -> float:
        """Visibility clipped into [0, 1]; check exceeds_unit for violations."""
        return min(max(self.visibility, 0.0), 1.0)


def phase_grid(n_points: int = 64) -> np.ndarray:
    """Uniform phase grid over [0, 2 pi), endpoint excluded."""
    if n_points < 5:
        raise ValueError("need at least 5 phase points")
    return np.linspace(0.0, 2.0 * math.pi, n_points, endpoint=False)


def sweep(
    cfg: SetupConfig,
    k,
    n_points: int = 64,
    grid: np.ndarray | None = None,
    counts: int | None = None,
    seed=None,
    port: int = PORT_UPPER,
    basis_label: str | None = None,
) -> FringeRecord:
    """Sample one detection fringe, optionally with Poisson counting noise.

    With ``counts`` set, each sample is Poisson(counts * p)/counts, modelling
    a fixed number of emitted pairs per phase setting; ``seed`` feeds a
    dedicated generator so parallel sweeps stay reproducible.
    """
    phases = phase_grid(n_points) if grid is None else np.asarray(grid, dtype=float)
    if phases.size < 5:
        raise ValueError("need at least 5 phase points")
    values = np.asarray(detection_probability(cfg, k, phases, port), dtype=float)
    # guard against -1e-17 style round-off before the Poisson draw
    np.clip(values, 0.0, None, out=values)
    if counts is not None:
        if counts <= 0:
            raise ValueError("counts per point must be positive")
        rng = np.random.default_rng(seed)
        values = rng.poisson(counts * values).astype(float) / counts
    label = basis_label if basis_label is not None else (k if isinstance(k, str) else "custom")
    return FringeRecord(phases=phases, values=values, basis=label,
                        port=PORT_LABELS[port], counts_per_point=counts)


def fit(record: FringeRecord) -> FringeFit:
    """Fit A cos phi + B sin phi + C by linear least squares."""
    design = np.column_stack([
        np.cos(record.phases),
        np.sin(record.phases),
        np.ones_like(record.phases),
    ])
    coef, _, rank, _ = np.linalg.lstsq(design, record.values, rcond=None)
    if rank < 3:
        raise DegenerateGridError(
            "phase grid does not determine cos, sin, and constant terms")
    a, b, c = (float(x) for x in coef)
    if c <= 1e-14:
        raise DarkPortError(f"mean intensity {c} is consistent with zero")
    resid = record.values - design @ coef
    return FringeFit(
        a=a,
        b=b,
        c=c,
        visibility=math.hypot(a, b) / c,
        phase_offset=wrap_phase(math.atan2(a, b)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def visibility_minmax(record_or_values) -> float:
    """Plain (max - min)/(max + min) visibility over the sampled values.

    Meant for dense noiseless grids; on an n-point uniform grid the result
    sits below the true visibility by at most ~(grid spacing)^2/8 relative.
    """
    values = record_or_values.values if isinstance(record_or_values, FringeRecord) \
        else np.asarray(record_or_values, dtype=float)
    if values.size == 0:
        raise ValueError("no samples")
    hi, lo = float(values.max()), float(values.min())
    if hi + lo <= 0.0:
        raise DarkPortError("all samples are zero; visibility undefined")
    return (hi - lo) / (hi + lo)


def write_fringe_csv(path, record: FringeRecord) -> None:
    """Write a fringe as CSV with header phase,value,basis,port (LF, UTF-8)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FRINGE_CSV_HEADER)
    for phase, value in zip(record.phases, record.values):
        writer.writerow([format(phase, ".17g"), format(value, ".17g"),
                         record.basis, record.port])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_fringe_csv(path) -> FringeRecord:
    """Read a fringe written by write_fringe_csv; validates header and labels."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty fringe file") from None
        if tuple(header) != FRINGE_CSV_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(FRINGE_CSV_HEADER)}, "
                f"got {','.join(header)}")
        phases, values, bases, ports = [], [], [], []
        for row in reader:
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}: malformed row {row!r}")
            phases.append(float(row[0]))
            values.append(float(row[1]))
            bases.append(row[2])
            ports.append(row[3])
    if not phases:
        raise ValueError(f"{path}: fringe file has no samples")
    if len(set(bases)) != 1 or len(set(ports)) != 1:
        raise ValueError(f"{path}: mixed basis or port labels in one fringe")
    return FringeRecord(
        phases=np.array(phases),
        values=np.array(values),
        basis=bases[0],
        port=ports[0],
    )
