"""End-to-end measurement pipeline: MUB rounds, fringe fits, Stokes extraction.

A full tomography run takes three rounds, one per basis pair, re-preparing
the signal each round in a state mutually unbiased to the measured pair:
zeta = 0 (diagonal prep) for the H/V and L/R rounds, zeta = pi/2 (circular
prep) for the D/A round.  Each round sweeps the pump phase and records the
two fringes of the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fringes
from .fringes import FringeFit, FringeRecord
from .interferometer import (
    PORT_UPPER,
    SetupConfig,
    SignalPrep,
    analytic_visibilities_mixed,
)
from .polarization import BASIS_LABELS, BasisVisibilities
from .stokes import VisibilityStokes, visibility_stokes

ROUND_SIGNAL_ZETA = {"HV": 0.0, "DA": math.pi / 2.0, "LR": 0.0}
ROUND_OF_BASIS = {"H": "HV", "V": "HV", "D": "DA", "A": "DA", "L": "LR", "R": "LR"}


def round_config(cfg: SetupConfig, basis: str) -> SetupConfig:
    """The config with the signal re-prepared for the round measuring basis."""
    zeta = ROUND_SIGNAL_ZETA[ROUND_OF_BASIS[basis]]
    return cfg.with_signal(SignalPrep.unbiased(zeta))


def simulate_fringes(
    cfg: SetupConfig,
    n_points: int = 64,
    counts: int | None = None,
    seed=None,
    port: int = PORT_UPPER,
) -> dict[str, FringeRecord]:
    """Six fringes (H, V, D, A, L, R) with per-round MUB signal preps.

    With noise enabled, each fringe gets an independent child seed derived
    from ``seed`` so reruns are byte-identical and fringes uncorrelated.
    """
    if counts is not None:
        child_seeds = np.random.SeedSequence(seed).spawn(len(BASIS_LABELS))
    out: dict[str, FringeRecord] = {}
    for i, basis in enumerate(BASIS_LABELS):
        out[basis] = fringes.sweep(
            round_config(cfg, basis),
            basis,
            n_points=n_points,
            counts=counts,
            seed=child_seeds[i] if counts is not None else None,
            port=port,
        )
    return out


def fit_fringes(records: dict[str, FringeRecord]) -> dict[str, FringeFit]:
    """Least-squares fit of each fringe, keyed by basis label."""
    return {basis: fringes.fit(rec) for basis, rec in records.items()}


@dataclass(frozen=True)
class ExtractionSummary:
    """Fitted visibilities with fit diagnostics."""

    visibilities: BasisVisibilities
    residual_rms: dict
    phase_offsets: dict
    unit_violations: dict

    def max_residual(self) -> float:
        return max(self.residual_rms.values())


def extract_visibilities(fits: dict[str, FringeFit]) -> ExtractionSummary:
    """Collect the six fitted visibilities, clamped into [0, 1]."""
    missing = [b for b in BASIS_LABELS if b not in fits]
    if missing:
        raise ValueError(f"missing fringe fits for bases {missing}")
    vis = BasisVisibilities(**{b.lower(): fits[b].clamped() for b in BASIS_LABELS})
    return ExtractionSummary(
        visibilities=vis,
        residual_rms={b: fits[b].residual_rms for b in BASIS_LABELS},
        phase_offsets={b: fits[b].phase_offset for b in BASIS_LABELS},
        unit_violations={b: max(fits[b].visibility - 1.0, 0.0) for b in BASIS_LABELS},
    )


def measure_visibility_stokes(
    cfg: SetupConfig,
    n_points: int = 64,
    counts: int | None = None,
    seed=None,
    spread_tol: float = 1e-6,
) -> VisibilityStokes:
    """Simulate, fit, and convert to visibility Stokes parameters.

    The transmission configured in cfg is divided back out, so the result is
    directly comparable with the lossless operator expectations.
    """
    records = simulate_fringes(cfg, n_points=n_points, counts=counts, seed=seed)
    summary = extract_visibilities(fit_fringes(records))
    return visibility_stokes(summary.visibilities,
                             transmission=cfg.transmission,
                             spread_tol=spread_tol)


def analytic_visibility_stokes(cfg: SetupConfig) -> VisibilityStokes:
    """Visibility Stokes parameters from the closed-form visibilities."""
    vis = analytic_visibilities_mixed(cfg)
    return visibility_stokes(vis, transmission=cfg.transmission,
                             spread_tol=1e-9)
