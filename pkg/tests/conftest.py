"""Shared fixtures: seeded random configurations and fitted-visibility sets."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from vistokes import (
    CoherenceTriple,
    EnvironmentVectors,
    IdlerPrep,
    SetupConfig,
    SignalPrep,
    embed,
    extract_visibilities,
    fit_fringes,
    random_feasible_triple,
    simulate_fringes,
)

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def random_amplitude_pair(rng: np.random.Generator) -> tuple[float, float]:
    """(a, b) with a^2 + b^2 = 1, drawn uniformly in the mixing angle."""
    angle = rng.uniform(0.0, math.pi / 2.0)
    return math.cos(angle), math.sin(angle)


def random_idler(rng: np.random.Generator, env: EnvironmentVectors) -> IdlerPrep:
    alpha, beta = random_amplitude_pair(rng)
    return IdlerPrep(alpha=alpha, beta=beta, xi=rng.uniform(0.0, 2.0 * math.pi), env=env)


def random_signal(rng: np.random.Generator) -> SignalPrep:
    delta, epsilon = random_amplitude_pair(rng)
    return SignalPrep(delta, epsilon, rng.uniform(0.0, 2.0 * math.pi))


def coherent_config(alpha: float, beta: float, xi: float,
                    pump_ratio: float = 1.0, transmission: float = 1.0,
                    theta: float = 0.0, dim: int = 3) -> SetupConfig:
    """Fully coherent environment; signal prep is a pipeline placeholder."""
    return SetupConfig(
        pump_ratio=pump_ratio,
        transmission=transmission,
        theta=theta,
        signal=SignalPrep.unbiased(0.0),
        idler=IdlerPrep(alpha=alpha, beta=beta, xi=xi,
                        env=EnvironmentVectors.coherent(dim)),
    )


def random_coherent_config(rng: np.random.Generator) -> SetupConfig:
    alpha, beta = random_amplitude_pair(rng)
    return coherent_config(alpha, beta, rng.uniform(0.0, 2.0 * math.pi))


def random_mixed_config(rng: np.random.Generator,
                        pump_ratio: float = 1.0,
                        min_transmission: float = 0.3,
                        triple: CoherenceTriple | None = None) -> SetupConfig:
    """Random feasible environment, random idler prep, random transmission."""
    if triple is None:
        triple = random_feasible_triple(rng)
    env = embed(triple, dim=3)
    return SetupConfig(
        pump_ratio=pump_ratio,
        transmission=rng.uniform(min_transmission, 1.0),
        signal=SignalPrep.unbiased(0.0),
        idler=random_idler(rng, env),
    )


def fitted_visibilities(cfg: SetupConfig, n_points: int = 64):
    """Noiseless simulate -> fit -> clamped visibilities for one config."""
    return extract_visibilities(fit_fringes(simulate_fringes(cfg, n_points=n_points))).visibilities


@pytest.fixture(scope="session")
def coherent_fit_set():
    """100 seeded fully-coherent configs (P = T = 1) with fitted visibilities."""
    rng = np.random.default_rng(20240801)
    out = []
    for _ in range(100):
        cfg = random_coherent_config(rng)
        out.append((cfg, fitted_visibilities(cfg)))
    return out


@pytest.fixture(scope="session")
def mixed_fit_set():
    """100 seeded feasible-environment configs (P = 1, random T) with fits."""
    rng = np.random.default_rng(20240802)
    out = []
    for _ in range(100):
        cfg = random_mixed_config(rng)
        out.append((cfg, fitted_visibilities(cfg)))
    return out
