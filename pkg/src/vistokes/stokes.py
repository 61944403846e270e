"""Standard and visibility Stokes parameters, identities, and geometry.

The visibility Stokes parameters are squared-visibility differences
(sx = V_D^2 - V_A^2, sy = V_L^2 - V_R^2, sz = V_H^2 - V_V^2) with the zeroth
parameter s0 = V_k^2 + V_kperp^2, basis independent.  For data produced by one
experiment they satisfy sx^2 + sy^2 + sz^2 = s0^2, so the vector (sx, sy, sz)
has length s0 and the set of density matrices consistent with it is a ball of
radius 1 - s0 around it; conversely the visibility vectors consistent with one
density matrix fill a rotational ellipsoid with foci at the origin and at the
state's Bloch vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix2
from .polarization import (
    BasisVisibilities,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PolarizationState,
    wrap_phase,
)

NORM_IDENTITY_ATOL = 1e-10
GEOMETRY_ATOL = 1e-10
S0_NOISE_HEADROOM = 5e-3


class InconsistentVisibilitiesError(Exception):
    """The three per-basis sums of squared visibilities disagree."""

    def __init__(self, spread: float, tol: float) -> None:
        super().__init__(
            f"sum-rule spread {spread} exceeds tolerance {tol}; "
            "the six visibilities are not consistent with one experiment")
        self.spread = spread
        self.tol = tol


@dataclass(frozen=True)
class BlochVector:
    """Pauli expectation 3-vector of a qubit state."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if self.norm_squared > 1.0 + 1e-12:
            raise ValueError(f"Bloch vector {self.as_array()} leaves the unit ball")

    @property
    def norm_squared(self) -> float:
        return self.x**2 + self.y**2 + self.z**2

    @property
    def r(self) -> float:
        return math.sqrt(min(self.norm_squared, 1.0))

    @property
    def purity(self) -> float:
        return (1.0 + self.norm_squared) / 2.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def density(self) -> DensityMatrix2:
        return DensityMatrix2.from_bloch(self.x, self.y, self.z)


@dataclass(frozen=True)
class VisibilityStokes:
    """Visibility Stokes parameters, kept at the transmission = 1 convention.

    ``transmission`` records the value divided out; the raw measured
    parameters are transmission**2 times the stored ones.  ``spread`` is the
    max - min range of the three per-basis s0 estimates.  For data from a
    single experiment norm_residual vanishes; it is surfaced, not enforced,
    because noisy fits violate it at the noise scale.
    """

    s0: float
    sx: float
    sy: float
    sz: float
    spread: float = 0.0
    transmission: float = 1.0

    def __post_init__(self) -> None:
        vals = (self.s0, self.sx, self.sy, self.sz, self.spread)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("visibility Stokes parameters must be finite")
        if self.s0 < -1e-12:
            raise ValueError("s0 must be non-negative")
        # Exact data satisfy s0 <= 1 to machine precision; shot-noise
        # fits of near-pure states overshoot by O(1/sqrt(counts)).
        if self.s0 > 1.0 + S0_NOISE_HEADROOM:
            raise ValueError("s0 exceeds 1 beyond noise headroom")
        if not 0.0 < self.transmission <= 1.0:
            raise ValueError("transmission must lie in (0, 1]")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])

    @property
    def norm_residual(self) -> float:
        """sx^2 + sy^2 + sz^2 - s0^2; zero for single-experiment data."""
        return float(self.sx**2 + self.sy**2 + self.sz**2 - self.s0**2)

    def raw(self) -> "VisibilityStokes":
        """The parameters as measured, before dividing out the transmission."""
        t2 = self.transmission**2
        return VisibilityStokes(self.s0 * t2, self.sx * t2, self.sy * t2,
                                self.sz * t2, self.spread * t2, 1.0)


def standard_stokes(rho: DensityMatrix2) -> BlochVector:
    """Pauli expectations (x, y, z) of a density matrix."""
    m = rho.entries
    return BlochVector(
        x=float(np.trace(PAULI_X @ m).real),
        y=float(np.trace(PAULI_Y @ m).real),
        z=float(np.trace(PAULI_Z @ m).real),
    )


def visibility_stokes(
    vis: BasisVisibilities,
    transmission: float = 1.0,
    spread_tol: float = 1e-6,
) -> VisibilityStokes:
    """Visibility Stokes parameters from the six named fringe visibilities.

    The visibilities are divided by ``transmission`` before squaring, so the
    result refers to the lossless convention.  The three per-basis sums are
    all estimates of s0; their spread beyond ``spread_tol`` means the data
    cannot come from a single experiment.
    """
    if not 0.0 < transmission <= 1.0:
        raise ValueError("transmission must lie in (0, 1]")
    v = {}
    for key, value in vis.as_dict().items():
        if not math.isfinite(value):
            raise ValueError(f"visibility {key} is undefined (dark port)")
        if not -1e-12 <= value <= 1.0 + 1e-9:
            raise ValueError(f"visibility {key} = {value} outside [0, 1]")
        v[key] = max(value, 0.0) / transmission
    sums = (v["H"]**2 + v["V"]**2, v["D"]**2 + v["A"]**2, v["L"]**2 + v["R"]**2)
    spread = max(sums) - min(sums)
    if spread > spread_tol:
        raise InconsistentVisibilitiesError(spread, spread_tol)
    return VisibilityStokes(
        s0=sum(sums) / 3.0,
        sx=v["D"]**2 - v["A"]**2,
        sy=v["L"]**2 - v["R"]**2,
        sz=v["H"]**2 - v["V"]**2,
        spread=spread,
        transmission=transmission,
    )


@dataclass(frozen=True)
class IdentityResiduals:
    """Residuals of the three squared-visibility identities (report only)."""

    sum_squares: float      # sum V^2 - 3 s0
    sum_fourth: float       # sum V^4 - 2 s0^2
    pair_products: float    # V_D^2 V_A^2 + V_L^2 V_R^2 + V_H^2 V_V^2 - s0^2/2

    def max_abs(self) -> float:
        return max(abs(self.sum_squares), abs(self.sum_fourth),
                   abs(self.pair_products))


def identities_check(vis: BasisVisibilities, transmission: float = 1.0) -> IdentityResiduals:
    """Evaluate the three identities obeyed by single-experiment visibilities."""
    v = {k: val / transmission for k, val in vis.as_dict().items()}
    sums = (v["H"]**2 + v["V"]**2, v["D"]**2 + v["A"]**2, v["L"]**2 + v["R"]**2)
    s0 = sum(sums) / 3.0
    sum_sq = sum(x**2 for x in v.values())
    sum_4 = sum(x**4 for x in v.values())
    pair_prod = (v["D"] * v["A"])**2 + (v["L"] * v["R"])**2 + (v["H"] * v["V"])**2
    return IdentityResiduals(
        sum_squares=sum_sq - 3.0 * s0,
        sum_fourth=sum_4 - 2.0 * s0**2,
        pair_products=pair_prod - s0**2 / 2.0,
    )


@dataclass(frozen=True)
class ConsistencyBall:
    """Ball of Bloch vectors consistent with one visibility Stokes vector.

    Center is the visibility vector itself, radius 1 - s0.  The touching
    state is the unique pure state on the boundary sphere radially outward;
    at s0 = 0 the ball is the whole Bloch ball and the touch is undefined.
    """

    center: BlochVector
    radius: float
    touch: PolarizationState | None
    degenerate: bool

    def contains(self, point: BlochVector, atol: float = GEOMETRY_ATOL) -> bool:
        gap = np.linalg.norm(point.as_array() - self.center.as_array())
        return bool(gap <= self.radius + atol)


def consistency_ball(vs: VisibilityStokes) -> ConsistencyBall:
    """The ball |r - S| <= 1 - s0 of states consistent with vs."""
    center = BlochVector(vs.sx, vs.sy, vs.sz)
    if vs.s0 <= 1e-12:
        return ConsistencyBall(center=center, radius=1.0 - vs.s0,
                               touch=None, degenerate=True)
    alpha = math.sqrt(min(max((1.0 + vs.sz / vs.s0) / 2.0, 0.0), 1.0))
    beta = math.sqrt(max(1.0 - alpha**2, 0.0))
    xi = wrap_phase(math.atan2(vs.sy, vs.sx))
    return ConsistencyBall(
        center=center,
        radius=1.0 - vs.s0,
        touch=PolarizationState(alpha, beta, xi),
        degenerate=False,
    )


@dataclass(frozen=True)
class EllipsoidSpec:
    """Rotational ellipsoid of visibility vectors consistent with one state.

    Center r/2, major semiaxis 1/2 along r (foci at the origin and at r),
    transverse semiaxes sqrt(1 - r^2)/2.  ``axis`` is None when r = 0 and the
    ellipsoid degenerates to a sphere.
    """

    center: np.ndarray
    axis: np.ndarray | None
    semiaxis_major: float
    semiaxis_transverse: float

    def quadratic_form(self, point: np.ndarray) -> float:
        """Membership form; <= 1 on and inside the ellipsoid."""
        rel = np.asarray(point, dtype=float) - self.center
        if self.axis is None:
            return float(rel @ rel) / self.semiaxis_major**2
        longitudinal = float(self.axis @ rel)
        transverse_sq = float(rel @ rel) - longitudinal**2
        if self.semiaxis_transverse <= 1e-12:
            # degenerate segment: treat any transverse leakage as exclusion
            if transverse_sq > 1e-20:
                return math.inf
            return longitudinal**2 / self.semiaxis_major**2
        return (longitudinal**2 / self.semiaxis_major**2
                + transverse_sq / self.semiaxis_transverse**2)

    def contains(self, point: np.ndarray, atol: float = GEOMETRY_ATOL) -> bool:
        return bool(self.quadratic_form(point) <= 1.0 + atol)


def visibility_ellipsoid(r: BlochVector) -> EllipsoidSpec:
    """The ellipsoid of visibility vectors a state with Bloch vector r allows."""
    arr = r.as_array()
    norm = r.r
    axis = arr / norm if norm > 1e-12 else None
    return EllipsoidSpec(
        center=arr / 2.0,
        axis=axis,
        semiaxis_major=0.5,
        semiaxis_transverse=math.sqrt(max(1.0 - norm**2, 0.0)) / 2.0,
    )


@dataclass(frozen=True)
class BoundsReport:
    """Margins of the four state-vs-visibility bounds; >= 0 means satisfied."""

    ball_margin: float              # (1 - s0) - |S - r|
    purity_upper_margin: float      # (r . S + 1 - s0) - purity
    purity_lower_margin: float      # purity - (1 - 2 s0 (1 - s0)), s0 >= 1/2 only
    s0_upper_margin: float          # (1 + r)/2 - s0

    def all_satisfied(self, atol: float = GEOMETRY_ATOL) -> bool:
        return all(m >= -atol for m in (
            self.ball_margin, self.purity_upper_margin,
            self.purity_lower_margin, self.s0_upper_margin))


def bounds_check(r: BlochVector, vs: VisibilityStokes) -> BoundsReport:
    """Check the purity and coherence bounds for a state/visibility pair."""
    s_vec = vs.vector
    r_vec = r.as_array()
    purity = r.purity
    ball_margin = (1.0 - vs.s0) - float(np.linalg.norm(s_vec - r_vec))
    upper_margin = (float(r_vec @ s_vec) + 1.0 - vs.s0) - purity
    if vs.s0 >= 0.5:
        lower_margin = purity - (1.0 - 2.0 * vs.s0 * (1.0 - vs.s0))
    else:
        lower_margin = math.inf
    s0_margin = (1.0 + r.r) / 2.0 - vs.s0
    return BoundsReport(
        ball_margin=ball_margin,
        purity_upper_margin=upper_margin,
        purity_lower_margin=lower_margin,
        s0_upper_margin=s0_margin,
    )


def normalized_stokes(vs: VisibilityStokes) -> PolarizationState:
    """Pure-state parameters formally matching the normalized visibility vector."""
    if vs.s0 <= 1e-12:
        raise ValueError("normalized parameters are undefined at s0 = 0")
    alpha = math.sqrt(min(max((1.0 + vs.sz / vs.s0) / 2.0, 0.0), 1.0))
    beta = math.sqrt(max(1.0 - alpha**2, 0.0))
    return PolarizationState(alpha, beta, wrap_phase(math.atan2(vs.sy, vs.sx)))
