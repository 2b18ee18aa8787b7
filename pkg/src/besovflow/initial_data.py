"""Counterexample initial data: profile, oscillatory bricks, stream construction.

Everything here is assembled directly in spectral space.  The profile's
Fourier transform is sampled on the frequency lattice (equivalently: the
spatial profile is periodized), so compact-support statements stay exact in
the discrete model.  Each brick is the profile modulated by a cosine carrier
near (17/12) 2^j; the carrier is rounded to the nearest lattice frequency and
the construction refuses data whose spectral support would leave the dyadic
annulus [(33/24) 2^j, (35/24) 2^j].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import ScalarField, VectorField
from .grid import Grid
from .littlewood_paley import smooth_step
from .operators import _derivative_table

__all__ = [
    "ResolutionTooCoarse",
    "FrequencyMisaligned",
    "ProfileSpec",
    "CounterexampleSpec",
    "carrier_frequency",
    "aligned_carrier",
    "profile_hat",
    "build_profile",
    "build_brick",
    "build_u0",
    "build_toy_datum",
    "annulus_mass_outside",
    "half_height_radius",
]

CARRIER_RATIO = 17.0 / 12.0
ANNULUS_LO = 33.0 / 24.0
ANNULUS_HI = 35.0 / 24.0


class ResolutionTooCoarse(ValueError):
    """Requested frequency content does not fit under the grid's Nyquist."""


class FrequencyMisaligned(ValueError):
    """Rounded carrier (plus profile bandwidth) leaves the dyadic annulus."""


@dataclass(frozen=True)
class ProfileSpec:
    """Radii of the profile's compactly supported Fourier transform.

    The transform equals 1 inside ``inner_radius`` = 4^(-d) and vanishes
    beyond ``outer_radius`` = 2^(-d); in between it follows the same smooth
    mollifier step used for the dyadic cutoffs.
    """

    dim_for_radii: int

    @property
    def inner_radius(self) -> float:
        return 4.0 ** (-self.dim_for_radii)

    @property
    def outer_radius(self) -> float:
        return 2.0 ** (-self.dim_for_radii)


def profile_hat(spec: ProfileSpec, r) -> np.ndarray:
    """The radial Fourier-side profile: 1 inside, 0 outside, smooth between."""
    r = np.abs(np.asarray(r, dtype=np.float64))
    a, b = spec.inner_radius, spec.outer_radius
    return smooth_step((r - a) / (b - a))


def carrier_frequency(j: int) -> float:
    return CARRIER_RATIO * 2.0**j


def aligned_carrier(j: int, grid: Grid) -> tuple[int, float]:
    """(lattice index, frequency) of the carrier rounded to the lattice."""
    idx = round(carrier_frequency(j) * grid.kappa)
    return idx, idx / grid.kappa


def _axis_profile_hat(grid: Grid, spec: ProfileSpec) -> np.ndarray:
    """Per-axis spectral coefficients of the profile, normalized to unit peak.

    The coefficients are the lattice samples of the radial transform scaled
    so that the spatial profile has profile(0) = 1 exactly.  (Any positive
    scaling gives the same construction up to a measured constant; the unit
    peak keeps amplitude-cubed experiment quantities far above the
    double-precision noise floor.)
    """
    hat = profile_hat(spec, grid.axis_freqs())
    return hat / float(np.sum(hat))


def build_profile(grid: Grid, spec: ProfileSpec) -> ScalarField:
    """Sample the (1-D, per-axis) profile on a one-dimensional grid."""
    if grid.dim != 1:
        raise ValueError("the profile is one-dimensional; pass a 1-D grid")
    if spec.outer_radius >= grid.nyquist:
        raise ResolutionTooCoarse(
            f"profile bandwidth {spec.outer_radius} >= Nyquist {grid.nyquist}"
        )
    return ScalarField.from_spectral(grid, _axis_profile_hat(grid, spec).astype(complex))


def _brick_spectral(j: int, grid: Grid, spec: ProfileSpec) -> np.ndarray:
    """Spectral coefficients of the brick f_j, assembled exactly."""
    c_idx, c_freq = aligned_carrier(j, grid)
    band = spec.outer_radius
    if c_freq + band >= grid.nyquist:
        raise ResolutionTooCoarse(
            f"brick {j} reaches frequency {c_freq + band:.3f} >= Nyquist {grid.nyquist}"
        )
    # containment of the full (rounded) support in the dyadic annulus
    lo = c_freq - band
    hi = math.hypot(c_freq + band, math.sqrt(grid.dim - 1) * band)
    if not (lo >= ANNULUS_LO * 2.0**j and hi <= ANNULUS_HI * 2.0**j):
        raise FrequencyMisaligned(
            f"brick {j}: support [{lo:.4f}, {hi:.4f}] not inside "
            f"[{ANNULUS_LO * 2.0**j:.4f}, {ANNULUS_HI * 2.0**j:.4f}]"
        )
    axis_hat = _axis_profile_hat(grid, spec)
    carrier_axis = 0.5 * (np.roll(axis_hat, c_idx) + np.roll(axis_hat, -c_idx))
    shape = [1] * grid.dim
    shape[0] = grid.n
    out = carrier_axis.reshape(shape).astype(complex)
    for ax in range(1, grid.dim):
        shape = [1] * grid.dim
        shape[ax] = grid.n
        out = out * axis_hat.reshape(shape)
    return out


def build_brick(j: int, grid: Grid, spec: ProfileSpec) -> ScalarField:
    """The oscillatory brick f_j = profile(x_1) cos(c_j x_1) prod profile(x_i)."""
    return ScalarField.from_spectral(grid, _brick_spectral(j, grid, spec))


def annulus_mass_outside(f: ScalarField, j: int) -> float:
    """Relative spectral l^2 mass outside the brick annulus of index j."""
    radius = f.grid.freq_radius
    outside = (radius < ANNULUS_LO * 2.0**j) | (radius > ANNULUS_HI * 2.0**j)
    total = float(np.sum(np.abs(f.spectral) ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sum(np.abs(f.spectral[outside]) ** 2)) / total


@dataclass(frozen=True)
class CounterexampleSpec:
    """Parameters of the divergence-free counterexample data.

    The data is delta * (-d2, d1) g with stream-like sum
    g = sum_{j in j_range} 2^{-j(s+1)} f_j; every included brick annulus must
    fit under the grid's Nyquist (and under the dealias cutoff when the data
    feeds a solver; that check lives with the solver configuration).
    """

    delta: float
    s: float
    p: float
    j_range: tuple[int, ...]
    dim: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if len(self.j_range) == 0:
            raise ValueError("j_range is empty")

    @staticmethod
    def default_j_range(grid: Grid, j_min: int = 3, include_top: bool = False) -> tuple[int, ...]:
        """Bricks {j_min, ..., j_max - 1}; optionally include j_max itself
        (the top brick still sits in the phi == 1 plateau of block j_max)."""
        top = grid.j_max if include_top else grid.j_max - 1
        return tuple(range(j_min, top + 1))


def build_u0(grid: Grid, cspec: CounterexampleSpec) -> VectorField:
    """The divergence-free counterexample field on a 2-D grid.

    Exactly curl-structured in spectral space (components -i xi_2 g-hat and
    i xi_1 g-hat), so its divergence vanishes identically.
    """
    if grid.dim != 2:
        raise ValueError("counterexample data is built on a 2-D grid at runtime")
    profile = ProfileSpec(dim_for_radii=grid.dim)
    g_hat = np.zeros(grid.shape, dtype=complex)
    for j in sorted(cspec.j_range):
        g_hat += 2.0 ** (-j * (cspec.s + 1.0)) * _brick_spectral(j, grid, profile)
    g_hat *= cspec.delta
    d1 = _derivative_table(grid, 0)
    d2 = _derivative_table(grid, 1)
    return VectorField.from_spectral(grid, [-d2 * g_hat, d1 * g_hat])


def build_toy_datum(grid: Grid, n: int, s: float) -> ScalarField:
    """1-D single-brick datum 2^{-ns} profile(x) cos(c_n x)."""
    if grid.dim != 1:
        raise ValueError("toy datum is one-dimensional")
    profile = ProfileSpec(dim_for_radii=1)
    return ScalarField.from_spectral(
        grid, 2.0 ** (-n * s) * _brick_spectral(n, grid, profile)
    )


def half_height_radius(profile: ScalarField) -> float:
    """Largest radius around x = 0 where the profile stays >= profile(0)/2.

    The bound is existential in the construction; we measure it.
    """
    vals = profile.values
    center = vals[(0,) * profile.grid.dim]
    n = profile.grid.n
    # walk outward symmetrically along axis 0 (periodic indexing)
    r = 0
    while r + 1 <= n // 2:
        if vals[r + 1] >= center / 2.0 and vals[-(r + 1)] >= center / 2.0:
            r += 1
        else:
            break
    return r * profile.grid.spacing
