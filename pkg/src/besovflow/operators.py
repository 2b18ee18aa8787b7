"""Fourier-multiplier operators: heat semigroup, derivatives, Riesz, Leray.

Conventions for singular or ambiguous modes:

* The zero mode of (-Laplace)^(-1) and of xi/|xi| is set to 0, so the Riesz
  transforms annihilate constants and the Leray projector passes the mean
  through unchanged (it acts as the identity on constants).
* Odd (derivative-type) symbols are zeroed on the Nyquist planes; an even N
  lattice has no conjugate partner there, and keeping the mode would break
  realness of the output.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as _fft

from .fields import ScalarField, VectorField, apply_symbol_table
from .grid import Grid

__all__ = [
    "HeatParams",
    "heat_semigroup",
    "gradient",
    "divergence",
    "laplacian",
    "riesz",
    "leray_project",
]


@dataclass(frozen=True)
class HeatParams:
    """Viscosity and time for the semigroup exp(t * epsilon * Laplace)."""

    epsilon: float
    t: float

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")


# ---- symbol tables (cached per grid; grids are hashable frozen dataclasses) ----


@lru_cache(maxsize=32)
def _freq_sq(grid: Grid) -> np.ndarray:
    out = grid.freq_radius**2
    out.flags.writeable = False
    return out


@lru_cache(maxsize=32)
def _derivative_table(grid: Grid, axis: int) -> np.ndarray:
    """i*xi_axis with the Nyquist plane zeroed (odd symbol)."""
    k = np.fft.fftfreq(grid.n, d=1.0 / grid.n)
    xi = k / grid.kappa
    xi[k == -grid.n // 2] = 0.0
    shape = [1] * grid.dim
    shape[axis] = grid.n
    table = (1j * xi).reshape(shape)
    out = np.ascontiguousarray(np.broadcast_to(table, grid.shape))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=32)
def _leray_tables(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """(stacked Nyquist-zeroed xi components w, 1/|w|^2 with 0 where w = 0).

    Singular-mode convention: the frequency vector entering the Riesz and
    Leray symbols is the Nyquist-zeroed one (the Nyquist planes of an even
    lattice carry no conjugate partner, and the raw cross terms xi_i xi_j
    are not even there -- keeping them would break realness).  Where w
    vanishes (the zero mode and the degenerate Nyquist corner) the projector
    acts as the identity.
    """
    comps = np.stack(
        [(_derivative_table(grid, i) / 1j).real for i in range(grid.dim)]
    )
    w_sq = np.sum(comps**2, axis=0)
    zero = w_sq == 0.0
    w_sq[zero] = 1.0
    inv_sq = 1.0 / w_sq
    inv_sq[zero] = 0.0
    inv_sq.flags.writeable = False
    comps.flags.writeable = False
    return comps, inv_sq


@lru_cache(maxsize=32)
def _riesz_table(grid: Grid, axis: int) -> np.ndarray:
    """-i*w_axis/|w| with the Nyquist-zeroed frequency vector w; 0 at w = 0.

    Coincides with -i*xi_axis/|xi| on every mode below Nyquist and makes the
    identity P_ij = delta_ij + R_i R_j exact on the whole lattice.
    """
    comps, inv_sq = _leray_tables(grid)
    out = -1j * comps[axis] * np.sqrt(inv_sq)
    out.flags.writeable = False
    return out


def _heat_table(grid: Grid, hp: HeatParams) -> np.ndarray:
    return np.exp(-(hp.epsilon * hp.t) * _freq_sq(grid))


# ---- operators ----


def heat_semigroup(f: ScalarField | VectorField, hp: HeatParams):
    """exp(t * epsilon * Laplace): multiply the spectrum by exp(-eps*t*|xi|^2).

    An L^p contraction for every p (the symbol lies in (0, 1]).
    """
    table = _heat_table(f.grid, hp)
    if isinstance(f, VectorField):
        return VectorField([apply_symbol_table(c, table, "heat") for c in f.components])
    return apply_symbol_table(f, table, "heat")


def gradient(f: ScalarField) -> VectorField:
    return VectorField(
        [apply_symbol_table(f, _derivative_table(f.grid, i), f"d/dx_{i}")
         for i in range(f.grid.dim)]
    )


def divergence(v: VectorField) -> ScalarField:
    acc = np.zeros(v.grid.shape, dtype=np.complex128)
    for i, c in enumerate(v.components):
        acc += _derivative_table(v.grid, i) * c.spectral
    out = _fft.ifftn(acc) * acc.size
    return ScalarField.from_values(v.grid, out.real.copy())


def laplacian(f: ScalarField | VectorField):
    table = -_freq_sq(f.grid)
    if isinstance(f, VectorField):
        return VectorField([apply_symbol_table(c, table, "laplacian") for c in f.components])
    return apply_symbol_table(f, table, "laplacian")


def riesz(f: ScalarField, axis: int) -> ScalarField:
    """Riesz transform along ``axis``: symbol -i*xi_axis/|xi|."""
    if not 0 <= axis < f.grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {f.grid.dim}")
    return apply_symbol_table(f, _riesz_table(f.grid, axis), f"riesz_{axis}")


def project_spectral(grid: Grid, spectra: np.ndarray) -> np.ndarray:
    """Leray projection on stacked spectral components (dim, ...).

    v-hat  ->  v-hat - w (w . v-hat) / |w|^2 with the Nyquist-zeroed
    frequency vector w; the zero mode (and degenerate corner) pass through.
    """
    comps, inv_sq = _leray_tables(grid)
    dot = np.einsum("i...,i...->...", comps, spectra)
    return spectra - comps * (dot * inv_sq)


def leray_project(v: VectorField) -> VectorField:
    """Project onto divergence-free fields: Id + (-Laplace)^(-1) grad div.

    Componentwise this is delta_ij + R_i R_j; both forms coincide on the
    lattice (the symbol identity is exercised in the test suite, settling
    the per-component Riesz convention).
    """
    spectra = np.stack([c.spectral for c in v.components])
    projected = project_spectral(v.grid, spectra)
    out = _fft.ifftn(projected, axes=tuple(range(1, v.grid.dim + 1))) * (
        v.grid.n**v.grid.dim
    )
    return VectorField.from_values(v.grid, [a.real.copy() for a in out])
