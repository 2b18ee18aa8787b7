"""Periodic-box grids.

The domain is the torus [0, 2*pi*kappa)^dim sampled on a uniform lattice of
``n`` points per axis.  The matching frequency lattice is {k/kappa} with
integer k in [-n/2, n/2), stored in FFT order.  All spectral machinery in
this package (transforms, multipliers, dyadic blocks) is built on top of
these two lattices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = ["Grid", "GridError"]


class GridError(ValueError):
    """Invalid grid geometry or a frequency request the grid cannot resolve."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, 2*pi*kappa)^dim.

    Parameters
    ----------
    dim:
        Spatial dimension; 1 and 2 are supported at runtime.
    n:
        Points per axis; a power of two, at least 16.
    kappa:
        Half-period scale: the box has side length 2*pi*kappa and the
        frequency lattice is {k/kappa : k integer}.
    max_dyadic_index:
        Optional.  If given, construction fails unless dyadic blocks up to
        this index are resolvable (their annuli fit under the Nyquist
        frequency).
    """

    dim: int
    n: int
    kappa: float
    max_dyadic_index: int | None = field(default=None)

    def __post_init__(self) -> None:
        if self.dim not in (1, 2):
            raise GridError(f"dim must be 1 or 2, got {self.dim}")
        if not _is_power_of_two(self.n) or self.n < 16:
            raise GridError(f"n must be a power of two >= 16, got {self.n}")
        if not (self.kappa > 0):
            raise GridError(f"kappa must be positive, got {self.kappa}")
        if self.max_dyadic_index is not None and self.max_dyadic_index > self.j_max:
            raise GridError(
                f"dyadic index {self.max_dyadic_index} not resolvable: "
                f"j_max={self.j_max} at n={self.n}, kappa={self.kappa}"
            )

    # ---- real-space lattice ----

    @property
    def box_length(self) -> float:
        return 2.0 * math.pi * self.kappa

    @property
    def spacing(self) -> float:
        return self.box_length / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def volume(self) -> float:
        return self.box_length**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    def axis_points(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays, one per axis, broadcastable to ``shape``."""
        x = self.axis_points()
        return tuple(np.meshgrid(*([x] * self.dim), indexing="ij", sparse=True))

    # ---- frequency lattice ----

    @property
    def nyquist(self) -> float:
        """Largest resolvable per-axis frequency magnitude, n/(2*kappa)."""
        return self.n / (2.0 * self.kappa)

    def axis_freqs(self) -> np.ndarray:
        """Frequencies k/kappa in FFT order (negative half in the upper end)."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n) / self.kappa

    def freq_components(self) -> tuple[np.ndarray, ...]:
        """Frequency component arrays, broadcastable to ``shape``."""
        xi = self.axis_freqs()
        return tuple(np.meshgrid(*([xi] * self.dim), indexing="ij", sparse=True))

    @cached_property
    def freq_radius(self) -> np.ndarray:
        """|xi| over the full frequency lattice (dense array of ``shape``)."""
        comps = self.freq_components()
        out = np.zeros(self.shape)
        for c in comps:
            out = out + c**2
        return np.sqrt(out)

    # ---- dyadic bookkeeping ----

    @property
    def j_max(self) -> int:
        """Largest dyadic index whose annulus supp phi(2^-j .) fits under Nyquist.

        supp phi(2^-j .) is {3/4 <= |xi|/2^j <= 8/3}; the block is fully
        resolvable when (8/3) 2^j <= nyquist.
        """
        return int(math.floor(math.log2(self.nyquist * 3.0 / 8.0) + 1e-12))

    @property
    def j_lo(self) -> int:
        """Smallest index whose annulus meets the nonzero frequency lattice.

        The smallest nonzero lattice frequency is 1/kappa; phi(2^-j xi) is
        nonzero iff |xi| in (3/4, 8/3) * 2^j.
        """
        return int(math.ceil(math.log2(3.0 / (8.0 * self.kappa)) - 1e-12))

    @property
    def j_partition(self) -> int:
        """Smallest top index J with theta(xi / 2^(J+1)) = 1 on the whole lattice.

        Beyond ``j_max`` those blocks are clipped by the lattice, but their
        symbols are still well defined; summing phi(2^-j .) up to
        ``j_partition`` restores the partition of unity everywhere including
        the lattice corners at |xi| = sqrt(dim) * nyquist.
        """
        corner = math.sqrt(self.dim) * self.nyquist
        return int(math.ceil(math.log2(corner * 4.0 / 3.0) - 1e-12)) - 1

    def dealias_keep_index(self, fraction: float = 2.0 / 3.0) -> int:
        """Largest per-axis integer index kept by the dealiasing rule."""
        return int(math.floor(fraction * (self.n / 2.0)))

    def dealias_cutoff(self, fraction: float = 2.0 / 3.0) -> float:
        """Largest per-axis frequency magnitude kept by the dealiasing rule."""
        return self.dealias_keep_index(fraction) / self.kappa

    def dealias_mask(self, fraction: float = 2.0 / 3.0) -> np.ndarray:
        """Boolean spectral mask implementing the sharp 2/3-type rule."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        keep = self.dealias_keep_index(fraction)
        axis_ok = np.abs(k) <= keep
        masks = np.meshgrid(*([axis_ok] * self.dim), indexing="ij", sparse=True)
        out = np.ones(self.shape, dtype=bool)
        for m in masks:
            out = out & m
        return out

    def __repr__(self) -> str:  # keep frozen dataclass default fields quiet
        return f"Grid(dim={self.dim}, n={self.n}, kappa={self.kappa})"
