"""Dyadic frequency decomposition and Besov norms.

A radial cutoff theta (== 1 inside |xi| <= 3/4, supported in |xi| < 4/3) is
fixed once from a smooth mollifier step; phi(xi) = theta(xi/2) - theta(xi)
then tiles frequency space dyadically.  Band filters built from these two
functions give the dyadic blocks, and weighted block norms give the Besov
norms B^s_{p,r} and their homogeneous counterparts, including the endpoint
r = inf where the sum becomes a sup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import ScalarField, VectorField, apply_symbol_table, lp_norm
from .grid import Grid

__all__ = [
    "IndexOutOfRange",
    "smooth_step",
    "theta_cutoff",
    "phi_cutoff",
    "CutoffSystem",
    "build_cutoffs",
    "BesovParams",
    "DyadicSpectrum",
    "dyadic_block",
    "homogeneous_block",
    "dyadic_spectrum",
    "besov_norm",
    "EquivalenceReport",
    "besov_equivalence_check",
]


class IndexOutOfRange(ValueError):
    """Dyadic index outside the range resolvable on the grid."""


def smooth_step(x) -> np.ndarray:
    """C-infinity step: 1 for x <= 0, 0 for x >= 1, strictly monotone between.

    Built from the standard exp(-1/x) mollifier pair, so every derivative
    vanishes at both ends.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape)
    out[x <= 0.0] = 1.0
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        xm = x[mid]
        with np.errstate(over="ignore"):
            s_right = np.exp(-1.0 / xm)
            s_left = np.exp(-1.0 / (1.0 - xm))
        out[mid] = s_left / (s_left + s_right)
    return out


def theta_cutoff(r) -> np.ndarray:
    """Radial low-pass cutoff: 1 on [0, 3/4], 0 on [4/3, inf)."""
    r = np.asarray(r, dtype=np.float64)
    return smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75))


def phi_cutoff(r) -> np.ndarray:
    """Radial annulus cutoff theta(r/2) - theta(r); 1 on [4/3, 3/2]."""
    r = np.asarray(r, dtype=np.float64)
    return theta_cutoff(r / 2.0) - theta_cutoff(r)


class CutoffSystem:
    """The dyadic cutoffs tabulated on one grid's frequency lattice.

    ``j_max`` bounds the block operators (the full annulus of phi(2^-j .)
    must fit under Nyquist); ``j_partition`` extends the symbol tables far
    enough that the telescoping partition of unity closes over the whole
    lattice including corners.  Tables are cached write-once per index, so a
    built system is safe for concurrent block evaluations.
    """

    j_min: int = -1

    def __init__(self, grid: Grid):
        self.grid = grid
        self.j_max = grid.j_max
        self.j_lo = grid.j_lo
        self.j_partition = grid.j_partition
        self._theta_tables: dict[int, np.ndarray] = {}

    def theta_scaled(self, j: int) -> np.ndarray:
        """theta(|xi| / 2^j) over the lattice, cached."""
        tab = self._theta_tables.get(j)
        if tab is None:
            tab = theta_cutoff(self.grid.freq_radius / 2.0**j)
            tab.flags.writeable = False
            self._theta_tables[j] = tab
        return tab

    def phi_scaled(self, j: int) -> np.ndarray:
        """phi(|xi| / 2^j) = theta(|xi| / 2^(j+1)) - theta(|xi| / 2^j)."""
        return self.theta_scaled(j + 1) - self.theta_scaled(j)

    def partition_residual(self) -> float:
        """max over the lattice of |theta + sum_{j=0..j_partition} phi_j - 1|."""
        acc = self.theta_scaled(0).copy()
        for j in range(0, self.j_partition + 1):
            acc += self.phi_scaled(j)
        return float(np.max(np.abs(acc - 1.0)))


def build_cutoffs(grid: Grid) -> CutoffSystem:
    """Tabulate the dyadic cutoff system for ``grid``."""
    return CutoffSystem(grid)


@dataclass(frozen=True)
class BesovParams:
    """Besov indices (s, p, r); r = inf selects the endpoint (sup) norm."""

    s: float
    p: float
    r: float = math.inf

    def __post_init__(self) -> None:
        if self.p != math.inf and self.p < 1:
            raise ValueError(f"p must be in [1, inf], got {self.p}")
        if self.r != math.inf and self.r < 1:
            raise ValueError(f"r must be in [1, inf], got {self.r}")

    def satisfies_supercritical(self, dim: int) -> bool:
        """Whether s > dim/p + 1, the regime the solver experiments require."""
        over_p = 0.0 if self.p == math.inf else dim / self.p
        return self.s > over_p + 1.0

    def shifted(self, ds: float) -> "BesovParams":
        return BesovParams(self.s + ds, self.p, self.r)


@dataclass
class DyadicSpectrum:
    """Per-block L^p norms of one field: rows (j, norm, 2^{js} * norm)."""

    params: BesovParams
    homogeneous: bool
    entries: list[tuple[int, float, float]] = field(default_factory=list)

    def reduce(self) -> float:
        """Collapse to the Besov norm: sup of the weighted column for
        r = inf, the l^r sum otherwise."""
        weighted = [w for (_, _, w) in self.entries]
        if not weighted:
            return 0.0
        if self.params.r == math.inf:
            return max(weighted)
        return float(sum(w**self.params.r for w in weighted) ** (1.0 / self.params.r))

    def argmax_j(self) -> int:
        """Index of the block carrying the largest weighted norm."""
        j, _, _ = max(self.entries, key=lambda row: row[2])
        return j

    def csv_rows(self) -> list[tuple[int, float, float]]:
        return list(self.entries)


def _block_field(
    f: ScalarField | VectorField, table: np.ndarray, label: str
) -> ScalarField | VectorField:
    if isinstance(f, VectorField):
        return VectorField([apply_symbol_table(c, table, label) for c in f.components])
    return apply_symbol_table(f, table, label)


def _zero_like(f: ScalarField | VectorField) -> ScalarField | VectorField:
    if isinstance(f, VectorField):
        return VectorField([ScalarField.zero(f.grid) for _ in f.components])
    return ScalarField.zero(f.grid)


def dyadic_block(
    f: ScalarField | VectorField, j: int, cs: CutoffSystem
) -> ScalarField | VectorField:
    """Nonhomogeneous block: zero for j <= -2, theta(D) at j = -1, band
    filter phi(2^-j D) for j >= 0."""
    if j > cs.j_max:
        raise IndexOutOfRange(f"block {j} exceeds j_max={cs.j_max}")
    if j <= -2:
        return _zero_like(f)
    if j == -1:
        return _block_field(f, cs.theta_scaled(0), "theta(D)")
    return _block_field(f, cs.phi_scaled(j), f"phi(2^-{j} D)")


def homogeneous_block(
    f: ScalarField | VectorField, j: int, cs: CutoffSystem
) -> ScalarField | VectorField:
    """Homogeneous block phi(2^-j D), any integer j in [j_lo, j_max].

    phi vanishes at the origin, so the zero-frequency coefficient never
    contributes.
    """
    if j > cs.j_max or j < cs.j_lo:
        raise IndexOutOfRange(f"block {j} outside [{cs.j_lo}, {cs.j_max}]")
    return _block_field(f, cs.phi_scaled(j), f"phi(2^-{j} D)")


def dyadic_spectrum(
    f: ScalarField | VectorField,
    params: BesovParams,
    cs: CutoffSystem,
    homogeneous: bool = False,
) -> DyadicSpectrum:
    """Tabulate (j, block norm, weighted norm) over all resolvable blocks."""
    spec = DyadicSpectrum(params=params, homogeneous=homogeneous)
    if homogeneous:
        js = range(cs.j_lo, cs.j_max + 1)
        block = homogeneous_block
    else:
        js = range(-1, cs.j_max + 1)
        block = dyadic_block
    for j in js:
        norm = lp_norm(block(f, j, cs), params.p)
        spec.entries.append((j, norm, 2.0 ** (j * params.s) * norm))
    return spec


def besov_norm(
    f: ScalarField | VectorField,
    params: BesovParams,
    cs: CutoffSystem,
    homogeneous: bool = False,
) -> float:
    """Besov norm as the exact reduction of :func:`dyadic_spectrum`.

    Finite-r sums run over the resolvable index range only; this is exact
    for band-limited fields, which is all the experiments construct.
    """
    return dyadic_spectrum(f, params, cs, homogeneous).reduce()


@dataclass(frozen=True)
class EquivalenceReport:
    """Nonhomogeneous norm against L^p + homogeneous norm, and their ratio."""

    besov: float
    lp_plus_homogeneous: float
    ratio: float


def besov_equivalence_check(
    f: ScalarField | VectorField, params: BesovParams, cs: CutoffSystem
) -> EquivalenceReport:
    """Compare ||f||_B with ||f||_{L^p} + ||f||_{B-dot} (equivalent for s > 0).

    The ratio lands in a fixed bracket recorded by calibration (see
    :mod:`besovflow.calibration`); callers assert against that bracket.
    """
    if not params.s > 0:
        raise ValueError("equivalence check requires s > 0")
    b = besov_norm(f, params, cs, homogeneous=False)
    split = lp_norm(f, params.p) + besov_norm(f, params, cs, homogeneous=True)
    return EquivalenceReport(b, split, b / split if split > 0 else math.nan)
