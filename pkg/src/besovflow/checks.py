"""Property suite for the dyadic machinery (the `lp-check` command).

Runs the foundational identities on one grid: partition of unity, block
selectivity on the oscillatory bricks, support orthogonality, Bernstein
ratios, the nonhomogeneous/homogeneous norm equivalence, the product
regression bound, and Riesz boundedness on dyadic norms.  Random fields are
drawn from a seeded generator, so a given configuration is reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from . import calibration
from .experiments import AssertionResult, _check
from .fields import ScalarField, VectorField, lp_norm
from .grid import Grid
from .initial_data import ProfileSpec, build_brick
from .littlewood_paley import (
    BesovParams,
    CutoffSystem,
    besov_equivalence_check,
    besov_norm,
    build_cutoffs,
    dyadic_block,
)
from .operators import gradient, riesz

__all__ = ["random_band_limited", "lp_check_suite"]


def random_band_limited(
    grid: Grid,
    rng: np.random.Generator,
    max_radius: float | None = None,
    min_radius: float = 0.0,
    zero_mean: bool = False,
) -> ScalarField:
    """Random real field with spectrum confined to an |xi| window."""
    values = rng.standard_normal(grid.shape)
    spec = np.fft.fftn(values) / values.size
    radius = grid.freq_radius
    hi = max_radius if max_radius is not None else 0.75 * 2.0 ** (grid.j_max + 1)
    mask = (radius <= hi) & (radius >= min_radius)
    if zero_mean:
        mask = mask & (radius > 0)
    return ScalarField.from_spectral(grid, np.where(mask, spec, 0.0))


def random_annulus_field(grid: Grid, rng: np.random.Generator, j: int) -> ScalarField:
    """Random field supported where phi(2^-j .) == 1 (the [4/3, 3/2] ring)."""
    return random_band_limited(
        grid, rng, max_radius=1.5 * 2.0**j, min_radius=4.0 / 3.0 * 2.0**j
    )


def lp_check_suite(
    grid: Grid,
    s: float,
    p: float,
    j_bricks: tuple[int, ...],
    seed: int = 1234,
    n_random: int = 5,
) -> list[AssertionResult]:
    """The dyadic-analysis property checks on one grid."""
    cs = build_cutoffs(grid)
    rng = np.random.default_rng(seed)
    out: list[AssertionResult] = []

    # partition of unity over the full lattice
    out.append(_check("partition-of-unity residual", cs.partition_residual(), 0.0, 1e-12))

    # cutoff plateaus and supports, probed on a dense radius sample
    from .littlewood_paley import phi_cutoff, theta_cutoff

    r = np.linspace(0.0, 4.0, 4001)
    theta = theta_cutoff(r)
    phi = phi_cutoff(r)
    out.append(_check("theta == 1 on |xi| <= 3/4", float(np.max(np.abs(theta[r <= 0.75] - 1))), 0.0, 0.0))
    out.append(_check("theta == 0 on |xi| >= 4/3", float(np.max(np.abs(theta[r >= 4/3]))), 0.0, 0.0))
    out.append(_check("phi == 1 on [4/3, 3/2]", float(np.max(np.abs(phi[(r >= 4/3) & (r <= 1.5)] - 1))), 0.0, 0.0))
    out.append(_check("phi == 0 off [3/4, 8/3]", float(np.max(np.abs(phi[(r < 0.75) | (r > 8/3)]))), 0.0, 0.0))
    out.append(_check("cutoff range lower", float(min(np.min(theta), np.min(phi))), 0.0, 1.0))
    out.append(_check("cutoff range upper", float(max(np.max(theta), np.max(phi))), 0.0, 1.0))

    # block selectivity on the bricks: block_n f_j = delta_{nj} f_j
    profile = ProfileSpec(dim_for_radii=grid.dim)
    worst_hit, worst_miss = 0.0, 0.0
    for j in j_bricks:
        brick = build_brick(j, grid, profile)
        scale = lp_norm(brick, p)
        for m in range(-1, cs.j_max + 1):
            val = lp_norm(dyadic_block(brick, m, cs), p)
            if m == j:
                worst_hit = max(worst_hit, abs(val - scale) / scale)
            else:
                worst_miss = max(worst_miss, val / scale)
    out.append(_check("brick block selectivity (hit)", worst_hit, 0.0, 1e-10))
    out.append(_check("brick block selectivity (miss)", worst_miss, 0.0, 1e-10))

    # support orthogonality: |n - j| >= 2 kills random fields twice over
    f = random_band_limited(grid, rng)
    scale = lp_norm(f, 2)
    worst = 0.0
    for j in range(0, cs.j_max + 1):
        for m in range(0, cs.j_max + 1):
            if abs(m - j) >= 2:
                val = lp_norm(dyadic_block(dyadic_block(f, j, cs), m, cs), 2)
                worst = max(worst, val / scale)
    out.append(_check("disjoint-block orthogonality", worst, 0.0, 1e-12))

    # Bernstein ratio on annulus-supported random fields, j-stable bracket
    lo, hi = calibration.BERNSTEIN_BRACKET
    for j in range(3, cs.j_max + 1):
        g = random_annulus_field(grid, rng, j)
        ratio = lp_norm(gradient(g), p) / (2.0**j * lp_norm(g, p))
        out.append(_check(f"bernstein ratio (j={j})", ratio, lo, hi))

    # norm equivalence on a random corpus
    params = BesovParams(s, p, math.inf)
    lo, hi = calibration.EQUIVALENCE_RATIO_BRACKET
    for k in range(n_random):
        g = random_band_limited(grid, rng, zero_mean=True)
        rep = besov_equivalence_check(g, params, cs)
        out.append(_check(f"norm equivalence ratio (draw {k})", rep.ratio, lo, hi))

    # product regression bound (Banach-algebra sanity)
    worst = 0.0
    for _ in range(n_random):
        a = random_band_limited(grid, rng, max_radius=0.375 * 2.0 ** cs.j_max)
        b = random_band_limited(grid, rng, max_radius=0.375 * 2.0 ** cs.j_max)
        na, nb = besov_norm(a, params, cs), besov_norm(b, params, cs)
        nab = besov_norm(a * b, params, cs)
        worst = max(worst, nab / (na * nb))
    out.append(_check("product bound ||fg||/(||f|| ||g||)", worst, 0.0, calibration.ALGEBRA_CONSTANT))

    # Riesz boundedness on homogeneous dyadic norms
    worst = 0.0
    for _ in range(n_random):
        g = random_band_limited(grid, rng, zero_mean=True)
        ng = besov_norm(g, params, cs, homogeneous=True)
        for axis in range(grid.dim):
            nr = besov_norm(riesz(g, axis), params, cs, homogeneous=True)
            worst = max(worst, nr / ng)
    out.append(_check("riesz dyadic-norm bound", worst, 0.0, calibration.RIESZ_BESOV_CONSTANT))
    return out
