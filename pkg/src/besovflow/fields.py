"""Real fields with cached spectral data, Fourier multipliers, and L^p norms.

Spectral convention: for values f on the lattice, the coefficient array is
``fft(f) / n^dim`` so that f(x) = sum_k c_k exp(i xi_k . x).  A pure mode
cos(m x_1 / kappa) therefore has exactly two nonzero coefficients, each of
magnitude 1/2.  Fields are immutable once built; the companion representation
(values or spectral) is derived lazily and cached write-once, so instances are
safe to share across threads.
"""

from __future__ import annotations

import numbers
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.fft as _fft

from .grid import Grid

__all__ = [
    "ScalarField",
    "VectorField",
    "Multiplier",
    "NonRealOutput",
    "InvalidExponent",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "apply_symbol_table",
    "lp_norm",
    "spectral_l2",
]

#: Relative imaginary residue tolerated when casting multiplier output to real.
REALITY_RTOL = 1e-10


class NonRealOutput(ValueError):
    """A multiplier produced a field with non-negligible imaginary part.

    Signals a symbol that is not conjugate-symmetric on the lattice.
    """


class InvalidExponent(ValueError):
    """L^p exponent outside [1, inf]."""


class ScalarField:
    """A real-valued function sampled on a :class:`Grid`.

    Construct with :meth:`from_values` or :meth:`from_spectral`; the other
    representation is computed on first access and cached.
    """

    __slots__ = ("grid", "_values", "_spectral")

    def __init__(self, grid: Grid, values: np.ndarray | None, spectral: np.ndarray | None):
        if values is None and spectral is None:
            raise ValueError("need values or spectral data")
        self.grid = grid
        self._values = values
        self._spectral = spectral

    @classmethod
    def from_values(cls, grid: Grid, values: np.ndarray) -> "ScalarField":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != grid.shape:
            raise ValueError(f"values shape {values.shape} != grid shape {grid.shape}")
        values = values.copy()
        values.flags.writeable = False
        return cls(grid, values, None)

    @classmethod
    def from_spectral(
        cls, grid: Grid, spectral: np.ndarray, check_hermitian: bool = True
    ) -> "ScalarField":
        spectral = np.asarray(spectral, dtype=np.complex128)
        if spectral.shape != grid.shape:
            raise ValueError(f"spectral shape {spectral.shape} != grid shape {grid.shape}")
        if check_hermitian:
            _require_hermitian(spectral)
        spectral = spectral.copy()
        spectral.flags.writeable = False
        return cls(grid, None, spectral)

    @classmethod
    def zero(cls, grid: Grid) -> "ScalarField":
        return cls.from_values(grid, np.zeros(grid.shape))

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            out = _fft.ifftn(self._spectral) * self._spectral.size
            vals = out.real.copy()
            vals.flags.writeable = False
            self._values = vals
        return self._values

    @property
    def spectral(self) -> np.ndarray:
        if self._spectral is None:
            spec = _fft.fftn(self._values) / self._values.size
            spec.flags.writeable = False
            self._spectral = spec
        return self._spectral

    # minimal pointwise algebra; results carry whichever representation is cheap
    def __add__(self, other: "ScalarField") -> "ScalarField":
        self._check_same_grid(other)
        return ScalarField.from_values(self.grid, self.values + other.values)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        self._check_same_grid(other)
        return ScalarField.from_values(self.grid, self.values - other.values)

    def __mul__(self, a: "ScalarField | float") -> "ScalarField":
        if isinstance(a, ScalarField):
            self._check_same_grid(a)
            return ScalarField.from_values(self.grid, self.values * a.values)
        if isinstance(a, numbers.Real):
            return ScalarField.from_values(self.grid, self.values * float(a))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return self * (-1.0)

    def _check_same_grid(self, other: "ScalarField") -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")


class VectorField:
    """A tuple of :class:`ScalarField` components on one shared grid."""

    __slots__ = ("grid", "components")

    def __init__(self, components: Sequence[ScalarField]):
        components = tuple(components)
        if not components:
            raise ValueError("empty component list")
        grid = components[0].grid
        for c in components[1:]:
            if c.grid != grid:
                raise ValueError("components live on different grids")
        if len(components) != grid.dim:
            raise ValueError(f"{len(components)} components on a dim-{grid.dim} grid")
        self.grid = grid
        self.components = components

    @classmethod
    def from_values(cls, grid: Grid, comps: Iterable[np.ndarray]) -> "VectorField":
        return cls([ScalarField.from_values(grid, v) for v in comps])

    @classmethod
    def from_spectral(
        cls, grid: Grid, comps: Iterable[np.ndarray], check_hermitian: bool = True
    ) -> "VectorField":
        return cls([ScalarField.from_spectral(grid, s, check_hermitian) for s in comps])

    def magnitude(self) -> ScalarField:
        """Pointwise Euclidean magnitude |v(x)|."""
        sq = sum(c.values**2 for c in self.components)
        return ScalarField.from_values(self.grid, np.sqrt(sq))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, a: float) -> "VectorField":
        return VectorField([c * a for c in self.components])

    __rmul__ = __mul__


class Multiplier:
    """A Fourier multiplier sigma(D): f -> F^{-1}(sigma . F f).

    ``symbol`` maps the tuple of frequency-component arrays to the symbol
    array (broadcastable against the spectral layout).
    """

    __slots__ = ("symbol", "description")

    def __init__(self, symbol: Callable[..., np.ndarray], description: str = ""):
        self.symbol = symbol
        self.description = description

    def table(self, grid: Grid) -> np.ndarray:
        """Evaluate the symbol on the grid's frequency lattice."""
        sig = np.asarray(self.symbol(*grid.freq_components()))
        return np.broadcast_to(sig, grid.shape)

    def __repr__(self) -> str:
        return f"Multiplier({self.description!r})"


def _require_hermitian(spec: np.ndarray, rtol: float = 1e-12) -> None:
    """Check sigma-hat(-k) == conj(sigma-hat(k)) up to Nyquist ambiguity."""
    mirrored = spec
    for ax in range(spec.ndim):
        mirrored = np.flip(np.roll(mirrored, -1, axis=ax), axis=ax)
    scale = np.max(np.abs(spec))
    if scale == 0.0:
        return
    err = np.max(np.abs(spec - np.conj(mirrored)))
    if err > rtol * scale:
        raise ValueError(f"spectral data is not Hermitian-symmetric (residue {err:.3e})")


def forward_transform(f: ScalarField) -> np.ndarray:
    """Spectral coefficients of ``f`` under the package normalization."""
    return f.spectral


def inverse_transform(grid: Grid, spectral: np.ndarray) -> ScalarField:
    """Field whose coefficients are ``spectral`` (must be Hermitian)."""
    return ScalarField.from_spectral(grid, spectral)


def apply_symbol_table(f: ScalarField, table: np.ndarray, description: str = "") -> ScalarField:
    """Multiply the spectrum of ``f`` pointwise by a pre-tabulated symbol.

    The inverse transform of a conjugate-symmetric product is real up to
    rounding; the imaginary residue is discarded after checking it stays
    below ``REALITY_RTOL`` relative to the output (otherwise the symbol is
    not conjugate-symmetric and :class:`NonRealOutput` is raised).
    """
    prod = table * f.spectral
    out = _fft.ifftn(prod) * prod.size
    re, im = np.real(out), np.imag(out)
    scale = max(float(np.max(np.abs(re))), np.finfo(np.float64).tiny)
    resid = float(np.max(np.abs(im))) / scale
    if resid > REALITY_RTOL:
        raise NonRealOutput(
            f"multiplier {description!r} produced imaginary residue {resid:.3e}"
        )
    return ScalarField.from_values(f.grid, re)


def apply_multiplier(m: Multiplier, f: ScalarField) -> ScalarField:
    """Apply sigma(D) to a scalar field, returning a real field."""
    table = m.table(f.grid)
    if not np.all(np.isfinite(table)):
        raise ValueError(f"multiplier {m.description!r} not finite on the lattice")
    return apply_symbol_table(f, table, m.description)


def lp_norm(f: ScalarField | VectorField, p: float) -> float:
    """Lattice L^p norm (Riemann sum); vector fields use pointwise magnitude.

    For finite p this is (sum |f|^p h^dim)^(1/p), exact for the trigonometric
    polynomials the experiments use at p in {1, 2}; p = inf is the lattice max.
    """
    if isinstance(f, VectorField):
        f = f.magnitude()
    if p != np.inf and p < 1:
        raise InvalidExponent(f"p must satisfy p >= 1 or p = inf, got {p}")
    a = np.abs(f.values)
    if p == np.inf:
        return float(np.max(a))
    if p == 1:
        return float(np.sum(a) * f.grid.cell_volume)
    if p == 2:
        return float(np.sqrt(np.sum(a**2) * f.grid.cell_volume))
    return float(np.sum(a**p) * f.grid.cell_volume) ** (1.0 / p)


def spectral_l2(f: ScalarField) -> float:
    """l^2 norm of the coefficients scaled to match the lattice L^2 norm."""
    return float(
        np.sqrt(f.grid.volume * np.sum(np.abs(f.spectral) ** 2))
    )


def l2_inner(f: ScalarField | VectorField, g: ScalarField | VectorField) -> float:
    """Lattice L^2 inner product; vector fields pair componentwise."""
    if isinstance(f, VectorField) != isinstance(g, VectorField):
        raise ValueError("cannot pair scalar with vector field")
    if isinstance(f, VectorField):
        acc = 0.0
        for a, b in zip(f.components, g.components):
            acc += float(np.sum(a.values * b.values))
        return acc * f.grid.cell_volume
    return float(np.sum(f.values * g.values)) * f.grid.cell_volume
