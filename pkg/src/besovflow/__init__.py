"""Littlewood-Paley / Besov toolkit and paired Navier-Stokes / Euler
pseudo-spectral solvers on the periodic box, with experiments probing how the
viscous solutions approach (or fail to approach) the inviscid one as the
viscosity vanishes."""

from .grid import Grid, GridError
from .fields import (
    ScalarField,
    VectorField,
    Multiplier,
    NonRealOutput,
    InvalidExponent,
    forward_transform,
    inverse_transform,
    apply_multiplier,
    lp_norm,
    l2_inner,
    spectral_l2,
)
from .littlewood_paley import (
    BesovParams,
    CutoffSystem,
    DyadicSpectrum,
    IndexOutOfRange,
    besov_equivalence_check,
    besov_norm,
    build_cutoffs,
    dyadic_block,
    dyadic_spectrum,
    homogeneous_block,
)
from .operators import (
    HeatParams,
    divergence,
    gradient,
    heat_semigroup,
    laplacian,
    leray_project,
    riesz,
)
from .initial_data import (
    CounterexampleSpec,
    FrequencyMisaligned,
    ProfileSpec,
    ResolutionTooCoarse,
    build_brick,
    build_profile,
    build_toy_datum,
    build_u0,
)
from .solvers import (
    BlowupDetected,
    SolverConfig,
    StepVerificationFailed,
    TrajectorySample,
    evolve,
    nonlinear_term,
    toy_heat_exact,
)

__version__ = "0.1.0"
