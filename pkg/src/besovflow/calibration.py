"""Frozen calibration brackets.

The underlying theory guarantees two-sided bounds with unspecified
constants; the concrete values below were measured once on the reference
configurations (see the acceptance suite) and then frozen.  Checks assert
against these brackets; they are regression bounds, not derived constants.

Reference configurations:

* 1-D:  n = 16384, kappa = 8,   (s, p) = (2, 2)   -- toy model, profile
* 2-D:  n = 1024,  kappa = 4.5, (s, p) = (3, 2)   -- solver experiments
* 2-D:  n = 2048,  kappa = 4.5, (s, p) = (3, 2)   -- data / leading term
"""

from __future__ import annotations

# ratio ||f||_B / (||f||_Lp + ||f||_B-dot) over the random band-limited corpus
EQUIVALENCE_RATIO_BRACKET = (0.30, 1.05)

# ||grad f||_p / (2^j ||f||_p) for fields supported in the phi == 1 annulus
# [4/3, 3/2] * 2^j; at p = 2 Parseval pins the ratio inside the annulus itself
BERNSTEIN_BRACKET = (1.20, 1.60)

# ||fg||_{B^s_{p,inf}} <= C_alg ||f|| ||g|| over the random corpus
ALGEBRA_CONSTANT = 6.0

# ||R_i f||_{B-dot} <= C_R ||f||_{B-dot}; the symbol modulus is <= 1
RIESZ_BESOV_CONSTANT = 1.0 + 1e-10

# besov(u0, (s,p,inf)) / delta on the 2-D reference configurations
U0_RATIO_BRACKET = (20.0, 40.0)

# per-block flatness: 2^{js} ||block_j u0||_p / delta across included bricks
U0_BLOCK_RATIO_BRACKET = (20.0, 40.0)

# toy model: plateau value of g(t)/t (1-D reference configuration)
TOY_RATIO_BRACKET = (15.0, 40.0)

# leading term: L(t) / (delta 2^n t) for t 2^n <= 0.1 (2-D reference)
LEADING_BRACKET = (15.0, 40.0)

# ||I1|| + ||I2|| <= ERROR_DRIFT_COEF * t * delta^2  (2-D solver reference)
ERROR_DRIFT_COEF = 1.0

# ||I3|| + ||I4|| <= ERROR_REMAINDER_COEF * t^2 * delta^3
ERROR_REMAINDER_COEF = 1.0

# sup_t ||u_ns(t)||_{B^s_{p,inf}} <= UNIFORM_BOUND_MULTIPLE * delta
UNIFORM_BOUND_MULTIPLE = 40.0
