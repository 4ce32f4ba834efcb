"""Special functions: Bessel J_nu and its zeros, K0/K1, quadrature."""
from .bessel import (
    bessel_j,
    bessel_j_prime,
    bessel_k,
    k1_laplace_moment,
    k1_laplace_moment_closed,
    k_envelope_constant,
    k_mellin,
)
from .quadrature import QuadratureResult, integrate_decaying, integrate_finite
from .zeros import (
    BesselZeroRecord,
    GuessSource,
    bessel_j_zero,
    bessel_j_zero_grid,
    clear_cache,
    dzero_dnu,
    mcmahon,
    zero_row,
    zero_table,
)

__all__ = [
    "BesselZeroRecord", "GuessSource", "QuadratureResult",
    "bessel_j", "bessel_j_prime", "bessel_j_zero", "bessel_j_zero_grid", "bessel_k",
    "clear_cache", "dzero_dnu", "integrate_decaying", "integrate_finite",
    "k1_laplace_moment", "k1_laplace_moment_closed", "k_envelope_constant", "k_mellin",
    "mcmahon", "zero_row", "zero_table",
]
