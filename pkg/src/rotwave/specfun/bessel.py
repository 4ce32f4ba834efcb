"""Bessel functions J_nu (real order), K0/K1, and Laplace moments of K1."""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..config import get_tolerances
from ..errors import DomainError, RangeError
from .quadrature import integrate_decaying

_TINY = np.finfo(float).tiny


def bessel_j(nu, x):
    """J_nu(x) for nu >= 0, x >= 0.

    Backed by the AMOS/Cephes routines in :mod:`scipy.special`, which switch
    between power series, recurrence and uniform (Debye/Airy) asymptotics
    internally and stay accurate through the turning point nu ~ x.
    Underflowed or non-finite values raise :class:`RangeError`.
    """
    nu_arr = np.asarray(nu, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(nu_arr < 0) or np.any(np.isnan(nu_arr)):
        raise DomainError("order must be nonnegative")
    if np.any(x_arr < 0) or np.any(np.isnan(x_arr)):
        raise DomainError("argument must be nonnegative")
    val = special.jv(nu_arr, x_arr)
    if not np.all(np.isfinite(val)):
        raise RangeError(f"J_nu(x) is not representable at nu={nu!r}, x={x!r}")
    # below the turning point J_nu is positive and tiny; a zero or
    # subnormal result there is underflow, not a root
    under = (x_arr < nu_arr) & (np.abs(val) < _TINY) & (x_arr > 0)
    if np.any(under):
        raise RangeError(f"J_nu(x) underflows at nu={nu!r}, x={x!r}")
    if val.ndim == 0:
        return float(val)
    return val


def bessel_j_prime(nu, x):
    """d/dx J_nu(x)."""
    return special.jvp(nu, x)


def bessel_k(n: int, x):
    """Modified Bessel function of the second kind K_n(x), n in {0, 1}."""
    if n not in (0, 1):
        raise DomainError("only K_0 and K_1 are supported")
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise DomainError("K_n(x) requires x > 0")
    val = special.k0(x_arr) if n == 0 else special.k1(x_arr)
    if val.ndim == 0:
        return float(val)
    return val


def k_envelope_constant(nu: float, gamma: float) -> float:
    """A constant C with K_nu(x) <= C (1 + x^-(nu+gamma)) e^-x for all x > 0.

    Taken from the two-regime estimate of the integral representation:
    ``exp((nu+gamma) asinh 1)/gamma`` for large x and
    ``2 (nu+gamma)^(nu+gamma)/gamma`` near the origin.
    """
    s = nu + gamma
    return max(math.exp(s * math.asinh(1.0)) / gamma, 2.0 * s**s / gamma)


def _check_moment_args(mu, a):
    if not mu > 1:
        raise DomainError("mu must exceed 1")
    if not (-1 < a <= 1):
        raise DomainError("a must lie in (-1, 1]")


def k1_laplace_moment(mu: float, a: float, tol: float | None = None) -> float:
    """Integral of exp(-a s) K1(s) s^(mu-1) over (0, inf), by quadrature."""
    _check_moment_args(mu, a)
    if tol is None:
        tol = get_tolerances().integral
    pw = mu - 1.0

    def integrand(s):
        return math.exp(-a * s) * special.k1(s) * s**pw

    return integrate_decaying(integrand, tol, decay=1.0 + a).value


def k1_laplace_moment_closed(mu: float, a: float) -> float:
    """Same moment through the associated Legendre function.

    sqrt(pi/2) G(mu-1) G(mu+1) (1-a^2)^(1/4-mu/2) P^{1/2-mu}_{1/2}(a), with the
    Legendre function written via 2F1(-1/2, 3/2; mu+1/2; (1-a)/2).  The
    (1-a^2) and ((1+a)/(1-a)) powers combine into (1+a)^(1/2-mu), which makes
    the endpoint a = 1 regular.
    """
    _check_moment_args(mu, a)
    nu = 1.0
    pref = math.sqrt(math.pi / 2) * math.exp(
        special.gammaln(mu - nu) + special.gammaln(mu + nu) - special.gammaln(mu + 0.5)
    )
    hyp = special.hyp2f1(0.5 - nu, nu + 0.5, mu + 0.5, (1.0 - a) / 2.0)
    return pref * (1.0 + a) ** (0.5 - mu) * hyp


def k_mellin(mu: float, nu: float) -> float:
    """Integral of s^(mu-1) K_nu(s) over (0, inf) = 2^(mu-2) G((mu-nu)/2) G((mu+nu)/2)."""
    if not mu > abs(nu):
        raise DomainError("Mellin transform of K_nu needs mu > |nu|")
    return 2.0 ** (mu - 2) * special.gamma((mu - nu) / 2) * special.gamma((mu + nu) / 2)
