"""Large-order maps for Bessel zeros along rays nu = x k.

Notation: f(x) = iota(x)/x, where iota(x) = lim j_{xk,k}/k; f has the explicit
inverse f^{-1}(y) = pi / (sqrt(y^2-1) - arccos(1/y)).  With s = sqrt(y^2-1)
the denominator is h(s) = s - arctan(s), which is how everything below is
evaluated: it avoids the 0/0 forms at y = 1.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import optimize

from .config import get_tolerances
from .errors import AccuracyError, DomainError
from .specfun import bessel_j_zero, dzero_dnu, k1_laplace_moment, k1_laplace_moment_closed
from .specfun.quadrature import integrate_finite

_SERIES_S = 0.5
_SERIES_TERMS = 30


def _q(s: float) -> float:
    """(h(s) - s^3/3) / s^5 = -1/5 + s^2/7 - s^4/9 + ..."""
    if s < _SERIES_S:
        s2 = s * s
        total, p = 0.0, 1.0
        for n in range(_SERIES_TERMS):
            total += (-1) ** (n + 1) * p / (2 * n + 5)
            p *= s2
        return total
    return (s - math.atan(s) - s**3 / 3) / s**5


def _h(s: float) -> float:
    if s < _SERIES_S:
        return s**3 / 3 + s**5 * _q(s)
    return s - math.atan(s)


def f_inverse(y: float) -> float:
    """sigma(y) = pi / (sqrt(y^2-1) - arccos(1/y)) for y > 1."""
    if not y > 1:
        raise DomainError(f"f_inverse needs y > 1, got {y!r}")
    if math.isinf(y):
        return 0.0
    return math.pi / _h(math.sqrt((y - 1) * (y + 1)))


def f_inverse_derivative(y: float) -> float:
    """(f^{-1})'(y) = -(sqrt(y^2-1)/(pi y)) f^{-1}(y)^2."""
    sig = f_inverse(y)
    return -math.sqrt((y - 1) * (y + 1)) / (math.pi * y) * sig * sig


def _s_of(x: float) -> float:
    target = math.pi / x
    lo = 0.999 * (3 * target) ** (1 / 3)
    hi = target + math.pi / 2
    lo = min(lo, hi)
    s = optimize.brentq(lambda v: _h(v) - target, lo, hi, xtol=1e-300, rtol=1e-15,
                        maxiter=400)
    # one Newton step on h(s) = pi/x, h'(s) = s^2/(1+s^2)
    s -= (_h(s) - target) * (1 + s * s) / (s * s)
    return s


def f_of(x: float) -> float:
    """f(x) = iota(x)/x, the unique y > 1 with f_inverse(y) = x."""
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"f_of needs finite x > 0, got {x!r}")
    return math.sqrt(1.0 + _s_of(x) ** 2)


def f_prime(x: float) -> float:
    return 1.0 / f_inverse_derivative(f_of(x))


def iota_second_derivative(x: float) -> float:
    """iota''(x) = 2 f'(x) + x f''(x), from f' = -pi f/(x^2 s), s = sqrt(f^2-1)."""
    s = _s_of(x)
    fx = math.sqrt(1 + s * s)
    fp = -math.pi * fx / (x * x * s)
    fpp = math.pi * fp / (s**3 * x * x) + 2 * math.pi * fx / (s * x**3)
    return 2 * fp + x * fpp


def iota(x: float) -> float:
    """Limit of j_{xk,k}/k as k -> infinity; iota(0) = pi."""
    if x == 0:
        return math.pi
    return x * f_of(x)


def c1(x: float) -> float:
    """First-order constant (pi/4) f / sqrt(f^2 - 1)."""
    s = _s_of(x)
    return math.pi / 4 * math.sqrt(1 + s * s) / s


def g_eval(t: float, deriv: int = 0) -> float:
    """g(t) = arccos(1/t)/sqrt(1 - 1/t^2) and its first two derivatives.

    With s = sqrt(t^2-1) and h(s) = s - arctan(s): g = t arctan(s)/s,
    g' = h/s^3 and g'' = 1/(t s^2) - 3 t h/s^5.  Near t = 1 these are 0/0, so
    for small s the same quantities come from the series of q(s) (see
    ``_q``): g' = 1/3 + s^2 q and g'' = -1/t - 3 t q.
    """
    if deriv not in (0, 1, 2):
        raise DomainError(f"deriv must be 0, 1 or 2, got {deriv!r}")
    if not t >= 1:
        raise DomainError(f"g needs t >= 1, got {t!r}")
    if math.isinf(t):
        return (math.pi / 2, 0.0, 0.0)[deriv]
    s = math.sqrt((t - 1) * (t + 1))
    if s > 1e100:
        # g' ~ 1/s^2 and g'' ~ -2/s^3 underflow; g(t) -> pi/2 to double precision
        return (math.pi / 2, 0.0, 0.0)[deriv]
    small = s < _SERIES_S
    if deriv == 0:
        if small:
            # arctan(s)/s = 1 - s^2/3 - s^4 q(s)
            return t * (1 - s * s / 3 - s**4 * _q(s))
        return t * math.atan(s) / s
    if deriv == 1:
        return 1 / 3 + s * s * _q(s) if small else _h(s) / s**3
    if small:
        return -1 / t - 3 * t * _q(s)
    return 1 / (t * s * s) - 3 * t * _h(s) / s**5


_INNER_TOL = 1e-13


def _second_derivative_F(x: float, fx: float, moment) -> float:
    """d^2F/ds^2 at (iota, x, 0) = -M(4, 1/f)/(12 x^2 f^2)."""
    return -moment(4.0, 1.0 / fx) / (12.0 * x * x * fx * fx)


def _theta0_at(x: float, fx: float, moment) -> float:
    s = math.sqrt((fx - 1) * (fx + 1))
    return (-math.pi / (8 * x * x) * g_eval(fx, 2) * fx / s
            - _second_derivative_F(x, fx, moment) * (2 / math.pi) * s / fx)


def _closed_moment(mu, a):
    return k1_laplace_moment_closed(mu, a)


def theta0(x: float) -> float:
    """The integrand whose integral over (0, x) enters zeta_x."""
    if not x > 0:
        raise DomainError(f"theta0 needs x > 0, got {x!r}")
    return _theta0_at(x, f_of(x), _closed_moment)


def _transformed_theta0(u: float) -> float:
    """Theta0(f^{-1}(t)) |(f^{-1})'(t)| dt/du at t = 1/u."""
    if u <= 1e-300:
        return _closed_moment(4.0, 0.0) / (6 * math.pi**2)
    t = 1.0 / u
    sig = f_inverse(t)
    return _theta0_at(sig, t, _closed_moment) * -f_inverse_derivative(t) * t * t


def _outer(fx: float, integrand, tol):
    res = integrate_finite(integrand, 0.0, 1.0 / fx, tol)
    return res.value


def zeta(x: float, tol: float | None = None) -> float:
    """Second-order constant zeta_x of j_{xk,k}/k.

    zeta_x = c1(x) (1/(2 pi^2) - g'(f)/8 - (1/(6 pi^2)) int_0^{1/f} (1-u^2) M(u) du)
    with M(u) = int_0^inf s^3 K1(s) e^{-us} ds evaluated by quadrature; this is
    the outer integral over t in (f, inf) after u = 1/t, with the g'' part
    integrated in closed form.
    """
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"zeta needs finite x > 0, got {x!r}")
    tol = get_tolerances().integral if tol is None else tol
    fx = f_of(x)
    inner_tol = min(_INNER_TOL, tol)

    def integrand(u):
        return (1 - u * u) * k1_laplace_moment(4.0, u, inner_tol)

    integral = g_eval(fx, 1) / 8 + _outer(fx, integrand, tol * 6 * math.pi**2) / (6 * math.pi**2)
    return c1(x) * (1 / (2 * math.pi**2) - integral)


def zeta_via_theta0(x: float, tol: float | None = None) -> float:
    """zeta_x from the integral of Theta0 over (0, x).

    The substitution t = f^{-1}(t') followed by u = 1/t' maps (0, x) onto
    (0, 1/f(x)) with a bounded integrand; Theta0 is assembled from its
    definition with the hypergeometric form of the K1 moment.
    """
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"zeta needs finite x > 0, got {x!r}")
    tol = get_tolerances().integral if tol is None else tol
    fx = f_of(x)
    integral = _outer(fx, _transformed_theta0, tol)
    return c1(x) * (1 / (2 * math.pi**2) - integral)


def theta0_integral_limit(tol: float | None = None) -> float:
    """lim_{x -> inf} of the integral of Theta0 over (0, x)."""
    tol = get_tolerances().integral if tol is None else tol
    return integrate_finite(_transformed_theta0, 0.0, 1.0, tol).value


def find_x0(lo: float = 1.0, hi: float = 100.0, max_evaluations: int = 60) -> float:
    """The unique positive root of x -> zeta_x.

    Bisection until the bracket is narrower than 1e-6, then secant steps.
    """
    evals = 0

    def z(v):
        nonlocal evals
        evals += 1
        if evals > max_evaluations:
            raise AccuracyError("find_x0 exceeded its evaluation budget",
                                partial=0.5 * (lo + hi))
        return zeta(v)

    zl, zh = z(lo), z(hi)
    if not (zl > 0 > zh):
        raise AccuracyError("zeta has no sign change on the seed bracket",
                            diagnostics={"lo": lo, "hi": hi, "zeta_lo": zl, "zeta_hi": zh})
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        zm = z(mid)
        if zm == 0:
            return mid
        if zm > 0:
            lo, zl = mid, zm
        else:
            hi, zh = mid, zm
    x0, z0, x1, z1 = lo, zl, hi, zh
    for _ in range(8):
        if z1 == z0:
            break
        x2 = x1 - z1 * (x1 - x0) / (z1 - z0)
        if abs(x2 - x1) < 1e-14 * x1:
            x1 = x2
            break
        x0, z0, x1, z1 = x1, z1, x2, z(x2)
        if abs(z1) < 1e-14:
            break
    return x1


def richardson(ks, values) -> float:
    """Extrapolate values(k) to k = inf assuming a polynomial in 1/k."""
    h = 1.0 / np.asarray(ks, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(h) < 2:
        return float(v[-1])
    coeffs = np.polyfit(h, v, len(h) - 1)
    return float(coeffs[-1])


@dataclasses.dataclass(frozen=True)
class ResidualRecord:
    k: int
    r0: float  # j_{xk,k}/k - iota(x)
    r1: float  # k r0 + c1
    r2: float  # k r1, tends to zeta_x


@dataclasses.dataclass(frozen=True)
class ExpansionProfile:
    x: float
    iota: float
    f_value: float
    c1: float
    zeta: float
    residual_orders: tuple[ResidualRecord, ...]
    zeta_extrapolated: float


def expansion_residuals(x: float, k_list, with_zeta: bool = True) -> ExpansionProfile:
    """Residuals of j_{xk,k}/k against the two-term expansion."""
    ks = [int(k) for k in k_list]
    if not ks or any(k < 1 for k in ks) or ks != sorted(set(ks)):
        raise DomainError("k_list must be a nonempty increasing list of positive integers")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    fx = f_of(x)
    io = x * fx
    c = c1(x)
    records = []
    for k in ks:
        r0 = bessel_j_zero(x * k, k).value / k - io
        r1 = k * r0 + c
        records.append(ResidualRecord(k, r0, r1, k * r1))
    extrap = richardson([r.k for r in records], [r.r2 for r in records])
    return ExpansionProfile(x, io, fx, c, zeta(x) if with_zeta else math.nan,
                            tuple(records), extrap)


@dataclasses.dataclass(frozen=True)
class DerivativeCheck:
    sigma: float
    delta: float
    limit: float
    first_order: float
    deviations: tuple[tuple[int, float], ...]
    exponent: float


def derivative_limit_check(sigma: float, k_list, delta: float | None = None,
                           tol: float = 1e-15) -> DerivativeCheck:
    """Deviation of d j_{nu,k}/d nu at nu = sigma k - delta from its expansion.

    The deviation is |dj/dnu - g(f(sigma)) - a1/k| with
    a1 = -(pi/(4 sigma)) f/sqrt(f^2-1) g'(f) - g'(f) f'(sigma) delta, which
    vanishes for the default delta = sigma/4.  ``exponent`` is the slope of a
    log-log least-squares fit of deviation against k, negated.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    delta = sigma / 4 if delta is None else float(delta)
    fs = f_of(sigma)
    gp = g_eval(fs, 1)
    limit = g_eval(fs, 0)
    a1 = -c1(sigma) / sigma * gp - gp * f_prime(sigma) * delta
    if abs(a1) < 1e-13:
        a1 = 0.0
    out = []
    for k in k_list:
        nu = sigma * k - delta
        if nu < 0:
            raise DomainError(f"order sigma*k - delta is negative at k={k}")
        d = dzero_dnu(nu, int(k), tol)
        out.append((int(k), abs(d - limit - a1 / k)))
    ks = np.array([k for k, _ in out], dtype=float)
    devs = np.array([d for _, d in out])
    if len(out) >= 2 and np.all(devs > 0):
        exponent = -float(np.polyfit(np.log(ks), np.log(devs), 1)[0])
    else:
        exponent = math.nan
    return DerivativeCheck(sigma, delta, limit, a1, tuple(out), exponent)
