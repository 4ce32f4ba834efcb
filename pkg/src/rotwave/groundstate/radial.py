"""Positive radial solution of -u'' - u'/r + m u = |u|^{p-2} u on (0, 1),
u'(0) = 0, u(1) = 0, by shooting on a = u(0)."""
from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import integrate, optimize

from ..errors import ConfigurationError, DomainError
from ..specfun import bessel_j_zero

R0 = 1e-4
RTOL = 1e-12


@dataclasses.dataclass(frozen=True)
class RadialProfile:
    m: float
    p_exponent: float
    u0: float
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    ode_residual: float
    _sol: object = dataclasses.field(repr=False, default=None)

    def __call__(self, r):
        """u at radii r in [0, 1]."""
        r = np.asarray(r, dtype=float)
        out = np.where(r < R0, self._series(r), 0.0)
        inner = r >= R0
        if np.any(inner):
            out = np.array(out, dtype=float)
            out[inner] = self._sol(r[inner])[0]
        return out if out.ndim else float(out)

    def _series(self, r):
        a = self.u0
        return a + (self.m * a - abs(a) ** (self.p_exponent - 2) * a) * r * r / 4


def _rhs(m, p):
    def f(r, y):
        u, v = y
        return [v, -v / r + m * u - abs(u) ** (p - 2) * u]
    return f


def _start(a, m, p):
    c = (m * a - abs(a) ** (p - 2) * a) / 4
    return [a + c * R0 * R0, 2 * c * R0]


def _shoot(a, m, p, dense=False):
    def hit(r, y):
        return y[0]
    hit.terminal = not dense
    hit.direction = -1
    return integrate.solve_ivp(_rhs(m, p), (R0, 1.0), _start(a, m, p), method="DOP853",
                               rtol=RTOL, atol=1e-14 * max(1.0, a), events=hit,
                               dense_output=dense)


def _crosses(a, m, p) -> bool:
    sol = _shoot(a, m, p)
    return len(sol.t_events[0]) > 0 and sol.t_events[0][0] < 1.0


def radial_solution(m: float, p_exponent: float, grid: int = 2001):
    """Shoot for the positive radial solution; returns (profile, beta_m).

    beta_m = (1/2 - 1/p) * 2 pi int_0^1 u^p r dr, the energy of u_m.
    """
    p = float(p_exponent)
    if not p > 2:
        raise DomainError(f"p_exponent must exceed 2, got {p!r}")
    lam1 = bessel_j_zero(0, 1).value ** 2
    if not m > -lam1:
        raise DomainError(f"m must exceed -j_01^2 = {-lam1:.6f}, got {m!r}")
    # the positive solution needs u(0)^{p-2} > m + lambda_1 > 0 somewhere;
    # start just above max(m, 0)^{1/(p-2)} and grow until u hits zero before 1
    lo = max(m, 0.0) ** (1 / (p - 2)) if m > 0 else 1e-3
    while _crosses(lo, m, p):
        lo *= 0.5
        if lo < 1e-12:
            raise ConfigurationError("shooting lower bracket not found")
    hi = max(2 * lo, 1.0)
    for _ in range(200):
        if _crosses(hi, m, p):
            break
        lo, hi = hi, 2 * hi
    else:
        raise ConfigurationError("shooting upper bracket not found")
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if _crosses(mid, m, p):
            hi = mid
        else:
            lo = mid

    def end(a):
        sol = _shoot(a, m, p, dense=True)
        return sol.y[0, -1]

    a = optimize.brentq(end, lo, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps)
    sol = _shoot(a, m, p, dense=True)
    r = np.linspace(0.0, 1.0, grid)
    y = np.empty((2, grid))
    y[:, r >= R0] = sol.sol(r[r >= R0])
    small = r < R0
    c = (m * a - abs(a) ** (p - 2) * a) / 4
    y[0, small] = a + c * r[small] ** 2
    y[1, small] = 2 * c * r[small]
    resid = _ode_residual(sol, m, p)
    profile = RadialProfile(m, p, a, r, y[0], y[1], resid, sol.sol)
    x, w = np.polynomial.legendre.leggauss(200)
    rr = 0.5 * (x + 1)
    uu = profile(rr)
    beta = (0.5 - 1 / p) * 2 * math.pi * float(np.sum(0.5 * w * rr * np.abs(uu) ** p))
    return profile, beta


def _ode_residual(sol, m, p) -> float:
    """Max of |u'' + u'/r - m u + |u|^{p-2} u| over interior collocation
    points, relative to the size of the individual terms."""
    r = np.linspace(0.05, 0.99, 400)
    h = 5e-4
    u, du = sol.sol(r)
    v = lambda x: sol.sol(x)[1]
    d2 = (v(r - 2 * h) - 8 * v(r - h) + 8 * v(r + h) - v(r + 2 * h)) / (12 * h)
    nl = np.abs(u) ** (p - 2) * u
    res = d2 + du / r - m * u + nl
    scale = np.abs(d2) + np.abs(du / r) + np.abs(m * u) + np.abs(nl)
    return float(np.max(np.abs(res)) / np.max(scale))
