"""Ground-state energy by the reduction of Szulkin and Weth.

For a direction v in E+, psi(v) = max Phi over the cone {t v + w : t >= 0,
w in E0 + E-}; the ground-state energy is the infimum of psi.  The inner
maximum is a smooth concave-in-w problem solved by L-BFGS-B.  Since psi is
0-homogeneous its gradient is (t/|v|) times the E+ part of Phi'(z) with the
radial component removed (envelope theorem), which drives an outer L-BFGS.

All work is done in scaled coordinates y = sqrt(|lambda + m|) c, where the
quadratic part of Phi is +-|y|^2/2.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import optimize
from scipy.sparse import linalg as sparse_linalg

from ..errors import DomainError, SolverError
from .model import GalerkinModel, evaluate_energy, hessian_vector

INNER_GTOL = 1e-11
INNER_ACCEPT = 1e-8
RADIAL_TOL = 1e-6


@dataclasses.dataclass(frozen=True)
class SolutionReport:
    coefficients: np.ndarray
    energy: float
    residual: float
    is_radial: bool
    residuals: dict
    starts: int = 0
    outer_iterations: int = 0


class _Problem:
    def __init__(self, model: GalerkinModel):
        self.model = model
        part = model.partition
        self.pos = part.positive
        self.rest = np.concatenate((part.zero, part.negative))
        scale = np.sqrt(np.abs(model.eigenvalue))
        scale[part.zero] = 1.0
        self.scale = scale
        self.inner_evals = 0

    def compose(self, t, vhat, yw):
        c = np.zeros(self.model.size)
        c[self.pos] = t * vhat / self.scale[self.pos]
        c[self.rest] = yw / self.scale[self.rest]
        return c

    def _cold(self, vhat):
        c = np.zeros(self.model.size)
        c[self.pos] = vhat / self.scale[self.pos]
        b = self.model.lp_integral(c)
        t0 = (1.0 / b) ** (1 / (self.model.p_exponent - 2)) if b > 0 else 1.0
        return np.concatenate(([t0], np.zeros(len(self.rest))))

    def inner(self, vhat, start=None):
        """max over (t >= 0, w) of Phi(t v + w) for unit vhat (y-coordinates).

        Solved by trust-region Newton-Krylov on -Phi with exact Hessian
        products.  Phi is even, so t is left unconstrained and the sign of
        (t, w) flipped at the end.  A start worse than the one-dimensional
        maximizer along vhat is replaced by it; (t, w) = 0 is a stationary
        point a poor start could otherwise drift to.
        """
        model = self.model
        inv = 1.0 / self.scale

        def to_c(x):
            return self.compose(x[0], vhat, x[1:])

        def reduce(g):
            gy = g * inv
            return np.concatenate(([gy[self.pos] @ vhat], gy[self.rest]))

        def fun(x):
            self.inner_evals += 1
            val, g = evaluate_energy(model, to_c(x))
            return -val, -reduce(g)

        def hessp(x, d):
            return -reduce(hessian_vector(model, to_c(x), to_c(d)))

        cold = self._cold(vhat)
        if start is None or fun(start)[0] > fun(cold)[0]:
            start = cold
        message = ""
        for _ in range(2):
            x, message = _trust_krylov(fun, hessp, start, INNER_GTOL * max(1.0, abs(start[0])))
            if x[0] < 0:
                x = -x
            if x[0] > 0 or start is cold:
                break
            start = cold
        x, g = _newton_polish(fun, hessp, x)
        size = max(1.0, float(np.max(np.abs(x))))
        gnorm = float(np.max(np.abs(g)))
        if not np.all(np.isfinite(x)) or x[0] <= 0 or gnorm > INNER_ACCEPT * size:
            raise SolverError("inner maximization did not converge",
                              partial=x.copy(),
                              diagnostics={"message": message, "gradient": gnorm,
                                           "t": float(x[0])})
        return -float(fun(x)[0]), x

    def outer(self, y0, maxiter):
        state = {"x": None}

        def psi(y):
            n = np.linalg.norm(y)
            vhat = y / n
            val, x = self.inner(vhat, state["x"])
            state["x"] = x
            c = self.compose(x[0], vhat, x[1:])
            _, g = evaluate_energy(self.model, c)
            gy = (g / self.scale)[self.pos]
            gy = gy - (gy @ vhat) * vhat
            return val, (x[0] / n) * gy

        res = optimize.minimize(psi, y0, jac=True, method="L-BFGS-B",
                                options={"maxiter": maxiter, "gtol": 1e-12, "ftol": 1e-14})
        vhat = res.x / np.linalg.norm(res.x)
        val, x = self.inner(vhat, state["x"])
        return val, vhat, x, int(res.nit)


class _Breakdown(Exception):
    pass


def _trust_krylov(fun, hessp, start, gtol):
    """Minimize with scipy's trust-krylov, stopping at the first non-finite
    trial point.  Near the rounding floor of the gradient the TRLIB subproblem
    can break down and return NaN steps, which scipy would otherwise reject
    one by one until maxiter.  Returns the best iterate seen and a message."""
    best = {"f": math.inf, "x": np.asarray(start, dtype=float)}

    def guarded(x):
        if not np.all(np.isfinite(x)):
            raise _Breakdown
        f, g = fun(x)
        if f < best["f"]:
            best["f"], best["x"] = f, x.copy()
        return f, g

    try:
        with np.errstate(invalid="ignore"):
            res = optimize.minimize(guarded, start, jac=True, hessp=hessp, method="trust-krylov",
                                    options={"gtol": gtol, "maxiter": 200})
        return res.x, str(res.message)
    except _Breakdown:
        return best["x"], "Krylov subproblem broke down at the rounding floor"


def _newton_polish(fun, hessp, x, steps: int = 4):
    """Newton steps accepted on gradient decrease alone.

    Near the maximizer the decrease in Phi predicted by a trust region falls
    below the rounding of Phi itself, while the gradient is still far above
    its own noise floor; these steps finish the job.
    """
    _, g = fun(x)
    gn = np.linalg.norm(g)
    n = len(x)
    for _ in range(steps):
        op = sparse_linalg.LinearOperator((n, n), matvec=lambda d: hessp(x, d), dtype=float)
        dx, _ = sparse_linalg.cg(op, -g, rtol=1e-12, maxiter=4 * n)
        x_new = x + dx
        _, g_new = fun(x_new)
        gn_new = np.linalg.norm(g_new)
        if not gn_new < gn:
            break
        x, g, gn = x_new, g_new, gn_new
    return x, g


def _report(problem: _Problem, val, vhat, x, starts, iters) -> SolutionReport:
    model = problem.model
    c = problem.compose(x[0], vhat, x[1:])
    value, g = evaluate_energy(model, c)
    ip = model.lp_integral(c)
    quad = float(np.sum(model.eigenvalue * c * c))
    unorm = max(model.energy_norm(c), 1e-300)
    g_rest = np.zeros_like(g)
    g_rest[problem.rest] = g[problem.rest]
    critical = model.dual_norm(g)
    residuals = {
        "nehari_u": abs(quad - ip) / max(ip, 1e-300),
        "nehari_v": model.dual_norm(g_rest) / unorm,
        "critical": critical / unorm,
        "nehari_identity": abs(value - (0.5 - 1 / model.p_exponent) * ip) / max(abs(value), 1e-300),
        # |u|^p has kinks on nodal lines, so compare against a doubled grid
        "quadrature": abs(model.refined().lp_integral(c) - ip) / max(ip, 1e-300),
    }
    nonrad = model.l >= 1
    is_radial = bool(np.linalg.norm(c[nonrad]) < RADIAL_TOL * max(1.0, np.linalg.norm(c)))
    c.setflags(write=False)
    return SolutionReport(c, float(value), residuals["critical"], is_radial, residuals,
                          starts, iters)


def nehari_minimax(model: GalerkinModel, starts: int = 8, seed: int = 0,
                   screen_iterations: int = 15, max_iterations: int = 300) -> SolutionReport:
    """Minimize psi over E+ directions with multistart.

    Starts are ``starts`` random directions and the positive mode with the
    smallest lambda + m.  Each gets ``screen_iterations`` outer steps; the
    best is then polished for up to ``max_iterations``.
    """
    if len(model.partition.positive) == 0:
        raise DomainError("model has no positive modes")
    problem = _Problem(model)
    npos = len(problem.pos)
    rng = np.random.default_rng(seed)
    inits = []
    first = np.zeros(npos)
    first[int(np.argmin(model.eigenvalue[problem.pos]))] = 1.0
    inits.append(first)
    for _ in range(starts):
        v = rng.standard_normal(npos)
        inits.append(v / np.linalg.norm(v))
    best = None
    for y0 in inits:
        val, vhat, x, _ = problem.outer(y0, screen_iterations)
        if best is None or val < best[0]:
            best = (val, vhat, x)
    val, vhat, x, iters = problem.outer(best[1], max_iterations)
    if val > best[0]:
        val, vhat, x = best
    return _report(problem, val, vhat, x, len(inits), iters)


def cone_maximum(model: GalerkinModel, direction) -> tuple[float, np.ndarray]:
    """max of Phi over {t u + w}, u the E+ part of ``direction`` (coefficients)."""
    problem = _Problem(model)
    d = np.asarray(direction, dtype=float)
    y = d[problem.pos] * problem.scale[problem.pos]
    n = np.linalg.norm(y)
    if n == 0:
        raise DomainError("direction has no component in E+")
    val, x = problem.inner(y / n)
    return val, problem.compose(x[0], y / n, x[1:])
