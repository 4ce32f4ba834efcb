"""Quadrature on (0, inf) for integrands with exponential decay.

The interval is cut into panels: ``[0, split]`` absorbs a possible
logarithmic endpoint singularity (K0-type), then geometrically growing
panels up to a truncation point ``T`` chosen from the decay rate, and the
remaining tail is bounded rather than integrated.  Each panel is handled
by QUADPACK's extrapolating Gauss-Kronrod rule (QAGS).
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from typing import Callable

from scipy import integrate

from ..config import get_tolerances
from ..errors import AccuracyError

_MACHINE_REL = 5e-15


@dataclasses.dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.abs_error_estimate < 0 or self.evaluations <= 0:
            raise ValueError("invalid quadrature result")


class _Counted:
    __slots__ = ("f", "n")

    def __init__(self, f):
        self.f = f
        self.n = 0

    def __call__(self, x):
        self.n += 1
        return self.f(x)


def _panel(f, a, b, epsabs, limit):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info = integrate.quad(
            f, a, b, epsabs=epsabs, epsrel=_MACHINE_REL, limit=limit, full_output=1
        )[:3]
    return val, err


def tail_cutoff(f, tol, decay, start):
    """Return ``(T, tail_bound)`` with the tail integral beyond T below tol/10.

    For ``|f(s)| <= P(s) exp(-decay*s)`` with P of degree n and ``T >= 2n/decay``
    the tail is at most ``2|f(T)|/decay``; the scan starts at
    ``max(start, 40/decay)`` so polynomial factors up to degree 20 are covered.
    """
    t = max(start, 40.0 / decay)
    for _ in range(60):
        ft = abs(f(t))
        bound = 2.0 * ft / decay
        if math.isfinite(bound) and bound < tol / 10:
            return t, bound
        t *= 1.5
    raise AccuracyError("integrand does not decay at the stated rate",
                        diagnostics={"decay": decay, "last_abscissa": t})


def integrate_decaying(
    f: Callable[[float], float],
    tol: float | None = None,
    *,
    decay: float = 1.0,
    split: float = 1e-2,
    max_evaluations: int = 400_000,
) -> QuadratureResult:
    """Integrate ``f`` over (0, inf).

    ``f`` must be continuous on (0, inf), may carry an integrable log
    singularity at 0, and must decay at least like ``poly(s)*exp(-decay*s)``.
    """
    if tol is None:
        tol = get_tolerances().integral
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not decay > 0:
        raise ValueError("decay rate must be positive")

    fc = _Counted(f)
    T, tail = tail_cutoff(fc, tol, decay, start=1.0)
    edges = [0.0, split]
    x = 1.0
    while x < T:
        edges.append(x)
        x *= 2.0
    edges.append(T)
    npanel = len(edges) - 1
    epsabs = tol / (4 * npanel)

    total = 0.0
    err_total = tail
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = _panel(fc, a, b, epsabs, limit=200)
        total += val
        err_total += err
        if fc.n > max_evaluations:
            raise AccuracyError(
                "quadrature evaluation budget exhausted",
                partial=total,
                diagnostics={"evaluations": fc.n, "upper": b, "error": err_total},
            )
    if not math.isfinite(total):
        raise AccuracyError("non-finite quadrature value", partial=total)
    if err_total > max(tol, 100 * _MACHINE_REL * abs(total)):
        raise AccuracyError(
            "quadrature did not reach the requested tolerance",
            partial=total,
            diagnostics={"error_estimate": err_total, "tol": tol, "evaluations": fc.n},
        )
    return QuadratureResult(total, err_total, fc.n)


def integrate_finite(f, a, b, tol=None):
    """Adaptive Gauss-Kronrod on a finite interval with the same error contract."""
    if tol is None:
        tol = get_tolerances().integral
    fc = _Counted(f)
    val, err = _panel(fc, a, b, tol / 4, limit=400)
    if not math.isfinite(val) or err > max(tol, 100 * _MACHINE_REL * abs(val)):
        raise AccuracyError(
            "finite-interval quadrature did not converge",
            partial=val,
            diagnostics={"error_estimate": err, "tol": tol},
        )
    return QuadratureResult(val, err, fc.n)
