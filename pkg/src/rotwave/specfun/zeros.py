"""Positive zeros j_{nu,k} of J_nu for real order nu >= 0.

Ranks are certified, not estimated: J_nu has no zeros on (0, nu], and
consecutive zeros are more than 3.11 apart for every nu >= 0 (the gap
exceeds pi for nu > 1/2 and is smallest, j_{0,2} - j_{0,1} = 3.1153..., at
nu = 0).  Sampling J_nu from x = nu upward with step ``SCAN_STEP`` < 3.11
therefore puts every zero in its own sign-change bracket, and the k-th
bracket holds exactly the k-th zero.  Each bracket is then refined by
safeguarded Halley iteration, with J'' supplied by the Bessel equation.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import enum
import functools
import math
import threading

import numpy as np
from scipy import special

from ..config import default_threads
from ..errors import AccuracyError, DomainError
from .quadrature import integrate_decaying

SCAN_STEP = 2.9
_EPS = np.finfo(float).eps

# first zeros of Ai, used by the large-order initial guess
_AIRY_ZEROS = (
    -2.338107410459767, -4.087949444130971, -5.520559828095551,
    -6.786708090071759, -7.944133587120853, -9.022650853340980,
    -10.04017434155809, -11.00852430373326, -11.93601556323626,
    -12.82877675286576,
)


class GuessSource(str, enum.Enum):
    MCMAHON = "mcmahon"
    OLVER = "olver_heuristic"
    CONTINUATION = "continuation"


@dataclasses.dataclass(frozen=True)
class BesselZeroRecord:
    order: float
    rank: int
    value: float
    residual: float
    guess_source: GuessSource


def mcmahon(nu: float, k: int) -> float:
    """Three-term McMahon expansion of j_{nu,k} for fixed order, large k."""
    beta = (k + nu / 2 - 0.25) * math.pi
    return beta - (4 * nu * nu - 1) / (8 * beta)


def airy_zero(k: int) -> float:
    if k <= len(_AIRY_ZEROS):
        return _AIRY_ZEROS[k - 1]
    t = 3 * math.pi * (4 * k - 1) / 8
    return -(t ** (2 / 3)) * (1 + 5 / 48 * t**-2)


def initial_guess(nu: float, k: int) -> tuple[float, GuessSource]:
    if k >= nu:
        return mcmahon(nu, k), GuessSource.MCMAHON
    a = airy_zero(k)
    h = (nu / 2) ** (1 / 3)
    return nu - a * h + 0.15 * a * a / h, GuessSource.OLVER


def _validate(nu, k):
    if not (nu >= 0 and math.isfinite(nu)):
        raise DomainError(f"order must be finite and nonnegative, got {nu!r}")
    if int(k) != k or k < 1:
        raise DomainError(f"rank must be a positive integer, got {k!r}")


def _scan(nu: float, count: int, hint: float, keep_all: bool):
    """Sign-change brackets of the first ``count`` zeros.

    Returns arrays ``(a, b, fa, fb)``; with ``keep_all=False`` only the
    bracket of the ``count``-th zero is returned.
    """
    # no zero lies below max(nu, j_{0,1}), so x = max(nu, 1) is a safe start
    x0 = max(float(nu), 1.0)
    f0 = special.jv(nu, x0)
    if not f0 > 0:
        raise AccuracyError("J_nu(nu) is not positive; cannot start the rank scan",
                            diagnostics={"nu": nu, "J": f0})
    found = 0
    parts = []
    end = max(hint, x0) + 10.0
    for _ in range(10_000):
        n = max(8, int(math.ceil((end - x0) / SCAN_STEP)))
        xs = x0 + SCAN_STEP * np.arange(1, n + 1)
        fs = special.jv(nu, xs)
        exact = fs == 0.0
        if np.any(exact):
            xs[exact] += 1e-3 * SCAN_STEP
            fs[exact] = special.jv(nu, xs[exact])
        if not np.all(np.isfinite(fs)):
            raise AccuracyError("non-finite J_nu during rank scan", diagnostics={"nu": nu})
        xa = np.concatenate(([x0], xs[:-1]))
        fa = np.concatenate(([f0], fs[:-1]))
        idx = np.nonzero(np.signbit(fa) != np.signbit(fs))[0]
        take = idx[: count - found]
        if keep_all:
            parts.append((xa[take], xs[take], fa[take], fs[take]))
        elif found + len(take) == count:
            i = take[-1:]
            parts.append((xa[i], xs[i], fa[i], fs[i]))
        found += len(take)
        if found == count:
            return tuple(np.concatenate(p) for p in zip(*parts))
        x0, f0 = xs[-1], fs[-1]
        end = x0 + (count - found) * math.pi * 1.1 + 10.0
    raise AccuracyError("failed to bracket the requested zero",
                        diagnostics={"nu": nu, "count": count, "found": found, "x": x0})


def zeros_around(nu: float, x: float, k_max: int, width: int = 2):
    """Ranks and values of the zeros of J_nu adjacent to x.

    Returns up to ``width`` zeros below x and ``width`` above, restricted to
    ranks 1..k_max, as (ranks, values) arrays in increasing order.  Ranks
    come from the same sign-change count as ``zero_row``.
    """
    _validate(nu, k_max)
    nu = float(nu)
    x0 = nu
    f0 = special.jv(nu, x0)
    if not f0 > 0:
        raise AccuracyError("J_nu(nu) is not positive; cannot start the rank scan",
                            diagnostics={"nu": nu})
    found = 0
    above = 0
    parts = []
    chunk = 256
    while found < k_max and above < width:
        xs = x0 + SCAN_STEP * np.arange(1, chunk + 1)
        fs = special.jv(nu, xs)
        exact = fs == 0.0
        if np.any(exact):
            xs[exact] += 1e-3 * SCAN_STEP
            fs[exact] = special.jv(nu, xs[exact])
        xa = np.concatenate(([x0], xs[:-1]))
        fa = np.concatenate(([f0], fs[:-1]))
        idx = np.nonzero(np.signbit(fa) != np.signbit(fs))[0][: k_max - found]
        parts.append((found + 1 + np.arange(len(idx)), xa[idx], xs[idx], fa[idx], fs[idx]))
        found += len(idx)
        above += int(np.count_nonzero(xa[idx] >= x))
        x0, f0 = xs[-1], fs[-1]
        if x0 < x - 10 * SCAN_STEP * chunk:
            chunk = min(chunk * 2, 1 << 16)
    ranks, a, b, fa, fb = (np.concatenate(p) for p in zip(*parts)) if parts else \
        (np.empty(0, dtype=int),) + (np.empty(0),) * 4
    # brackets straddling x are refined before deciding their side
    pick = np.nonzero((b >= x - 0.0) & (a < x))[0]
    below = np.nonzero(b < x)[0][-width:]
    over = np.nonzero(a >= x)[0][:width]
    sel = np.unique(np.concatenate((below, pick, over)))
    if len(sel) == 0:
        return np.empty(0, dtype=int), np.empty(0)
    vals = _refine(nu, a[sel], b[sel], fa[sel], fb[sel])
    ranks = ranks[sel]
    lo = vals < x
    keep = np.concatenate((np.nonzero(lo)[0][-width:], np.nonzero(~lo)[0][:width]))
    return ranks[keep].astype(int), vals[keep]


def _refine(nu: float, a, b, fa, fb, max_iter: int = 60):
    """Safeguarded Halley iteration inside each bracket (vectorized)."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    fa = np.array(fa, dtype=float)
    x = a - fa * (b - a) / (fb - fa)
    x = np.where((x > a) & (x < b), x, 0.5 * (a + b))
    active = np.ones(x.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        i = np.nonzero(active)[0]
        xi = x[i]
        J = special.jv(nu, xi)
        Jd = special.jv(nu - 1.0, xi) - (nu / xi) * J
        J2 = -Jd / xi - (1.0 - (nu / xi) ** 2) * J
        same = np.signbit(J) == np.signbit(fa[i])
        a[i] = np.where(same, xi, a[i])
        fa[i] = np.where(same, J, fa[i])
        b[i] = np.where(same, b[i], xi)
        dx = -2.0 * J * Jd / (2.0 * Jd * Jd - J * J2)
        xn = xi + dx
        bad = ~np.isfinite(xn) | (xn <= a[i]) | (xn >= b[i])
        xn = np.where(bad, 0.5 * (a[i] + b[i]), xn)
        tiny = np.abs(xn - xi) <= 4 * _EPS * xi
        width = (b[i] - a[i]) <= 4 * _EPS * xi
        hit = J == 0.0
        x[i] = np.where(hit, xi, xn)
        active[i] = ~(tiny | width | hit)
    if active.any():
        raise AccuracyError("zero refinement did not converge",
                            partial=x.copy(), diagnostics={"nu": nu})
    return x


def _record(nu, k, value, source):
    return BesselZeroRecord(float(nu), int(k), float(value),
                            float(abs(special.jv(nu, value))), source)


@functools.lru_cache(maxsize=8192)
def _single_zero(nu: float, k: int) -> BesselZeroRecord:
    guess, source = initial_guess(nu, k)
    a, b, fa, fb = _scan(nu, k, guess, keep_all=False)
    x = _refine(nu, a, b, fa, fb)
    return _record(nu, k, x[0], source)


def bessel_j_zero(nu: float, k: int) -> BesselZeroRecord:
    """The k-th positive zero of J_nu."""
    _validate(nu, k)
    return _single_zero(float(nu), int(k))


_ROWS: dict[float, np.ndarray] = {}
_ROWS_LOCK = threading.Lock()


def zero_row(nu: float, count: int) -> np.ndarray:
    """The first ``count`` zeros of J_nu as a read-only array (memoized)."""
    _validate(nu, count)
    nu = float(nu)
    row = _ROWS.get(nu)
    if row is not None and len(row) >= count:
        return row[:count]
    guess, _ = initial_guess(nu, count)
    a, b, fa, fb = _scan(nu, count, guess, keep_all=True)
    row = _refine(nu, a, b, fa, fb)
    if np.any(np.diff(row) <= 0):
        raise AccuracyError("zero row is not strictly increasing", diagnostics={"nu": nu})
    row.setflags(write=False)
    with _ROWS_LOCK:
        old = _ROWS.get(nu)
        if old is None or len(old) < len(row):
            _ROWS[nu] = row
    return row[:count]


def clear_cache():
    with _ROWS_LOCK:
        _ROWS.clear()
    _single_zero.cache_clear()


def zero_table(nu_values, k_max: int, workers: int | None = None) -> np.ndarray:
    """Zeros j_{nu,k}, k = 1..k_max, for each nu; shape (len(nu_values), k_max)."""
    nus = [float(v) for v in nu_values]
    if k_max < 1:
        raise DomainError("k_max must be at least 1")
    workers = workers or default_threads()

    def row(item):
        i, nu = item
        try:
            return zero_row(nu, k_max)
        except (AccuracyError, DomainError) as exc:
            raise type(exc)(f"zero grid failed at index {i} (nu={nu}): {exc}") from exc

    if workers > 1 and len(nus) > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(row, enumerate(nus)))
    else:
        rows = [row(item) for item in enumerate(nus)]
    if not rows:
        return np.empty((0, k_max))
    return np.vstack(rows)


def bessel_j_zero_grid(nu_list, k_max: int, workers: int | None = None) -> list[BesselZeroRecord]:
    """All zeros j_{nu,k}, nu in ``nu_list``, k = 1..k_max, nu-major order."""
    nus = [float(v) for v in nu_list]
    table = zero_table(nus, k_max, workers)
    out = []
    for nu, values in zip(nus, table):
        first = initial_guess(nu, 1)[1]
        for k, v in enumerate(values, start=1):
            out.append(_record(nu, k, v, first if k == 1 else GuessSource.CONTINUATION))
    return out


def dzero_dnu(nu: float, k: int, tol: float | None = None) -> float:
    """d j_{nu,k} / d nu from Watson's integral.

    With u = 2 j sinh t the formula 2 j int K0(2 j sinh t) exp(-2 nu t) dt
    becomes int K0(u) exp(-2 nu asinh(u/2j)) / sqrt(1 + (u/2j)^2) du,
    whose integrand decays at least like K0(u).
    """
    j = bessel_j_zero(nu, k).value
    inv2j = 0.5 / j
    two_nu = 2.0 * nu

    def integrand(u):
        v = u * inv2j
        return special.k0(u) * math.exp(-two_nu * math.asinh(v)) / math.sqrt(1.0 + v * v)

    return integrate_decaying(integrand, tol, decay=1.0).value
