"""Truncated eigenbasis of L_{alpha,m} = -Laplace + alpha^2 d_theta^2 + m on
the unit disk, and the energy functional restricted to it.

Modes are A cos(l theta) J_l(j_{l,k} r) and A sin(l theta) J_l(j_{l,k} r)
with A chosen for unit L^2 norm.  In coefficients c over this basis,

    Phi(c) = 1/2 sum (lambda + m) c^2 - (1/p) int |u|^p,

where the integral uses a tensor rule: Gauss-Legendre in r (weight r) and
the uniform rule in theta.
"""
from __future__ import annotations

import dataclasses
import math
import warnings

import numpy as np
from scipy import special

from ..errors import AccuracyError, ConfigurationError, DomainError
from ..spectrum import classify
from ..specfun import zero_table

ZERO_TOL = 1e-6
RESOLUTION_TOL = 1e-6
COS, SIN = 0, 1


@dataclasses.dataclass(frozen=True)
class Quadrature:
    r: np.ndarray
    r_weights: np.ndarray  # Gauss-Legendre weights times r
    theta: np.ndarray
    theta_weight: float


@dataclasses.dataclass(frozen=True)
class Partition:
    positive: np.ndarray
    zero: np.ndarray
    negative: np.ndarray


@dataclasses.dataclass(frozen=True, eq=False)
class GalerkinModel:
    alpha: float
    m: float
    p_exponent: float
    L: int
    K: int
    l: np.ndarray
    k: np.ndarray
    parity: np.ndarray
    eigenvalue: np.ndarray  # lambda + m
    norm: np.ndarray
    partition: Partition
    quadrature: Quadrature
    sigma: tuple[int, int] | None = None
    # basis tables: radial[l] is (nr, K); angular rows for cos/sin
    _radial: np.ndarray = dataclasses.field(repr=False, default=None)
    _cos: np.ndarray = dataclasses.field(repr=False, default=None)
    _sin: np.ndarray = dataclasses.field(repr=False, default=None)

    @property
    def size(self) -> int:
        return len(self.l)

    @property
    def modes(self):
        """(l, k, parity, lambda + m, normalization) per mode."""
        names = ("cos", "sin")
        return [(int(a), int(b), names[c], float(d), float(e)) for a, b, c, d, e in
                zip(self.l, self.k, self.parity, self.eigenvalue, self.norm)]

    def _split(self, c):
        """Coefficient vector -> (L+1, K) cos block and (L+1, K) sin block."""
        K = self.K
        cos = c[: (self.L + 1) * K].reshape(self.L + 1, K)
        sin = np.zeros_like(cos)
        sin[1:] = c[(self.L + 1) * K:].reshape(self.L, K)
        return cos, sin

    def _join(self, cos, sin):
        return np.concatenate((cos.ravel(), sin[1:].ravel()))

    def field(self, c) -> np.ndarray:
        """u on the (r, theta) grid, shape (nr, ntheta)."""
        c = self._check(c)
        cos, sin = self._split(c)
        rc = np.einsum("lrk,lk->rl", self._radial, cos)
        rs = np.einsum("lrk,lk->rl", self._radial, sin)
        return rc @ self._cos + rs @ self._sin

    def project(self, g) -> np.ndarray:
        """Coefficients of int g phi_i over the disk, for g on the grid
        already multiplied by the quadrature weights."""
        pc = g @ self._cos.T
        ps = g @ self._sin.T
        cos = np.einsum("lrk,rl->lk", self._radial, pc)
        sin = np.einsum("lrk,rl->lk", self._radial, ps)
        return self._join(cos, sin)

    def weights(self) -> np.ndarray:
        q = self.quadrature
        return q.r_weights[:, None] * q.theta_weight

    def lp_integral(self, c) -> float:
        """int |u|^p over the disk."""
        u = self.field(c)
        return float(np.sum(np.abs(u) ** self.p_exponent * self.weights()))

    def _check(self, c):
        c = np.asarray(c, dtype=float)
        if c.shape != (self.size,):
            raise DomainError(f"coefficient vector must have shape ({self.size},), got {c.shape}")
        return c

    def energy_norm(self, c) -> float:
        """||c||_{alpha,m}, with weight 1 on the zero modes."""
        c = self._check(c)
        w = np.abs(self.eigenvalue).copy()
        w[self.partition.zero] = 1.0
        return float(np.sqrt(np.sum(w * c * c)))

    def dual_norm(self, g) -> float:
        w = np.abs(self.eigenvalue).copy()
        w[self.partition.zero] = 1.0
        return float(np.sqrt(np.sum(g * g / w)))

    def refined(self) -> "GalerkinModel":
        """Same modes with doubled radial and angular node counts."""
        return _assemble(self.alpha, self.m, self.p_exponent, self.L, self.K, self.sigma,
                         2 * len(self.quadrature.r), 2 * len(self.quadrature.theta),
                         self.l, self.k, self.parity, self.eigenvalue, self.norm,
                         self.partition, self._zeros)


def radial_nodes(j_max: float) -> int:
    # products of two modes oscillate at up to 2 j_max; Gauss-Legendre needs
    # about j_max + O(1) nodes to resolve that
    return max(64, int(math.ceil(j_max)) + 32)


def build_galerkin(sigma, m: float, p_exponent: float, L: int, K: int,
                   radial: int | None = None, angular: int | None = None) -> GalerkinModel:
    """Truncated model for alpha = f(p/q), 0 <= l <= L, 1 <= k <= K.

    ``sigma`` is a (p, q) pair; a float is taken as alpha directly, which
    skips the classification warning.
    """
    if not 2 < p_exponent < 4:
        raise DomainError(f"p_exponent must lie in (2, 4), got {p_exponent!r}")
    if int(L) != L or int(K) != K or L < 0 or K < 1:
        raise DomainError(f"invalid truncation L={L!r}, K={K!r}")
    if not math.isfinite(m):
        raise DomainError("m must be finite")
    if isinstance(sigma, tuple):
        s = classify(*sigma)
        alpha, pq = s.alpha, (s.p, s.q)
        if s.has_accumulation:
            warnings.warn(f"sigma = {s.p}/{s.q} satisfies C3; ground-state existence is "
                          "open in this case and the truncated energy may not converge",
                          RuntimeWarning, stacklevel=2)
    else:
        alpha, pq = float(sigma), None
        if not alpha > 1:
            raise DomainError(f"alpha must exceed 1, got {alpha!r}")
    L, K = int(L), int(K)
    zeros = zero_table(range(L + 1), K)
    ls = np.arange(L + 1)
    lam = (zeros - alpha * ls[:, None]) * (zeros + alpha * ls[:, None]) + m
    jn = special.jv(ls[:, None] + 1, zeros)
    norm = 1.0 / np.sqrt(math.pi * (1 + (ls[:, None] == 0)) * jn * jn / 2)

    kk = np.tile(np.arange(1, K + 1), L + 1)
    l_idx = np.repeat(ls, K)
    l_all = np.concatenate((l_idx, np.repeat(ls[1:], K)))
    k_all = np.concatenate((kk, np.tile(np.arange(1, K + 1), L)))
    parity = np.concatenate((np.full(len(l_idx), COS), np.full(L * K, SIN)))
    ev = np.concatenate((lam.ravel(), lam[1:].ravel()))
    nm = np.concatenate((norm.ravel(), norm[1:].ravel()))

    zero = np.abs(ev) < ZERO_TOL
    part = Partition(np.nonzero((ev > 0) & ~zero)[0], np.nonzero(zero)[0],
                     np.nonzero((ev < 0) & ~zero)[0])
    if len(part.positive) == 0:
        raise ConfigurationError("truncation has no positive modes; increase K or m")
    nr = radial or radial_nodes(float(zeros.max()))
    nt = angular or max(64, 8 * (L + 1))
    return _assemble(alpha, m, p_exponent, L, K, pq, nr, nt, l_all, k_all, parity, ev, nm,
                     part, zeros)


def _assemble(alpha, m, p, L, K, pq, nr, nt, l, k, parity, ev, nm, part, zeros):
    x, w = np.polynomial.legendre.leggauss(nr)
    r = 0.5 * (x + 1)
    rw = 0.5 * w * r
    theta = 2 * math.pi * np.arange(nt) / nt
    quad = Quadrature(r, rw, theta, 2 * math.pi / nt)
    ls = np.arange(L + 1)
    norm = nm[: (L + 1) * K].reshape(L + 1, K)
    radial = special.jv(ls[:, None, None], zeros[:, None, :] * r[None, :, None]) * norm[:, None, :]
    cos = np.cos(np.outer(ls, theta))
    sin = np.sin(np.outer(ls, theta))
    for a in (l, k, parity, ev, nm, radial, cos, sin):
        a.setflags(write=False)
    model = GalerkinModel(alpha, m, p, L, K, l, k, parity, ev, nm, part, quad, pq,
                          radial, cos, sin)
    object.__setattr__(model, "_zeros", zeros)
    return model


def evaluate_energy(model: GalerkinModel, coefficients, check_resolution: bool = False):
    """Phi and its gradient with respect to the coefficients.

    With ``check_resolution`` the nonlinear term is recomputed on a grid
    with doubled node counts; a relative disagreement above 1e-6 raises
    AccuracyError.
    """
    c = model._check(coefficients)
    p = model.p_exponent
    u = model.field(c)
    au = np.abs(u)
    w = model.weights()
    ip = float(np.sum(au**p * w))
    value = 0.5 * float(np.sum(model.eigenvalue * c * c)) - ip / p
    grad = model.eigenvalue * c - model.project(au ** (p - 2) * u * w)
    if check_resolution and ip > 0:
        fine = model.refined().lp_integral(c)
        if abs(fine - ip) > RESOLUTION_TOL * max(abs(fine), 1e-300):
            raise AccuracyError("nonlinear term under-resolved by the quadrature grid",
                                partial=value, diagnostics={"coarse": ip, "fine": fine})
    return value, grad


def hessian_vector(model: GalerkinModel, coefficients, direction) -> np.ndarray:
    """Phi''(c) applied to ``direction``."""
    c = model._check(coefficients)
    d = model._check(direction)
    p = model.p_exponent
    u = model.field(c)
    du = model.field(d)
    return model.eigenvalue * d - (p - 1) * model.project(np.abs(u) ** (p - 2) * du * model.weights())
