"""Dirichlet spectrum {j_{l,k}^2 - alpha^2 l^2} of -Laplace + alpha^2 d_theta^2
on the unit disk, for alpha = f(p/q).

Whether the spectrum has a finite accumulation point depends only on the
fraction p/q in lowest terms:

* C1: 4 does not divide p
* C2: q is even
* C3: 4 divides p and q is odd

Only C3 admits integer indices with l = sigma k - sigma/4 (the sequence
Sigma_*), along which the eigenvalues converge to 2 alpha sigma zeta_sigma.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from fractions import Fraction

import numpy as np

from .asymptotics import f_of, iota_second_derivative, zeta
from .errors import ClassificationError, DomainError
from .specfun import zero_row, zero_table
from .specfun.zeros import zeros_around

STRUCTURAL_ZERO = 1e-6
MULTIPLICITY_TOL = 1e-8


class Condition(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"


@dataclasses.dataclass(frozen=True)
class SigmaRational:
    p: int
    q: int
    alpha: float
    condition: Condition
    conditions: frozenset
    has_accumulation: bool

    @property
    def sigma(self) -> Fraction:
        return Fraction(self.p, self.q)


def satisfied_conditions(p: int, q: int) -> frozenset:
    """All of C1, C2, C3 that hold for the reduced fraction p/q."""
    out = set()
    if p % 4:
        out.add(Condition.C1)
    if q % 2 == 0:
        out.add(Condition.C2)
    if p % 4 == 0 and q % 2:
        out.add(Condition.C3)
    return frozenset(out)


def _reduce(p, q):
    if int(p) != p or int(q) != q:
        raise DomainError(f"p and q must be integers, got {p!r}, {q!r}")
    p, q = int(p), int(q)
    if p <= 0 or q <= 0:
        raise DomainError(f"p and q must be positive, got {p}, {q}")
    g = math.gcd(p, q)
    return p // g, q // g


def classify(p: int, q: int) -> SigmaRational:
    """Classify sigma = p/q.  Non-reduced input is reduced first.

    C1 and C2 can hold together (p odd, q even); ``condition`` then reports
    C1 and ``conditions`` lists both.  C3 excludes the other two.
    """
    p, q = _reduce(p, q)
    conds = satisfied_conditions(p, q)
    primary = next(c for c in Condition if c in conds)
    return SigmaRational(p, q, f_of(p / q), primary, conds, primary is Condition.C3)


def _as_sigma(sig) -> SigmaRational:
    if isinstance(sig, SigmaRational):
        return sig
    p, q = sig
    return classify(p, q)


def sigma_star_indices(p: int, q: int, count: int) -> list[tuple[int, int]]:
    """First ``count`` pairs (k, l) with l = sigma (4k - 1)/4 a positive integer."""
    sig = classify(p, q)
    if not sig.has_accumulation:
        raise ClassificationError(
            f"sigma = {sig.p}/{sig.q} satisfies {sig.condition.value}; Sigma_* is empty")
    if count < 1:
        raise DomainError("count must be positive")
    k0 = pow(4, -1, sig.q) if sig.q > 1 else 1
    k0 = k0 or sig.q
    out = []
    for i in range(count):
        k = k0 + i * sig.q
        num = sig.p * (4 * k - 1)
        assert num % (4 * sig.q) == 0
        out.append((k, num // (4 * sig.q)))
    return out


def in_sigma_star(p: int, q: int, l, k):
    """Elementwise test of 4 q l == p (4 k - 1)."""
    return 4 * q * np.asarray(l, dtype=np.int64) == p * (4 * np.asarray(k, dtype=np.int64) - 1)


def eigenvalue(zero, alpha, l):
    """j^2 - alpha^2 l^2, in factored form to limit cancellation."""
    al = alpha * np.asarray(l, dtype=float)
    return (zero - al) * (zero + al)


@dataclasses.dataclass(frozen=True)
class SpectrumEntry:
    l: int
    k: int
    zero: float
    eigenvalue: float
    gap_ratio: float
    in_sigma_star: bool


@dataclasses.dataclass(frozen=True)
class SpectrumTable:
    """Column storage for a sorted spectrum; indexing yields SpectrumEntry."""
    alpha: float
    sigma: SigmaRational | None
    l: np.ndarray
    k: np.ndarray
    zero: np.ndarray
    eigenvalue: np.ndarray
    gap_ratio: np.ndarray
    in_sigma_star: np.ndarray

    def __len__(self):
        return len(self.l)

    def __getitem__(self, i) -> SpectrumEntry:
        return SpectrumEntry(int(self.l[i]), int(self.k[i]), float(self.zero[i]),
                             float(self.eigenvalue[i]), float(self.gap_ratio[i]),
                             bool(self.in_sigma_star[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def multiplicities(self) -> list[tuple[float, list[tuple[int, int]]]]:
        """Groups of index pairs whose eigenvalues agree within
        1e-8 max(1, |lambda|); only groups of two or more are returned."""
        ev = self.eigenvalue
        if len(ev) < 2:
            return []
        close = np.abs(np.diff(ev)) <= MULTIPLICITY_TOL * np.maximum(1.0, np.abs(ev[1:]))
        groups = []
        start = 0
        for i in range(1, len(ev) + 1):
            if i == len(ev) or not close[i - 1]:
                if i - start > 1:
                    groups.append((float(ev[start]),
                                   [(int(self.l[j]), int(self.k[j])) for j in range(start, i)]))
                start = i
        return groups


def _check_bounds(L, K):
    if int(L) != L or int(K) != K or L < 1 or K < 1:
        raise DomainError(f"L and K must be positive integers, got {L!r}, {K!r}")


def enumerate_spectrum(sig, L: int = 512, K: int = 256, workers: int | None = None) -> SpectrumTable:
    """All eigenvalues for 0 <= l <= L, 1 <= k <= K, sorted by (eigenvalue, l, k).

    ``sig`` is a SigmaRational or a (p, q) pair; alpha = f(p/q).
    """
    _check_bounds(L, K)
    s = _as_sigma(sig)
    zeros = zero_table(range(L + 1), K, workers)
    l = np.repeat(np.arange(L + 1, dtype=np.int64), K)
    k = np.tile(np.arange(1, K + 1, dtype=np.int64), L + 1)
    z = zeros.ravel()
    ev = eigenvalue(z, s.alpha, l)
    order = np.lexsort((k, l, ev))
    l, k, z, ev = l[order], k[order], z[order], ev[order]
    ro = lambda a: (a.setflags(write=False), a)[1]
    return SpectrumTable(s.alpha, s, ro(l), ro(k), ro(z), ro(ev), ro(np.abs(ev) / z),
                         ro(in_sigma_star(s.p, s.q, l, k)))


@dataclasses.dataclass(frozen=True)
class GapResult:
    c_min: float
    argmin: tuple[int, int]
    structural_zeros: tuple[tuple[int, int], ...]


def gap_scan(sig, L: int, K: int, exclude_sigma_star: bool = False) -> GapResult:
    """Smallest |lambda|/j over 0 <= l <= L, 1 <= k <= K.

    Entries with |lambda| < 1e-6 j are treated as structural zeros: they are
    excluded from the minimum and listed separately.

    Within a row, |lambda|/j = alpha^2 l^2/j - j decreases in k while
    lambda < 0 and j - alpha^2 l^2/j increases once lambda > 0, so the row
    minimum sits at one of the zeros adjacent to alpha l.  Two zeros per side
    suffice even with Sigma_* excluded, since a row holds at most one Sigma_*
    index.  Only those zeros are refined.
    """
    _check_bounds(L, K)
    s = _as_sigma(sig)
    best, arg, structural = math.inf, None, []
    for l in range(L + 1):
        ranks, z = zeros_around(float(l), s.alpha * l, K, width=2)
        ratio = np.abs(eigenvalue(z, s.alpha, l)) / z
        mask = ratio >= STRUCTURAL_ZERO
        structural.extend((l, int(k)) for k in ranks[~mask])
        if exclude_sigma_star:
            mask &= ~in_sigma_star(s.p, s.q, l, ranks)
        if not mask.any():
            continue
        i = int(np.argmin(np.where(mask, ratio, np.inf)))
        if ratio[i] < best:
            best, arg = float(ratio[i]), (l, int(ranks[i]))
    if arg is None:
        raise DomainError("no admissible entries in the truncated spectrum")
    return GapResult(best, arg, tuple(structural))


def accumulation_point(p: int, q: int, corrected: bool = False) -> float:
    """Accumulation point of the eigenvalues along Sigma_*.

    By default returns 2 alpha sigma zeta_sigma.  Expanding j_{nu,k} at
    nu = sigma k - sigma/4 to order 1/k shows that the eigenvalues actually
    converge to 2 alpha sigma (zeta_sigma - sigma^2 iota''(sigma)/32); pass
    ``corrected=True`` for that value.
    """
    s = classify(p, q)
    if not s.has_accumulation:
        raise ClassificationError(
            f"sigma = {s.p}/{s.q} satisfies {s.condition.value}; no accumulation point")
    sigma = s.p / s.q
    z = zeta(sigma)
    if corrected:
        z -= sigma * sigma * iota_second_derivative(sigma) / 32
    return 2 * s.alpha * sigma * z


def sigma_star_sequence(p: int, q: int, count: int) -> list[tuple[int, int, float]]:
    """(k, l, eigenvalue) along the first ``count`` Sigma_* indices."""
    s = classify(p, q)
    out = []
    for k, l in sigma_star_indices(p, q, count):
        z = zero_row(float(l), k)[k - 1]
        out.append((k, l, float(eigenvalue(z, s.alpha, l))))
    return out
