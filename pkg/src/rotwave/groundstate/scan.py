"""Comparison of the ground-state energy with the radial energy over m."""
from __future__ import annotations

import dataclasses

from ..errors import DomainError
from .model import build_galerkin
from .nehari import SolutionReport, nehari_minimax
from .radial import radial_solution


@dataclasses.dataclass(frozen=True)
class ScanPoint:
    m: float
    c_val: float
    beta_val: float
    nonradial_flag: bool
    report: SolutionReport


@dataclasses.dataclass(frozen=True)
class ScanResult:
    points: tuple[ScanPoint, ...]
    m0: float | None  # smallest sampled m with c < beta

    def rows(self):
        return [(pt.m, pt.c_val, pt.beta_val, pt.nonradial_flag) for pt in self.points]


def symmetry_break_scan(sigma, p_exponent: float, m_values, L: int = 24, K: int = 24,
                        seed: int = 0, **solver) -> ScanResult:
    """Solve for c_{alpha,m} and beta_m at each m; flag c < beta."""
    ms = [float(m) for m in m_values]
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise DomainError("m_values must be strictly increasing")
    points = []
    for m in ms:
        model = build_galerkin(sigma, m, p_exponent, L, K)
        report = nehari_minimax(model, seed=seed, **solver)
        _, beta = radial_solution(m, p_exponent)
        points.append(ScanPoint(m, report.energy, beta, report.energy < beta, report))
    m0 = next((pt.m for pt in points if pt.nonradial_flag), None)
    return ScanResult(tuple(points), m0)
