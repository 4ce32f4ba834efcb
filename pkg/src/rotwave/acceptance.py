"""Acceptance criteria as plain functions, shared by the test suite and
``rotwave verify-all``.  Each check returns (passed, detail)."""
from __future__ import annotations

import dataclasses
import math
import random
import sys
import time

import numpy as np

from . import asymptotics as asy
from . import spectrum as spec
from .specfun import bessel_j_zero, k1_laplace_moment, mcmahon


@dataclasses.dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return (f"[{status}] criterion {self.number:2d} {self.title}: {self.detail} "
                f"({self.seconds:.1f}s of {self.budget:.0f}s)")


def closed_form_moments():
    e4 = abs(k1_laplace_moment(4, 1) - 16 / 35)
    e5 = abs(k1_laplace_moment(5, 1) - 16 / 21)
    return max(e4, e5) <= 1e-10, f"errors {e4:.2e}, {e5:.2e} (tol 1e-10)"


# next McMahon term for nu = 0 is -4 (mu-1)(7mu-31)/(3 (8 beta)^3), mu = 0,
# so |j - McMahon| k^3 tends to 31/(384 pi^3).  At k ~ 1000 a few ulps of j
# already contribute ~1e-3 after scaling by k^3, so each k is allowed that
# rounding on top of the limit.
MCMAHON_LIMIT = 31 / (384 * math.pi**3)


def mcmahon_consistency():
    ks = np.unique(np.geomspace(10, 1000, 40).astype(int))
    worst = 0.0
    for k in ks:
        j = bessel_j_zero(0, int(k)).value
        scaled = abs(j - mcmahon(0, int(k))) * k**3
        bound = 1.25 * MCMAHON_LIMIT + 8 * np.spacing(j) * k**3
        worst = max(worst, scaled / bound)
    return worst <= 1, (f"max of |j - McMahon| k^3 / (1.25 C + 8 ulp k^3) = {worst:.3f}, "
                        f"C = {MCMAHON_LIMIT:.3e}")


def first_order_constant():
    parts, ok = [], True
    for x in (0.5, 1.0, 4.0):
        k = 2000
        val = k * (asy.iota(x) - bessel_j_zero(x * k, k).value / k)
        rel = abs(val / asy.c1(x) - 1)
        ok &= rel < 0.01
        parts.append(f"x={x:g}: rel {rel:.1e}")
    return ok, ", ".join(parts) + " (tol 1e-2)"


def second_order_constant():
    parts, ok = [], True
    for x in (1.0, 4.0):
        prof = asy.expansion_residuals(x, [500, 1000, 2000])
        rel = abs(prof.zeta_extrapolated / prof.zeta - 1)
        ok &= rel < 0.05
        parts.append(f"x={x:g}: extrapolated {prof.zeta_extrapolated:.8f} vs zeta {prof.zeta:.8f}")
    return ok, "; ".join(parts) + " (tol 5%)"


def zeta_equivalence():
    diffs = [abs(asy.zeta(x) - asy.zeta_via_theta0(x)) for x in (0.1, 1, 4, 16, 30)]
    worst = max(diffs)
    return worst <= 1e-8, f"max difference {worst:.2e} (tol 1e-8)"


def zeta_limits_and_root():
    z = asy.zeta(1e-3)
    d0 = abs(z - 1 / (8 * math.pi))
    x0 = asy.find_x0()
    fx0 = asy.f_of(x0)
    ok0, ok1, ok2 = d0 <= 1e-3, abs(x0 - 16.2379) <= 1e-3, abs(fx0 - 1.384) <= 1e-2
    detail = (f"zeta(1e-3) off by {d0:.1e} [{'ok' if ok0 else 'no'}]; "
              f"x0 = {x0:.10f} vs 16.2379 [{'ok' if ok1 else 'no'}]; "
              f"f(x0) = {fx0:.5f} vs 1.384 [{'ok' if ok2 else 'no'}]")
    return ok0 and ok1 and ok2, detail


def classification_trichotomy(samples: int = 10_000, seed: int = 0):
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        while True:
            p, q = rng.randint(1, 10**6), rng.randint(1, 10**6)
            if math.gcd(p, q) == 1:
                break
        s = spec.classify(p, q)
        c3 = p % 4 == 0 and q % 2 == 1
        c1, c2 = p % 4 != 0, q % 2 == 0
        single = isinstance(s.condition, spec.Condition) and s.condition in s.conditions
        rule = ((spec.Condition.C3 in s.conditions) == c3 == (not c1 and not c2)
                == s.has_accumulation == (s.condition is spec.Condition.C3))
        bad += not (single and rule)
    return bad == 0, f"{samples} coprime pairs, {bad} violations"


def _sigma_star_check(p, q, corrected):
    lim = spec.accumulation_point(p, q, corrected=corrected)
    seq = spec.sigma_star_sequence(p, q, 20)
    dev = [abs(ev - lim) for _, _, ev in seq]
    mono = all(dev[i + 1] < dev[i] for i in range(4, 19))
    rel = dev[19] / abs(lim)
    return mono and rel < 0.05, f"({p},{q}) limit {lim:.6f}: monotone {mono}, rel dev at i=20 {rel:.2e}"


def sigma_star_convergence():
    res = [_sigma_star_check(p, q, False) for p, q in ((8, 3), (4, 1))]
    info = [_sigma_star_check(p, q, True) for p, q in ((8, 3), (4, 1))]
    detail = "; ".join(d for _, d in res)
    detail += " | with corrected limit: " + "; ".join(
        f"{'ok' if ok else 'no'}" for ok, _ in info)
    return all(ok for ok, _ in res), detail


def gap_dichotomy():
    half = spec.classify(1, 2)
    four = spec.classify(4, 1)

    def L_for(s, K):
        return math.ceil(s.p * K / s.q) + 2

    a = spec.gap_scan(half, L_for(half, 256), 256).c_min
    b = spec.gap_scan(half, L_for(half, 512), 512).c_min
    c = spec.gap_scan(four, L_for(four, 256), 256).c_min
    d = spec.gap_scan(four, L_for(four, 1024), 1024).c_min
    e = spec.gap_scan(four, L_for(four, 256), 256, True).c_min
    f = spec.gap_scan(four, L_for(four, 1024), 1024, True).c_min
    ok1 = abs(b - a) / a < 0.2
    ok2 = c / d >= 2
    ok3 = abs(f - e) / e < 0.2
    detail = (f"sigma=1/2: {a:.4f} -> {b:.4f}; sigma=4 all: {c:.3e} -> {d:.3e} "
              f"(x{c / d:.1f}); sigma=4 excluded: {e:.4f} -> {f:.4f}")
    return ok1 and ok2 and ok3, detail


def derivative_asymptotics():
    chk = asy.derivative_limit_check(4.0, [250, 500, 1000, 2000])
    return 1.7 <= chk.exponent <= 2.3, f"fitted exponent {chk.exponent:.4f} (range [1.7, 2.3])"


def groundstate_properties():
    from .groundstate import build_galerkin, evaluate_energy, symmetry_break_scan

    model = build_galerkin((1, 2), 20.0, 3.0, 24, 24)
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(5):
        c = rng.standard_normal(model.size)
        d = rng.standard_normal(model.size)
        h = 1e-6
        fd = (evaluate_energy(model, c + h * d)[0] - evaluate_energy(model, c - h * d)[0]) / (2 * h)
        an = evaluate_energy(model, c)[1] @ d
        worst = max(worst, abs(fd - an) / abs(fd))
    ms = [1, 5, 10, 20, 50, 100]
    scan = symmetry_break_scan((1, 2), 3.0, ms, L=24, K=24)
    nehari = max(pt.report.residuals["nehari_identity"] for pt in scan.points)
    positive = all(pt.c_val > 0 for pt in scan.points)
    broken = [pt.m for pt in scan.points if pt.nonradial_flag and not pt.report.is_radial]
    top = [pt for pt in scan.points if pt.m in (10, 100)]
    slope_c = math.log(top[1].c_val / top[0].c_val) / math.log(10)
    slope_b = math.log(top[1].beta_val / top[0].beta_val) / math.log(10)
    ok = worst < 1e-5 and nehari < 1e-4 and positive and broken and slope_c < slope_b
    detail = (f"gradient rel err {worst:.1e}; Nehari identity {nehari:.1e}; c > 0 {positive}; "
              f"nonradial with c < beta at m = {broken}; slopes c {slope_c:.2f} < beta {slope_b:.2f}")
    return bool(ok), detail


CRITERIA = [
    (1, "closed-form integrals", closed_form_moments, 1),
    (2, "McMahon consistency", mcmahon_consistency, 10),
    (3, "first-order constant", first_order_constant, 60),
    (4, "second-order constant", second_order_constant, 120),
    (5, "zeta formula equivalence", zeta_equivalence, 60),
    (6, "zeta limits and root", zeta_limits_and_root, 300),
    (7, "classification trichotomy", classification_trichotomy, 1),
    (8, "Sigma_* convergence", sigma_star_convergence, 300),
    (9, "gap dichotomy", gap_dichotomy, 600),
    (10, "derivative asymptotics", derivative_asymptotics, 120),
    (11, "ground-state properties", groundstate_properties, 900),
]
SLOW = {9, 11}


def run_one(number: int) -> CriterionResult:
    _, title, fn, budget = CRITERIA[number - 1]
    start = time.perf_counter()
    ok, detail = fn()
    seconds = time.perf_counter() - start
    if seconds > budget:
        ok = False
        detail += f"; over time budget"
    return CriterionResult(number, title, bool(ok), detail, seconds, budget)


def run(numbers=None, quick: bool = False, stream=None) -> list[CriterionResult]:
    out = []
    for number, title, _, budget in CRITERIA:
        if numbers is not None and number not in numbers:
            continue
        if quick and number in SLOW:
            res = CriterionResult(number, title, False, "skipped in quick mode", 0.0, budget, True)
        else:
            res = run_one(number)
        out.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    return out


if __name__ == "__main__":
    results = run(stream=sys.stdout)
    sys.exit(0 if all(r.passed for r in results) else 1)
