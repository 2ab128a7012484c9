"""Invariant suite behind the `verify` CLI command.

Each check re-derives a closed-form claim from an independent route
(quadrature oracle, discretized matrix, or classical special case) and
compares at a stated tolerance.  One CheckResult per claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Perturbation, SimConfig, init_state, step
from .moments import PhysParams, moment_closed, moment_quadrature
from .spectrum import (DEGENERACY_TOL, classify, eigen_determinant,
                       lpm_eigenvalues, oracle_unstable_eigenvalue,
                       secular_eigenvalues, default_grid, sigma_critical,
                       bound_state, unstable_eigenvalue, vk_quantity)
from .variational import convergence_study
from .waves import (pohozaev_check, sobolev_constant,
                    sobolev_constant_printed_check)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name, passed, detail):
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def check_moment_oracle() -> CheckResult:
    """Closed-form moments vs half-line quadrature on a (n,s,j,omega) grid,
    plus the exact n=1, s=1, omega=1 values (1/2, 1/4, 3/16)."""
    worst = 0.0
    for n in (1, 2, 3):
        for s in (0.6 * n, 1.1 * n, 2.0 * n):
            for j in (1.0, 2.0, 3.0):
                for om in (0.5, 1.0, 2.0):
                    p = PhysParams(n=n, s=s, omega=om, sigma=1.0)
                    closed = moment_closed(j, p)
                    quad = moment_quadrature(j, p)
                    worst = max(worst, abs(closed - quad) / abs(closed))
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)
    exact = (0.5, 0.25, 0.1875)
    exact_err = max(abs(moment_closed(j, p) - e)
                    for j, e in zip((1.0, 2.0, 3.0), exact))
    ok = worst < 1e-10 and exact_err < 1e-14
    return _result("moment-oracle", ok,
                   f"worst closed-vs-quadrature rel err {worst:.2e} "
                   f"(tol 1e-10); exact-triple err {exact_err:.2e}")


def check_sobolev_constant() -> CheckResult:
    """c^2(1;1,1) = 2 exactly; corrected embedding-constant formula (x 2s)
    equals 1/M_1(1) across dimensions."""
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)
    err_classic = abs(sobolev_constant(p) - 2.0)
    worst = 0.0
    for n in (1, 2, 3):
        for s in (0.6 * n + 0.1, float(n), 2.0 * n):
            corrected, _ = sobolev_constant_printed_check(n, s)
            c2 = sobolev_constant(PhysParams(n=n, s=s, omega=1.0, sigma=1.0))
            worst = max(worst, abs(corrected - c2) / c2)
    ok = err_classic < 1e-12 and worst < 1e-10
    return _result("sobolev-constant", ok,
                   f"classical-case err {err_classic:.2e} (tol 1e-12); "
                   f"corrected-formula rel err {worst:.2e} (tol 1e-10)")


def check_pohozaev() -> CheckResult:
    """Mass/seminorm/energy identity residuals by quadrature over a grid;
    exact mass = seminorm = 2 at the classical point."""
    worst = 0.0
    for n in (1, 2, 3):
        for s in (0.6 * n + 0.1, float(n), 2.0 * n):
            for om in (0.5, 2.0):
                for sig in (0.5, 1.0, 2.0):
                    p = PhysParams(n=n, s=s, omega=om, sigma=sig)
                    r = pohozaev_check(p, use_quadrature=True)
                    worst = max(worst, r.residual_mass_identity,
                                r.residual_seminorm_identity,
                                r.residual_energy_identity)
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)
    r = pohozaev_check(p)
    exact_err = max(abs(r.l2_mass - 2.0), abs(r.homog_seminorm_sq - 2.0))
    ok = worst < 1e-8 and exact_err < 1e-12
    return _result("pohozaev", ok,
                   f"worst residual {worst:.2e} (tol 1e-8); classical "
                   f"mass/seminorm err {exact_err:.2e} (tol 1e-12)")


def check_vk_fractions() -> CheckResult:
    """Exact rational values of Q at n=1, s=1, omega=1."""
    errs = []
    for sig, q_exact in ((1.0, 0.0), (2.0, 1.0 / 32.0), (0.5, -1.0 / 16.0)):
        q = vk_quantity(PhysParams(n=1, s=1.0, omega=1.0, sigma=sig))
        errs.append(abs(q - q_exact))
    ok = max(errs) < 1e-12
    return _result("vk-fractions", ok,
                   f"errors {[f'{e:.2e}' for e in errs]} (tol 1e-12)")


def check_stability_boundary() -> CheckResult:
    """Zero misclassified cells against sigma* = 2s/n - 1 on a 25 x 40
    (s, sigma) map per dimension, degenerate band excluded."""
    bad = 0
    total = 0
    for n in (1, 2, 3):
        s_grid = np.linspace(0.6 * n, 3.0 * n, 25)
        sig_grid = np.linspace(0.1, 4.0, 40)
        for s in s_grid:
            for sig in sig_grid:
                p = PhysParams(n=n, s=float(s), omega=1.0, sigma=float(sig))
                crit = sigma_critical(p)
                if abs(sig - crit) <= DEGENERACY_TOL:
                    continue
                rep = classify(p, want_unstable_lambda=False)
                want = "unstable" if sig > crit else "stable"
                total += 1
                if rep.classification != want:
                    bad += 1
    return _result("stability-boundary", bad == 0,
                   f"{bad} misclassified of {total} non-degenerate cells")


def check_bound_state_oracle() -> CheckResult:
    """Classical delta-well eigenvalue omega - mu^2/4 = -3 at mu=4, and the
    discretized secular oracle for the lowest L_+ eigenvalue at sigma=1."""
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)
    err_well = abs(bound_state(4.0, p).eigenvalue - (-3.0))
    _, plus = lpm_eigenvalues(p, count=1)
    semi = bound_state((2 * p.sigma + 1) * sobolev_constant(p), p).eigenvalue
    rel = abs(plus[0] - semi) / abs(semi)
    ok = err_well < 1e-10 and rel < 0.01
    return _result("bound-state-oracle", ok,
                   f"delta-well err {err_well:.2e} (tol 1e-10); L+ lowest "
                   f"{plus[0]:.4f} vs semi-analytic {semi:.4f}, "
                   f"rel {rel:.2e} (tol 1e-2)")


def check_linearized_eigenvalue() -> CheckResult:
    """Root of the characteristic function D vs the discretized oracle, and
    the small-lambda limit D/lambda^2 -> -2 sigma c^2 Q."""
    worst_root = 0.0
    for sig in (1.5, 2.0, 3.0):
        p = PhysParams(n=1, s=1.0, omega=1.0, sigma=sig)
        lam = unstable_eigenvalue(p)
        lam_oracle = oracle_unstable_eigenvalue(p)
        worst_root = max(worst_root, abs(lam - lam_oracle) / lam)
    worst_lim = 0.0
    for sig in (0.5, 2.0):
        p = PhysParams(n=1, s=1.0, omega=1.0, sigma=sig)
        c2 = sobolev_constant(p)
        target = -2.0 * sig * c2 * vk_quantity(p)
        got = eigen_determinant(1e-4, p) / 1e-8
        worst_lim = max(worst_lim, abs(got - target) / abs(target))
    ok = worst_root < 1e-4 and worst_lim < 1e-3
    return _result("linearized-eigenvalue", ok,
                   f"worst root rel err {worst_root:.2e} (tol 1e-4); "
                   f"small-lambda limit rel err {worst_lim:.2e} (tol 1e-3)")


def check_variational_convergence() -> CheckResult:
    """m_N stays above c^2 - 1e-8 and its gap decreases monotonically over
    the mollifier scales 4, 8, 16, 32."""
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)
    c2 = sobolev_constant(p)
    rows = convergence_study(p, (4, 8, 16, 32))
    gaps = [r[2] for r in rows]
    above = all(r[1] >= c2 - 1e-8 for r in rows)
    monotone = all(g1 > g2 > 0 for g1, g2 in zip(gaps, gaps[1:]))
    ok = above and monotone
    return _result("variational-convergence", ok,
                   "gaps " + ", ".join(f"{g:.4f}" for g in gaps)
                   + f" toward c^2={c2:g} (monotone={monotone})")


def check_dynamics_conservation() -> CheckResult:
    """Fast half of the dynamics suite: exact mass conservation over 1e4
    steps and second-order energy drift under dt halving."""
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=0.5)
    cfg = SimConfig(params=p, half_length=40.0, modes=1024, dt=1e-3,
                    t_final=10.0)
    st = init_state(cfg)
    m0 = st.mass
    for _ in range(10_000):
        st = step(st, cfg)
    drift = abs(st.mass - m0) / m0

    def energy_drift(dt):
        c = SimConfig(params=p, half_length=40.0, modes=1024, dt=dt,
                      t_final=2.0,
                      perturbation=Perturbation(eps=0.3, shape="noise", seed=7))
        s0 = init_state(c)
        e0, mx = s0.energy, 0.0
        s = s0
        for _ in range(int(round(2.0 / dt))):
            s = step(s, c)
            mx = max(mx, abs(s.energy - e0) / abs(e0))
        return mx

    d1, d2 = energy_drift(4e-4), energy_drift(2e-4)
    ratio = d1 / d2
    ok = drift < 1e-10 and 3.0 <= ratio <= 5.0
    return _result("dynamics-conservation", ok,
                   f"mass drift {drift:.2e} over 1e4 steps (tol 1e-10); "
                   f"energy drift ratio {ratio:.2f} (want [3,5])")


ALL_CHECKS = (
    check_moment_oracle,
    check_sobolev_constant,
    check_pohozaev,
    check_vk_fractions,
    check_stability_boundary,
    check_bound_state_oracle,
    check_linearized_eigenvalue,
    check_variational_convergence,
    check_dynamics_conservation,
)


def run_all(jobs: int = 1) -> list[CheckResult]:
    if jobs <= 1:
        return [c() for c in ALL_CHECKS]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(c) for c in ALL_CHECKS]
        return [f.result() for f in futures]
