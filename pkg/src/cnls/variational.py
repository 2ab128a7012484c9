"""Mollified Rayleigh-quotient minimization by Petviashvili iteration.

The quotient I[u] = (||(-Delta)^{s/2}u||^2 + omega ||u||^2) /
(int V_N |u|^{2 sigma + 2})^{1/(sigma+1)} with V_N(x) = N^n V(N x) a bump
mollifier is minimized on a periodic Fourier grid (n = 1 solves only); its
minimum m_N decreases to the sharp Sobolev constant c^2(omega) as N grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moments import PhysParams
from .numerics import DomainError, QuadratureSpec, integrate_halfline
from .waves import sobolev_constant


class NonConvergence(Exception):
    pass


class GridTooCoarse(Exception):
    pass


@dataclass(frozen=True)
class MollifierSpec:
    """Scaled bump N^n V(N x) with V(x) = Z^{-1} exp(-1/(1-|x|^2)) on |x|<1."""
    scale: float  # the N above
    dim: int = 1

    def __post_init__(self):
        if self.scale <= 0:
            raise DomainError("mollifier scale must be positive")


def _bump(r):
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


_BUMP_NORM_CACHE: dict[int, float] = {}


def _bump_norm(dim: int) -> float:
    """Z_n = int_{R^n} exp(-1/(1-|x|^2)) dx over the unit ball."""
    if dim not in _BUMP_NORM_CACHE:
        from .moments import sphere_area
        area = sphere_area(dim) if dim > 1 else 2.0
        f = lambda rho: np.where(rho < 1.0, _bump(rho) * rho ** (dim - 1), 0.0)
        spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-16, tail_cutoff=1.0)
        val, _ = integrate_halfline(f, 2.0, spec)
        _BUMP_NORM_CACHE[dim] = area * val
    return _BUMP_NORM_CACHE[dim]


def mollifier_value(x, spec: MollifierSpec):
    """N^n V(N x), normalized so the full-space integral is 1."""
    x = np.asarray(x, dtype=float)
    N = spec.scale
    return N ** spec.dim * _bump(N * x) / _bump_norm(spec.dim)


@dataclass(frozen=True)
class SolveGrid:
    half_length: float
    modes: int


@dataclass(frozen=True)
class VariationalResult:
    m_N: float
    iterations: int
    residual: float
    grid_x: np.ndarray
    profile: np.ndarray
    stabilizer: float  # |S - 1| at exit


def default_solve_grid(params: PhysParams, spec: MollifierSpec) -> SolveGrid:
    L = 40.0 * params.omega ** (-1.0 / (2 * params.s))
    h_target = 1.0 / (16.0 * spec.scale)
    modes = 1 << int(math.ceil(math.log2(2 * L / h_target)))
    return SolveGrid(half_length=L, modes=modes)


def petviashvili_solve(params: PhysParams, spec: MollifierSpec,
                       grid: SolveGrid | None = None,
                       max_sweeps: int = 10_000,
                       residual_tol: float = 1e-10,
                       initial_guess=None) -> VariationalResult:
    """Fixed point of u <- S^gamma (K + omega)^{-1} [V_N |u|^{2 sigma} u]
    with the stabilizing power gamma = (2 sigma + 1)/(2 sigma)."""
    if params.n != 1:
        raise DomainError("grid solves are implemented for n = 1 only")
    if grid is None:
        grid = default_solve_grid(params, spec)
    L, M = grid.half_length, grid.modes
    h = 2.0 * L / M
    if h > 1.0 / (8.0 * spec.scale):
        raise GridTooCoarse(f"spacing {h:g} does not resolve mollifier "
                            f"scale 1/{spec.scale:g}")
    x = -L + h * np.arange(M)
    xi = np.fft.fftfreq(M, d=h)
    symbol = (2.0 * math.pi * np.abs(xi)) ** (2.0 * params.s)
    om, sig = params.omega, params.sigma
    vn = mollifier_value(x, spec)
    gamma = (2 * sig + 1) / (2 * sig)

    if initial_guess is None:
        u = np.exp(-x ** 2)
    else:
        u = np.asarray(initial_guess(x), dtype=float)
    s_exit = np.inf
    for sweep in range(1, max_sweeps + 1):
        uh = np.fft.fft(u)
        nonlin = vn * np.abs(u) ** (2 * sig) * u
        lhs = float(np.sum((symbol + om) * np.abs(uh) ** 2).real) * h / M
        rhs = float(np.sum(nonlin * u)) * h
        s_fac = lhs / rhs
        u_new = np.real(np.fft.ifft(np.fft.fft(nonlin) / (symbol + om)))
        u_new *= s_fac ** gamma
        delta = np.max(np.abs(u_new - u)) / max(np.max(np.abs(u_new)), 1e-300)
        u = u_new
        if delta < residual_tol and abs(s_fac - 1.0) < 1e-9:
            s_exit = abs(s_fac - 1.0)
            break
    else:
        raise NonConvergence(f"no fixed point after {max_sweeps} sweeps")

    # normalize the constraint int V_N |u|^{2 sigma + 2} = 1
    cnorm = float(np.sum(vn * np.abs(u) ** (2 * sig + 2))) * h
    phi = u * cnorm ** (-1.0 / (2 * sig + 2))

    uh = np.fft.fft(phi)
    num = float(np.sum((symbol + om) * np.abs(uh) ** 2).real) * h / M
    m_n = num  # constraint denominator is 1 after normalization

    # Euler-Lagrange residual in the discrete H^{-s} norm
    res_phys = (np.real(np.fft.ifft((symbol + om) * uh))
                - m_n * vn * np.abs(phi) ** (2 * sig) * phi)
    rh = np.fft.fft(res_phys)
    res = math.sqrt(float(np.sum(np.abs(rh) ** 2 / (1.0 + symbol))) * h / M)
    res /= max(math.sqrt(num), 1e-300)
    return VariationalResult(m_N=m_n, iterations=sweep, residual=res,
                             grid_x=x, profile=phi, stabilizer=s_exit)


def convergence_study(params: PhysParams, scales, **kw):
    """Rows (N, m_N, gap to c^2(omega), iterations, residual)."""
    c2 = sobolev_constant(params)
    rows = []
    for N in scales:
        r = petviashvili_solve(params, MollifierSpec(scale=float(N)), **kw)
        rows.append((float(N), r.m_N, r.m_N - c2, r.iterations, r.residual))
    return rows
