"""Mollified minimization levels m_N vs the sharp constant c^2 = 2.

Runs the mollified Petviashvili solve over a range of mollifier scales and
prints the gap m_N - c^2, which should decrease monotonically toward 0.

Usage: python scripts/variational_convergence.py
"""

from cnls.moments import PhysParams
from cnls.variational import convergence_study
from cnls.waves import sobolev_constant


def main():
    p = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)
    c2 = sobolev_constant(p)
    print(f"# c^2 = {c2:.17g}")
    print("N,m_N,gap,iterations,residual")
    for N, m_N, gap, iters, resid in convergence_study(p, (4, 8, 16, 32, 64)):
        print(f"{N:g},{m_N:.17g},{gap:.17g},{iters},{resid:.3e}")


if __name__ == "__main__":
    main()
