import numpy as np
import pytest

from cnls.moments import PhysParams
from cnls.variational import (GridTooCoarse, MollifierSpec, SolveGrid,
                              convergence_study, mollifier_value,
                              petviashvili_solve)
from cnls.waves import sobolev_constant

CLASSICAL = PhysParams(n=1, s=1.0, omega=1.0, sigma=1.0)


class TestMollifier:
    def test_unit_integral(self):
        for scale in (1.0, 4.0, 16.0):
            spec = MollifierSpec(scale=scale)
            x = np.linspace(-1.5 / scale, 1.5 / scale, 20001)
            v = mollifier_value(x, spec)
            assert np.trapezoid(v, x) == pytest.approx(1.0, rel=1e-6)

    def test_support(self):
        spec = MollifierSpec(scale=8.0)
        assert mollifier_value(np.array([0.2]), spec)[0] == 0.0
        assert mollifier_value(np.array([0.0]), spec)[0] > 0.0


class TestPetviashvili:
    def test_converges_with_small_residual(self):
        res = petviashvili_solve(CLASSICAL, MollifierSpec(scale=8.0))
        assert res.residual < 1e-9
        assert res.iterations < 200
        assert res.stabilizer < 1e-9
        assert np.all(res.profile >= -1e-12)

    def test_m_n_above_sharp_constant(self):
        c2 = sobolev_constant(CLASSICAL)
        for scale in (4.0, 16.0):
            res = petviashvili_solve(CLASSICAL, MollifierSpec(scale=scale))
            assert res.m_N >= c2 - 1e-8

    def test_gap_monotone(self):
        rows = convergence_study(CLASSICAL, (4, 8, 16, 32))
        gaps = [r[2] for r in rows]
        assert all(a > b > 0 for a, b in zip(gaps, gaps[1:]))

    def test_warm_start_from_soliton(self):
        # seeding with the known wave profile sqrt(2) e^{-|x|} converges fast
        guess = lambda x: np.sqrt(2.0) * np.exp(-np.abs(x))
        res = petviashvili_solve(CLASSICAL, MollifierSpec(scale=16.0),
                                 initial_guess=guess)
        assert res.iterations <= 50
        assert res.residual < 1e-9

    def test_grid_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            petviashvili_solve(CLASSICAL, MollifierSpec(scale=64.0),
                               grid=SolveGrid(half_length=40.0, modes=128))

    def test_constraint_normalized(self):
        res = petviashvili_solve(CLASSICAL, MollifierSpec(scale=8.0))
        x = res.grid_x
        h = x[1] - x[0]
        v = mollifier_value(x, MollifierSpec(scale=8.0))
        constraint = float(np.sum(v * np.abs(res.profile) ** 4)) * h
        assert constraint == pytest.approx(1.0, rel=1e-10)
