"""End-to-end acceptance suite.

Criteria 1-8 and the fast half of 9 are the invariant checks behind the
`verify` command; they are asserted one-by-one here so a failure names the
claim.  The slow half of 9 (long stable run, unstable growth rate) and the
CLI smoke test (10) run only in this file.
"""

import math

import numpy as np
import pytest

from cnls import verify
from cnls.cli import main
from cnls.dynamics import Perturbation, SimConfig, run_experiment
from cnls.moments import PhysParams


@pytest.mark.parametrize("check", verify.ALL_CHECKS,
                         ids=[c.__name__ for c in verify.ALL_CHECKS])
def test_invariant_checks(check):
    res = check()
    assert res.passed, f"{res.name}: {res.detail}"


class TestDynamicsAcceptance:
    def test_stable_run_long_horizon(self):
        # sigma = 1/2 (subcritical), eps = 1e-3: modulated distance stays
        # within 5x its initial value out to t = 50
        p = PhysParams(n=1, s=1.0, omega=1.0, sigma=0.5)
        cfg = SimConfig(params=p, half_length=40.0, modes=1024, dt=2.5e-4,
                        t_final=50.0,
                        perturbation=Perturbation(eps=1e-3,
                                                  shape="greens-bump"),
                        sample_every=2000)
        ts = run_experiment(cfg)
        assert ts.blow_up_time is None
        assert ts.mod_distance.max() < 5.0 * ts.mod_distance[0]
        assert ts.mass_drift.max() < 1e-10
        assert np.abs(ts.center_modulus - ts.center_modulus[0]).max() \
            < 0.05 * ts.center_modulus[0]

    def test_unstable_growth_rate(self):
        # sigma = 2 (supercritical), eps = 1e-4: fitted exponential rate of
        # the modulated distance within 15% of the linearized eigenvalue
        # 4 sqrt(3)
        p = PhysParams(n=1, s=1.0, omega=1.0, sigma=2.0)
        cfg = SimConfig(params=p, half_length=40.0, modes=2048, dt=1e-4,
                        t_final=1.6,
                        perturbation=Perturbation(eps=1e-4,
                                                  shape="greens-bump"),
                        sample_every=100)
        ts = run_experiment(cfg)
        lam = 4.0 * math.sqrt(3.0)
        assert ts.growth_rate is not None
        assert abs(ts.growth_rate - lam) / lam < 0.15


class TestVerifyCommand:
    def test_verify_exits_zero(self, capsys):
        code = main(["verify", "--jobs", "4"])
        out = capsys.readouterr().out
        assert code == 0
        lines = [l for l in out.splitlines() if l.strip()]
        assert len(lines) >= len(verify.ALL_CHECKS)
        assert all("PASS" in l for l in lines if l.startswith(("PASS", "FAIL")))
        assert not any(l.startswith("FAIL") for l in lines)
