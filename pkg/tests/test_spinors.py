import numpy as np
import pytest

from volkov.clifford import IDENTITY, max_abs, slash
from volkov.lorentz import OnShellMomentum, random_momenta
from volkov.spinors import free_spinor, outer_sum, projector, spinor_completeness


@pytest.mark.parametrize("branch", [1, -1])
def test_rest_frame(branch):
    p = OnShellMomentum(1.0, 0, 0, 0)
    us = [free_spinor(p, s, branch) for s in (1, 2)]
    got = {int(np.flatnonzero(u)[0]) for u in us}
    assert got == ({0, 1} if branch == 1 else {2, 3})


@pytest.mark.parametrize("branch", [1, -1])
def test_orthonormal_and_complete(rng, branch):
    for p in random_momenta(rng, 1000):
        u1, u2 = free_spinor(p, 1, branch), free_spinor(p, 2, branch)
        assert abs(np.vdot(u1, u1) - 1) <= 1e-13
        assert abs(np.vdot(u2, u2) - 1) <= 1e-13
        assert abs(np.vdot(u1, u2)) <= 1e-13
        outer, proj = spinor_completeness(p, branch)
        assert max_abs(outer - proj) <= 1e-13


@pytest.mark.parametrize("branch", [1, -1])
def test_dirac_equation(rng, branch):
    # (pslash -+ m) u = 0 for the (+) and (-) branches (u^(-) carries e^{+ipx})
    for p in random_momenta(rng, 100):
        for s in (1, 2):
            u = free_spinor(p, s, branch)
            assert np.max(np.abs((slash(p.four) - branch * p.mass * IDENTITY) @ u)) <= 1e-13 * p.energy


def test_projector_trace_and_idempotent(rng):
    for p in random_momenta(rng, 50):
        for b in (1, -1):
            pr = projector(p.four, p.mass, b)
            assert np.trace(pr).real == pytest.approx(2.0, abs=1e-13)
            assert max_abs(pr @ pr - pr) <= 1e-13


def test_four_spinor_completeness(rng):
    # (+) spinors at p and (-) spinors at -p span the whole space
    for p in random_momenta(rng, 100):
        assert max_abs(outer_sum(p, 1) + outer_sum(p.reflected(), -1) - IDENTITY) <= 1e-13


@pytest.mark.parametrize("s,branch", [(0, 1), (3, 1), (1, 0)])
def test_bad_indices(s, branch):
    with pytest.raises(ValueError):
        free_spinor(OnShellMomentum(1.0, 0, 0, 0), s, branch)
