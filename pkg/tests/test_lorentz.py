import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from volkov.lorentz import (K_NULL, KinematicsError, OnShellMomentum, from_lightcone,
                            lightcone_components, minkowski_dot, random_momenta)

comp = st.floats(-50, 50, allow_nan=False)


def test_dot_examples():
    assert minkowski_dot([1, 0, 0, 0], [1, 0, 0, 0]) == 1
    assert minkowski_dot(K_NULL, K_NULL) == 0
    assert minkowski_dot([5, 0, 0, 3], [5, 0, 0, 3]) == 16


@given(st.lists(comp, min_size=4, max_size=4), st.lists(comp, min_size=4, max_size=4))
def test_dot_symmetric(a, b):
    assert minkowski_dot(a, b) == minkowski_dot(b, a)


def test_lightcone_examples():
    assert lightcone_components(OnShellMomentum(1.0, 0, 0, 0)) == (1.0, 1.0)
    pm, pp = lightcone_components(OnShellMomentum(4.0, 0, 0, 3.0))
    assert (pm, pp) == (2.0, 8.0) and pm * pp == 16.0


def test_from_lightcone_examples():
    p = from_lightcone(1.0, (0, 0), 1.0)
    np.testing.assert_allclose(p.four, [1, 0, 0, 0], atol=1e-15)
    q = from_lightcone(2.0, (0, 0), 4.0)
    assert q.pz == 3.0 and q.energy == 5.0


@pytest.mark.parametrize("pm", [0.0, -1.0])
def test_from_lightcone_rejects(pm):
    with pytest.raises(KinematicsError):
        from_lightcone(pm, (0.1, 0.2), 1.0)


def test_mass_must_be_positive():
    with pytest.raises(KinematicsError):
        OnShellMomentum(0.0, 1, 0, 0)


def test_roundtrip_and_shell(rng):
    for p in random_momenta(rng, 1000):
        pm, pp = lightcone_components(p)
        assert pm > 0 and pp > 0
        assert abs(pm * pp - (p.mass**2 + p.px**2 + p.py**2)) <= 1e-12 * (p.mass**2 + p.px**2 + p.py**2)
        assert abs(minkowski_dot(p.four, p.four) - p.mass**2) <= 1e-12 * p.mass**2
        q = from_lightcone(pm, p.perp, p.mass)
        np.testing.assert_allclose(q.four, p.four, rtol=1e-12, atol=1e-12)


def test_p_minus_cancellation_safe():
    # p_z >> m: naive p0 - pz loses every digit
    p = OnShellMomentum(1.0, 0.0, 0.0, 1e8)
    assert p.p_minus == pytest.approx(0.5e-8, rel=1e-12)
    assert p.p_minus * p.p_plus == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=200)
@given(comp, comp, comp, st.floats(0.1, 10))
def test_hypothesis_shell(px, py, pz, m):
    p = OnShellMomentum(m, px, py, pz)
    pm, pp = lightcone_components(p)
    s = m * m + px * px + py * py
    assert pm > 0 and abs(pm * pp - s) <= 1e-12 * (s + pz * pz)


def test_reflected():
    p = OnShellMomentum(1.0, 0.3, -0.4, 0.5)
    r = p.reflected()
    assert (r.px, r.py, r.pz) == (-0.3, 0.4, -0.5)
    assert r.p_minus == pytest.approx(p.p_plus)
