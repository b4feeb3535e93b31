import threading

import numpy as np
import pytest
import sympy as sp

from volkov.clifford import max_abs
from volkov.field import (FieldError, PhaseIntegralCache, PlaneWaveField, load_table, phase_integrals,
                          spin_coupling_matrix)
from volkov.lorentz import OnShellMomentum

ETA = sp.symbols("eta", real=True)


def sympy_potential(f):
    """Piecewise-free pieces [(lo, hi, Ax, Ay)] of the analytic potential."""
    amp, w, n = sp.nsimplify(f.amplitude), sp.nsimplify(f.omega), sp.nsimplify(f.cycles)
    if f.shape.startswith("sin2"):
        length = 2 * sp.pi * n / w
        env = amp * sp.sin(sp.pi * ETA / length) ** 2
        ay = env * sp.cos(w * ETA) if f.shape == "sin2-circular" else sp.Integer(0)
        return [(0, length, env * sp.sin(w * ETA), ay)]
    ramp, flat = sp.pi / w, 2 * sp.pi * n / w
    end = 2 * ramp + flat
    return [(0, ramp, amp * sp.sin(w * ETA / 2) ** 2, sp.Integer(0)),
            (ramp, ramp + flat, amp, sp.Integer(0)),
            (ramp + flat, end, amp * sp.sin(w * (end - ETA) / 2) ** 2, sp.Integer(0))]


def sympy_antiderivatives(f):
    pieces = []
    for lo, hi, ax, ay in sympy_potential(f):
        antis = [sp.integrate(sp.expand(sp.expand_trig(expr).rewrite(sp.exp)), ETA)
                 for expr in (ax, ay, ax**2 + ay**2)]
        pieces.append((lo, hi, antis))
    return pieces


def sympy_accumulators(pieces, eta):
    out = np.zeros(3)
    for lo, hi, antis in pieces:
        top = min(max(eta, float(lo)), float(hi))
        if top <= float(lo):
            continue
        for i, anti in enumerate(antis):
            val = (anti.subs(ETA, sp.nsimplify(top)) - anti.subs(ETA, lo)).evalf(30)
            out[i] += float(sp.re(val))
    return out


SHAPES = [("sin2-linear", 2.0), ("sin2-circular", 1.5), ("plateau", 1.0)]


@pytest.mark.parametrize("shape,a0", SHAPES)
def test_phase_integrals_against_sympy(shape, a0):
    f = PlaneWaveField(shape, a0=a0, omega=1.0, cycles=2)
    cache = PhaseIntegralCache(f)
    hi = f.support[1]
    pieces = sympy_antiderivatives(f)
    for eta in (-1.0, 0.3, 0.37 * hi, 0.81 * hi, hi + 3.0):
        want = sympy_accumulators(pieces, eta)
        assert np.max(np.abs(cache(eta) - want)) <= 1e-12 * max(1.0, np.max(np.abs(want)))


@pytest.mark.parametrize("shape,a0", SHAPES)
def test_cached_equals_uncached(rng, shape, a0):
    f = PlaneWaveField(shape, a0=a0, omega=1.3, cycles=3)
    etas = rng.uniform(-5, f.support[1] + 5, 200)
    a = PhaseIntegralCache(f)(etas)
    b = PhaseIntegralCache(f, cached=False)(etas)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_cache_shapes_and_zero_field():
    f = PlaneWaveField("sin2-linear", a0=1.0)
    c = PhaseIntegralCache(f)
    assert c(1.0).shape == (3,)
    assert c(np.ones((2, 5))).shape == (2, 5, 3)
    assert np.all(c(0.0) == 0)
    assert np.all(PhaseIntegralCache(PlaneWaveField("zero"))(np.linspace(-9, 9, 7)) == 0)


def test_cache_thread_safe(rng):
    f = PlaneWaveField("sin2-circular", a0=1.0, cycles=6)
    shared = PhaseIntegralCache(f, panel=0.25)
    etas = rng.uniform(-3, f.support[1] + 3, (8, 50))
    out = [None] * 8

    def work(i):
        out[i] = shared(etas[i])

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    ref = PhaseIntegralCache(f, cached=False)(etas)
    assert np.max(np.abs(np.array(out) - ref)) <= 1e-12


@pytest.mark.parametrize("shape", ["sin2-linear", "sin2-circular", "plateau"])
def test_derivative_matches_fd(rng, shape):
    f = PlaneWaveField(shape, a0=2.0, omega=1.0, cycles=3)
    eta = rng.uniform(0, f.support[1], 100)
    h = 1e-5
    fd = (np.stack(f.potential(eta + h)) - np.stack(f.potential(eta - h))) / (2 * h)
    assert np.max(np.abs(fd - np.stack(f.derivative(eta)))) <= 1e-8


def test_support_and_vanishing():
    f = PlaneWaveField("sin2-linear", a0=1.0, omega=2.0, cycles=4)
    assert f.support == (0.0, pytest.approx(4 * np.pi))
    ax, ay = f.potential(np.array([-1.0, 0.0, 4 * np.pi, 20.0]))
    assert np.all(ax == 0) and np.all(ay == 0)
    p = PlaneWaveField("plateau", a0=1.0, omega=1.0, cycles=2)
    assert p.potential(np.pi + 1.0)[0] == pytest.approx(1.0)  # flat top


def test_amplitude_convention():
    f = PlaneWaveField("sin2-circular", a0=2.0, charge=-2.0)
    eta = np.linspace(0, f.support[1], 4001)
    ax, ay = f.potential(eta)
    assert np.max(np.hypot(ax, ay)) == pytest.approx(1.0, rel=1e-6)  # a0 / |e|


def test_spin_coupling_matrix(rng):
    f = PlaneWaveField("sin2-circular", a0=1.0)
    for eta in rng.uniform(0, f.support[1], 20):
        a, b = spin_coupling_matrix(f, eta)
        assert max_abs(a - b) <= 1e-14


def test_phase_integrals_combination():
    f = PlaneWaveField("sin2-circular", a0=1.0, cycles=2)
    p = OnShellMomentum(1.0, 0.3, -0.2, 0.1)
    c = PhaseIntegralCache(f)
    acc = c(7.0)
    for b in (1, -1):
        want = (-b * 2 * f.charge * (p.px * acc[0] + p.py * acc[1]) + f.charge**2 * acc[2]) / (2 * p.p_minus)
        assert phase_integrals(f, 7.0, p, b, c) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("kwargs", [dict(shape="square"), dict(shape="sin2-linear", omega=0.0),
                                    dict(shape="plateau", cycles=-1), dict(shape="zero", charge=0.0),
                                    dict(shape="tabulated")])
def test_invalid_fields(kwargs):
    with pytest.raises(FieldError):
        PlaneWaveField(**kwargs)


def test_tabulated(tmp_path):
    ref = PlaneWaveField("sin2-circular", a0=1.0, omega=1.0, cycles=2)
    eta = np.linspace(0, ref.support[1], 801)
    ax, ay = ref.potential(eta)
    path = tmp_path / "pulse.dat"
    np.savetxt(path, np.column_stack([eta, ax, ay]), header="eta Ax Ay")
    f = PlaneWaveField.from_table(path)
    probe = np.linspace(0.1, ref.support[1] - 0.1, 97)
    assert np.max(np.abs(np.stack(f.potential(probe)) - np.stack(ref.potential(probe)))) <= 1e-6
    assert np.max(np.abs(np.stack(f.derivative(probe)) - np.stack(ref.derivative(probe)))) <= 1e-3
    want = PhaseIntegralCache(ref)(probe)
    assert np.max(np.abs(PhaseIntegralCache(f)(probe) - want)) <= 1e-6
    with pytest.raises(FieldError):
        f.potential(ref.support[1] + 1.0)


@pytest.mark.parametrize("text,msg", [("0 1\n1 2\n", "at least 4"), ("0 1\n1 2\n1 3\n2 4\n", "increasing"),
                                      ("0 1 2 3\n", "columns"), ("0 x\n", "non-numeric")])
def test_load_table_errors(tmp_path, text, msg):
    path = tmp_path / "t.dat"
    path.write_text(text)
    with pytest.raises(FieldError, match=msg):
        load_table(path)


def test_load_table_two_columns_and_comments(tmp_path):
    path = tmp_path / "t.dat"
    path.write_text("# eta Ax\n0 0\n1 1  # peak\n\n2 0\n3 0\n")
    eta, ax, ay = load_table(path)
    assert list(eta) == [0, 1, 2, 3] and list(ax) == [0, 1, 0, 0] and not ay.any()


def test_dense_table_cache(rng):
    # one breakpoint per table node: every spline piece is integrated exactly
    eta = np.linspace(0.0, 20.0, 50001)
    ax = np.sin(eta) * np.sin(np.pi * eta / 20) ** 2
    f = PlaneWaveField(shape="tabulated", table=(eta, ax, np.zeros_like(eta)))
    x = rng.uniform(0, 20, 50)
    got = PhaseIntegralCache(f)(x)
    ref = PhaseIntegralCache(f, cached=False)(x)
    assert max_abs(got - ref) <= 1e-12
    exact = f._splines[0].antiderivative()(x) - f._splines[0].antiderivative()(0.0)
    assert np.max(np.abs(got[:, 0] - exact)) <= 1e-12
