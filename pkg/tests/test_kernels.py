import os
import subprocess
import sys

import numpy as np
import pytest

from volkov import _kernels


def _inputs(rng, nz=300, nj=41):
    c1 = np.linspace(-50, 50, nz)
    return (rng.uniform(0, 1, nz), c1, c1 * rng.uniform(0.5, 2, nz),
            rng.normal(size=(nz, 4)) + 1j * rng.normal(size=(nz, 4)),
            rng.normal(size=(nz, 4)) + 1j * rng.normal(size=(nz, 4)),
            rng.uniform(0, 1, nj), np.linspace(-0.1, 0.1, nj), 1 / (1 + np.linspace(-0.1, 0.1, nj)),
            rng.normal(size=(nj, 4)) + 1j * rng.normal(size=(nj, 4)), -1.0)


def _direct(wz, c1, c2, v0, v1, wj, dj, invj, uc, sign):
    total = 0j
    for a in range(len(wz)):
        for b in range(len(wj)):
            ph = sign * dj[b] * (c1[a] - c2[a] * invj[b])
            total += wz[a] * wj[b] * np.exp(1j * ph) * (uc[b] @ (v0[a] + v1[a] * invj[b]))
    return total


def test_paths_agree(rng):
    args = _inputs(rng)
    ref = _direct(*args)
    for fn in (_kernels.smeared_double_sum, _kernels.smeared_double_sum_numpy):
        assert abs(fn(*args) - ref) <= 1e-12 * abs(ref)


def test_numpy_chunking(rng):
    args = _inputs(rng, nz=1000)
    a = _kernels.smeared_double_sum_numpy(*args, chunk=7)
    b = _kernels.smeared_double_sum_numpy(*args)
    assert abs(a - b) <= 1e-12 * abs(b)


@pytest.mark.parametrize("flag,want", [("0", "numpy"), ("off", "numpy")])
def test_env_flag_selects_numpy(flag, want):
    out = subprocess.run([sys.executable, "-c", "from volkov import _kernels; print(_kernels.backend())"],
                         env=dict(os.environ, VOLKOV_NUMBA=flag), capture_output=True, text=True, check=True)
    assert out.stdout.strip() == want


def test_default_backend():
    pytest.importorskip("numba")
    out = subprocess.run([sys.executable, "-c", "from volkov import _kernels; print(_kernels.backend())"],
                         env={k: v for k, v in os.environ.items() if k != "VOLKOV_NUMBA"},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
