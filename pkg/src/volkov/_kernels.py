"""Hot loops with a numba path and a pure-numpy fallback.

Set ``VOLKOV_NUMBA=0`` in the environment to force the numpy path; numba is
also skipped silently when it cannot be imported. The two paths agree to
rounding, not bitwise.
"""
from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("VOLKOV_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def smeared_double_sum_numpy(wz, c1, c2, v0, v1, wj, dj, invj, uc, sign, chunk=2048):
    """sum_z wz sum_j wj exp(i sign dj (c1 - c2 invj)) <uc_j, v0_z + v1_z invj>."""
    total = 0.0 + 0.0j
    for lo in range(0, len(wz), chunk):
        hi = lo + chunk
        phase = sign * dj[None, :] * (c1[lo:hi, None] - c2[lo:hi, None] * invj[None, :])
        amp = v0[lo:hi] @ uc.T + (v1[lo:hi] @ uc.T) * invj[None, :]
        inner = (np.exp(1j * phase) * amp) @ wj
        total += np.sum(wz[lo:hi] * inner)
    return total


if HAVE_NUMBA:

    @njit(cache=True, fastmath=False)
    def _smeared_double_sum_jit(wz, c1, c2, v0, v1, wj, dj, invj, uc, sign):
        total = 0.0 + 0.0j
        nz, nj = wz.shape[0], wj.shape[0]
        for a in range(nz):
            acc = 0.0 + 0.0j
            for b in range(nj):
                ph = sign * dj[b] * (c1[a] - c2[a] * invj[b])
                amp = 0.0 + 0.0j
                for k in range(4):
                    amp += uc[b, k] * (v0[a, k] + v1[a, k] * invj[b])
                acc += wj[b] * (np.cos(ph) + 1j * np.sin(ph)) * amp
            total += wz[a] * acc
        return total

    def smeared_double_sum(wz, c1, c2, v0, v1, wj, dj, invj, uc, sign):
        return complex(_smeared_double_sum_jit(
            np.ascontiguousarray(wz, dtype=np.float64), np.ascontiguousarray(c1, dtype=np.float64),
            np.ascontiguousarray(c2, dtype=np.float64), np.ascontiguousarray(v0, dtype=np.complex128),
            np.ascontiguousarray(v1, dtype=np.complex128), np.ascontiguousarray(wj, dtype=np.float64),
            np.ascontiguousarray(dj, dtype=np.float64), np.ascontiguousarray(invj, dtype=np.float64),
            np.ascontiguousarray(uc, dtype=np.complex128), float(sign)))

else:
    smeared_double_sum = smeared_double_sum_numpy


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
