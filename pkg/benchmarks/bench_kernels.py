"""Compare the numba and numpy paths of the smeared double sum.

    python3 benchmarks/bench_kernels.py [--nz 16000] [--nj 161] [--repeat 5]

The jitted kernel is warmed up once before timing. The end-to-end line runs
one smeared orthonormality evaluation in a child process per backend, with
VOLKOV_NUMBA toggled, so import-time selection is exercised too.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from volkov import _kernels


def inputs(rng, nz, nj):
    c1 = np.linspace(-500, 500, nz)
    c2 = rng.uniform(0.5, 2.0, nz) * c1
    v0 = rng.normal(size=(nz, 4)) + 1j * rng.normal(size=(nz, 4))
    v1 = rng.normal(size=(nz, 4)) + 1j * rng.normal(size=(nz, 4))
    wz = np.full(nz, 1000.0 / nz)
    u = np.linspace(-8, 8, nj)
    wj = np.exp(-0.5 * u * u) / np.sqrt(2 * np.pi) * (u[1] - u[0])
    dj = 0.02 * u
    invj = 1.0 / (1.0 + dj)
    uc = (rng.normal(size=(nj, 4)) + 1j * rng.normal(size=(nj, 4))).conj()
    return wz, c1, c2, v0, v1, wj, dj, invj, uc, 1.0


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


END_TO_END = (
    "import time; from volkov.identities import smeared_orthonormality;"
    "from volkov.field import PlaneWaveField; from volkov.lorentz import OnShellMomentum;"
    "from volkov import _kernels;"
    "f = PlaneWaveField('sin2-linear', a0=1.0, omega=1.0, cycles=4);"
    "p = OnShellMomentum(1.0, 0.3, -0.2, 0.4);"
    "smeared_orthonormality(p, 0.05, f, refine=False);"
    "t0 = time.perf_counter(); r = smeared_orthonormality(p, 0.02, f, refine=False);"
    "print(_kernels.backend(), time.perf_counter() - t0, r.deviation)"
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nz", type=int, default=16000)
    ap.add_argument("--nj", type=int, default=161)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-subprocess", action="store_true")
    args = ap.parse_args()

    data = inputs(np.random.default_rng(0), args.nz, args.nj)
    t_np, v_np = best_of(_kernels.smeared_double_sum_numpy, data, args.repeat)
    print(f"kernel  nz={args.nz} nj={args.nj}")
    print(f"  numpy  {t_np * 1e3:9.2f} ms")
    if _kernels.HAVE_NUMBA:
        _kernels.smeared_double_sum(*data)  # compile
        t_nb, v_nb = best_of(_kernels.smeared_double_sum, data, args.repeat)
        print(f"  numba  {t_nb * 1e3:9.2f} ms   speed-up {t_np / t_nb:5.1f}x")
        print(f"  |numba - numpy| / |numpy| = {abs(v_nb - v_np) / abs(v_np):.2e}")
    else:
        print("  numba  unavailable (VOLKOV_NUMBA=0 or not installed)")

    if args.no_subprocess:
        return
    print("end to end: smeared orthonormality, sigma = 0.02")
    for flag in ("1", "0"):
        env = dict(os.environ, VOLKOV_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:6s} {float(out[1]):8.3f} s   deviation {float(out[2]):.2e}")


if __name__ == "__main__":
    main()
