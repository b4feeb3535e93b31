"""Gamma matrices in the standard (Dirac) representation and slash products."""
from __future__ import annotations

import numpy as np

from .lorentz import METRIC, minkowski_dot

IDENTITY = np.eye(4, dtype=complex)

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _dirac_basis():
    zero = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    beta = np.block([[one, zero], [zero, -one]])
    alphas = [np.block([[zero, s], [s, zero]]) for s in SIGMA]
    # gamma^mu = (beta, beta alpha_i)
    gammas = [beta] + [beta @ a for a in alphas]
    return beta, np.array(alphas), np.array(gammas)


BETA, ALPHA, GAMMA = _dirac_basis()
for _g in (BETA, ALPHA, GAMMA):
    _g.setflags(write=False)


def slash(v) -> np.ndarray:
    """gamma^mu v_mu for a contravariant four-vector v (or a stack of them)."""
    v = np.asarray(v)
    cov = v * np.array([1.0, -1.0, -1.0, -1.0])
    return np.tensordot(cov, GAMMA, axes=([-1], [0]))


def anticommutator(a, b):
    return a @ b + b @ a


def commutator(a, b):
    return a @ b - b @ a


def dirac_adjoint_conjugate(a):
    """gamma^0 a^dagger gamma^0."""
    g0 = GAMMA[0]
    return g0 @ np.conj(np.swapaxes(a, -1, -2)) @ g0


def max_abs(a) -> float:
    """Entrywise max-abs norm used for every matrix comparison."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def anticommutator_table():
    """Deviation of {gamma^nu, gamma^mu} from 2 g^{nu mu} I for all 16 pairs."""
    table = np.empty((4, 4))
    for nu in range(4):
        for mu in range(4):
            lhs = anticommutator(GAMMA[nu], GAMMA[mu])
            table[nu, mu] = max_abs(lhs - 2.0 * METRIC[nu, mu] * IDENTITY)
    return table


def slash_square_deviation(v) -> float:
    s = slash(v)
    return max_abs(s @ s - minkowski_dot(v, v) * IDENTITY)


def field_strength_contraction(k, adot) -> np.ndarray:
    """(1/2) gamma^nu gamma^mu F_{nu mu} with F_{nu mu} = k_nu Adot_mu - k_mu Adot_nu.

    Built by explicit double sum over lowered indices; independent of ``slash``.
    """
    k_cov = np.asarray(k, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])
    a_cov = np.asarray(adot, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])
    out = np.zeros((4, 4), dtype=complex)
    for nu in range(4):
        for mu in range(4):
            f = k_cov[nu] * a_cov[mu] - k_cov[mu] * a_cov[nu]
            if f != 0.0:
                out += 0.5 * f * (GAMMA[nu] @ GAMMA[mu])
    return out
