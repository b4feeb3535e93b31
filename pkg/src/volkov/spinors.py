"""Free particle (+) and antiparticle (-) bispinors normalised to u^dagger u = 1."""
from __future__ import annotations

import numpy as np

from .clifford import GAMMA, IDENTITY, SIGMA, slash
from .lorentz import OnShellMomentum

SPINS = (1, 2)

# phi_1 = chi_2 = (1, 0); phi_2 = chi_1 = (0, 1)
_PHI = {1: np.array([1.0, 0.0], dtype=complex), 2: np.array([0.0, 1.0], dtype=complex)}
_CHI = {1: np.array([0.0, 1.0], dtype=complex), 2: np.array([1.0, 0.0], dtype=complex)}


def _check(s, branch):
    if s not in SPINS:
        raise ValueError(f"spin index must be 1 or 2, got {s!r}")
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch!r}")


def free_spinor(p: OnShellMomentum, s: int, branch: int = 1) -> np.ndarray:
    _check(s, branch)
    m, e = p.mass, p.energy
    pauli = np.tensordot(p.spatial, SIGMA, axes=1)
    norm = np.sqrt((e + m) / (2.0 * e))
    if branch == 1:
        two = _PHI[s]
        return norm * np.concatenate([two, pauli @ two / (e + m)])
    two = _CHI[s]
    return norm * np.concatenate([pauli @ two / (e + m), two])


def spinor_pair(p: OnShellMomentum, branch: int = 1):
    return [free_spinor(p, s, branch) for s in SPINS]


def outer_sum(p: OnShellMomentum, branch: int = 1) -> np.ndarray:
    """sum_s u_s u_s^dagger from explicit spinors."""
    return sum(np.outer(u, u.conj()) for u in spinor_pair(p, branch))


def projector(p4, m, branch: int = 1) -> np.ndarray:
    """(pslash +- m) gamma^0 / (2 p0) from a raw four-vector.

    ``p4`` is taken as given (no on-shell check) so analytically continued
    energies can be passed in.
    """
    p4 = np.asarray(p4, dtype=float)
    return (slash(p4) + branch * m * IDENTITY) @ GAMMA[0] / (2.0 * p4[0])


def spinor_completeness(p: OnShellMomentum, branch: int = 1):
    """Return (outer-product sum, closed-form projector) for comparison."""
    return outer_sum(p, branch), projector(p.four, p.mass, branch)
