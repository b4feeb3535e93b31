"""Volkov wave functions and finite-difference residual checks."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.linalg import expm

from .clifford import GAMMA, IDENTITY, field_strength_contraction, max_abs, slash
from .field import PhaseIntegralCache, PlaneWaveField
from .lorentz import K_NULL, KinematicsError, OnShellMomentum
from .spinors import free_spinor

P_MINUS_CUTOFF = 1e-8


class SingularKinematicsError(KinematicsError):
    pass


class ConsistencyError(ArithmeticError):
    """Two constructions that must agree did not."""


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    x: float
    y: float
    z: float

    @property
    def eta(self) -> float:
        return self.t - self.z

    @property
    def four(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])


@dataclass
class VolkovState:
    momentum: OnShellMomentum
    spin: int
    branch: int
    field: PlaneWaveField
    cache: PhaseIntegralCache | None = dc_field(default=None, repr=False)
    eps: float = P_MINUS_CUTOFF

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError(f"branch must be +1 or -1, got {self.branch!r}")
        if self.cache is None:
            self.cache = PhaseIntegralCache(self.field)
        self.spinor = free_spinor(self.momentum, self.spin, self.branch)

    @property
    def p_minus(self) -> float:
        return self.momentum.p_minus

    def _check_p_minus(self):
        if self.p_minus <= self.eps:
            raise SingularKinematicsError(f"p_minus = {self.p_minus:g} below cutoff {self.eps:g}")

    def field_phase(self, eta):
        """int_0^eta [-+ 2 e p_perp.A + e^2 A2] / (2 p_minus)."""
        p, e = self.momentum, self.field.charge
        acc = self.cache(eta)
        pa = p.px * acc[..., 0] + p.py * acc[..., 1]
        return (-self.branch * 2.0 * e * pa + e * e * acc[..., 2]) / (2.0 * p.p_minus)

    def phase_forms(self, t, x, y, z):
        """Both algebraic forms of the Volkov phase S.

        first:  p0 t - pz z - p_perp.x_perp + field_phase(t - z)
        second: p_minus (t + z)/2 - p_perp.x_perp
                + int_0^{t-z} [(p_perp -+ e A)^2 + m^2] / (2 p_minus)
        """
        t, x, y, z = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (t, x, y, z)))
        p, e, m = self.momentum, self.field.charge, self.momentum.mass
        eta = t - z
        acc = self.cache(eta)
        perp = p.px * x + p.py * y
        first = p.energy * t - p.pz * z - perp + self.field_phase(eta)
        pa = p.px * acc[..., 0] + p.py * acc[..., 1]
        square = (p.px**2 + p.py**2 + m * m) * eta - self.branch * 2.0 * e * pa + e * e * acc[..., 2]
        second = p.p_minus * (t + z) / 2.0 - perp + square / (2.0 * p.p_minus)
        return first, second

    def phase(self, t, x, y, z, rtol=1e-10):
        first, second = self.phase_forms(t, x, y, z)
        scale = np.maximum(1.0, np.abs(first))
        if np.any(np.abs(first - second) > rtol * scale):
            raise ConsistencyError("the two forms of the Volkov phase disagree")
        return second

    def matrix_factor(self, eta) -> np.ndarray:
        """I +- e kslash Aslash / (2 p_minus); stacked over eta."""
        self._check_p_minus()
        a = self.field.four_potential(eta)
        ks = slash(K_NULL)
        return IDENTITY + self.branch * self.field.charge * (ks @ slash(a)) / (2.0 * self.p_minus)

    def matrix_factor_expm(self, eta) -> np.ndarray:
        """exp(+- e kslash Aslash / (2 p_minus)) by scaling and squaring."""
        self._check_p_minus()
        a = self.field.four_potential(float(eta))
        gen = self.branch * self.field.charge * (slash(K_NULL) @ slash(a)) / (2.0 * self.p_minus)
        return expm(gen)

    def f_matrix(self, eta) -> np.ndarray:
        """f(eta) such that psi = exp(-i (+-) p.x) f(eta) u."""
        phase = np.exp(-1j * self.branch * self.field_phase(eta))
        return phase[..., None, None] * self.matrix_factor(eta)

    def evaluate(self, t, x, y, z) -> np.ndarray:
        """psi at the given point(s); trailing axis holds the 4 components."""
        s = self.phase(t, x, y, z)
        eta = np.asarray(t, dtype=float) - np.asarray(z, dtype=float)
        u = self.matrix_factor(np.broadcast_to(eta, np.shape(s))) @ self.spinor
        return np.exp(-1j * self.branch * s)[..., None] * u

    def evaluate_at(self, point: SpacetimePoint) -> np.ndarray:
        return self.evaluate(point.t, point.x, point.y, point.z)

    def u_factor(self, eta) -> np.ndarray:
        """U = (I +- e kslash Aslash / 2 p_minus) u."""
        return self.matrix_factor(eta) @ self.spinor

    def free_solution(self, t, x, y, z) -> np.ndarray:
        p4 = self.momentum.four
        px = p4[0] * np.asarray(t) - p4[1] * np.asarray(x) - p4[2] * np.asarray(y) - p4[3] * np.asarray(z)
        return np.exp(-1j * self.branch * px)[..., None] * self.spinor


def volkov_phase(state: VolkovState, point: SpacetimePoint) -> float:
    return float(state.phase(point.t, point.x, point.y, point.z))


def volkov_matrix_factor(state: VolkovState, eta: float) -> np.ndarray:
    return state.matrix_factor(float(eta))


def evaluate(state: VolkovState, point: SpacetimePoint) -> np.ndarray:
    return state.evaluate_at(point)


def _stencil(point: SpacetimePoint, h):
    base = point.four
    shifts = [base]
    for mu in range(4):
        for sgn in (1.0, -1.0):
            q = base.copy()
            q[mu] += sgn * h
            shifts.append(q)
    return np.array(shifts)


def _psi_stencil(state, point, h):
    pts = _stencil(point, h)
    psi = state.evaluate(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])
    centre = psi[0]
    first = np.empty((4, 4), dtype=complex)
    second = np.empty((4, 4), dtype=complex)
    for mu in range(4):
        fwd, bwd = psi[1 + 2 * mu], psi[2 + 2 * mu]
        first[mu] = (fwd - bwd) / (2.0 * h)
        second[mu] = (fwd - 2.0 * centre + bwd) / (h * h)
    return centre, first, second


def _relative(residual, psi, scale):
    r = float(np.linalg.norm(residual) / (scale * np.linalg.norm(psi)))
    if not np.isfinite(r):
        raise ConsistencyError("non-finite residual")
    return r


def first_order_dirac_residual(state: VolkovState, point: SpacetimePoint, h=1e-3) -> float:
    """|[i gamma^mu (d_mu + i e A_mu) - m] psi| / (m |psi|) with centred differences."""
    if not h > 0:
        raise ValueError("h must be positive")
    psi, d, _ = _psi_stencil(state, point, h)
    e, m = state.field.charge, state.momentum.mass
    a = state.field.four_potential(point.eta)
    res = sum(1j * GAMMA[mu] @ d[mu] for mu in range(4))
    res = res - e * slash(a) @ psi - m * psi
    return _relative(res, psi, m)


def squared_dirac_residual(state: VolkovState, point: SpacetimePoint, h=1e-3) -> float:
    """Residual of [d^2 + 2 i e A.d - e^2 A.A + (i e / 2) gamma gamma F + m^2] psi.

    Normalised by m^2 |psi|.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    psi, d, dd = _psi_stencil(state, point, h)
    e, m = state.field.charge, state.momentum.mass
    a = state.field.four_potential(point.eta)
    adot = state.field.four_derivative(point.eta)
    box = dd[0] - dd[1] - dd[2] - dd[3]
    # A^mu d_mu; A^0 = A^3 = 0
    a_dot_d = a[1] * d[1] + a[2] * d[2]
    a_sq = a[0] ** 2 - a[1] ** 2 - a[2] ** 2 - a[3] ** 2
    spin = 1j * e * field_strength_contraction(K_NULL, adot)
    res = box + 2j * e * a_dot_d - e * e * a_sq * psi + spin @ psi + m * m * psi
    return _relative(res, psi, m * m)


def f_ode_residual(state: VolkovState, eta: float, h=1e-4) -> float:
    """Residual of the first-order equation obeyed by f(eta), applied to u.

    [-+ 2 i (p.k) fdot + (+- 2 e A.p - e^2 A.A + i e kslash Adot-slash) f] u,
    normalised by m^2 |f u|.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    p, e, m, b = state.momentum, state.field.charge, state.momentum.mass, state.branch
    etas = np.array([eta, eta + h, eta - h])
    f = state.f_matrix(etas)
    fdot = (f[1] - f[2]) / (2.0 * h)
    a = state.field.four_potential(eta)
    adot = state.field.four_derivative(eta)
    p4 = p.four
    pk = p4[0] * K_NULL[0] - p4[3] * K_NULL[3]
    ap = a[0] * p4[0] - a[1] * p4[1] - a[2] * p4[2] - a[3] * p4[3]
    a_sq = a[0] ** 2 - a[1] ** 2 - a[2] ** 2 - a[3] ** 2
    coupling = (b * 2.0 * e * ap - e * e * a_sq) * IDENTITY + 1j * e * slash(K_NULL) @ slash(adot)
    u = state.spinor
    res = -b * 2j * pk * fdot @ u + coupling @ f[0] @ u
    return _relative(res, f[0] @ u, m * m)


def factor_nilpotency(state: VolkovState, eta: float) -> float:
    n = state.matrix_factor(eta) - IDENTITY
    return max_abs(n @ n)


def factor_expm_deviation(state: VolkovState, eta: float) -> float:
    return max_abs(state.matrix_factor(eta) - state.matrix_factor_expm(eta))
