"""Pointwise certification of the orthonormality and completeness algebra.

Every check builds the left-hand side by explicit 4x4 matrix algebra on free
spinors and compares it with the closed form it is claimed to equal.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .clifford import GAMMA, IDENTITY, dirac_adjoint_conjugate, max_abs, slash
from .field import PhaseIntegralCache, PlaneWaveField
from .lorentz import K_NULL, KinematicsError, OnShellMomentum
from .spinors import free_spinor, projector
from .states import P_MINUS_CUTOFF, SingularKinematicsError

KSLASH = slash(K_NULL)


class DomainError(ValueError):
    pass


@dataclass
class BilinearReport:
    name: str
    max_deviation: float
    samples: int
    tolerance: float
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def merge(self, other: "BilinearReport") -> "BilinearReport":
        return BilinearReport(self.name, max(self.max_deviation, other.max_deviation),
                              self.samples + other.samples, self.tolerance, self.seed)

    def as_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _transverse_slash(a2) -> np.ndarray:
    return slash(np.array([0.0, a2[0], a2[1], 0.0]))


def _perp_dot_gamma(p2) -> np.ndarray:
    """p_x gamma^1 + p_y gamma^2 (the spatial dot product)."""
    return p2[0] * GAMMA[1] + p2[1] * GAMMA[2]


def _require_same_perp(pp: OnShellMomentum, p: OnShellMomentum):
    if abs(pp.px - p.px) > 1e-14 or abs(pp.py - p.py) > 1e-14:
        raise DomainError("identity holds only on the transverse diagonal p'_perp = p_perp")
    if pp.mass != p.mass:
        raise DomainError("masses differ")


def g_function(pp: OnShellMomentum, p: OnShellMomentum) -> float:
    """[(p'_- + m)(p_- + m) + p_perp^2] / [4 sqrt((m + p0)(m + p'0) p0 p'0)]."""
    _require_same_perp(pp, p)
    m = p.mass
    perp2 = p.px**2 + p.py**2
    num = (pp.p_minus + m) * (p.p_minus + m) + perp2
    return num / (4.0 * np.sqrt((m + p.energy) * (m + pp.energy) * p.energy * pp.energy))


def bilinear_matrices(pp_minus, p_minus):
    g0, g1, g2, g3 = GAMMA
    tail = ((pp_minus - p_minus) * g3 - (pp_minus + p_minus) * g0) / 4.0
    return [IDENTITY, g0 @ (g0 - g3) / 2.0, g1 @ tail, g2 @ tail]


def bilinear_targets(pp: OnShellMomentum, p: OnShellMomentum):
    g = g_function(pp, p)
    m = p.mass
    perp2 = p.px**2 + p.py**2
    return [(1.0 + (perp2 + m * m) / (pp.p_minus * p.p_minus)) * g, g, p.px * g, p.py * g]


def check_bilinears(pp, p, sp, s, branch=1, tol=1e-12) -> BilinearReport:
    _require_same_perp(pp, p)
    up = free_spinor(pp, sp, branch)
    u = free_spinor(p, s, branch)
    delta = 1.0 if sp == s else 0.0
    dev = 0.0
    for mat, target in zip(bilinear_matrices(pp.p_minus, p.p_minus), bilinear_targets(pp, p)):
        dev = max(dev, abs(up.conj() @ mat @ u - target * delta))
    return BilinearReport("bilinears", float(dev), 1, tol)


def dressing(p_minus, a2, e, branch) -> np.ndarray:
    """I +- e kslash Aslash / (2 p_minus)."""
    return IDENTITY + branch * e * KSLASH @ _transverse_slash(a2) / (2.0 * p_minus)


def dressing_dagger(p_minus, a2, e, branch) -> np.ndarray:
    """I +- e gamma^0 Aslash kslash gamma^0 / (2 p_minus), built from the Dirac conjugate."""
    g0 = GAMMA[0]
    ak = dirac_adjoint_conjugate(KSLASH @ _transverse_slash(a2))
    return IDENTITY + branch * e * g0 @ ak @ g0 / (2.0 * p_minus)


def intermediate_decomposition_deviation(pp_minus, p_minus, a2, e, branch) -> float:
    """Product of the two dressings against its expansion in bilinear matrices."""
    lhs = dressing_dagger(pp_minus, a2, e, branch) @ dressing(p_minus, a2, e, branch)
    b = bilinear_matrices(pp_minus, p_minus)
    a_sq = a2[0] ** 2 + a2[1] ** 2
    rhs = IDENTITY + (e * e * a_sq * b[1] - branch * 2.0 * e * (a2[0] * b[2] + a2[1] * b[3])) / (pp_minus * p_minus)
    return max_abs(lhs - rhs)


def u_product_closed_form(pp, p, a2, e, branch) -> float:
    m = p.mass
    shifted = (p.px - branch * e * a2[0]) ** 2 + (p.py - branch * e * a2[1]) ** 2
    return (1.0 + (shifted + m * m) / (p.p_minus * pp.p_minus)) * g_function(pp, p)


def check_u_product(pp, p, sp, s, branch, a2, e=-1.0, tol=1e-12) -> BilinearReport:
    """U'^dagger U against (1 + [(p_perp -+ e A)^2 + m^2] / (p_- p'_-)) g delta."""
    _require_same_perp(pp, p)
    up = free_spinor(pp, sp, branch)
    u = free_spinor(p, s, branch)
    big_u = dressing(p.p_minus, a2, e, branch) @ u
    big_up = dressing(pp.p_minus, a2, e, branch) @ up
    direct = np.vdot(big_up, big_u)
    via_display = up.conj() @ dressing_dagger(pp.p_minus, a2, e, branch) @ dressing(p.p_minus, a2, e, branch) @ u
    target = u_product_closed_form(pp, p, a2, e, branch) * (1.0 if sp == s else 0.0)
    dev = max(abs(direct - target), abs(via_display - target),
              intermediate_decomposition_deviation(pp.p_minus, p.p_minus, a2, e, branch))
    return BilinearReport("u_product", float(dev), 1, tol)


def g_diagonal_deviation(p: OnShellMomentum) -> float:
    return abs(g_function(p, p) - p.p_minus / (2.0 * p.energy))


def _shifted_square(p_perp, a2, e, branch, m):
    return (p_perp[0] - branch * e * a2[0]) ** 2 + (p_perp[1] - branch * e * a2[1]) ** 2 + m * m


def zeta(z, pp_minus, p_minus, p_perp, field, t, branch=1, m=1.0, cache=None):
    """z - int_0^{t-z} [(p_perp -+ e A)^2 + m^2] / (p_- p'_-) d eta'."""
    cache = cache if cache is not None else PhaseIntegralCache(field)
    eta = t - np.asarray(z, dtype=float)
    acc = cache(eta)
    e = field.charge
    integral = ((p_perp[0] ** 2 + p_perp[1] ** 2 + m * m) * eta
                - branch * 2.0 * e * (p_perp[0] * acc[..., 0] + p_perp[1] * acc[..., 1])
                + e * e * acc[..., 2])
    return np.asarray(z) - integral / (p_minus * pp_minus)


def jacobian_closed_form(z, pp_minus, p_minus, p_perp, field, t, branch=1, m=1.0):
    ax, ay = field.potential(t - z)
    return 1.0 + _shifted_square(p_perp, (ax, ay), field.charge, branch, m) / (p_minus * pp_minus)


def check_jacobian(pp_minus, p_minus, p_perp, field, t, z, branch=1, m=1.0, h=1e-5, cache=None) -> float:
    """|d zeta / dz (centred difference) - closed-form Jacobian|."""
    if not (pp_minus > 0 and p_minus > 0):
        raise KinematicsError("light-cone momenta must be positive")
    zs = np.array([z + h, z - h])
    zv = zeta(zs, pp_minus, p_minus, p_perp, field, t, branch, m, cache)
    fd = (zv[0] - zv[1]) / (2.0 * h)
    return float(abs(fd - jacobian_closed_form(z, pp_minus, p_minus, p_perp, field, t, branch, m)))


# -- smeared orthonormality ---------------------------------------------------------

@dataclass
class SmearedResult:
    value: complex
    target: float
    deviation: float
    refined_value: complex | None
    refined_deviation: float | None
    cross_integrand: float
    cross_smeared: float
    status: str

    def passed(self, tol) -> bool:
        return self.status == "ok" and self.deviation <= tol


def _smeared_once(p, sigma, field, t, s, branch, variable, window, n_sigma, n_p, panel, order, cache):
    from .quadrature import panel_nodes

    m, e = p.mass, field.charge
    pm = p.p_minus
    u = np.linspace(-n_sigma, n_sigma, n_p)
    du = u[1] - u[0]
    wj = np.exp(-0.5 * u * u) / np.sqrt(2.0 * np.pi) * du
    if variable == "p_minus":
        ppm = pm + sigma * u
        if np.any(ppm <= P_MINUS_CUTOFF):
            raise DomainError("smearing width too large for p_minus")
        primes = [OnShellMomentum(m, p.px, p.py, (m * m + p.px**2 + p.py**2 - q * q) / (2.0 * q)) for q in ppm]
        target = 2.0 * np.pi * 2.0 * g_function(p, p) / (sigma * np.sqrt(2.0 * np.pi))
    elif variable == "p_z":
        primes = [OnShellMomentum(m, p.px, p.py, p.pz + sigma * c) for c in u]
        ppm = np.array([q.p_minus for q in primes])
        target = 2.0 * np.pi / (sigma * np.sqrt(2.0 * np.pi))
    else:
        raise ValueError(f"unknown smearing variable {variable!r}")

    # both spins of the primed state; the same-spin one carries the signal
    uc = {sp: np.array([free_spinor(q, sp, branch) for q in primes]).conj() for sp in (1, 2)}
    us = free_spinor(p, s, branch)

    sup = field.support
    half = max(window, abs(t) + (max(abs(sup[0]), abs(sup[1])) if sup else 0.0) + 1.0)
    n_pan = int(np.ceil(2.0 * half / panel))
    edges = np.linspace(-half, half, n_pan + 1)
    zn, wz = panel_nodes(edges, order)
    eta = t - zn
    acc = cache(eta)
    ax, ay = field.potential(eta)
    perp2m = p.px**2 + p.py**2 + m * m
    x_int = perp2m * eta - branch * 2.0 * e * (p.px * acc[:, 0] + p.py * acc[:, 1]) + e * e * acc[:, 2]

    g0 = GAMMA[0]
    a4 = np.stack([np.zeros_like(ax), ax, ay, np.zeros_like(ax)], axis=-1)
    aslash = slash(a4)
    ka = KSLASH @ aslash
    v0 = (IDENTITY + branch * e * ka / (2.0 * pm)) @ us
    # primed dressing is I + branch e g0 (Aslash kslash) g0 / (2 p'_-): split off 1/p'_-
    ak_conj = g0 @ (aslash @ KSLASH) @ g0
    v1 = np.einsum("nij,nj->ni", branch * e * ak_conj / 2.0, v0)

    dj = ppm - pm
    invj = 1.0 / ppm
    c1 = (t + zn) / 2.0
    c2 = x_int / (2.0 * pm)
    value = _kernels.smeared_double_sum(wz, c1, c2, v0, v1, wj, dj, invj, uc[s], float(branch))

    other = 2 if s == 1 else 1
    cross = np.abs(v0 @ uc[other].T + (v1 @ uc[other].T) * invj[None, :])
    xval = _kernels.smeared_double_sum(wz, c1, c2, v0, v1, wj, dj, invj, uc[other], float(branch))
    return value, target, float(cross.max()), abs(xval) / target


def smeared_orthonormality(p: OnShellMomentum, sigma, field: PlaneWaveField, t=0.0, s=1, branch=1,
                           variable="p_minus", window=None, n_sigma=8.0, n_p=161, panel=1.0,
                           order=8, refine=True, bias_tol=0.01, cache=None) -> SmearedResult:
    """Gaussian-smeared z-integral of psi'^dagger psi after the transverse delta.

    The primed momentum shares p_perp and is smeared in ``variable``
    ("p_minus" or "p_z") with width ``sigma``. Targets carry the explicit
    2 pi of int dz exp(i k z) = 2 pi delta(k): with p_minus smearing the
    target is 2 pi * 2 g(p, p) phi_sigma(0), with p_z smearing 2 pi phi_sigma(0).
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    cache = cache if cache is not None else PhaseIntegralCache(field)
    if window is None:
        window = 20.0 / sigma
    args = (field, t, s, branch, variable)
    value, target, cross, xsm = _smeared_once(p, sigma, *args, window, n_sigma, n_p, panel, order, cache)
    dev = abs(value / target - 1.0)
    refined = refined_dev = None
    status = "ok"
    if refine:
        # same window: a window too short for the narrower smearing shows up as a shift
        refined, rtarget, _, _ = _smeared_once(p, sigma / 2.0, *args, window, n_sigma, n_p, panel, order, cache)
        refined_dev = abs(refined / rtarget - 1.0)
        if abs(refined / rtarget - value / target) > bias_tol:
            status = "inconclusive"
    return SmearedResult(complex(value), float(target), float(dev),
                         None if refined is None else complex(refined), refined_dev, cross, float(xsm), status)


# -- completeness kernel ------------------------------------------------------------

def lightcone_fourvector(p_perp, p_minus, m) -> np.ndarray:
    """Raw (p0, px, py, pz) from (p_perp, p_minus) on the mass shell.

    Accepts negative ``p_minus`` so analytically continued values can be
    inserted; no on-shell object is constructed.
    """
    px, py = p_perp
    p_plus = (m * m + px * px + py * py) / p_minus
    return np.array([(p_minus + p_plus) / 2.0, px, py, (p_plus - p_minus) / 2.0])


def dressed_projector(p4, p_minus, m, e, branch, a2, a2p) -> np.ndarray:
    """(I +- e kA/2p_-) (pslash +- m) gamma^0 / 2p0 (I +- e gamma^0 A'k gamma^0 / 2p_-)."""
    return (dressing(p_minus, a2, e, branch) @ projector(p4, m, branch)
            @ dressing_dagger(p_minus, a2p, e, branch))


def kernel_outer_product(p: OnShellMomentum, e, a2, a2p) -> np.ndarray:
    """(p0 / p_-) sum_s U_s(A) U_s(A')^dagger from explicit (+) spinors."""
    out = np.zeros((4, 4), dtype=complex)
    for s in (1, 2):
        u = free_spinor(p, s, 1)
        out += np.outer(dressing(p.p_minus, a2, e, 1) @ u, (dressing(p.p_minus, a2p, e, 1) @ u).conj())
    return p.energy / p.p_minus * out


def kernel_closed_form(p_perp, p_minus, m, e, a2, a2p) -> np.ndarray:
    """(1/2p_-){pslash + m + (e/2p_-)[(A'k - Ak)(pslash + m) - 2p_- A' + 2 p.A' k - e k A A']} gamma^0."""
    p4 = lightcone_fourvector(p_perp, p_minus, m)
    ps = slash(p4) + m * IDENTITY
    a, ap = _transverse_slash(a2), _transverse_slash(a2p)
    p_dot_ap = -(p_perp[0] * a2p[0] + p_perp[1] * a2p[1])
    bracket = ((ap @ KSLASH - a @ KSLASH) @ ps - 2.0 * p_minus * ap
               + 2.0 * p_dot_ap * KSLASH - e * KSLASH @ a @ ap)
    return (ps + e / (2.0 * p_minus) * bracket) @ GAMMA[0] / (2.0 * p_minus)


def kernel_coefficients(p_perp, m, e, a2, a2p, literal_k2=False):
    """K0, K1, K2 with L = K0 + K1/p_- + K2/p_-^2.

    ``literal_k2`` uses A(z) instead of A(z') in the p_perp.A term of K2; the
    two agree only at coincident points z = z'.
    """
    g0, g3 = GAMMA[0], GAMMA[3]
    a, ap = _transverse_slash(a2), _transverse_slash(a2p)
    pg = _perp_dot_gamma(p_perp)
    perp2 = p_perp[0] ** 2 + p_perp[1] ** 2
    k0 = (g0 + g3) @ g0 / 4.0
    k1 = 0.5 * (m * IDENTITY - pg + e / 2.0 * (ap - a) @ g0 @ (g0 + g3) - e * ap) @ g0
    a_in_dot = a2 if literal_k2 else a2p
    p_dot_a = p_perp[0] * a_in_dot[0] + p_perp[1] * a_in_dot[1]
    k2 = 0.25 * ((m * m + perp2) * IDENTITY + e * (ap - a) @ pg + e * m * (ap - a)
                 - 2.0 * e * p_dot_a * IDENTITY - e * e * a @ ap) @ KSLASH @ g0
    return k0, k1, k2


def recover_coefficients(p_perp, m, e, a2, a2p, p_minus_values=(0.5, 1.0, 2.0)):
    """Fit L(p_-) at three points to K0 + K1/p_- + K2/p_-^2."""
    xs = 1.0 / np.asarray(p_minus_values, dtype=float)
    vander = np.vander(xs, 3, increasing=True)
    ls = np.array([kernel_closed_form(p_perp, pm, m, e, a2, a2p) for pm in p_minus_values])
    coef = np.linalg.solve(vander, ls.reshape(3, -1))
    return coef.reshape(3, 4, 4)


def _field_pair(field, t, z, zp):
    ax, ay = field.potential(t - z)
    bx, by = field.potential(t - zp)
    return (float(ax), float(ay)), (float(bx), float(by))


def check_kernel_decomposition(p_perp, p_minus, field, t, z, zp, m=1.0, tol=1e-12) -> BilinearReport:
    if p_minus <= P_MINUS_CUTOFF:
        raise SingularKinematicsError(f"p_minus = {p_minus:g} below cutoff")
    e = field.charge
    a2, a2p = _field_pair(field, t, z, zp)
    p4 = lightcone_fourvector(p_perp, p_minus, m)
    p = OnShellMomentum(m, p4[1], p4[2], p4[3])
    closed = kernel_closed_form(p_perp, p_minus, m, e, a2, a2p)
    outer = kernel_outer_product(p, e, a2, a2p)
    k0, k1, k2 = kernel_coefficients(p_perp, m, e, a2, a2p)
    poly = k0 + k1 / p_minus + k2 / p_minus**2
    # scale-free comparison: entries grow with p_perp, A and 1/p_-
    scale = max(1.0, max_abs(closed))
    dev = max(max_abs(closed - outer), max_abs(closed - poly)) / scale
    return BilinearReport("kernel_decomposition", float(dev), 1, tol)


def check_parity_relation(p_perp, p_minus, field, t, z, zp, m=1.0, tol=1e-12) -> BilinearReport:
    """(+) kernel at p against the (-) kernel at -p with p_+ -> -p_- substituted.

    For momentum -p the light-cone minus component equals p_+ of p; the
    continuation is applied by passing -p_minus for it.
    """
    if p_minus <= P_MINUS_CUTOFF:
        raise SingularKinematicsError(f"p_minus = {p_minus:g} below cutoff")
    e = field.charge
    a2, a2p = _field_pair(field, t, z, zp)
    p4 = lightcone_fourvector(p_perp, p_minus, m)
    p = OnShellMomentum(m, p4[1], p4[2], p4[3])
    lhs = np.zeros((4, 4), dtype=complex)
    for s in (1, 2):
        u = free_spinor(p, s, 1)
        lhs += np.outer(dressing(p_minus, a2, e, 1) @ u, (dressing(p_minus, a2p, e, 1) @ u).conj())
    minus_perp = (-p_perp[0], -p_perp[1])
    continued_minus = -p_minus
    q4 = lightcone_fourvector(minus_perp, continued_minus, m)
    rhs = dressed_projector(q4, continued_minus, m, e, -1, a2, a2p)
    scale = max(1.0, max_abs(lhs))
    return BilinearReport("parity_relation", float(max_abs(lhs - rhs) / scale), 1, tol)


def antiparticle_kernel_consistency(p: OnShellMomentum, e, a2, a2p) -> float:
    """(-) kernel at -p from spinors against the projector route, no continuation."""
    q = p.reflected()
    out = np.zeros((4, 4), dtype=complex)
    for s in (1, 2):
        u = free_spinor(q, s, -1)
        out += np.outer(dressing(q.p_minus, a2, e, -1) @ u, (dressing(q.p_minus, a2p, e, -1) @ u).conj())
    ref = dressed_projector(q.four, q.p_minus, q.mass, e, -1, a2, a2p)
    return max_abs(out - ref)


def sample_bilinear_inputs(rng, n, m=1.0, span=2.0, min_p_minus=0.05):
    """Random (p', p) pairs sharing p_perp, with independent p_minus values."""
    pairs = []
    while len(pairs) < n:
        perp = rng.uniform(-span, span, size=2)
        pms = rng.uniform(-span, span, size=2)
        mom = [OnShellMomentum(m, perp[0], perp[1], pz) for pz in pms]
        if min(q.p_minus for q in mom) >= min_p_minus:
            pairs.append((mom[0], mom[1]))
    return pairs
