"""Registry of named checks grouped into suites.

Each check is a function of a context holding the run configuration, the
configured field and a generator seeded from (seed, suite, check), so a
check's samples do not depend on which other suites run. A check returns
``(error, tolerance)`` or ``(error, tolerance, converged)``.
"""
from __future__ import annotations

import time
import warnings
import zlib
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import integrate

from . import _kernels, appendix
from .clifford import (GAMMA, IDENTITY, anticommutator, anticommutator_table, dirac_adjoint_conjugate,
                       max_abs, slash, slash_square_deviation)
from .config import RunConfig
from .field import PhaseIntegralCache, PlaneWaveField, spin_coupling_matrix
from .identities import (KSLASH, antiparticle_kernel_consistency, check_bilinears, check_jacobian,
                         check_kernel_decomposition, check_parity_relation, check_u_product,
                         g_diagonal_deviation, kernel_coefficients, lightcone_fourvector,
                         recover_coefficients, sample_bilinear_inputs, smeared_orthonormality)
from .lorentz import K_NULL, OnShellMomentum, from_lightcone, lightcone_components, minkowski_dot, random_momenta
from .report import CheckReport
from .spinors import SPINS, free_spinor, spinor_completeness
from .states import (SpacetimePoint, VolkovState, factor_expm_deviation, factor_nilpotency,
                     first_order_dirac_residual, f_ode_residual, squared_dirac_residual)


@dataclass
class Context:
    config: RunConfig
    field: PlaneWaveField
    rng: np.random.Generator
    cache: PhaseIntegralCache
    tables: dict = dc_field(default_factory=dict)

    def tol(self, tier):
        return self.config[f"tolerance.{tier}"]

    @property
    def n_random(self):
        return self.config["samples.random"]

    @property
    def n_points(self):
        return self.config["samples.points"]


REGISTRY: dict = {}


def check(suite, name, anchor):
    def deco(fn):
        REGISTRY.setdefault(suite, []).append((name, anchor, fn))
        return fn
    return deco


def registered(suites=None):
    """(suite, name) pairs in registry order."""
    chosen = REGISTRY if suites is None else {s: REGISTRY[s] for s in suites}
    return [(s, name) for s, entries in chosen.items() for name, _, _ in entries]


def _rng(seed, suite, name):
    return np.random.default_rng([seed & 0xFFFFFFFF, seed >> 32, zlib.crc32(f"{suite}/{name}".encode())])


def _ball(rng, n, radius=1.0):
    """n points uniform in the 3-ball."""
    out = []
    while len(out) < n:
        v = rng.uniform(-radius, radius, 3)
        if v @ v <= radius * radius:
            out.append(v)
    return np.array(out)


def _eta_range(field):
    sup = field.support
    return (0.0, 10.0) if sup is None else sup


def _random_etas(rng, field, n):
    lo, hi = _eta_range(field)
    return rng.uniform(lo, hi, n)


def _field_values(rng, field, n):
    ax, ay = field.potential(_random_etas(rng, field, n))
    return np.stack([np.atleast_1d(ax), np.atleast_1d(ay)], axis=-1)


# -- algebra -------------------------------------------------------------------------

for _nu in range(4):
    for _mu in range(4):
        def _anti(ctx, nu=_nu, mu=_mu):
            return anticommutator_table()[nu, mu], ctx.tol("exact")
        check("algebra", f"anticommutator_{_nu}{_mu}", "{gamma^nu, gamma^mu} = 2 g^{nu mu} I")(_anti)


@check("algebra", "slash_square", "vslash vslash = (v.v) I")
def _slash_square(ctx):
    vs = ctx.rng.uniform(-2, 2, (ctx.n_random, 4))
    return max(slash_square_deviation(v) for v in vs), ctx.tol("algebra")


@check("algebra", "slash_polarization", "{uslash, vslash} = 2 (u.v) I")
def _slash_pol(ctx):
    us = ctx.rng.uniform(-2, 2, (ctx.n_random, 4))
    vs = ctx.rng.uniform(-2, 2, (ctx.n_random, 4))
    a = anticommutator(slash(us), slash(vs))
    dots = np.array([minkowski_dot(u, v) for u, v in zip(us, vs)])
    return max_abs(a - 2.0 * dots[:, None, None] * IDENTITY), ctx.tol("algebra")


@check("algebra", "kslash_nilpotent", "kslash kslash = k^2 = 0")
def _knil(ctx):
    return max_abs(KSLASH @ KSLASH), ctx.tol("exact")


@check("algebra", "gamma_hermiticity", "gamma^0 hermitian, gamma^i antihermitian")
def _herm(ctx):
    dev = max_abs(GAMMA[0].conj().T - GAMMA[0])
    for i in (1, 2, 3):
        dev = max(dev, max_abs(GAMMA[i].conj().T + GAMMA[i]))
    return dev, ctx.tol("exact")


@check("algebra", "dirac_adjoint_ka", "gamma^0 (kslash Aslash)^dagger gamma^0 = Aslash kslash")
def _adj(ctx):
    dev = 0.0
    for a in ctx.rng.uniform(-2, 2, (ctx.n_random, 2)):
        aslash = slash(np.array([0.0, a[0], a[1], 0.0]))
        dev = max(dev, max_abs(dirac_adjoint_conjugate(KSLASH @ aslash) - aslash @ KSLASH))
    return dev, ctx.tol("algebra")


# -- spinors and kinematics ------------------------------------------------------------

@check("spinors", "mass_shell", "p.p = m^2")
def _shell(ctx):
    ps = random_momenta(ctx.rng, ctx.n_random)
    return max(abs(minkowski_dot(p.four, p.four) - p.mass**2) / p.mass**2 for p in ps), ctx.tol("matrix")


@check("spinors", "lightcone_roundtrip", "p_- p_+ = m^2 + p_perp^2, from_lightcone inverts")
def _lc(ctx):
    dev = 0.0
    for p in random_momenta(ctx.rng, ctx.n_random):
        pm, pp = lightcone_components(p)
        q = from_lightcone(pm, p.perp, p.mass)
        scale = max(1.0, float(np.max(np.abs(p.four))))
        dev = max(dev, abs(pm * pp - p.mass**2 - p.px**2 - p.py**2) / (p.mass**2 + p.px**2 + p.py**2),
                  float(np.max(np.abs(q.four - p.four))) / scale)
    return dev, ctx.tol("matrix")


def _spinor_orthonormality(ctx, branch):
    dev = 0.0
    for p in random_momenta(ctx.rng, ctx.n_random):
        us = [free_spinor(p, s, branch) for s in SPINS]
        for i, sp in enumerate(SPINS):
            for j, s in enumerate(SPINS):
                dev = max(dev, abs(np.vdot(us[i], us[j]) - (1.0 if sp == s else 0.0)))
    return dev, ctx.tol("algebra")


def _spinor_completeness(ctx, branch):
    dev = 0.0
    for p in random_momenta(ctx.rng, ctx.n_random):
        outer, proj = spinor_completeness(p, branch)
        dev = max(dev, max_abs(outer - proj))
    return dev, ctx.tol("algebra")


for _b, _tag in ((1, "plus"), (-1, "minus")):
    check("spinors", f"orthonormality_{_tag}", "u_{s'}^dagger u_s = delta_{s's}")(
        lambda ctx, b=_b: _spinor_orthonormality(ctx, b))
    check("spinors", f"completeness_{_tag}", "sum_s u u^dagger = (pslash +- m) gamma^0 / 2p^0")(
        lambda ctx, b=_b: _spinor_completeness(ctx, b))


# -- field -------------------------------------------------------------------------------

@check("field", "phase_integrals_vs_quad", "int_0^eta (A_x, A_y, A^2) by adaptive quadrature")
def _phase_quad(ctx):
    f = ctx.field
    lo, hi = _eta_range(f)
    etas = ctx.rng.uniform(lo - 2.0, hi + 2.0, 20)
    got = ctx.cache(etas)
    dev = 0.0
    with warnings.catch_warnings():
        # quad flags roundoff when asked for near-machine accuracy
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for eta, row in zip(etas, got):
            for c in range(3):
                ref, _ = integrate.quad(lambda s: f.integrands(np.array(s))[c], 0.0, eta,
                                        limit=500, epsabs=1e-14, epsrel=1e-13)
                dev = max(dev, abs(row[c] - ref) / max(1.0, abs(ref)))
    return dev, 1e-10


@check("field", "phase_cache_consistency", "cached and uncached phase integrals agree")
def _phase_cache(ctx):
    lo, hi = _eta_range(ctx.field)
    etas = ctx.rng.uniform(lo - 2.0, hi + 2.0, ctx.n_points)
    fresh = PhaseIntegralCache(ctx.field, cached=False)(etas)
    got = ctx.cache(etas)
    return float(np.max(np.abs(got - fresh) / np.maximum(1.0, np.abs(fresh)))), ctx.tol("matrix")


@check("field", "derivative_vs_fd", "dA/deta against centred differences")
def _deriv(ctx):
    f = ctx.field
    if f.shape == "tabulated":
        eta, ax, ay = (np.asarray(c) for c in f.table)
        d = np.stack(f.derivative(eta))
        ref = np.stack([np.gradient(ax, eta), np.gradient(ay, eta)])
        return float(np.max(np.abs(d - ref))), ctx.tol("fd")
    h = 1e-5
    etas = _random_etas(ctx.rng, f, ctx.n_points)
    fd = (np.stack(f.potential(etas + h)) - np.stack(f.potential(etas - h))) / (2 * h)
    return float(np.max(np.abs(fd - np.stack(f.derivative(etas))))), ctx.tol("fd")


@check("field", "spin_coupling", "(1/2) gamma^nu gamma^mu F_{nu mu} = kslash Adot-slash")
def _spin_coupling(ctx):
    dev = 0.0
    for eta in _random_etas(ctx.rng, ctx.field, ctx.n_points):
        direct, contraction = spin_coupling_matrix(ctx.field, eta)
        dev = max(dev, max_abs(direct - contraction))
    return dev, ctx.tol("algebra")


@check("field", "transverse_gauge", "k.A = 0 and A^0 = A^3 = 0")
def _gauge(ctx):
    etas = _random_etas(ctx.rng, ctx.field, ctx.n_points)
    a = np.array([ctx.field.four_potential(e) for e in etas])
    return float(np.max(np.abs(a @ (K_NULL * [1, -1, -1, -1])))) + float(np.max(np.abs(a[:, [0, 3]]))), ctx.tol("exact")


# -- Volkov states -----------------------------------------------------------------------

def _volkov_samples(ctx, n):
    """(state, point) pairs with |p| <= 1, both branches, eta inside the pulse."""
    out = []
    lo, hi = _eta_range(ctx.field)
    ps = _ball(ctx.rng, n)
    for i, pv in enumerate(ps):
        p = OnShellMomentum.from_vector(1.0, pv)
        branch = 1 if i % 2 == 0 else -1
        st = VolkovState(p, 1 + (i // 2) % 2, branch, ctx.field, cache=ctx.cache)
        eta = ctx.rng.uniform(lo, hi)
        x, y, z = ctx.rng.uniform(-5, 5, 3)
        out.append((st, SpacetimePoint(eta + z, x, y, z)))
    return out


@check("volkov", "zero_field_reduction", "A = 0: psi = exp(-+ i p.x) u")
def _free(ctx):
    zero = PlaneWaveField("zero")
    dev = 0.0
    for i, pv in enumerate(_ball(ctx.rng, ctx.n_points, 2.0)):
        st = VolkovState(OnShellMomentum.from_vector(1.0, pv), 1 + i % 2, 1 if i % 4 < 2 else -1, zero)
        t, x, y, z = ctx.rng.uniform(-10, 10, 4)
        dev = max(dev, float(np.max(np.abs(st.evaluate(t, x, y, z) - st.free_solution(t, x, y, z)))))
    return dev, ctx.tol("matrix")


@check("volkov", "dirac_residual", "[i gamma^mu (d_mu + i e A_mu) - m] psi = 0")
def _dirac(ctx):
    h = ctx.config["volkov.h"]
    return max(first_order_dirac_residual(s, pt, h) for s, pt in _volkov_samples(ctx, ctx.n_points)), ctx.tol("dirac")


@check("volkov", "squared_residual", "second-order equation with spin term (ie/2) gamma gamma F")
def _squared(ctx):
    h = ctx.config["volkov.h"]
    return max(squared_dirac_residual(s, pt, h) for s, pt in _volkov_samples(ctx, ctx.n_points)), ctx.tol("squared")


@check("volkov", "h_convergence", "residual(2h) / residual(h) = 4")
def _ratio(ctx):
    # 2h against h: at h/2 the second differences of the squared equation
    # approach the rounding floor eps |S| / h^2 for weak fields
    h = ctx.config["volkov.h"]
    dev = 0.0
    for s, pt in _volkov_samples(ctx, ctx.n_points):
        for fn in (first_order_dirac_residual, squared_dirac_residual):
            dev = max(dev, abs(fn(s, pt, 2.0 * h) / fn(s, pt, h) / 4.0 - 1.0))
    return dev, ctx.tol("ratio")


@check("volkov", "f_ode_residual", "-+ 2i(p.k) f' + (+-2e A.p - e^2 A^2 + ie kslash Adot-slash) f = 0")
def _fode(ctx):
    dev = 0.0
    for s, pt in _volkov_samples(ctx, ctx.n_points):
        dev = max(dev, f_ode_residual(s, pt.eta))
    return dev, ctx.tol("ode")


@check("volkov", "factor_nilpotent", "(U - I)^2 = 0")
def _nil(ctx):
    return max(factor_nilpotency(s, pt.eta) for s, pt in _volkov_samples(ctx, ctx.n_points)), ctx.tol("matrix")


@check("volkov", "factor_expm", "exp(+- e kslash Aslash / 2p_-) = I +- e kslash Aslash / 2p_-")
def _expm(ctx):
    return max(factor_expm_deviation(s, pt.eta) for s, pt in _volkov_samples(ctx, ctx.n_points)), ctx.tol("matrix")


@check("volkov", "phase_forms", "S from p.x plus integral equals the light-cone form")
def _phase_forms(ctx):
    dev = 0.0
    for s, pt in _volkov_samples(ctx, ctx.n_points):
        a, b = s.phase_forms(pt.t, pt.x, pt.y, pt.z)
        dev = max(dev, abs(a - b) / max(1.0, abs(a)))
    return dev, 1e-10


# -- orthonormality ----------------------------------------------------------------------

def _same_spin_bilinears(ctx, branch):
    pairs = sample_bilinear_inputs(ctx.rng, ctx.n_random)
    spins = ctx.rng.integers(1, 3, len(pairs))
    return max(check_bilinears(pp, p, int(s), int(s), branch).max_deviation
               for (pp, p), s in zip(pairs, spins)), ctx.tol("matrix")


def _same_spin_u_product(ctx, branch):
    pairs = sample_bilinear_inputs(ctx.rng, ctx.n_random)
    spins = ctx.rng.integers(1, 3, len(pairs))
    a2s = _field_values(ctx.rng, ctx.field, len(pairs))
    e = ctx.field.charge
    return max(check_u_product(pp, p, int(s), int(s), branch, a, e).max_deviation
               for (pp, p), s, a in zip(pairs, spins, a2s)), ctx.tol("matrix")


def _coincident_cross_spin(ctx, branch):
    """s' != s at p' = p, where the light-cone delta is supported."""
    e = ctx.field.charge
    a2s = _field_values(ctx.rng, ctx.field, ctx.n_random)
    dev = 0.0
    for p, a in zip(random_momenta(ctx.rng, ctx.n_random), a2s):
        dev = max(dev, check_bilinears(p, p, 1, 2, branch).max_deviation,
                  check_bilinears(p, p, 2, 1, branch).max_deviation,
                  check_u_product(p, p, 1, 2, branch, a, e).max_deviation)
    return dev, ctx.tol("algebra")


for _b, _tag in ((1, "plus"), (-1, "minus")):
    check("orthonormality", f"bilinears_{_tag}", "four bilinears = (1 + (p_perp^2 + m^2)/p'_- p_-) g, g, p_x g, p_y g")(
        lambda ctx, b=_b: _same_spin_bilinears(ctx, b))
    check("orthonormality", f"u_product_{_tag}", "U'^dagger U = (1 + [(p_perp -+ eA)^2 + m^2]/p_- p'_-) g")(
        lambda ctx, b=_b: _same_spin_u_product(ctx, b))
    check("orthonormality", f"cross_spin_coincident_{_tag}", "s' != s bilinears vanish at p' = p")(
        lambda ctx, b=_b: _coincident_cross_spin(ctx, b))


@check("orthonormality", "g_diagonal", "g(p, p) = p_- / 2p^0")
def _gdiag(ctx):
    return max(g_diagonal_deviation(p) for p in random_momenta(ctx.rng, ctx.n_random)), ctx.tol("algebra")


@check("orthonormality", "zeta_jacobian", "d zeta/dz = 1 + [(p_perp -+ eA)^2 + m^2] / p_- p'_-")
def _zjac(ctx):
    lo, hi = _eta_range(ctx.field)
    dev = 0.0
    for i in range(ctx.n_points):
        pm, ppm = ctx.rng.uniform(0.2, 2.0, 2)
        perp = ctx.rng.uniform(-1, 1, 2)
        t = ctx.rng.uniform(lo, hi)
        z = ctx.rng.uniform(-2, 2)
        dev = max(dev, check_jacobian(ppm, pm, perp, ctx.field, t, z, 1 if i % 2 == 0 else -1, cache=ctx.cache))
    return dev, ctx.tol("fd")


def _smeared_momentum(ctx):
    return OnShellMomentum.from_vector(1.0, _ball(ctx.rng, 1, 0.5)[0])


@check("orthonormality", "smeared_free", "int dz psi'^dagger psi -> 2 pi 2 g(p,p) delta(p'_- - p_-)")
def _smeared_free(ctx):
    p = _smeared_momentum(ctx)
    r = smeared_orthonormality(p, ctx.config["orthonormality.sigma"], PlaneWaveField("zero"))
    return r.deviation, 0.005, r.status == "ok"


def _smeared_pulse_result(ctx):
    p = _smeared_momentum(ctx)
    return smeared_orthonormality(p, ctx.config["orthonormality.sigma"], ctx.field, cache=ctx.cache)


@check("orthonormality", "smeared_pulse", "int dz psi'^dagger psi -> 2 pi 2 g(p,p) delta(p'_- - p_-) in the pulse")
def _smeared_pulse(ctx):
    r = _smeared_pulse_result(ctx)
    return max(r.deviation, r.refined_deviation), ctx.tol("smeared"), r.status == "ok"


@check("orthonormality", "smeared_cross_spin", "smeared s' != s overlap vanishes")
def _smeared_cross(ctx):
    r = _smeared_pulse_result(ctx)
    return r.cross_smeared, ctx.tol("smeared"), r.status == "ok"


# -- completeness ------------------------------------------------------------------------

def _kernel_inputs(ctx, n):
    lo, hi = _eta_range(ctx.field)
    for _ in range(n):
        perp = ctx.rng.uniform(-2, 2, 2)
        pm = ctx.rng.uniform(0.05, 2.0)
        t = ctx.rng.uniform(lo, hi)
        z, zp = ctx.rng.uniform(-3, 3, 2)
        yield perp, pm, t, z, zp


@check("completeness", "kernel_closed_form", "(p0/p_-) U sum U'^dagger closed form and K0 + K1/p_- + K2/p_-^2")
def _kernel(ctx):
    return max(check_kernel_decomposition(perp, pm, ctx.field, t, z, zp).max_deviation
               for perp, pm, t, z, zp in _kernel_inputs(ctx, ctx.n_random)), ctx.tol("matrix")


@check("completeness", "k0_constant", "K0 = (gamma^0 + gamma^3) gamma^0 / 4")
def _k0(ctx):
    ref = (GAMMA[0] + GAMMA[3]) @ GAMMA[0] / 4.0
    dev = 0.0
    for perp, pm, t, z, zp in _kernel_inputs(ctx, 50):
        a2 = ctx.rng.uniform(-2, 2, 2)
        a2p = ctx.rng.uniform(-2, 2, 2)
        dev = max(dev, max_abs(kernel_coefficients(perp, 1.0, ctx.field.charge, a2, a2p)[0] - ref))
    return dev, ctx.tol("exact")


@check("completeness", "coefficient_recovery", "three-point fit in 1/p_- recovers K0, K1, K2")
def _recover(ctx):
    dev = 0.0
    for perp, pm, t, z, zp in _kernel_inputs(ctx, 100):
        a2 = ctx.rng.uniform(-2, 2, 2)
        a2p = ctx.rng.uniform(-2, 2, 2)
        e = ctx.field.charge
        fit = recover_coefficients(perp, 1.0, e, a2, a2p)
        ks = kernel_coefficients(perp, 1.0, e, a2, a2p)
        dev = max(dev, max(max_abs(f - k) / max(1.0, max_abs(k)) for f, k in zip(fit, ks)))
    return dev, ctx.tol("recovery")


@check("completeness", "parity_relation", "U^(+)_p sum U^(+)dagger = U^(-)_{-p} sum U^(-)dagger at p_+ -> -p_-")
def _parity(ctx):
    return max(check_parity_relation(perp, pm, ctx.field, t, z, zp).max_deviation
               for perp, pm, t, z, zp in _kernel_inputs(ctx, ctx.n_random)), ctx.tol("matrix")


@check("completeness", "antiparticle_projector", "sum_s U^(-) U^(-)dagger from spinors and from projector")
def _anti(ctx):
    e = ctx.field.charge
    dev = 0.0
    for p in random_momenta(ctx.rng, ctx.n_random):
        a2 = ctx.rng.uniform(-2, 2, 2)
        a2p = ctx.rng.uniform(-2, 2, 2)
        dev = max(dev, antiparticle_kernel_consistency(p, e, a2, a2p))
    return dev, ctx.tol("matrix")


def _assembly_reports(ctx):
    lo, hi = _eta_range(ctx.field)
    sigma = ctx.config["completeness.sigma"]
    out = []
    for _ in range(10):
        perp = ctx.rng.uniform(-1, 1, 2)
        t = ctx.rng.uniform(lo, hi)
        z = ctx.rng.uniform(-2, 2)
        out.append(appendix.completeness_delta_assembly(perp, ctx.field, t, z, sigma, cache=ctx.cache))
    return out


@check("completeness", "coincidence_jacobians", "|d kappa_1/dz'| = 1/2, |d kappa_2/dz'| = [(p_perp - eA)^2 + m^2]/2")
def _cjac(ctx):
    return max(max(r.jacobian1_error, r.jacobian2_error) for r in _assembly_reports(ctx)), ctx.tol("fd")


@check("completeness", "delta_weights", "smeared delta(kappa_1) = 2, delta(kappa_2) = 2 / [(p_perp - eA)^2 + m^2]")
def _cweights(ctx):
    return max(r.weight_error for r in _assembly_reports(ctx)), ctx.tol("smeared")


@check("completeness", "delta_assembly", "K2 (2/F) + K0 2 = I at z = z'")
def _cassembly(ctx):
    return max(max(r.matrix_error, r.clifford_error) for r in _assembly_reports(ctx)), ctx.tol("matrix")


# -- appendix ----------------------------------------------------------------------------

def _appendix(ctx, fn, *args, tol):
    r = fn(*args, sigma=ctx.config["appendix.sigma"])
    ctx.tables.setdefault("appendix", []).append(r.as_row())
    return max(r.deviation, r.refined_deviation), tol, r.status == "ok"


@check("appendix", "I0_kappa2_0", "I_0 = 2 pi delta(kappa_1), kappa_2 = 0")
def _i0a(ctx):
    return _appendix(ctx, appendix.smeared_I0, 0.0, tol=1e-3)


@check("appendix", "I0_kappa2_1", "I_0 = 2 pi delta(kappa_1), kappa_2 = 1")
def _i0b(ctx):
    return _appendix(ctx, appendix.smeared_I0, 1.0, tol=ctx.tol("appendix"))


@check("appendix", "I0_offcentre", "I_0 smeared about kappa_1 = 5 decays")
def _i0c(ctx):
    return _appendix(ctx, lambda k, sigma: appendix.smeared_I0(k, sigma, center=5.0), 0.0, tol=0.01)


@check("appendix", "I1_symmetric", "I_1 = 0, kappa_2 = 0 about kappa_1 = 0")
def _i1a(ctx):
    return _appendix(ctx, appendix.smeared_I1, 0.0, 0.0, tol=1e-3)


@check("appendix", "I1_kappa2_1", "I_1 = 0, kappa_2 = 1 about kappa_1 = 1")
def _i1b(ctx):
    return _appendix(ctx, appendix.smeared_I1, 1.0, 1.0, tol=ctx.tol("appendix"))


@check("appendix", "I1_boundary_half_residue", "I_1 at kappa_2 = 0, kappa_1 > 0: -i pi half residue")
def _i1c(ctx):
    sigma = ctx.config["appendix.sigma"]
    r = appendix.smeared_I1(10.0, 0.0, sigma)
    ctx.tables.setdefault("appendix", []).append(r.as_row())
    ref = appendix.reference_scale(sigma)
    want = appendix.half_residue_I1(10.0, sigma) / ref
    return abs(r.ratio - want), 1e-3, r.status == "ok"


@check("appendix", "I2_kappa1_0", "I_2 = 2 pi delta(kappa_2), kappa_1 = 0")
def _i2a(ctx):
    return _appendix(ctx, appendix.smeared_I2, 0.0, tol=1e-3)


@check("appendix", "I2_kappa1_1", "I_2 = 2 pi delta(kappa_2), kappa_1 = 1")
def _i2b(ctx):
    return _appendix(ctx, appendix.smeared_I2, 1.0, tol=ctx.tol("appendix"))


@check("appendix", "I2_offcentre", "I_2 smeared about kappa_2 = 5 decays")
def _i2c(ctx):
    return _appendix(ctx, lambda k, sigma: appendix.smeared_I2(k, sigma, center=5.0), 0.0, tol=0.01)


@check("appendix", "I2_duality", "u = 1/x maps I_2 onto an I_0-type integral")
def _i2d(ctx):
    sigma = ctx.config["appendix.sigma"]
    a = appendix.smeared_I2(1.0, sigma)
    b = appendix.smeared_I2(1.0, sigma, direct=True)
    # the two routes truncate the x-range differently (tails ~ 1/R), so compare
    # the Richardson-extrapolated values
    bars = a.estimated_error + b.estimated_error
    return abs(a.extrapolated - b.extrapolated), max(bars, 1e-12), a.status == "ok" and b.status == "ok"


@check("appendix", "refinement_stability", "halving a and sigma, doubling R stays within error bars")
def _stab(ctx):
    sigma = ctx.config["appendix.sigma"]
    worst = 0.0
    ok = True
    for r in (appendix.smeared_I0(1.0, sigma), appendix.smeared_I1(1.0, 1.0, sigma), appendix.smeared_I2(1.0, sigma)):
        worst = max(worst, abs(r.refined_ratio - r.ratio) - r.estimated_error)
        ok = ok and r.status == "ok"
    return max(worst, 0.0), ctx.tol("exact"), ok


# -- runner ------------------------------------------------------------------------------

def run(config: RunConfig, clock=time.perf_counter):
    """Run the selected suites; returns (sorted reports, csv tables)."""
    field = config.make_field()
    cache = PhaseIntegralCache(field)
    reports, tables = [], {}
    for suite in config.suites:
        for name, anchor, fn in REGISTRY[suite]:
            ctx = Context(config, field, _rng(config.seed, suite, name), cache, tables)
            t0 = clock()
            out = fn(ctx)
            wall = clock() - t0
            err, tol = out[0], out[1]
            converged = bool(out[2]) if len(out) > 2 else True
            reports.append(CheckReport(suite, name, anchor, float(err), float(tol), config.seed,
                                       round(wall, 6), converged))
    return sorted(reports, key=lambda r: r.key), tables


def backend() -> str:
    return _kernels.backend()
