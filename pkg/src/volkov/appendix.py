"""Smeared checks of I_n = int dx exp[-i(k1 x - k2/x)] / x^n, n = 0, 1, 2.

The distributional statements I_0 = 2 pi delta(k1), I_1 = 0 and
I_2 = 2 pi delta(k2) hold on the domain k1 k2 >= 0. The smeared variable is
integrated analytically against a normalised Gaussian phi_sigma, leaving one
oscillatory x-integral over [-R, -a] U [a, R].

By default the fixed coupling keeps the sign of the smeared variable
(``coupled=True``): smearing k1 across 0 at |k2| = K uses k2 = sign(k1) K,
so every point of the smearing support lies in the domain. ``coupled=False``
holds k2 fixed, which leaves the domain for k1 < 0.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from .quadrature import gauss_legendre

SQRT2 = np.sqrt(2.0)


class InconclusiveError(RuntimeError):
    pass


def gaussian(x, sigma):
    return np.exp(-0.5 * (x / sigma) ** 2) / (sigma * np.sqrt(2.0 * np.pi))


def reference_scale(sigma) -> float:
    """2 pi phi_sigma(0)."""
    return 2.0 * np.pi * gaussian(0.0, sigma)


def gauss_ft(xi, center, sigma):
    """int dk phi_sigma(k - center) exp(-i k xi)."""
    return np.exp(-1j * center * xi - 0.5 * (sigma * xi) ** 2)


def half_gauss_ft(xi, center, sigma):
    """int_0^inf dk phi_sigma(k - center) exp(-i k xi), overflow-free."""
    xi = np.asarray(xi, dtype=float)
    c = center / (sigma * SQRT2)
    s = sigma * xi / SQRT2
    if c <= 0:
        return 0.5 * np.exp(-c * c) * special.erfcx(-c + 1j * s)
    return gauss_ft(xi, center, sigma) - 0.5 * np.exp(-c * c) * special.erfcx(c - 1j * s)


@dataclass
class ConvergenceReport:
    name: str
    n: int
    kappa: float
    center: float
    sigma: float
    value: complex
    refined_value: complex
    expected: float
    reference: float
    ratio: complex
    refined_ratio: complex
    extrapolated: complex
    estimated_error: float
    quadrature_error: float
    deviation: float
    refined_deviation: float
    status: str

    def passed(self, tol) -> bool:
        return self.status == "ok" and self.deviation <= tol and self.refined_deviation <= tol

    def as_row(self):
        return {
            "n": self.n, "kappa1": self.center if self.n != 2 else self.kappa,
            "kappa2": self.kappa if self.n != 2 else self.center, "sigma": self.sigma,
            "value": abs(self.value), "target": self.expected, "error": self.deviation,
        }

    def as_dict(self):
        d = asdict(self)
        for k in ("value", "refined_value", "ratio", "refined_ratio", "extrapolated"):
            d[k] = [d[k].real, d[k].imag]
        return d


def panel_edges(a, R, freq, max_width):
    """March from a to R; each panel spans at most one local oscillation period.

    ``freq(x)`` bounds the angular frequency on [x, R); it must be
    non-increasing in x so the left end is the worst case.
    """
    edges = [a]
    x = a
    while x < R:
        step = min(2.0 * np.pi / max(freq(x), 1e-300), 0.5 * x, max_width)
        x = min(x + step, R)
        edges.append(x)
    return np.asarray(edges)


def oscillatory_integral(f, a, R, freq, max_width, nodes=16):
    """int_a^R f(x) dx on one-period panels; returns (value, error estimate)."""
    edges = panel_edges(a, R, freq, max_width)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    out = []
    for n in (nodes, nodes + 8):
        x, w = gauss_legendre(n)
        pts = 0.5 * (lo + hi) + half * x
        out.append(np.sum(f(pts) * (half * w)))
    if not np.all(np.isfinite(out)):
        raise InconclusiveError("non-finite oscillatory integrand")
    return out[1], float(abs(out[1] - out[0]))


def _i0_type(kappa, center, sigma, n, a, R, coupled):
    """int dk1 phi(k1 - center) int dx e^{-i k1 x} e^{i k2(k1)/x} / x^n, n in {0, 1}."""
    q = abs(kappa)

    def one_side(x):
        g = gauss_ft(x, center, sigma)
        if coupled:
            val = g * np.exp(-1j * q / x) + 2j * half_gauss_ft(x, center, sigma) * np.sin(q / x)
        else:
            val = g * np.exp(1j * kappa / x)
        return val / x**n

    def f(x):
        return one_side(x) + one_side(-x)

    freq = lambda x: q / (x * x) + abs(center) + sigma + 1.0 / x
    return oscillatory_integral(f, a, R, freq, 0.5 / sigma)


def _i2_direct(kappa, center, sigma, a, R, coupled):
    """n = 2 smeared over k2, integrated in x without the u = 1/x map."""
    q = abs(kappa)

    def one_side(x):
        xi = -1.0 / x
        g = gauss_ft(xi, center, sigma)
        if coupled:
            val = g * np.exp(1j * q * x) - 2j * half_gauss_ft(xi, center, sigma) * np.sin(q * x)
        else:
            val = g * np.exp(-1j * kappa * x)
        return val / (x * x)

    def f(x):
        return one_side(x) + one_side(-x)

    freq = lambda x: abs(center) / (x * x) + q + 1.0 / x
    return oscillatory_integral(f, a, R, freq, 0.5 / max(q, sigma, 1e-3))


def _report(name, n, kappa, center, sigma, runs, expected_fn, tol_inconclusive):
    (v1, e1, s1), (v2, e2, s2) = runs
    ref1, ref2 = reference_scale(s1), reference_scale(s2)
    r1, r2 = v1 / ref1, v2 / ref2
    x1, x2 = expected_fn(s1) / ref1, expected_fn(s2) / ref2
    quad = max(e1 / ref1, e2 / ref2)
    est = abs(r2 - r1) + quad
    status = "ok" if np.isfinite(est) and quad <= tol_inconclusive else "inconclusive"
    return ConvergenceReport(
        name=name, n=n, kappa=float(kappa), center=float(center), sigma=float(sigma),
        value=complex(v1), refined_value=complex(v2), expected=float(expected_fn(s1)),
        reference=float(ref1), ratio=complex(r1), refined_ratio=complex(r2),
        extrapolated=complex(2.0 * r2 - r1), estimated_error=float(est), quadrature_error=float(quad),
        deviation=float(abs(r1 - x1)), refined_deviation=float(abs(r2 - x2)), status=status,
    )


def _defaults(sigma, a, R):
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return (1e-4 if a is None else a), (50.0 / sigma if R is None else R)


def smeared_I0(kappa2, sigma=0.05, center=0.0, a=None, R=None, coupled=True, tol_inconclusive=1e-3):
    """k1-smeared I_0 against 2 pi phi_sigma(center)."""
    a, R = _defaults(sigma, a, R)
    runs = []
    for aa, rr, ss in ((a, R, sigma), (a / 2, 2 * R, sigma / 2)):
        v, e = _i0_type(kappa2, center, ss, 0, aa, rr, coupled)
        runs.append((v, e, ss))
    return _report("I0", 0, kappa2, center, sigma, runs,
                   lambda s: 2.0 * np.pi * gaussian(center, s), tol_inconclusive)


def smeared_I1(center, kappa2, sigma=0.05, a=None, R=None, coupled=True, tol_inconclusive=1e-3):
    """k1-smeared I_1 (symmetric excision) against 0."""
    a, R = _defaults(sigma, a, R)
    runs = []
    for aa, rr, ss in ((a, R, sigma), (a / 2, 2 * R, sigma / 2)):
        v, e = _i0_type(kappa2, center, ss, 1, aa, rr, coupled)
        runs.append((v, e, ss))
    return _report("I1", 1, kappa2, center, sigma, runs, lambda s: 0.0, tol_inconclusive)


def smeared_I2(kappa1, sigma=0.05, center=0.0, a=None, R=None, coupled=True, direct=False,
               tol_inconclusive=1e-3):
    """k2-smeared I_2 against 2 pi phi_sigma(center).

    With u = 1/x the n = 2 integral over x becomes an n = 0 integral over u
    with the roles of k1 and k2 exchanged and the smearing centre reflected,
    so the I_0 machinery is reused. ``direct=True`` integrates in x instead.
    """
    a, R = _defaults(sigma, a, R)
    runs = []
    for aa, rr, ss in ((a, R, sigma), (a / 2, 2 * R, sigma / 2)):
        if direct:
            v, e = _i2_direct(kappa1, center, ss, aa, rr, coupled)
        else:
            v, e = _i0_type(kappa1 if coupled else -kappa1, -center, ss, 0, aa, rr, coupled)
        runs.append((v, e, ss))
    return _report("I2", 2, kappa1, center, sigma, runs,
                   lambda s: 2.0 * np.pi * gaussian(center, s), tol_inconclusive)


def half_residue_I1(center, sigma):
    """Smeared principal value of int dx e^{-i k1 x}/x at k2 = 0: -i pi erf(c / sigma sqrt 2)."""
    return -1j * np.pi * special.erf(center / (sigma * SQRT2))


def excision_bound(a, fmax):
    """|int_{|x|<a} f| <= 2 a max|f|."""
    return 2.0 * a * fmax


# -- completeness assembly ---------------------------------------------------------

@dataclass
class AssemblyReport:
    bracket: float
    jacobian1_error: float
    jacobian2_error: float
    weight1: float
    weight2: float
    weight_error: float
    refined_weight_error: float
    matrix_error: float
    clifford_error: float

    def as_dict(self):
        return asdict(self)


def _kappa2_factory(p_perp, field, t, z, m, cache):
    from .field import PhaseIntegralCache

    cache = cache if cache is not None else PhaseIntegralCache(field)
    e = field.charge
    px, py = p_perp
    c = px * px + py * py + m * m

    def big_x(eta):
        acc = cache(np.asarray(eta, dtype=float))
        return c * eta - 2.0 * e * (px * acc[..., 0] + py * acc[..., 1]) + e * e * acc[..., 2]

    x0 = big_x(np.array(t - z))

    def kappa2(zp):
        # int_{t-z}^{t-z'} bracket / 2
        return 0.5 * (big_x(t - np.asarray(zp, dtype=float)) - x0)

    return kappa2


def _delta_weight(fn, z, sigma, slope, nodes=64):
    """int dz' phi_sigma(fn(z')) over a window holding the Gaussian support."""
    half = 10.0 * sigma / slope
    edges = np.linspace(z - half, z + half, 41)
    x, w = gauss_legendre(nodes)
    lo, hi = edges[:-1, None], edges[1:, None]
    pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
    return float(np.sum(gaussian(fn(pts), sigma) * 0.5 * (hi - lo) * w))


def completeness_delta_assembly(p_perp, field, t, z, sigma=1e-3, m=1.0, h=1e-5, cache=None) -> AssemblyReport:
    """Chain-rule constants and matrix assembly of the completeness delta.

    k1 = (z - z')/2 and k2 = int_{t-z}^{t-z'} F/2 with F = (p_perp - e A)^2 + m^2.
    delta(k1) and delta(k2) become 2 delta(z - z') and 2 delta(z - z')/F; the
    weights are also measured by smearing in k at width sigma.
    """
    from .clifford import GAMMA, IDENTITY, max_abs
    from .identities import kernel_coefficients

    e = field.charge
    p_perp = np.asarray(p_perp, dtype=float)
    ax, ay = field.potential(np.array(t - z))
    a2 = np.array([float(ax), float(ay)])
    bracket = float((p_perp[0] - e * a2[0]) ** 2 + (p_perp[1] - e * a2[1]) ** 2 + m * m)

    kappa1 = lambda zp: 0.5 * (z - np.asarray(zp, dtype=float))
    kappa2 = _kappa2_factory(p_perp, field, t, z, m, cache)
    j1 = abs((kappa1(z + h) - kappa1(z - h)) / (2.0 * h))
    j2 = abs((kappa2(z + h) - kappa2(z - h)) / (2.0 * h))

    w1 = _delta_weight(kappa1, z, sigma, 0.5)
    w2 = _delta_weight(kappa2, z, sigma, bracket / 2.0)
    w2r = _delta_weight(kappa2, z, sigma / 2.0, bracket / 2.0)
    werr = max(abs(w1 - 2.0) / 2.0, abs(w2 * bracket / 2.0 - 1.0))

    k0, _, k2 = kernel_coefficients(p_perp, m, e, a2, a2)
    assembled = k2 * (2.0 / bracket) + k0 * 2.0
    g0, g3 = GAMMA[0], GAMMA[3]
    cliff = 0.5 * ((g0 - g3) + (g0 + g3)) @ g0
    return AssemblyReport(
        bracket=bracket,
        jacobian1_error=float(abs(j1 - 0.5)),
        jacobian2_error=float(abs(j2 - bracket / 2.0)),
        weight1=w1, weight2=w2, weight_error=float(werr),
        refined_weight_error=float(abs(w2r * bracket / 2.0 - 1.0)),
        matrix_error=max_abs(assembled - IDENTITY),
        clifford_error=max_abs(cliff - IDENTITY),
    )
