"""Transverse plane-wave vector potentials A^mu(eta) = (0, A_x, A_y, 0), eta = t - z.

Sign conventions, fixed here and nowhere else:

* ``charge`` is the particle charge e (default -1, an electron).
* ``a0`` is |e| A_max in units of the mass (m = 1), so the stored potential
  amplitude is a0 / |e|.
* ``A2`` always means the spatial square A_x^2 + A_y^2. The Minkowski square
  is A.A = -A2 because A^0 = A^z = 0.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.interpolate import CubicSpline

from .clifford import field_strength_contraction, slash
from .lorentz import K_NULL
from .quadrature import QuadratureError, adaptive_gl, gauss_legendre

SHAPES = ("zero", "plateau", "sin2-linear", "sin2-circular", "tabulated")


class FieldError(ValueError):
    pass


def load_table(path):
    """Read a two or three column table (eta, A_x[, A_y]); '#' starts a comment."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            cols = line.replace(",", " ").split()
            if len(cols) not in (2, 3):
                raise FieldError(f"{path}:{lineno}: expected 2 or 3 columns, got {len(cols)}")
            try:
                vals = [float(c) for c in cols]
            except ValueError:
                raise FieldError(f"{path}:{lineno}: non-numeric entry") from None
            rows.append(vals + [0.0] * (3 - len(vals)))
    if len(rows) < 4:
        raise FieldError(f"{path}: need at least 4 rows")
    data = np.array(rows)
    if np.any(np.diff(data[:, 0]) <= 0):
        raise FieldError(f"{path}: eta column must be strictly increasing")
    return data[:, 0], data[:, 1], data[:, 2]


@dataclass(frozen=True)
class PlaneWaveField:
    shape: str = "zero"
    a0: float = 0.0
    omega: float = 1.0
    cycles: float = 4.0
    charge: float = -1.0
    table: tuple | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise FieldError(f"unknown field shape {self.shape!r}; expected one of {SHAPES}")
        if self.charge == 0:
            raise FieldError("charge must be nonzero")
        if self.shape != "zero" and not self.omega > 0:
            raise FieldError("omega must be positive")
        if self.shape in ("plateau", "sin2-linear", "sin2-circular") and not self.cycles > 0:
            raise FieldError("cycles must be positive")
        if self.shape == "tabulated":
            if self.table is None:
                raise FieldError("tabulated shape needs a table")
            eta, ax, ay = (np.asarray(c, dtype=float) for c in self.table)
            # centred differences on the table grid, then interpolated
            dax = np.gradient(ax, eta)
            day = np.gradient(ay, eta)
            object.__setattr__(self, "_splines", (
                CubicSpline(eta, ax), CubicSpline(eta, ay),
                CubicSpline(eta, dax), CubicSpline(eta, day),
            ))

    @classmethod
    def from_table(cls, path, charge=-1.0):
        return cls(shape="tabulated", charge=charge, table=load_table(path))

    @property
    def amplitude(self) -> float:
        return self.a0 / abs(self.charge)

    @property
    def support(self):
        """(start, end) of the region where A may be nonzero, or None."""
        w = self.omega
        if self.shape == "zero":
            return None
        if self.shape in ("sin2-linear", "sin2-circular"):
            return 0.0, 2.0 * np.pi * self.cycles / w
        if self.shape == "plateau":
            return 0.0, 2.0 * np.pi / w + 2.0 * np.pi * self.cycles / w
        eta = self.table[0]
        return float(eta[0]), float(eta[-1])

    @property
    def breakpoints(self) -> np.ndarray:
        """Phases where A loses smoothness; quadrature panels never straddle them."""
        if self.shape == "zero":
            return np.array([])
        if self.shape == "plateau":
            ramp, flat, end = self._plateau_parts()
            return np.array([0.0, ramp, ramp + flat, end])
        if self.shape == "tabulated":
            return np.asarray(self.table[0], dtype=float)
        return np.array(self.support)

    def _plateau_parts(self):
        ramp = np.pi / self.omega
        flat = 2.0 * np.pi * self.cycles / self.omega
        return ramp, flat, 2.0 * ramp + flat

    def _check_table_range(self, eta):
        lo, hi = self.support
        if np.any((eta < lo) | (eta > hi)):
            raise FieldError(f"eta outside tabulated range [{lo}, {hi}]")

    def potential(self, eta):
        """Transverse components (A_x, A_y) at phase eta."""
        eta = np.asarray(eta, dtype=float)
        zero = np.zeros_like(eta)
        if self.shape == "zero":
            return zero, zero.copy()
        if self.shape == "tabulated":
            self._check_table_range(eta)
            sx, sy = self._splines[:2]
            return sx(eta), sy(eta)
        amp, w = self.amplitude, self.omega
        if self.shape == "plateau":
            ramp, flat, end = self._plateau_parts()
            ax = np.where(eta < ramp, np.sin(0.5 * w * eta) ** 2,
                          np.where(eta < ramp + flat, 1.0, np.sin(0.5 * w * (end - eta)) ** 2))
            ax = np.where((eta <= 0) | (eta >= end), 0.0, ax)
            return amp * ax, zero
        length = self.support[1]
        inside = (eta > 0) & (eta < length)
        env = np.where(inside, np.sin(np.pi * eta / length) ** 2, 0.0)
        ax = amp * env * np.sin(w * eta)
        if self.shape == "sin2-linear":
            return ax, zero
        return ax, amp * env * np.cos(w * eta)

    def derivative(self, eta):
        """d(A_x, A_y)/d eta."""
        eta = np.asarray(eta, dtype=float)
        zero = np.zeros_like(eta)
        if self.shape == "zero":
            return zero, zero.copy()
        if self.shape == "tabulated":
            self._check_table_range(eta)
            dx, dy = self._splines[2:]
            return dx(eta), dy(eta)
        amp, w = self.amplitude, self.omega
        if self.shape == "plateau":
            ramp, flat, end = self._plateau_parts()
            d = np.where(eta < ramp, 0.5 * w * np.sin(w * eta),
                         np.where(eta < ramp + flat, 0.0, -0.5 * w * np.sin(w * (end - eta))))
            d = np.where((eta <= 0) | (eta >= end), 0.0, d)
            return amp * d, zero
        length = self.support[1]
        inside = (eta > 0) & (eta < length)
        env = np.where(inside, np.sin(np.pi * eta / length) ** 2, 0.0)
        denv = np.where(inside, (np.pi / length) * np.sin(2.0 * np.pi * eta / length), 0.0)
        dx = amp * (denv * np.sin(w * eta) + env * w * np.cos(w * eta))
        if self.shape == "sin2-linear":
            return dx, zero
        return dx, amp * (denv * np.cos(w * eta) - env * w * np.sin(w * eta))

    def four_potential(self, eta) -> np.ndarray:
        ax, ay = self.potential(eta)
        z = np.zeros_like(ax)
        return np.stack([z, ax, ay, z], axis=-1)

    def four_derivative(self, eta) -> np.ndarray:
        dx, dy = self.derivative(eta)
        z = np.zeros_like(dx)
        return np.stack([z, dx, dy, z], axis=-1)

    def integrands(self, eta):
        """Stacked (A_x, A_y, A2) for the phase accumulators."""
        ax, ay = self.potential(eta)
        return np.stack([ax, ay, ax * ax + ay * ay])


def spin_coupling_matrix(field: PlaneWaveField, eta):
    """Return (kslash Adot-slash, (1/2) gamma gamma F) at a single phase."""
    adot = field.four_derivative(float(eta))
    return slash(K_NULL) @ slash(adot), field_strength_contraction(K_NULL, adot)


class PhaseIntegralCache:
    """Running integrals of A_x, A_y and A2 from eta = 0.

    Adaptive Gauss-Legendre panels of base width ``panel`` are accepted
    when the order-n and order-2n rules agree to ``tol`` per unit eta; the
    accumulated values are stored at panel edges and the grid grows lazily
    in either direction. Panels are also cut at the field's breakpoints so
    no rule straddles a kink. Extension holds a lock, so many readers and
    one writer may share an instance. With ``cached=False`` every query is
    integrated from scratch on the same cuts, which is fully deterministic
    under any parallel schedule.
    """

    def __init__(self, field: PlaneWaveField, tol=1e-12, order=8, panel=1.0, cached=True):
        self.field = field
        self.tol = tol
        self.order = order
        self.panel = panel
        self.cached = cached
        self._lock = threading.Lock()
        self._breakpoints = np.sort(np.asarray(field.breakpoints, dtype=float))
        self._edges = np.array([0.0])
        self._values = np.zeros((1, 3))

    def _integrate(self, a, b):
        if a == b:
            return np.zeros(3), [a, b]
        return adaptive_gl(self.field.integrands, a, b, self.tol * abs(b - a), self.order)

    def _cuts(self, a, b):
        """Panel grid and field breakpoints strictly between a and b, ascending."""
        lo, hi = min(a, b), max(a, b)
        grid = np.arange(np.ceil(lo / self.panel), np.floor(hi / self.panel) + 1) * self.panel
        bp = self._breakpoints[np.searchsorted(self._breakpoints, lo, side="right"):
                              np.searchsorted(self._breakpoints, hi, side="left")]
        inner = np.union1d(grid, bp)
        return inner[(inner > lo) & (inner < hi)]

    def _pieces(self, a, b):
        """Edges and integrals of the cut pieces of [a, b], a < b.

        All pieces are integrated at once with both rules; only pieces where
        the rules disagree go through the adaptive bisection.
        """
        pts = np.concatenate([[a], self._cuts(a, b), [b]])
        lo, hi = pts[:-1, None], pts[1:, None]
        half = 0.5 * (hi - lo)
        est = []
        for n in (self.order, 2 * self.order):
            x, w = gauss_legendre(n)
            est.append((self.field.integrands(0.5 * (lo + hi) + half * x) @ w).T * half)
        coarse, fine = est
        if not np.all(np.isfinite(fine)):
            raise QuadratureError(f"non-finite integrand on [{a}, {b}]")
        bad = np.max(np.abs(fine - coarse), axis=1) > self.tol * (pts[1:] - pts[:-1])
        if not bad.any():
            return pts, fine
        edges, vals = [pts[:1]], []
        for i in range(len(pts) - 1):
            if not bad[i]:
                edges.append(pts[i + 1:i + 2])
                vals.append(fine[i:i + 1])
                continue
            _, sub = self._integrate(pts[i], pts[i + 1])
            edges.append(np.asarray(sub[1:]))
            vals.append(np.diff(np.vstack([np.zeros(3), self._subpanel_values(sub, np.zeros(3))]), axis=0))
        return np.concatenate(edges), np.vstack(vals)

    def _from_scratch(self, eta):
        if eta == 0:
            return np.zeros(3)
        _, vals = self._pieces(min(0.0, eta), max(0.0, eta))
        return vals.sum(axis=0) if eta > 0 else -vals[::-1].sum(axis=0)

    def _clip(self, eta):
        sup = self.field.support
        if sup is None:
            return np.zeros_like(eta)
        lo, hi = min(sup[0], 0.0), max(sup[1], 0.0)
        if self.field.shape == "tabulated":
            return eta
        return np.clip(eta, lo, hi)

    def _extend(self, lo, hi):
        with self._lock:
            edges, values = self._edges, self._values
            if hi > edges[-1]:
                pts, vals = self._pieces(edges[-1], hi)
                edges = np.concatenate([edges, pts[1:]])
                values = np.vstack([values, values[-1] + np.cumsum(vals, axis=0)])
            if lo < edges[0]:
                pts, vals = self._pieces(lo, edges[0])
                back = values[0] - np.cumsum(vals[::-1], axis=0)[::-1]
                edges = np.concatenate([pts[:-1], edges])
                values = np.vstack([back, values])
            if not np.all(np.isfinite(values)):
                raise QuadratureError("non-finite phase accumulator")
            self._edges, self._values = edges, values

    def _subpanel_values(self, sub, start):
        """Accumulated values at sub[1:], starting from ``start`` at sub[0]."""
        out = []
        acc = np.array(start, dtype=float)
        x, w = gauss_legendre(2 * self.order)
        for a, b in zip(sub[:-1], sub[1:]):
            half = 0.5 * (b - a)
            acc = acc + self.field.integrands(0.5 * (a + b) + half * x) @ w * half
            out.append(acc)
        return out

    def __call__(self, eta) -> np.ndarray:
        """Accumulators at eta, shape eta.shape + (3,)."""
        eta = np.asarray(eta, dtype=float)
        flat = self._clip(eta.ravel())
        if flat.size == 0:
            return np.zeros(eta.shape + (3,))
        if not self.cached:
            out = np.array([self._from_scratch(float(e)) for e in flat])
            return out.reshape(eta.shape + (3,))
        lo, hi = float(flat.min()), float(flat.max())
        if lo < self._edges[0] or hi > self._edges[-1]:
            self._extend(lo, hi)
        edges, values = self._edges, self._values
        idx = np.clip(np.searchsorted(edges, flat, side="right") - 1, 0, len(edges) - 2)
        start = edges[idx]
        x, w = gauss_legendre(2 * self.order)
        half = 0.5 * (flat - start)
        nodes = (start + half)[:, None] + half[:, None] * x
        part = (self.field.integrands(nodes) @ w) * half
        out = values[idx] + part.T
        if not np.all(np.isfinite(out)):
            raise QuadratureError("non-finite phase accumulator")
        return out.reshape(eta.shape + (3,))


def phase_integrals(field, eta, p, branch=1, cache=None):
    """int_0^eta [-+ 2 e p_perp.A + e^2 A2] / (2 p_minus) d eta'."""
    cache = cache if cache is not None else PhaseIntegralCache(field)
    acc = cache(eta)
    e = field.charge
    pdotA = p.px * acc[..., 0] + p.py * acc[..., 1]
    return (-branch * 2.0 * e * pdotA + e * e * acc[..., 2]) / (2.0 * p.p_minus)
