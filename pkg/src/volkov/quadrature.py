"""Composite and adaptive Gauss-Legendre rules on finite intervals."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(edges, n: int):
    """Nodes and weights of an n-point rule on every panel [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x
    weights = half * w
    return nodes.ravel(), weights.ravel()


def fixed_gl(f, a, b, n: int):
    """n-point rule on [a, b]; f maps an array of nodes to values (..., n)."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return np.asarray(f(0.5 * (a + b) + half * x)) @ w * half


def adaptive_gl(f, a, b, tol, order=8, max_depth=40):
    """Adaptive bisection comparing order and 2*order rules.

    Returns (integral, accepted_edges). ``tol`` is an absolute bound for the
    whole interval, split between children proportionally to their width.
    f may return a stacked array (k, n) to integrate k integrands at once.
    """
    if b == a:
        return np.zeros(np.shape(f(np.array([a])))[:-1]), [a, b]
    stack = [(a, b, 0)]
    total = 0.0
    edges = [a]
    width = b - a
    done = []
    while stack:
        lo, hi, depth = stack.pop()
        coarse = fixed_gl(f, lo, hi, order)
        fine = fixed_gl(f, lo, hi, 2 * order)
        err = np.max(np.abs(fine - coarse))
        if not np.all(np.isfinite(fine)):
            raise QuadratureError(f"non-finite integrand on [{lo}, {hi}]")
        if err <= tol * abs(hi - lo) / abs(width) or depth >= max_depth:
            if depth >= max_depth and err > tol * abs(hi - lo) / abs(width):
                raise QuadratureError(f"adaptive rule failed to converge on [{lo}, {hi}]")
            done.append((lo, hi, fine))
        else:
            mid = 0.5 * (lo + hi)
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
    done.sort(key=lambda item: item[0] if width > 0 else -item[0])
    for lo, hi, val in done:
        total = total + val
        edges.append(hi)
    return total, edges
