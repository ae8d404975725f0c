"""
Vectorised adaptive Gauss-Legendre quadrature.

Each panel is integrated once whole and once as two halves; the difference
is the panel error estimate and the halved value is kept. Panels that miss
their share of the tolerance are bisected, reusing the halves already
computed. All panels of one refinement level go through the integrand in a
single call, so the integrand must accept a 1-D array of abscissae and
return an array of shape ``(n_components, n)`` or ``(n,)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class NonConvergence(RuntimeError):
    """Bisection depth exhausted; carries the partial result."""

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    n_eval: int
    panel_edges: np.ndarray
    panel_values: np.ndarray

    @property
    def n_panels(self) -> int:
        return self.panel_edges.shape[0]


@lru_cache(maxsize=None)
def _rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_sums(f, a, b, order):
    x, w = _rule(order)
    half = 0.5 * (b - a)
    pts = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(pts.ravel()))
    squeeze = vals.ndim == 1
    vals = np.atleast_2d(vals).reshape(vals.shape[0] if not squeeze else 1, a.size, order)
    return (vals @ w) * half[None, :], squeeze


def _fsum_rows(parts):
    return np.array([math.fsum(row) for row in parts])


def integrate(f, breakpoints, rel_tol=1e-6, abs_tol_floor=1e-30, max_depth=60, order=12, control=None) -> QuadResult:
    """
    Integrate ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    ``breakpoints`` are forced panel edges (duplicates are dropped).
    ``abs_tol_floor`` is a fraction of the largest panel contribution below
    which errors are ignored. ``control`` lists the output components that
    steer refinement (default: all); the others are integrated along.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if edges.size < 2:
        raise ValueError("need at least two distinct breakpoints")
    a, b = edges[:-1], edges[1:]
    whole, squeeze = _panel_sums(f, a, b, order)
    n_eval = a.size * order
    length = edges[-1] - edges[0]
    sel = slice(None) if control is None else list(control)

    done_a, done_b, done_val, done_err = [], [], [], []
    depth = 0
    while True:
        mid = 0.5 * (a + b)
        halves, _ = _panel_sums(f, np.concatenate([a, mid]), np.concatenate([mid, b]), order)
        n_eval += 2 * a.size * order
        left, right = halves[:, : a.size], halves[:, a.size:]
        fine = left + right
        err = np.abs(fine - whole)

        all_val = np.concatenate([*done_val, fine], axis=1) if done_val else fine
        all_err = np.concatenate([*done_err, err], axis=1) if done_err else err
        total = _fsum_rows(all_val)
        floor = abs_tol_floor * np.max(np.abs(all_val), axis=1)
        tol = np.maximum(rel_tol * np.abs(total), floor)
        total_err = _fsum_rows(all_err)
        share = tol[:, None] * ((b - a) / length)[None, :]
        ok = np.all((err <= share)[sel], axis=0)
        if np.all((total_err <= tol)[sel]) or ok.all():
            all_a = np.concatenate([*done_a, a]) if done_a else a
            all_b = np.concatenate([*done_b, b]) if done_b else b
            order_idx = np.argsort(all_a, kind="stable")
            value = _fsum_rows(all_val[:, order_idx])
            error = total_err
            edges_out = np.column_stack([all_a[order_idx], all_b[order_idx]])
            panel_values = all_val[:, order_idx]
            break

        depth += 1
        if depth > max_depth:
            all_a = np.concatenate([*done_a, a]) if done_a else a
            value = _fsum_rows(all_val[:, np.argsort(all_a, kind="stable")])
            value = value[0] if squeeze else value
            error = total_err[0] if squeeze else total_err
            raise NonConvergence(f"no convergence after {max_depth} bisection levels", value, error)

        if ok.any():
            done_a.append(a[ok])
            done_b.append(b[ok])
            done_val.append(fine[:, ok])
            done_err.append(err[:, ok])
        split = ~ok
        a, mid_s, b = a[split], mid[split], b[split]
        whole = np.concatenate([left[:, split], right[:, split]], axis=1)
        a, b = np.concatenate([a, mid_s]), np.concatenate([mid_s, b])

    if squeeze:
        return QuadResult(value[0], error[0], n_eval, edges_out, panel_values[0])
    return QuadResult(value, error, n_eval, edges_out, panel_values)
