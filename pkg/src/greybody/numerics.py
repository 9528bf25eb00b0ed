"""Small numerical helpers shared across modules."""

from __future__ import annotations

import numpy as np


def sech2(z):
    """sech^2(z) as 4 e^{-2|z|} / (1 + e^{-2|z|})^2; no overflow for any finite z."""
    t = np.exp(-2.0 * np.abs(np.asarray(z, dtype=float)))
    out = 4.0 * t / (1.0 + t) ** 2
    return float(out) if out.ndim == 0 else out


def central_difference(func, x, h):
    return (func(x + h) - func(x - h)) / (2.0 * h)


def richardson_derivative(func, x, h):
    """Derivative from two central differences (h, h/2) combined to O(h^4).

    Returns (estimate, error_estimate) where the error estimate is the
    difference between the extrapolated and the finer plain difference.
    """
    coarse = central_difference(func, x, h)
    fine = central_difference(func, x, h / 2.0)
    best = fine + (fine - coarse) / 3.0
    return best, abs(best - fine)


def log_grid(lo, hi, n):
    return np.geomspace(lo, hi, n)
