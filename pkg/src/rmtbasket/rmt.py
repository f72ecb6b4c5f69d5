"""Wishart/Marchenko-Pastur reference for correlation spectra.

For N uncorrelated unit-variance series of length T (Q = T/N), the bulk of
the correlation-matrix spectrum fills

    lambda_pm = sigma_w^2 (1 + 1/Q +- 2 sqrt(1/Q))

with density

    rho(x) = Q / (2 pi sigma_w^2) * sqrt((lambda_plus - x)(x - lambda_minus)) / x

on the open interval (lambda_minus, lambda_plus) and zero elsewhere.
Eigenvalues escaping the bulk mark genuine, non-random structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericError
from .spectra import SpectralDecomposition

SIGMA_FIXED_UNIT = "fixed-unit"
SIGMA_TRACE_COMPENSATED = "trace-compensated"
SIGMA_MODES = (SIGMA_FIXED_UNIT, SIGMA_TRACE_COMPENSATED)

# floor for the trace-compensated variance estimate
_SIGMA_SQ_FLOOR = 1e-6


@dataclass(frozen=True)
class MPReference:
    """Marchenko-Pastur parameters and bulk edges for one (Q, sigma_w)."""

    q: float
    sigma_w: float
    lambda_minus: float
    lambda_plus: float

    def contains(self, value: float) -> bool:
        """Closed-interval bulk membership."""
        return self.lambda_minus <= value <= self.lambda_plus


def mp_bounds(n_obs: int, n_series: int, sigma_w: float = 1.0) -> MPReference:
    """Bulk edges for ``Q = n_obs / n_series`` at scale ``sigma_w``."""
    if n_obs < 1 or n_series < 1:
        raise InputError(f"need positive dimensions, got T={n_obs}, N={n_series}")
    if sigma_w <= 0.0:
        raise InputError(f"sigma_w must be positive, got {sigma_w}")
    q = n_obs / n_series
    s2 = sigma_w * sigma_w
    root = math.sqrt(1.0 / q)
    lo = s2 * (1.0 + 1.0 / q - 2.0 * root)
    hi = s2 * (1.0 + 1.0 / q + 2.0 * root)
    return MPReference(q=q, sigma_w=sigma_w, lambda_minus=max(0.0, lo), lambda_plus=hi)


def mp_density(ref: MPReference, values: float | np.ndarray) -> float | np.ndarray:
    """Marchenko-Pastur density, zero outside the open bulk interval.

    Total function: accepts any real value (scalar or array) and never raises.
    """
    arr = np.asarray(values, dtype=float)
    out = np.zeros_like(arr)
    inside = (arr > ref.lambda_minus) & (arr < ref.lambda_plus)
    if inside.any():
        x = arr[inside]
        radicand = (ref.lambda_plus - x) * (x - ref.lambda_minus)
        out[inside] = (
            ref.q / (2.0 * np.pi * ref.sigma_w**2) * np.sqrt(radicand) / x
        )
    if np.isscalar(values):
        return float(out)
    return out


@dataclass(frozen=True)
class BulkOccupancy:
    """Partition of a spectrum by the closed bulk interval."""

    below: int
    inside: int
    above: int

    @property
    def total(self) -> int:
        return self.below + self.inside + self.above

    @property
    def inside_fraction(self) -> float:
        return self.inside / self.total


def bulk_occupancy(dec: SpectralDecomposition, ref: MPReference) -> BulkOccupancy:
    """Count eigenvalues below, inside (closed interval), and above the bulk."""
    w = dec.eigenvalues
    below = int((w < ref.lambda_minus).sum())
    above = int((w > ref.lambda_plus).sum())
    return BulkOccupancy(below=below, inside=w.size - below - above, above=above)


def comparability_scale(lambda_max: float, from_n: int, to_n: int) -> float:
    """Rescale a largest eigenvalue from an N=from_n matrix so it is directly
    comparable with an N=to_n ladder (trace-per-series normalization)."""
    if from_n < 1 or to_n < 1:
        raise InputError(f"dimensions must be >= 1, got {from_n}, {to_n}")
    return lambda_max * to_n / from_n


def fit_sigma(dec: SpectralDecomposition, n_obs: int, mode: str = SIGMA_FIXED_UNIT) -> MPReference:
    """Marchenko-Pastur reference fitted to a decomposition.

    ``fixed-unit`` pins sigma_w = 1. ``trace-compensated`` removes the trace
    carried by eigenvalues above the fixed-unit upper edge and spreads the
    remainder over all N series: sigma_w^2 = (N - sum_outliers) / N, floored
    at 1e-6. Needs the observation count to fix Q.
    """
    if mode not in SIGMA_MODES:
        raise InputError(f"unknown sigma mode {mode!r}; choose one of {SIGMA_MODES}")
    n = dec.n
    if mode == SIGMA_FIXED_UNIT:
        return mp_bounds(n_obs, n, 1.0)
    unit = mp_bounds(n_obs, n, 1.0)
    outliers = dec.eigenvalues[dec.eigenvalues > unit.lambda_plus]
    if outliers.size == dec.n:
        raise NumericError("every eigenvalue sits above the unit bulk edge; cannot fit sigma_w")
    sigma_sq = max((n - float(outliers.sum())) / n, _SIGMA_SQ_FLOOR)
    return mp_bounds(n_obs, n, math.sqrt(sigma_sq))


def overlay_curve(ref: MPReference, points: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """(lambda, density) samples across [max(0, 0.9 lambda_minus), 1.1 lambda_plus]."""
    if points < 2:
        raise InputError("overlay needs at least 2 sample points")
    grid = np.linspace(max(0.0, 0.9 * ref.lambda_minus), 1.1 * ref.lambda_plus, points)
    return grid, np.asarray(mp_density(ref, grid))
