"""Removal of the dominant collective factor from a return panel.

Each normalized series is regressed by ordinary least squares on the leading
eigensignal, g_i = a_i + b_i z(t) + eps_i(t); the residuals, renormalized to
zero mean and unit variance, define the residual correlation matrix. Viewing
returns this way is like tracking birds relative to the flock's center of
mass instead of a fixed point on the ground.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import InputError, NumericError
from .spectra import (
    CorrelationMatrix,
    Eigensignal,
    Histogram,
    ReturnPanel,
    SpectralDecomposition,
    _resolve_edges,
    correlation_matrix,
    normalize_rows,
)


@dataclass(frozen=True)
class FactorRegression:
    """Per-series OLS fit against the leading eigensignal.

    ``residuals`` are unnormalized: variance(g_i) splits exactly into
    loadings[i]^2 * var(z) + var(residuals[i]).
    """

    intercepts: np.ndarray
    loadings: np.ndarray
    residuals: np.ndarray
    assets: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.intercepts, dtype=float)
        b = np.asarray(self.loadings, dtype=float)
        eps = np.asarray(self.residuals, dtype=float)
        if a.shape != b.shape or eps.shape[0] != a.size:
            raise InputError("regression coefficient/residual shapes disagree")
        for arr in (a, b, eps):
            arr.setflags(write=False)
        object.__setattr__(self, "intercepts", a)
        object.__setattr__(self, "loadings", b)
        object.__setattr__(self, "residuals", eps)

    @property
    def n_series(self) -> int:
        return self.loadings.size

    def r_squared(self) -> np.ndarray:
        """Explained-variance fraction per series.

        Valid because the regressed panel rows are unit-variance by contract:
        R^2_i = 1 - var(eps_i).
        """
        return 1.0 - self.residuals.var(axis=1)


def remove_market_factor(returns: ReturnPanel, market: Eigensignal) -> FactorRegression:
    """OLS fit of every series on the market eigensignal.

    Residual rows are exactly orthogonal (in sample covariance) to the
    regressor and have zero mean, up to floating-point rounding.
    """
    z = np.asarray(market.values, dtype=float)
    if z.ndim != 1 or z.size != returns.n_obs:
        raise InputError(
            f"eigensignal length {z.size} does not match panel with {returns.n_obs} observations"
        )
    z_centered = z - z.mean()
    z_var = float((z_centered * z_centered).mean())
    if z_var <= 0.0:
        raise NumericError("market eigensignal has zero variance; cannot regress on it")
    g = returns.g
    loadings = (g @ z_centered) / (z_var * z.size)
    intercepts = g.mean(axis=1) - loadings * z.mean()
    residuals = g - intercepts[:, None] - loadings[:, None] * z[None, :]
    reg = FactorRegression(
        intercepts=intercepts, loadings=loadings, residuals=residuals, assets=returns.assets
    )
    return reg


def variance_split(reg: FactorRegression, market: Eigensignal) -> np.ndarray:
    """b_i^2 var(z) + var(eps_i) per series; equals var(g_i) = 1 up to rounding."""
    z = np.asarray(market.values, dtype=float)
    zc = z - z.mean()
    z_var = float((zc * zc).mean())
    return reg.loadings**2 * z_var + reg.residuals.var(axis=1)


def residual_correlation(reg: FactorRegression) -> CorrelationMatrix:
    """Correlation matrix of the renormalized residuals (kind ``residual``).

    A residual row with zero variance (series fully explained by the factor)
    is a numeric failure naming the series.
    """
    names = reg.assets if reg.assets is not None else tuple(
        f"series {i}" for i in range(reg.n_series)
    )
    normalized = normalize_rows(reg.residuals, names=names)
    panel = ReturnPanel(g=normalized, tau=1, base=None, assets=reg.assets)
    return correlation_matrix(panel, kind="residual")


def component_histogram(
    dec: SpectralDecomposition,
    which: int | Literal["all"] = "all",
    bins: int | Sequence[float] = 40,
) -> Histogram:
    """Histogram of eigenvector components.

    ``which="all"`` pools all N^2 components; an integer selects one
    eigenvector by rank from the top (1 = largest eigenvalue). Integer bin
    counts span a symmetric range covering the data.
    """
    if which == "all":
        values = dec.eigenvectors.ravel()
    else:
        values = dec.vector(int(which))
    if isinstance(bins, (int, np.integer)):
        reach = max(float(np.abs(values).max()), 1e-6) * 1.001
        edges = _resolve_edges(bins, -reach, reach)
    else:
        edges = _resolve_edges(bins, float(np.min(values)), float(np.max(values)))
        if edges[0] > values.min() or edges[-1] < values.max():
            raise InputError("binning does not cover the component range")
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(edges=edges, counts=counts)
