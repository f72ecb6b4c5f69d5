"""Normalized log returns, correlation matrices, and their spectra.

Conventions used throughout:

* Log returns at lag ``tau`` (stride 1): ``G_i(t) = log P_i(t+tau) - log P_i(t)``.
* Each return series is normalized independently to zero mean and unit
  standard deviation with the population (1/T) variance convention, so the
  correlation matrix ``C = g g~ / T`` has an exactly unit diagonal and
  trace equal to the number of series.
* Eigenvalues are reported in ascending order; each eigenvector is flipped,
  if needed, so its component sum is non-negative, which makes the
  decomposition deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NumericError
from .rebase import BaseSelector, RebasedPanel

# Scale below which a demeaned series counts as constant (unnormalizable).
_CONSTANT_REL_TOL = 1e-12


def normalize_rows(raw: np.ndarray, names: Sequence[str] | None = None) -> np.ndarray:
    """Normalize each row to zero mean, unit population standard deviation.

    Raises NumericError naming the offending series when a row is constant.
    """
    raw = np.asarray(raw, dtype=float)
    means = raw.mean(axis=1, keepdims=True)
    centered = raw - means
    sigmas = np.sqrt((centered * centered).mean(axis=1, keepdims=True))
    floor = _CONSTANT_REL_TOL * np.abs(means)
    dead = (sigmas <= floor) | (sigmas == 0.0)
    if dead.any():
        i = int(np.argwhere(dead)[0][0])
        name = names[i] if names is not None else f"series {i}"
        raise NumericError(f"constant series (zero variance): {name}")
    g = centered / sigmas
    # second pass kills the O(eps * mean/sigma) residual left by scaling
    return g - g.mean(axis=1, keepdims=True)


@dataclass(frozen=True)
class ReturnPanel:
    """N x T matrix of normalized log returns plus its provenance."""

    g: np.ndarray
    tau: int = 1
    base: BaseSelector | None = None
    assets: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        g = np.asarray(self.g, dtype=float)
        if g.ndim != 2:
            raise InputError(f"return panel must be 2-D, got shape {g.shape}")
        if not np.isfinite(g).all():
            raise NumericError("return panel contains non-finite values")
        if np.abs(g.mean(axis=1)).max() > 1e-12:
            raise NumericError("return panel rows are not demeaned")
        sigma = np.sqrt((g * g).mean(axis=1))
        if np.abs(sigma - 1.0).max() > 1e-10:
            raise NumericError("return panel rows are not unit-variance")
        if self.assets is not None:
            assets = tuple(self.assets)
            if len(assets) != g.shape[0]:
                raise InputError("asset list does not match panel rows")
            object.__setattr__(self, "assets", assets)
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @property
    def n_series(self) -> int:
        return self.g.shape[0]

    @property
    def n_obs(self) -> int:
        return self.g.shape[1]

    def name_of(self, i: int) -> str:
        return self.assets[i] if self.assets is not None else f"series {i}"


def compute_returns(panel: RebasedPanel, tau: int = 1) -> ReturnPanel:
    """Lag-``tau`` normalized log returns of a rebased price panel."""
    if tau < 1:
        raise InputError(f"tau must be >= 1, got {tau}")
    if panel.n_dates <= tau:
        raise InputError(f"tau={tau} too large for panel of {panel.n_dates} days")
    logp = np.log(panel.prices)
    raw = (logp[tau:] - logp[:-tau]).T  # (N, T - tau)
    g = normalize_rows(raw, names=panel.assets)
    return ReturnPanel(g=g, tau=tau, base=panel.base, assets=panel.assets)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric correlation matrix with unit diagonal; ``kind`` is ``raw``
    for plain panels and ``residual`` for market-mode-removed ones."""

    values: np.ndarray
    kind: str = "raw"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InputError(f"correlation matrix must be square, got {values.shape}")
        if values.shape[0] < 2:
            raise InputError("correlation matrix needs dimension >= 2")
        if self.kind not in ("raw", "residual"):
            raise InputError(f"unknown correlation kind {self.kind!r}")
        if not np.isfinite(values).all():
            raise NumericError("correlation matrix contains non-finite entries")
        if np.abs(values - values.T).max() > 1e-14:
            raise NumericError("correlation matrix is not symmetric")
        if np.abs(np.diag(values) - 1.0).max() > 1e-12:
            raise NumericError("correlation matrix diagonal deviates from 1")
        if values.min() < -1.0 - 1e-12 or values.max() > 1.0 + 1e-12:
            raise NumericError("correlation entries outside [-1, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def offdiagonal(self) -> np.ndarray:
        """Upper-triangle off-diagonal entries, row-major."""
        return self.values[np.triu_indices(self.n, k=1)]


def correlation_matrix(returns: ReturnPanel, kind: str = "raw") -> CorrelationMatrix:
    """Equal-time correlation matrix ``C = g g~ / T`` of a normalized panel."""
    if returns.n_series < 2:
        raise InputError("need at least 2 series for a correlation matrix")
    if returns.n_obs < 2:
        raise InputError("need at least 2 observations for a correlation matrix")
    g = returns.g
    c = g @ g.T / returns.n_obs
    c = (c + c.T) / 2.0  # exact symmetry; BLAS gemm is not guaranteed symmetric
    return CorrelationMatrix(values=c, kind=kind)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with orthonormal, sign-fixed eigenvectors.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``; each column's
    component sum is >= 0.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.eigenvectors, dtype=float)
        if w.ndim != 1 or v.shape != (w.size, w.size):
            raise InputError("eigenvalue/eigenvector shapes disagree")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def explained_fraction(self) -> float:
        """Share of the trace carried by the largest eigenvalue."""
        return float(self.eigenvalues[-1] / self.n)

    def vector(self, rank: int) -> np.ndarray:
        """Eigenvector by rank from the top: 1 = largest eigenvalue."""
        if not 1 <= rank <= self.n:
            raise InputError(f"rank {rank} out of range 1..{self.n}")
        return self.eigenvectors[:, self.n - rank]


def decompose(matrix: CorrelationMatrix) -> SpectralDecomposition:
    """Full eigendecomposition of a correlation matrix.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to 0; anything lower means the
    matrix is not positive semidefinite and is reported as a numeric failure,
    as is non-convergence of the solver.
    """
    try:
        w, v = np.linalg.eigh(matrix.values)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed to converge: {exc}") from exc
    if w[0] < -1e-10:
        raise NumericError(f"correlation matrix not positive semidefinite: min eigenvalue {w[0]:.3e}")
    w = np.where(w < 0.0, 0.0, w)
    flip = v.sum(axis=0) < 0.0
    v = np.where(flip[None, :], -v, v)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


@dataclass(frozen=True)
class Eigensignal:
    """Projection of the return panel onto one eigenvector: the time series
    whose population variance equals the corresponding eigenvalue."""

    index: int
    values: np.ndarray

    def variance(self) -> float:
        z = self.values
        zc = z - z.mean()
        return float((zc * zc).mean())


def eigensignals(returns: ReturnPanel, dec: SpectralDecomposition) -> list[Eigensignal]:
    """All eigensignals ``z_i(t) = sum_j v_ij g_j(t)``, in eigenvalue order."""
    if dec.n != returns.n_series:
        raise InputError(
            f"decomposition dimension {dec.n} does not match panel with {returns.n_series} series"
        )
    z = dec.eigenvectors.T @ returns.g
    return [Eigensignal(index=i, values=z[i]) for i in range(dec.n)]


def leading_eigensignal(returns: ReturnPanel, dec: SpectralDecomposition) -> Eigensignal:
    """Eigensignal of the largest eigenvalue (the market mode)."""
    if dec.n != returns.n_series:
        raise InputError(
            f"decomposition dimension {dec.n} does not match panel with {returns.n_series} series"
        )
    return Eigensignal(index=dec.n - 1, values=dec.eigenvectors[:, -1] @ returns.g)


@dataclass(frozen=True)
class Histogram:
    """Binned counts with density normalization (area sums to 1)."""

    edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=float)
        counts = np.asarray(self.counts, dtype=np.int64)
        if edges.ndim != 1 or edges.size < 2 or counts.size != edges.size - 1:
            raise InputError("histogram edges/counts shapes disagree")
        edges.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        total = self.total
        if total == 0:
            return np.zeros_like(self.widths)
        return self.counts / (total * self.widths)

    def rows(self) -> list[tuple[float, float, float]]:
        """(bin_left, bin_right, density) triples for CSV output."""
        dens = self.density
        return [
            (float(self.edges[i]), float(self.edges[i + 1]), float(dens[i]))
            for i in range(self.counts.size)
        ]


def _resolve_edges(bins: int | Sequence[float], lo: float, hi: float) -> np.ndarray:
    if isinstance(bins, (int, np.integer)):
        if bins < 1:
            raise InputError("need at least one histogram bin")
        return np.linspace(lo, hi, int(bins) + 1)
    edges = np.asarray(bins, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise InputError("empty or malformed binning")
    if np.diff(edges).min() <= 0:
        raise InputError("histogram edges must be strictly increasing")
    return edges


def element_histogram(matrix: CorrelationMatrix, bins: int | Sequence[float] = 40) -> Histogram:
    """Histogram of the off-diagonal upper-triangle correlation entries.

    Bins must cover [-1, 1]; default is 40 uniform bins. Every one of the
    N(N-1)/2 entries lands in a bin (values are clipped to [-1, 1] against
    rounding overshoot).
    """
    edges = _resolve_edges(bins, -1.0, 1.0)
    if edges[0] > -1.0 or edges[-1] < 1.0:
        raise InputError(f"binning [{edges[0]}, {edges[-1]}] does not cover [-1, 1]")
    values = np.clip(matrix.offdiagonal(), -1.0, 1.0)
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(edges=edges, counts=counts)
