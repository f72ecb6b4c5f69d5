"""Rolling-window tracking of the largest eigenvalue and capitalization shares.

Each window of ``window`` consecutive days is treated as a self-contained
dataset: returns are recomputed and renormalized inside the window (no
information leaks across window edges), the correlation matrix is rebuilt
from scratch, and the largest eigenvalue is recorded against the window's
final date. A fictitious base uses one seeded path covering the whole sample
so consecutive windows see the same evolving exchange rate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .errors import InputError, NumericError
from .market_data import PriceTable, require_complete
from .rebase import BaseSelector, RebasedPanel, rebase
from .rmt import mp_bounds
from .spectra import compute_returns, correlation_matrix, decompose

log = logging.getLogger(__name__)

GAP = math.nan  # marker for windows where the spectrum is undefined


@dataclass(frozen=True)
class RollingConfig:
    """Window length and stride in days, lag, and the bases to track."""

    window: int = 182
    step: int = 1
    tau: int = 1
    bases: tuple[BaseSelector, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.window <= self.tau:
            raise InputError(f"window ({self.window}) must exceed tau ({self.tau})")
        if self.step < 1:
            raise InputError(f"step must be >= 1, got {self.step}")
        object.__setattr__(self, "bases", tuple(self.bases))

    def n_windows(self, n_days: int) -> int:
        if self.window > n_days:
            raise InputError(f"window ({self.window}) exceeds available {n_days} days")
        return (n_days - self.window) // self.step + 1

    def window_slices(self, n_days: int) -> list[slice]:
        return [
            slice(k * self.step, k * self.step + self.window)
            for k in range(self.n_windows(n_days))
        ]


@dataclass(frozen=True)
class RollingSeries:
    """Per-base largest-eigenvalue track.

    ``lambda_max`` and ``n_above_bulk`` carry NaN for gap windows (degenerate
    data inside the window); ``lambda_plus`` is the Marchenko-Pastur upper
    edge for the window's Q at sigma_w = 1.
    """

    base: BaseSelector
    label: str
    end_dates: tuple[date, ...]
    lambda_max: tuple[float, ...]
    n_above_bulk: tuple[float, ...]
    lambda_plus: float

    def __post_init__(self) -> None:
        if not (len(self.end_dates) == len(self.lambda_max) == len(self.n_above_bulk)):
            raise InputError("rolling series lengths disagree")
        bad = [
            v for v in self.lambda_max if not math.isnan(v) and v <= 0.0
        ]
        if bad:
            raise NumericError(f"non-positive largest eigenvalue in rolling series: {bad[0]}")

    @property
    def n_windows(self) -> int:
        return len(self.end_dates)

    @property
    def gap_count(self) -> int:
        return sum(1 for v in self.lambda_max if math.isnan(v))


def rolling_lambda_max(table: PriceTable, config: RollingConfig) -> list[RollingSeries]:
    """Largest eigenvalue per base per window position.

    Windows where a series is constant (zero variance) are reported as gaps
    rather than aborting the whole run.
    """
    require_complete(table)
    if not config.bases:
        raise InputError("rolling analysis needs at least one base")
    slices = config.window_slices(table.n_dates)
    out: list[RollingSeries] = []
    for base in config.bases:
        panel = rebase(table, base)  # fictitious path spans the full sample
        n_series = panel.n_assets
        if config.window - config.tau < n_series:
            log.warning(
                "window of %d days gives only %d observations for %d series (Q < 1); "
                "expect zero modes",
                config.window, config.window - config.tau, n_series,
            )
        edge = mp_bounds(config.window - config.tau, n_series, 1.0).lambda_plus
        lams: list[float] = []
        above: list[float] = []
        ends: list[date] = []
        for win in slices:
            ends.append(table.dates[win.stop - 1])
            sub = RebasedPanel(
                base=base,
                dates=panel.dates[win],
                assets=panel.assets,
                prices=panel.prices[win],
            )
            try:
                returns = compute_returns(sub, tau=config.tau)
                dec = decompose(correlation_matrix(returns))
            except NumericError as exc:
                log.warning(
                    "gap at window ending %s (base %s): %s",
                    ends[-1].isoformat(), base.label(table.quote), exc,
                )
                lams.append(GAP)
                above.append(GAP)
                continue
            lams.append(dec.lambda_max)
            above.append(float((dec.eigenvalues > edge).sum()))
        out.append(
            RollingSeries(
                base=base,
                label=base.label(table.quote),
                end_dates=tuple(ends),
                lambda_max=tuple(lams),
                n_above_bulk=tuple(above),
                lambda_plus=edge,
            )
        )
    return out


@dataclass(frozen=True)
class CapitalizationShares:
    """Total capitalization and per-asset fractions at window end dates."""

    end_dates: tuple[date, ...]
    assets: tuple[str, ...]
    totals: np.ndarray
    fractions: np.ndarray  # shape (len(assets), len(end_dates))


def capitalization_shares(
    table: PriceTable, config: RollingConfig, assets: list[str] | tuple[str, ...]
) -> CapitalizationShares:
    """Market-capitalization totals and shares on the rolling end-date grid."""
    if table.caps is None:
        raise InputError("price table has no capitalization data; supply a caps table")
    cols = [table.asset_index(a) for a in assets]
    ends = [win.stop - 1 for win in config.window_slices(table.n_dates)]
    caps = table.caps[ends]  # (W, n)
    totals = caps.sum(axis=1)
    if (totals <= 0.0).any():
        r = int(np.argwhere(totals <= 0.0)[0][0])
        raise NumericError(
            f"total capitalization is zero on {table.dates[ends[r]].isoformat()}"
        )
    fractions = np.stack([caps[:, c] / totals for c in cols])
    return CapitalizationShares(
        end_dates=tuple(table.dates[i] for i in ends),
        assets=tuple(assets),
        totals=totals,
        fractions=fractions,
    )
