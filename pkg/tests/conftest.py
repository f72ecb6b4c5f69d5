"""Shared fixtures: synthetic price tables and panels with known structure."""

from __future__ import annotations

from datetime import date, timedelta

import numpy as np
import pytest

from rmtbasket import PriceTable, seeded_rng

EPOCH = date(2015, 10, 1)


def daily_dates(n: int, start: date = EPOCH) -> tuple[date, ...]:
    return tuple(start + timedelta(days=i) for i in range(n))


def table_from_returns(raw: np.ndarray, quote: str = "USD",
                       caps: np.ndarray | None = None) -> PriceTable:
    """Price table whose lag-1 log returns are exactly ``raw`` (N x T)."""
    n, t = raw.shape
    log_prices = np.concatenate([np.zeros((n, 1)), np.cumsum(raw, axis=1)], axis=1)
    return PriceTable(
        dates=daily_dates(t + 1),
        assets=tuple(f"C{i:02d}" for i in range(n)),
        prices=np.exp(log_prices).T,
        quote=quote,
        caps=caps,
    )


def one_factor_returns(n: int, t: int, c: float, seed: int) -> np.ndarray:
    """Raw (unnormalized) one-factor returns with planted coupling c."""
    rng = seeded_rng(seed)
    factor = rng.standard_normal(t)
    noise = rng.standard_normal((n, t))
    return np.sqrt(c) * factor[None, :] + np.sqrt(1.0 - c) * noise


def iid_returns(n: int, t: int, seed: int) -> np.ndarray:
    return seeded_rng(seed).standard_normal((n, t))


def uniform_correlation(n: int, c: float) -> np.ndarray:
    """Exact equicorrelation matrix: eigenvalues 1 + (n-1)c and (n-1)-fold 1-c."""
    m = np.full((n, n), c)
    np.fill_diagonal(m, 1.0)
    return m


@pytest.fixture
def small_table() -> PriceTable:
    """10 assets, 401 days, planted factor c=0.5, deterministic."""
    return table_from_returns(one_factor_returns(10, 400, 0.5, seed=42))


@pytest.fixture
def tiny_table() -> PriceTable:
    """3 assets, 6 days, hand-sized."""
    rng = seeded_rng(7)
    return table_from_returns(rng.standard_normal((3, 5)) * 0.05)
