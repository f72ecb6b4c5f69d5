"""Re-expression of a price table in an arbitrary base.

Any asset from the table, the quote currency itself, or a synthetic
"fictitious" currency can serve as the base. The fictitious base multiplies
every quote-currency price by a seeded geometric-Brownian-motion exchange
rate (cryptocurrency/fict = cryptocurrency/quote x quote/fict), so it is
disconnected from the basket by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import InputError, NumericError
from .market_data import PriceTable, require_complete

KIND_QUOTE = "quote"
KIND_ASSET = "asset"
KIND_FICTITIOUS = "fictitious"

#: Counter-based generator used for every random draw in this package.
RNG_NAME = "philox4x64"


def seeded_rng(seed: int) -> np.random.Generator:
    """Deterministic Philox stream for an integer seed (or entropy sequence)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class BaseSelector:
    """Choice of denominator: the quote currency, one asset, or a seeded
    fictitious currency."""

    kind: str
    asset_id: str | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (KIND_QUOTE, KIND_ASSET, KIND_FICTITIOUS):
            raise InputError(f"unknown base kind {self.kind!r}")
        if self.kind == KIND_ASSET and not self.asset_id:
            raise InputError("asset base requires asset_id")
        if self.kind == KIND_FICTITIOUS and self.seed is None:
            raise InputError("fictitious base requires a seed (reproducibility)")

    def label(self, quote: str = "USD") -> str:
        if self.kind == KIND_ASSET:
            return str(self.asset_id)
        if self.kind == KIND_QUOTE:
            return quote
        return "fict"


def parse_base(text: str, seed: int | None = None) -> BaseSelector:
    """Parse a CLI base spec: ``quote``, ``fict``, or a ticker."""
    text = text.strip()
    if text == KIND_QUOTE:
        return BaseSelector(kind=KIND_QUOTE)
    if text == "fict":
        if seed is None:
            raise InputError("--base fict requires --seed")
        return BaseSelector(kind=KIND_FICTITIOUS, seed=seed)
    return BaseSelector(kind=KIND_ASSET, asset_id=text)


@dataclass(frozen=True)
class RebasedPanel:
    """Strictly positive price panel expressed in the selected base.

    ``prices`` has shape ``(len(dates), len(assets))``. For an asset base the
    base asset itself is excluded, leaving n-1 series; quote and fictitious
    bases keep all n series.
    """

    base: BaseSelector
    dates: tuple[date, ...]
    assets: tuple[str, ...]
    prices: np.ndarray

    def __post_init__(self) -> None:
        prices = np.asarray(self.prices, dtype=float)
        if not (np.isfinite(prices).all() and (prices > 0.0).all()):
            raise NumericError("rebased panel contains non-positive or non-finite prices")
        prices.setflags(write=False)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "assets", tuple(self.assets))

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.assets)


def generate_fictitious_series(n_days: int, seed: int) -> np.ndarray:
    """Quote/fictitious exchange-rate path of length ``n_days``.

    Starts at 1; daily log-increments are iid standard normal draws from a
    Philox stream keyed by ``seed``, so the same seed always reproduces the
    same path bit for bit.
    """
    if n_days < 2:
        raise InputError(f"fictitious series needs length >= 2, got {n_days}")
    increments = seeded_rng(seed).standard_normal(n_days - 1)
    log_path = np.concatenate([[0.0], np.cumsum(increments)])
    return np.exp(log_path)


def rebase(table: PriceTable, base: BaseSelector) -> RebasedPanel:
    """Express all prices in the chosen base.

    quote: identity copy. asset a: P_i / P_a for every other asset i.
    fictitious: P_i x U(t) with U the seeded quote/fict path.
    """
    require_complete(table)
    if base.kind == KIND_QUOTE:
        prices = table.prices.copy()
        assets = table.assets
    elif base.kind == KIND_ASSET:
        idx = table.asset_index(str(base.asset_id))
        keep = [c for c in range(table.n_assets) if c != idx]
        prices = table.prices[:, keep] / table.prices[:, idx:idx + 1]
        assets = tuple(table.assets[c] for c in keep)
    else:
        path = generate_fictitious_series(table.n_dates, int(base.seed))  # type: ignore[arg-type]
        prices = table.prices * path[:, None]
        assets = table.assets
    return RebasedPanel(base=base, dates=table.dates, assets=assets, prices=prices)
