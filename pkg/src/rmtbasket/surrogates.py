"""Null models and the planted one-factor synthetic market.

Three surrogate kinds:

* ``iid-random`` — every series replaced by independent standard normals;
  the correlation spectrum should match the Wishart/Marchenko-Pastur bulk.
* ``fictitious-base`` — an iid panel re-expressed in a seeded fictitious
  currency, which injects one common factor through the base alone.
* ``one-factor`` — g_i = sqrt(c) f + sqrt(1-c) eta_i, a market with planted
  uniform coupling c; its correlation matrix has one eigenvalue near
  1 + (N-1)c, which makes it the package's ground-truth oracle.

All draws come from explicitly seeded Philox streams; the same spec always
produces bit-identical panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .errors import InputError
from .market_data import PriceTable
from .rebase import (
    KIND_FICTITIOUS,
    BaseSelector,
    RebasedPanel,
    generate_fictitious_series,
    rebase,
    seeded_rng,
)
from .spectra import ReturnPanel, compute_returns, normalize_rows

KIND_IID = "iid-random"
KIND_ONE_FACTOR = "one-factor"
KIND_FICT_BASE = "fictitious-base"
SURROGATE_KINDS = (KIND_IID, KIND_ONE_FACTOR, KIND_FICT_BASE)

#: start of the synthetic calendar used when exporting surrogate panels
_EPOCH = date(2000, 1, 1)


@dataclass(frozen=True)
class SurrogateSpec:
    """Parameters of one surrogate panel; the seed is mandatory."""

    kind: str
    n_series: int
    n_obs: int
    seed: int
    factor_loading: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in SURROGATE_KINDS:
            raise InputError(f"unknown surrogate kind {self.kind!r}; choose one of {SURROGATE_KINDS}")
        if self.n_series < 2:
            raise InputError(f"surrogate needs >= 2 series, got {self.n_series}")
        if self.n_obs < 2:
            raise InputError(f"surrogate needs >= 2 observations, got {self.n_obs}")
        if self.seed is None:
            raise InputError("surrogate seed is mandatory")
        if self.kind == KIND_ONE_FACTOR:
            c = self.factor_loading
            if c is None or not 0.0 <= c < 1.0:
                raise InputError(f"one-factor surrogate needs factor_loading in [0, 1), got {c!r}")
        elif self.factor_loading is not None:
            raise InputError(f"factor_loading only applies to {KIND_ONE_FACTOR!r}")


def surrogate_asset_names(n: int) -> tuple[str, ...]:
    width = max(2, len(str(n - 1)))
    return tuple(f"A{i:0{width}d}" for i in range(n))


def generate_iid_panel(spec: SurrogateSpec) -> ReturnPanel:
    """Panel of iid standard normal returns, normalized per series."""
    if spec.kind != KIND_IID:
        raise InputError(f"expected kind {KIND_IID!r}, got {spec.kind!r}")
    raw = seeded_rng(spec.seed).standard_normal((spec.n_series, spec.n_obs))
    return ReturnPanel(
        g=normalize_rows(raw), tau=1, base=None, assets=surrogate_asset_names(spec.n_series)
    )


def generate_one_factor_panel(spec: SurrogateSpec) -> ReturnPanel:
    """Planted-factor panel with population cross-correlation c between
    distinct series."""
    if spec.kind != KIND_ONE_FACTOR:
        raise InputError(f"expected kind {KIND_ONE_FACTOR!r}, got {spec.kind!r}")
    c = float(spec.factor_loading)  # type: ignore[arg-type]
    rng = seeded_rng(spec.seed)
    factor = rng.standard_normal(spec.n_obs)
    noise = rng.standard_normal((spec.n_series, spec.n_obs))
    raw = math.sqrt(c) * factor[None, :] + math.sqrt(1.0 - c) * noise
    return ReturnPanel(
        g=normalize_rows(raw), tau=1, base=None, assets=surrogate_asset_names(spec.n_series)
    )


def generate_fictitious_base_panel(spec: SurrogateSpec) -> ReturnPanel:
    """Iid panel re-expressed in a fictitious base with the same seed.

    Asset noise is drawn from the sub-stream keyed (seed, 1) so it never
    collides with the base path, which is keyed by the bare seed.
    """
    if spec.kind != KIND_FICT_BASE:
        raise InputError(f"expected kind {KIND_FICT_BASE!r}, got {spec.kind!r}")
    stream = np.random.Generator(np.random.Philox(np.random.SeedSequence([spec.seed, 1])))
    raw = stream.standard_normal((spec.n_series, spec.n_obs))
    table = _price_table_from_raw(raw, surrogate_asset_names(spec.n_series))
    panel = rebase(table, BaseSelector(kind=KIND_FICTITIOUS, seed=spec.seed))
    return compute_returns(panel, tau=1)


def generate_panel(spec: SurrogateSpec) -> ReturnPanel:
    """Dispatch on spec.kind."""
    if spec.kind == KIND_IID:
        return generate_iid_panel(spec)
    if spec.kind == KIND_ONE_FACTOR:
        return generate_one_factor_panel(spec)
    return generate_fictitious_base_panel(spec)


def _price_table_from_raw(raw: np.ndarray, assets: tuple[str, ...]) -> PriceTable:
    log_prices = np.concatenate(
        [np.zeros((raw.shape[0], 1)), np.cumsum(raw, axis=1)], axis=1
    )
    dates = tuple(_EPOCH + timedelta(days=i) for i in range(raw.shape[1] + 1))
    return PriceTable(dates=dates, assets=assets, prices=np.exp(log_prices).T, quote="USD")


def panel_to_price_table(panel: ReturnPanel) -> PriceTable:
    """Export a return panel as a price table in the standard CSV dialect.

    Prices start at 1 and compound the (already normalized) returns, so
    re-ingesting the table through the standard pipeline reproduces the panel
    up to floating-point rounding.
    """
    assets = panel.assets or surrogate_asset_names(panel.n_series)
    return _price_table_from_raw(panel.g, tuple(assets))


def export_surrogate(spec: SurrogateSpec) -> PriceTable:
    """Surrogate panel as an ingestible price table.

    For ``fictitious-base`` the exported prices are already expressed in the
    fictitious base, so the standard quote-base pipeline applies unchanged.
    """
    return panel_to_price_table(generate_panel(spec))
