"""Ingestion and alignment of daily price/capitalization tables.

Input dialect: UTF-8 CSV with header ``date,<ticker>,...``, one row per
calendar day, ISO-8601 dates, decimal prices. An empty cell marks a missing
quote; missing cells are carried through loading as explicit gaps and must be
resolved by :func:`align_and_filter` before any analysis.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from .errors import InputError

log = logging.getLogger(__name__)

REJECT_INCOMPLETE = "reject-incomplete"
DROP_INCOMPLETE_ASSETS = "drop-incomplete-assets"
MISSING_POLICIES = (REJECT_INCOMPLETE, DROP_INCOMPLETE_ASSETS)


@dataclass(frozen=True)
class PriceTable:
    """Aligned daily price series for a basket of assets in one quote currency.

    ``prices`` has shape ``(len(dates), len(assets))``; NaN marks a missing
    quote (allowed only until :func:`align_and_filter` has been applied).
    ``caps`` optionally holds capitalization values of the same shape.
    """

    dates: tuple[date, ...]
    assets: tuple[str, ...]
    prices: np.ndarray
    quote: str = "USD"
    caps: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        dates = tuple(self.dates)
        assets = tuple(str(a) for a in self.assets)
        prices = np.array(self.prices, dtype=float)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "assets", assets)
        object.__setattr__(self, "prices", prices)

        if len(dates) < 2:
            raise InputError("price table needs at least 2 dates")
        if len(assets) < 2:
            raise InputError("price table needs at least 2 assets")
        if len(set(assets)) != len(assets):
            dupes = sorted({a for a in assets if assets.count(a) > 1})
            raise InputError(f"duplicate asset identifiers: {', '.join(dupes)}")
        if self.quote in assets:
            raise InputError(f"quote currency {self.quote!r} also appears as an asset")
        for prev, cur in zip(dates, dates[1:]):
            if cur <= prev:
                raise InputError(f"dates not strictly increasing at {cur.isoformat()}")
        if prices.shape != (len(dates), len(assets)):
            raise InputError(
                f"price matrix shape {prices.shape} does not match "
                f"{len(dates)} dates x {len(assets)} assets"
            )
        bad = ~(np.isnan(prices) | (np.isfinite(prices) & (prices > 0.0)))
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise InputError(
                f"non-positive or non-finite price for {assets[c]} "
                f"on {dates[r].isoformat()}: {prices[r, c]!r}"
            )
        prices.setflags(write=False)

        if self.caps is not None:
            caps = np.array(self.caps, dtype=float)
            if caps.shape != prices.shape:
                raise InputError(
                    f"capitalization matrix shape {caps.shape} does not match prices {prices.shape}"
                )
            if not (np.isfinite(caps).all() and (caps >= 0.0).all()):
                r, c = np.argwhere(~(np.isfinite(caps) & (caps >= 0.0)))[0]
                raise InputError(
                    f"invalid capitalization for {assets[c]} on {dates[r].isoformat()}: {caps[r, c]!r}"
                )
            caps.setflags(write=False)
            object.__setattr__(self, "caps", caps)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.assets)

    @property
    def is_complete(self) -> bool:
        return not np.isnan(self.prices).any()

    def missing_cells(self) -> list[tuple[str, date]]:
        """(asset, date) pairs with no quote, in column-major (per-asset) order."""
        out = []
        for c, asset in enumerate(self.assets):
            for r in np.flatnonzero(np.isnan(self.prices[:, c])):
                out.append((asset, self.dates[r]))
        return out

    def asset_index(self, asset: str) -> int:
        try:
            return self.assets.index(asset)
        except ValueError:
            raise InputError(f"asset {asset!r} not in table") from None


def _parse_date(text: str, row: int) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise InputError(f"row {row}: cannot parse date {text!r}") from None


def _parse_cell(text: str, row: int, asset: str) -> float:
    text = text.strip()
    if text == "":
        return np.nan
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"row {row}, column {asset!r}: cannot parse {text!r}") from None
    return value


def load_price_table(
    path: str | Path,
    fmt: str = "csv",
    quote: str = "USD",
    caps_path: str | Path | None = None,
) -> PriceTable:
    """Load a price table (and optionally a companion capitalization table).

    Rows are sorted by date; duplicate dates, duplicate tickers, unparseable
    cells and non-positive prices are rejected with their location. Empty
    cells become missing-value markers.
    """
    if fmt != "csv":
        raise InputError(f"unsupported table format {fmt!r} (only 'csv')")
    dates, assets, rows = _read_table(Path(path), positive=True)
    order = np.argsort(dates, kind="stable")
    dates = [dates[i] for i in order]
    prices = np.asarray(rows, dtype=float)[order]
    caps = None
    if caps_path is not None:
        cap_dates, cap_assets, cap_rows = _read_table(Path(caps_path), positive=False)
        cap_order = np.argsort(cap_dates, kind="stable")
        cap_dates = [cap_dates[i] for i in cap_order]
        if cap_assets != assets or cap_dates != dates:
            raise InputError(
                f"capitalization table {caps_path} does not share the price table's dates and assets"
            )
        caps = np.asarray(cap_rows, dtype=float)[cap_order]
        if np.isnan(caps).any():
            r, c = np.argwhere(np.isnan(caps))[0]
            raise InputError(
                f"capitalization table {caps_path}: missing value for "
                f"{assets[c]} on {dates[r].isoformat()}"
            )
    return PriceTable(dates=tuple(dates), assets=tuple(assets), prices=prices, quote=quote, caps=caps)


def _read_table(path: Path, positive: bool) -> tuple[list[date], tuple[str, ...], list[list[float]]]:
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].strip().lower() != "date":
            raise InputError(f"{path}: header must be 'date,<ticker>,...'")
        assets = tuple(h.strip() for h in header[1:])
        if any(a == "" for a in assets):
            raise InputError(f"{path}: blank ticker in header")
        if len(set(assets)) != len(assets):
            dupes = sorted({a for a in assets if assets.count(a) > 1})
            raise InputError(f"{path}: duplicate asset columns: {', '.join(dupes)}")

        dates: list[date] = []
        seen: set[date] = set()
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if len(row) != len(assets) + 1:
                raise InputError(f"{path} row {lineno}: expected {len(assets) + 1} cells, got {len(row)}")
            day = _parse_date(row[0], lineno)
            if day in seen:
                raise InputError(f"{path} row {lineno}: duplicate date {day.isoformat()}")
            seen.add(day)
            values = []
            for asset, cell in zip(assets, row[1:]):
                value = _parse_cell(cell, lineno, asset)
                if positive and not np.isnan(value) and value <= 0.0:
                    raise InputError(f"{path} row {lineno}, column {asset!r}: non-positive price {cell.strip()!r}")
                values.append(value)
            dates.append(day)
            rows.append(values)
    if len(rows) < 2:
        raise InputError(f"{path}: need at least 2 data rows")
    return dates, assets, rows


def write_price_table(table: PriceTable, path: str | Path) -> None:
    """Serialize to the canonical CSV form: ascending dates, assets in table order.

    Floats are written with shortest round-trip repr, so load -> write -> load
    reproduces the same table bit for bit.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *table.assets])
        for r, day in enumerate(table.dates):
            cells = ["" if np.isnan(v) else repr(float(v)) for v in table.prices[r]]
            writer.writerow([day.isoformat(), *cells])


def align_and_filter(table: PriceTable, policy: str = REJECT_INCOMPLETE) -> PriceTable:
    """Resolve missing cells without fabricating data.

    ``reject-incomplete`` fails listing every gap; ``drop-incomplete-assets``
    removes any asset with at least one gap (logged), keeping observed values
    untouched.
    """
    if policy not in MISSING_POLICIES:
        raise InputError(f"unknown missing-data policy {policy!r}; choose one of {MISSING_POLICIES}")
    if table.is_complete:
        return table
    if policy == REJECT_INCOMPLETE:
        gaps = table.missing_cells()
        shown = ", ".join(f"{a}@{d.isoformat()}" for a, d in gaps[:20])
        more = "" if len(gaps) <= 20 else f" (+{len(gaps) - 20} more)"
        raise InputError(f"incomplete table: {len(gaps)} missing cells: {shown}{more}")
    keep = ~np.isnan(table.prices).any(axis=0)
    dropped = [a for a, k in zip(table.assets, keep) if not k]
    if keep.sum() < 2:
        raise InputError(
            f"drop-incomplete-assets leaves {int(keep.sum())} asset(s); need at least 2 "
            f"(dropped: {', '.join(dropped)})"
        )
    log.info("dropped %d incomplete asset(s): %s", len(dropped), ", ".join(dropped))
    return PriceTable(
        dates=table.dates,
        assets=tuple(a for a, k in zip(table.assets, keep) if k),
        prices=table.prices[:, keep],
        quote=table.quote,
        caps=None if table.caps is None else table.caps[:, keep],
    )


def require_complete(table: PriceTable) -> None:
    """Raise if the table still has gaps, pointing at align_and_filter."""
    if not table.is_complete:
        gaps = table.missing_cells()
        raise InputError(
            f"table has {len(gaps)} missing cells (first: {gaps[0][0]}@{gaps[0][1].isoformat()}); "
            "run align_and_filter first"
        )
