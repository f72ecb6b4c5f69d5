"""Loader, validation, canonical serialization, and missing-data policies."""

from __future__ import annotations

from datetime import date

import numpy as np
import pytest

from rmtbasket import (
    DROP_INCOMPLETE_ASSETS,
    REJECT_INCOMPLETE,
    InputError,
    PriceTable,
    align_and_filter,
    load_price_table,
    write_price_table,
)
from rmtbasket.market_data import require_complete

from conftest import daily_dates


def write(tmp_path, text, name="prices.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


WELL_FORMED = """date,BTC,ETH
2015-10-01,243.6,0.68
2015-10-02,237.1,0.66
2015-10-03,238.9,0.69
"""


def test_load_minimal_table(tmp_path):
    table = load_price_table(write(tmp_path, WELL_FORMED))
    assert table.n_dates == 3
    assert table.n_assets == 2
    assert table.assets == ("BTC", "ETH")
    assert table.dates[0] == date(2015, 10, 1)
    assert table.prices[0, 0] == 243.6
    assert table.is_complete


def test_load_sorts_rows_by_date(tmp_path):
    shuffled = """date,BTC,ETH
2015-10-03,238.9,0.69
2015-10-01,243.6,0.68
2015-10-02,237.1,0.66
"""
    table = load_price_table(write(tmp_path, shuffled))
    assert [d.isoformat() for d in table.dates] == ["2015-10-01", "2015-10-02", "2015-10-03"]
    assert table.prices[0, 0] == 243.6


def test_load_rejects_zero_price_with_location(tmp_path):
    bad = WELL_FORMED.replace("237.1", "0.0")
    with pytest.raises(InputError, match=r"row 3.*'BTC'.*0\.0"):
        load_price_table(write(tmp_path, bad))


def test_load_rejects_unparseable_cell_with_location(tmp_path):
    bad = WELL_FORMED.replace("0.66", "oops")
    with pytest.raises(InputError, match=r"row 3.*'ETH'.*oops"):
        load_price_table(write(tmp_path, bad))


def test_load_rejects_duplicate_date(tmp_path):
    bad = WELL_FORMED.replace("2015-10-03", "2015-10-02")
    with pytest.raises(InputError, match="duplicate date 2015-10-02"):
        load_price_table(write(tmp_path, bad))


def test_load_rejects_duplicate_asset(tmp_path):
    bad = WELL_FORMED.replace("BTC,ETH", "BTC,BTC")
    with pytest.raises(InputError, match="duplicate asset"):
        load_price_table(write(tmp_path, bad))


def test_load_missing_file(tmp_path):
    with pytest.raises(InputError, match="not found"):
        load_price_table(tmp_path / "nope.csv")


def test_load_full_scale_table(tmp_path):
    # 1,278 daily rows for a 100-asset basket
    n, t = 100, 1278
    header = "date," + ",".join(f"A{i:03d}" for i in range(n))
    dates = daily_dates(t)
    rows = [header]
    for r, d in enumerate(dates):
        rows.append(d.isoformat() + "," + ",".join(f"{1.0 + ((r * 31 + c) % 97) / 100:.2f}" for c in range(n)))
    table = load_price_table(write(tmp_path, "\n".join(rows) + "\n"))
    assert table.n_dates == 1278
    assert table.n_assets == 100


def test_round_trip_is_bit_identical(tmp_path):
    src = write(tmp_path, WELL_FORMED)
    table = load_price_table(src)
    first = tmp_path / "canonical.csv"
    write_price_table(table, first)
    again = tmp_path / "canonical2.csv"
    write_price_table(load_price_table(first), again)
    assert first.read_bytes() == again.read_bytes()


def test_round_trip_preserves_awkward_floats(tmp_path):
    table = PriceTable(
        dates=daily_dates(3),
        assets=("A", "B"),
        prices=np.array([[0.1, 1e-7], [0.2, 3.333333333333333], [123456.789, 2.0]]),
    )
    out = tmp_path / "t.csv"
    write_price_table(table, out)
    back = load_price_table(out)
    assert (back.prices == table.prices).all()


def test_missing_cells_survive_loading(tmp_path):
    gappy = WELL_FORMED.replace("0.66", "")
    table = load_price_table(write(tmp_path, gappy))
    assert not table.is_complete
    assert table.missing_cells() == [("ETH", date(2015, 10, 2))]


def test_align_identity_on_complete_table(tmp_path):
    table = load_price_table(write(tmp_path, WELL_FORMED))
    aligned = align_and_filter(table, REJECT_INCOMPLETE)
    assert aligned is table


def test_align_reject_names_asset_and_date(tmp_path):
    gappy = WELL_FORMED.replace("0.66", "")
    table = load_price_table(write(tmp_path, gappy))
    with pytest.raises(InputError, match="ETH@2015-10-02"):
        align_and_filter(table, REJECT_INCOMPLETE)


def test_align_drop_removes_incomplete_asset(tmp_path):
    text = """date,BTC,ETH,XRP
2015-10-01,243.6,0.68,0.005
2015-10-02,237.1,,0.006
2015-10-03,238.9,0.69,0.005
"""
    table = load_price_table(write(tmp_path, text))
    dropped = align_and_filter(table, DROP_INCOMPLETE_ASSETS)
    assert dropped.assets == ("BTC", "XRP")
    assert dropped.is_complete
    # observed values are never altered, only columns removed
    assert (dropped.prices == table.prices[:, [0, 2]]).all()


def test_align_drop_fails_when_too_few_assets_remain(tmp_path):
    gappy = WELL_FORMED.replace("0.66", "")
    table = load_price_table(write(tmp_path, gappy))
    with pytest.raises(InputError, match="at least 2"):
        align_and_filter(table, DROP_INCOMPLETE_ASSETS)


def test_align_unknown_policy(tmp_path):
    table = load_price_table(write(tmp_path, WELL_FORMED))
    with pytest.raises(InputError, match="policy"):
        align_and_filter(table, "interpolate")


def test_require_complete_points_at_alignment(tmp_path):
    gappy = WELL_FORMED.replace("0.66", "")
    table = load_price_table(write(tmp_path, gappy))
    with pytest.raises(InputError, match="align_and_filter"):
        require_complete(table)


def test_caps_must_match_shape_and_sign():
    dates = daily_dates(3)
    prices = np.ones((3, 2)) + np.arange(6).reshape(3, 2) / 10
    with pytest.raises(InputError, match="shape"):
        PriceTable(dates=dates, assets=("A", "B"), prices=prices, caps=np.ones((2, 2)))
    with pytest.raises(InputError, match="capitalization"):
        PriceTable(dates=dates, assets=("A", "B"), prices=prices,
                   caps=np.array([[1.0, -2.0], [1.0, 2.0], [1.0, 2.0]]))


def test_caps_companion_file(tmp_path):
    caps_text = """date,BTC,ETH
2015-10-01,3.2e9,1.0e7
2015-10-02,3.1e9,1.1e7
2015-10-03,3.3e9,1.2e7
"""
    prices = write(tmp_path, WELL_FORMED)
    caps = write(tmp_path, caps_text, name="caps.csv")
    table = load_price_table(prices, caps_path=caps)
    assert table.caps is not None
    assert table.caps[0, 0] == 3.2e9
    mismatched = write(tmp_path, caps_text.replace("ETH", "XRP"), name="caps2.csv")
    with pytest.raises(InputError, match="dates and assets"):
        load_price_table(prices, caps_path=mismatched)
    gappy = write(tmp_path, caps_text.replace("1.1e7", ""), name="caps3.csv")
    with pytest.raises(InputError, match="missing value"):
        load_price_table(prices, caps_path=gappy)


def test_table_invariants():
    dates = daily_dates(3)
    prices = np.ones((3, 2)) * 2.0
    with pytest.raises(InputError, match="at least 2 assets"):
        PriceTable(dates=dates, assets=("A",), prices=prices[:, :1])
    with pytest.raises(InputError, match="at least 2 dates"):
        PriceTable(dates=dates[:1], assets=("A", "B"), prices=prices[:1])
    with pytest.raises(InputError, match="strictly increasing"):
        PriceTable(dates=(dates[0], dates[2], dates[1]), assets=("A", "B"), prices=prices)
    with pytest.raises(InputError, match="quote"):
        PriceTable(dates=dates, assets=("USD", "B"), prices=prices, quote="USD")
    with pytest.raises(InputError, match="non-positive"):
        PriceTable(dates=dates, assets=("A", "B"),
                   prices=np.array([[1.0, 1.0], [1.0, -0.5], [1.0, 1.0]]))


def test_unsupported_format(tmp_path):
    with pytest.raises(InputError, match="format"):
        load_price_table(write(tmp_path, WELL_FORMED), fmt="parquet")
