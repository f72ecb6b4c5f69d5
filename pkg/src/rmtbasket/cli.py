"""Command-line interface.

Four subcommands, each writing a self-describing artifact set (CSV/JSON plus
rendered PNG figures) and a manifest into --out-dir:

* ``spectrum``  — correlation spectrum of one base: eigenvalues, matrix-element
  and eigenvector-component histograms, Marchenko-Pastur overlay, optionally
  the market-mode-removed residual equivalents.
* ``ladder``    — largest eigenvalue for every asset base plus the quote and a
  fictitious base, comparability-scaled onto a common dimension.
* ``rolling``   — largest-eigenvalue tracks in a rolling window, optionally
  with capitalization shares.
* ``surrogate`` — seeded null-model panels exported as ingestible price CSVs.

Exit codes: 1 usage, 2 input validation, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import InputError, NumericError
from .manifest import build_manifest, write_manifest
from .market_data import (
    MISSING_POLICIES,
    REJECT_INCOMPLETE,
    PriceTable,
    align_and_filter,
    load_price_table,
    write_price_table,
)
from .market_mode import component_histogram, remove_market_factor, residual_correlation
from .rebase import KIND_ASSET, KIND_QUOTE, BaseSelector, parse_base, rebase
from .rmt import SIGMA_FIXED_UNIT, SIGMA_MODES, bulk_occupancy, comparability_scale, fit_sigma, overlay_curve
from .rolling import RollingConfig, capitalization_shares, rolling_lambda_max
from .spectra import (
    CorrelationMatrix,
    ReturnPanel,
    SpectralDecomposition,
    compute_returns,
    correlation_matrix,
    decompose,
    element_histogram,
    leading_eigensignal,
)
from .surrogates import KIND_ONE_FACTOR, SURROGATE_KINDS, SurrogateSpec, export_surrogate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; remap to 1 to keep 2 for input
    validation."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value))


def _cell(value: Any) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return _fmt(value)


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(c) for c in row])


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _base_payload(base: BaseSelector, quote: str) -> dict:
    return {
        "kind": base.kind,
        "asset_id": base.asset_id,
        "seed": base.seed,
        "label": base.label(quote),
    }


def _load_table(args: argparse.Namespace) -> PriceTable:
    table = load_price_table(args.input, caps_path=getattr(args, "caps", None))
    return align_and_filter(table, args.missing_policy)


def _spectrum_artifacts(
    out: Path,
    prefix: str,
    matrix: CorrelationMatrix,
    dec: SpectralDecomposition,
    returns: ReturnPanel,
    base: BaseSelector,
    quote: str,
    args: argparse.Namespace,
) -> None:
    """One full artifact set (raw or residual) for the spectrum report."""
    ref = fit_sigma(dec, returns.n_obs, args.sigma_mode)
    occupancy = bulk_occupancy(dec, ref)
    payload = {
        "base": _base_payload(base, quote),
        "kind": matrix.kind,
        "N": dec.n,
        "T": returns.n_obs,
        "tau": returns.tau,
        "eigenvalues": [float(v) for v in dec.eigenvalues],
        "explained_fraction": dec.explained_fraction,
        "mp": {
            "sigma_mode": args.sigma_mode,
            "sigma_w": ref.sigma_w,
            "q": ref.q,
            "lambda_minus": ref.lambda_minus,
            "lambda_plus": ref.lambda_plus,
            "occupancy": {
                "below": occupancy.below,
                "inside": occupancy.inside,
                "above": occupancy.above,
            },
        },
    }
    if args.eigenvectors:
        payload["eigenvectors"] = [[float(x) for x in col] for col in dec.eigenvectors.T]
    _write_json(out / f"{prefix}eigenvalues.json", payload)

    elem = element_histogram(matrix, bins=args.bins)
    _write_csv(out / f"{prefix}element_histogram.csv",
               ["bin_left", "bin_right", "density"], elem.rows())

    assets = returns.assets or tuple(f"series {i}" for i in range(dec.n))
    comp_rows = []
    for rank in (1, 2):
        vec = dec.vector(rank)
        comp_rows.extend((str(rank), assets[j], vec[j]) for j in range(dec.n))
    _write_csv(out / f"{prefix}eigvec_components.csv",
               ["rank", "asset", "component"], comp_rows)

    comp_hist = component_histogram(dec, "all", bins=args.bins)
    _write_csv(out / f"{prefix}component_histogram.csv",
               ["bin_left", "bin_right", "density"], comp_hist.rows())

    grid, dens = overlay_curve(ref)
    _write_csv(out / f"{prefix}mp_overlay.csv", ["lambda", "density"],
               list(zip(grid, dens)))

    if not args.no_figures:
        from . import figures

        label = base.label(quote)
        title = f"{matrix.kind} / base {label}"
        figures.spectrum_figure(out / f"{prefix}spectrum.png", dec, ref, title)
        figures.histogram_figure(
            out / f"{prefix}element_histogram.png", elem,
            f"off-diagonal correlation entries ({title})", "correlation coefficient",
        )
        all_components = dec.eigenvectors.ravel()
        figures.histogram_figure(
            out / f"{prefix}component_histogram.png", comp_hist,
            f"eigenvector components ({title})", "component",
            gaussian_fit=(float(all_components.mean()), float(all_components.std())),
        )
        figures.components_figure(
            out / f"{prefix}eigvec_components.png",
            {"v_max": dec.vector(1), "v_max-1": dec.vector(2)},
            f"leading eigenvector components ({title})",
        )


def cmd_spectrum(args: argparse.Namespace) -> None:
    out = Path(args.out_dir)
    table = _load_table(args)
    base = parse_base(args.base, args.seed)
    panel = rebase(table, base)
    returns = compute_returns(panel, tau=args.tau)
    matrix = correlation_matrix(returns)
    dec = decompose(matrix)
    _spectrum_artifacts(out, "", matrix, dec, returns, base, table.quote, args)

    if args.remove_market:
        market = leading_eigensignal(returns, dec)
        reg = remove_market_factor(returns, market)
        _write_json(out / "market_factor.json", {
            "base": _base_payload(base, table.quote),
            "a": [float(v) for v in reg.intercepts],
            "b": [float(v) for v in reg.loadings],
            "r_squared": [float(v) for v in reg.r_squared()],
        })
        residual = residual_correlation(reg)
        dec_res = decompose(residual)
        _spectrum_artifacts(out, "residual_", residual, dec_res, returns, base, table.quote, args)

    write_manifest(out, _manifest_for(args, {"input": args.input}))


def cmd_ladder(args: argparse.Namespace) -> None:
    out = Path(args.out_dir)
    if args.seed is None:
        raise InputError("ladder includes a fictitious base and requires --seed")
    table = _load_table(args)
    target_n = table.n_assets - 1  # asset-base matrix dimension
    bases = [BaseSelector(kind=KIND_ASSET, asset_id=a) for a in table.assets]
    bases.append(BaseSelector(kind=KIND_QUOTE))
    bases.append(parse_base("fict", args.seed))
    rows = []
    for base in bases:
        returns = compute_returns(rebase(table, base), tau=args.tau)
        dec = decompose(correlation_matrix(returns))
        ref = fit_sigma(dec, returns.n_obs, SIGMA_FIXED_UNIT)
        rows.append({
            "base": base.label(table.quote),
            "kind": base.kind,
            "n_series": dec.n,
            "lambda_max": dec.lambda_max,
            "lambda_max_scaled": comparability_scale(dec.lambda_max, dec.n, target_n),
            "lambda_plus": ref.lambda_plus,
        })
    rows.sort(key=lambda r: r["lambda_max_scaled"])
    _write_csv(
        out / "ladder.csv",
        ["base", "kind", "n_series", "lambda_max", "lambda_max_scaled", "lambda_plus"],
        [
            (r["base"], r["kind"], str(r["n_series"]), r["lambda_max"],
             r["lambda_max_scaled"], r["lambda_plus"])
            for r in rows
        ],
    )
    if not args.no_figures:
        from . import figures

        figures.ladder_figure(out / "ladder.png", rows, "largest eigenvalue per base")
    write_manifest(out, _manifest_for(args, {"input": args.input}))


def cmd_rolling(args: argparse.Namespace) -> None:
    out = Path(args.out_dir)
    table = _load_table(args)
    bases = tuple(parse_base(b, args.seed) for b in args.base)
    config = RollingConfig(window=args.window, step=args.step, tau=args.tau, bases=bases)
    series = rolling_lambda_max(table, config)

    combined = []
    for s in series:
        per_base = [
            (d.isoformat(), lam, s.lambda_plus,
             above if math.isnan(above) else int(above))
            for d, lam, above in zip(s.end_dates, s.lambda_max, s.n_above_bulk)
        ]
        _write_csv(out / f"rolling_{s.label}.csv",
                   ["end_date", "lambda_max", "lambda_plus", "n_above_bulk"], per_base)
        combined.extend((s.label, *row) for row in per_base)
    _write_csv(out / "rolling.csv",
               ["base", "end_date", "lambda_max", "lambda_plus", "n_above_bulk"], combined)

    shares = None
    if args.shares:
        wanted = [t.strip() for t in args.shares.split(",") if t.strip()]
        shares = capitalization_shares(table, config, wanted)
        header = ["end_date", "total", *[f"share_{a}" for a in shares.assets]]
        rows = [
            (d.isoformat(), tot, *[float(shares.fractions[i, k]) for i in range(len(shares.assets))])
            for k, (d, tot) in enumerate(zip(shares.end_dates, shares.totals))
        ]
        _write_csv(out / "cap_shares.csv", header, rows)

    if not args.no_figures:
        from . import figures

        figures.rolling_figure(out / "rolling.png", series, shares,
                               f"rolling largest eigenvalue (window={args.window}, step={args.step})")
    write_manifest(out, _manifest_for(args, {"input": args.input}))


def cmd_surrogate(args: argparse.Namespace) -> None:
    out = Path(args.out_dir)
    spec = SurrogateSpec(
        kind=args.kind,
        n_series=args.n,
        n_obs=args.t,
        seed=args.seed,
        factor_loading=args.factor_loading,
    )
    table = export_surrogate(spec)
    write_price_table(table, out / "surrogate_panel.csv")
    write_manifest(out, _manifest_for(args, {}))


def _manifest_for(args: argparse.Namespace, inputs: dict[str, str]) -> dict:
    skip = {"func", "command", "argv"}
    existing = {name: path for name, path in inputs.items() if path is not None}
    if getattr(args, "caps", None):
        existing["caps"] = args.caps
    parameters = {
        k: v for k, v in vars(args).items() if k not in skip and k not in existing
    }
    seeds = {}
    if getattr(args, "seed", None) is not None:
        seeds["seed"] = args.seed
    return build_manifest(args.command, parameters, existing, seeds, argv=args.argv)


def _add_common(parser: argparse.ArgumentParser, caps: bool = False) -> None:
    parser.add_argument("--input", required=True, help="price table CSV (date,<ticker>,...)")
    if caps:
        parser.add_argument("--caps", default=None,
                            help="companion capitalization CSV, same dates and tickers")
    parser.add_argument("--missing-policy", choices=MISSING_POLICIES, default=REJECT_INCOMPLETE,
                        help="how to resolve missing cells (default: %(default)s)")
    parser.add_argument("--tau", type=int, default=1, help="return lag in days (default: 1)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for the fictitious base (required with fict)")
    parser.add_argument("--out-dir", required=True, help="artifact output directory")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def build_parser() -> _Parser:
    parser = _Parser(prog="rmtbasket",
                     description="Random-matrix spectral analysis of an asset basket "
                                 "under base-currency rebasing.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="correlation spectrum for one base")
    _add_common(p)
    p.add_argument("--base", default="quote", help="base: 'quote', a ticker, or 'fict'")
    p.add_argument("--remove-market", action="store_true",
                   help="also emit the residual (market-mode-removed) artifact set")
    p.add_argument("--sigma-mode", choices=SIGMA_MODES, default=SIGMA_FIXED_UNIT,
                   help="Marchenko-Pastur scale fit (default: %(default)s)")
    p.add_argument("--bins", type=int, default=40, help="histogram bin count (default: 40)")
    p.add_argument("--eigenvectors", action="store_true",
                   help="embed eigenvector components in eigenvalues.json")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("ladder", help="largest eigenvalue for every base")
    _add_common(p)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("rolling", help="rolling-window largest-eigenvalue tracks")
    _add_common(p, caps=True)
    p.add_argument("--base", action="append", required=True,
                   help="base to track; repeat the flag for several")
    p.add_argument("--window", type=int, default=182, help="window length in days (default: 182)")
    p.add_argument("--step", type=int, default=1, help="window step in days (default: 1)")
    p.add_argument("--shares", default=None,
                   help="comma-separated tickers for capitalization shares (needs --caps)")
    p.set_defaults(func=cmd_rolling)

    p = sub.add_parser("surrogate", help="generate a seeded surrogate panel CSV")
    p.add_argument("--kind", choices=SURROGATE_KINDS, required=True)
    p.add_argument("--n", type=int, required=True, help="number of series")
    p.add_argument("--t", type=int, required=True, help="number of return observations")
    p.add_argument("--seed", type=int, required=True, help="generator seed (mandatory)")
    p.add_argument("--factor-loading", type=float, default=None,
                   help="planted correlation c in [0,1) for one-factor")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_surrogate)
    return parser


def main(argv: list[str] | None = None) -> int:
    raw_argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(raw_argv)
    args.argv = ["rmtbasket", *raw_argv]
    try:
        args.func(args)
    except InputError as exc:
        print(f"rmtbasket: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"rmtbasket: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
