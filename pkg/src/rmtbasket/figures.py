"""Matplotlib renderings of the report artifacts.

Every function writes one PNG next to the delimited output it mirrors. The
plots are working views of the exact series the CSV/JSON files carry, not
publication styling; all rendering goes through the Agg backend so the CLI
works headless.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .rmt import MPReference, overlay_curve
from .rolling import CapitalizationShares, RollingSeries
from .spectra import Histogram, SpectralDecomposition

_RC = {
    "figure.dpi": 130,
    "savefig.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def spectrum_figure(
    path: str | Path,
    dec: SpectralDecomposition,
    ref: MPReference,
    title: str,
) -> Path:
    """Eigenvalue density against the Marchenko-Pastur curve.

    Left: bulk region with the fitted curve. Right: the whole spectrum, where
    the outliers live.
    """
    with plt.rc_context(_RC):
        fig, (ax_bulk, ax_full) = plt.subplots(1, 2, figsize=(9, 3.4))
        w = dec.eigenvalues
        grid, dens = overlay_curve(ref)
        hi = max(ref.lambda_plus * 1.15, 1e-9)
        bulk = w[w <= hi]
        if bulk.size:
            ax_bulk.hist(bulk, bins=40, range=(0.0, hi), density=False,
                         weights=np.full(bulk.size, 1.0 / (w.size * (hi / 40))),
                         color="#4878b0", alpha=0.75, label="eigenvalues")
        ax_bulk.plot(grid, dens, "k--", lw=1.2, label="Marchenko-Pastur")
        ax_bulk.axvline(ref.lambda_plus, color="crimson", lw=0.8, ls=":")
        ax_bulk.set_xlabel("eigenvalue")
        ax_bulk.set_ylabel("density")
        ax_bulk.set_title(f"{title}: bulk (Q={ref.q:.3f}, sigma_w={ref.sigma_w:.4f})")
        ax_bulk.legend()

        ax_full.hist(w, bins=60, color="#4878b0", alpha=0.75)
        ax_full.axvline(ref.lambda_plus, color="crimson", lw=0.8, ls=":", label="bulk edge")
        ax_full.set_xlabel("eigenvalue")
        ax_full.set_ylabel("count")
        ax_full.set_title(f"{title}: full spectrum (max={w[-1]:.2f})")
        ax_full.legend()
        return _save(fig, path)


def histogram_figure(
    path: str | Path,
    hist: Histogram,
    title: str,
    xlabel: str,
    gaussian_fit: tuple[float, float] | None = None,
) -> Path:
    """Step plot of a density histogram, optionally with a Gaussian overlay."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.stairs(hist.density, hist.edges, fill=True, color="#4878b0", alpha=0.7)
        if gaussian_fit is not None:
            mu, sigma = gaussian_fit
            if sigma > 0:
                x = np.linspace(hist.edges[0], hist.edges[-1], 400)
                ax.plot(
                    x,
                    np.exp(-((x - mu) ** 2) / (2 * sigma**2)) / (sigma * math.sqrt(2 * math.pi)),
                    "k--", lw=1.2, label=f"Gaussian fit (mu={mu:.3g}, sigma={sigma:.3g})",
                )
                ax.legend()
        ax.set_xlabel(xlabel)
        ax.set_ylabel("density")
        ax.set_title(title)
        return _save(fig, path)


def components_figure(
    path: str | Path,
    vectors: dict[str, np.ndarray],
    title: str,
) -> Path:
    """Eigenvector components by series index, one panel per vector."""
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(len(vectors), 1, figsize=(7, 2.2 * len(vectors)),
                                 sharex=True, squeeze=False)
        for ax, (name, vec) in zip(axes[:, 0], vectors.items()):
            ax.bar(np.arange(vec.size), vec, width=0.9, color="#4878b0")
            ax.axhline(0.0, color="k", lw=0.6)
            ax.set_ylabel(name)
        axes[-1, 0].set_xlabel("series index")
        axes[0, 0].set_title(title)
        return _save(fig, path)


def ladder_figure(path: str | Path, rows: list[dict], title: str) -> Path:
    """Sorted largest-eigenvalue ladder across bases; rows as in ladder.csv."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7, 3.6))
        ordered = sorted(rows, key=lambda r: r["lambda_max_scaled"])
        xs = np.arange(len(ordered))
        kinds = {"asset": "#4878b0", "quote": "#d1622b", "fictitious": "#3d9970"}
        for kind, color in kinds.items():
            pts = [(x, r["lambda_max_scaled"]) for x, r in zip(xs, ordered) if r["kind"] == kind]
            if pts:
                ax.scatter(*zip(*pts), s=14, color=color, label=kind)
        edges = sorted({r["lambda_plus"] for r in ordered})
        for e in edges:
            ax.axhline(e, color="k", ls=":", lw=0.8)
        for x, r in zip(xs, ordered):
            if r["kind"] != "asset" or x == 0 or x == len(ordered) - 1:
                ax.annotate(r["base"], (x, r["lambda_max_scaled"]),
                            textcoords="offset points", xytext=(0, 4), fontsize=7,
                            rotation=90, ha="center")
        ax.set_xlabel("base rank")
        ax.set_ylabel("largest eigenvalue (comparability-scaled)")
        ax.set_title(title)
        ax.legend()
        return _save(fig, path)


def rolling_figure(
    path: str | Path,
    series: list[RollingSeries],
    shares: CapitalizationShares | None,
    title: str,
) -> Path:
    """Largest-eigenvalue tracks per base, with optional capitalization panel."""
    with plt.rc_context(_RC):
        nrows = 2 if shares is not None else 1
        fig, axes = plt.subplots(nrows, 1, figsize=(8, 3.2 * nrows), sharex=True,
                                 squeeze=False)
        ax = axes[0, 0]
        for s in series:
            ax.plot(s.end_dates, s.lambda_max, lw=1.0, label=s.label)
        for edge in sorted({s.lambda_plus for s in series}):
            ax.axhline(edge, color="k", ls=":", lw=0.8)
        ax.set_ylabel("largest eigenvalue")
        ax.set_title(title)
        ax.legend(ncol=min(len(series), 6))
        if shares is not None:
            ax2 = axes[1, 0]
            for name, frac in zip(shares.assets, shares.fractions):
                ax2.plot(shares.end_dates, frac, lw=1.0, label=name)
            ax2.set_ylabel("capitalization share")
            ax2.set_ylim(0, 1)
            ax2.legend(ncol=min(len(shares.assets), 6))
            ax_tot = ax2.twinx()
            ax_tot.plot(shares.end_dates, shares.totals, "k--", lw=0.9)
            ax_tot.set_ylabel("total capitalization")
            ax_tot.grid(False)
        axes[-1, 0].set_xlabel("window end date")
        fig.autofmt_xdate()
        return _save(fig, path)
