"""Market-factor regression, residual correlations, component histograms."""

from __future__ import annotations

import numpy as np
import pytest

from rmtbasket import (
    CorrelationMatrix,
    Eigensignal,
    InputError,
    NumericError,
    ReturnPanel,
    component_histogram,
    correlation_matrix,
    decompose,
    leading_eigensignal,
    mp_bounds,
    bulk_occupancy,
    normalize_rows,
    remove_market_factor,
    residual_correlation,
    seeded_rng,
    variance_split,
)

from conftest import iid_returns, one_factor_returns, uniform_correlation


def factor_fixture(n=99, t=1278, c=0.5, seed=0):
    g = normalize_rows(one_factor_returns(n, t, c, seed))
    returns = ReturnPanel(g=g)
    dec = decompose(correlation_matrix(returns))
    market = leading_eigensignal(returns, dec)
    return returns, dec, market


def test_exact_linear_series():
    x = normalize_rows(seeded_rng(3).standard_normal((1, 300)))[0]
    returns = ReturnPanel(g=x[None, :])
    market = Eigensignal(index=0, values=x / 2.0)
    reg = remove_market_factor(returns, market)
    assert abs(reg.loadings[0] - 2.0) <= 1e-12
    assert abs(reg.intercepts[0]) <= 1e-12
    assert np.abs(reg.residuals).max() <= 1e-12


def test_independent_series_have_tiny_loadings():
    rng = seeded_rng(12)
    g = normalize_rows(rng.standard_normal((20, 1000)))
    market = Eigensignal(index=0, values=rng.standard_normal(1000))
    reg = remove_market_factor(ReturnPanel(g=g), market)
    assert np.abs(reg.loadings).max() <= 3.0 / np.sqrt(1000)


@pytest.mark.parametrize("seed", range(5))
def test_planted_loadings_are_recovered(seed):
    n, t, noise = 50, 2000, 0.5
    rng = seeded_rng(seed)
    beta = 0.3 + 0.6 * rng.random(n)
    factor = rng.standard_normal(t)
    raw = beta[:, None] * factor[None, :] + noise * rng.standard_normal((n, t))
    returns = ReturnPanel(g=normalize_rows(raw))
    dec = decompose(correlation_matrix(returns))
    reg = remove_market_factor(returns, leading_eigensignal(returns, dec))
    # per-series normalization rescales the planted loading to beta/sigma;
    # that rescaled value is what the regression should recover
    planted = beta / np.sqrt(beta**2 + noise**2)
    assert np.corrcoef(reg.loadings, planted)[0, 1] >= 0.99
    assert np.corrcoef(reg.loadings, beta)[0, 1] >= 0.95


def test_ols_normal_equations_hold():
    returns, dec, market = factor_fixture()
    reg = remove_market_factor(returns, market)
    zc = market.values - market.values.mean()
    cross = (reg.residuals * zc[None, :]).mean(axis=1)
    assert np.abs(cross).max() <= 1e-10
    assert np.abs(reg.residuals.mean(axis=1)).max() <= 1e-10


def test_variance_decomposition_identity():
    returns, dec, market = factor_fixture(n=40, t=800, c=0.4, seed=5)
    reg = remove_market_factor(returns, market)
    split = variance_split(reg, market)
    assert np.abs(split - 1.0).max() <= 1e-8
    assert ((reg.r_squared() >= -1e-12) & (reg.r_squared() <= 1.0 + 1e-12)).all()


def test_zero_variance_regressor_rejected():
    g = normalize_rows(iid_returns(3, 100, seed=1))
    dead = Eigensignal(index=0, values=np.zeros(100))
    with pytest.raises(NumericError, match="zero variance"):
        remove_market_factor(ReturnPanel(g=g), dead)


def test_length_mismatch_rejected():
    g = normalize_rows(iid_returns(3, 100, seed=1))
    with pytest.raises(InputError, match="length"):
        remove_market_factor(ReturnPanel(g=g), Eigensignal(index=0, values=np.zeros(99)))


def test_residual_correlation_of_orthogonal_inputs_is_near_identity():
    rng = seeded_rng(6)
    t = 2000
    g = normalize_rows(rng.standard_normal((30, t)))
    market = Eigensignal(index=0, values=rng.standard_normal(t))
    reg = remove_market_factor(ReturnPanel(g=g), market)
    res = residual_correlation(reg)
    assert res.kind == "residual"
    assert np.abs(res.offdiagonal()).max() <= 5.0 / np.sqrt(t)


def test_residual_correlation_is_valid_correlation_matrix():
    returns, dec, market = factor_fixture(n=30, t=600, c=0.6, seed=2)
    reg = remove_market_factor(returns, market)
    res = residual_correlation(reg)
    assert np.abs(np.diag(res.values) - 1.0).max() <= 1e-12
    assert abs(np.trace(res.values) - res.n) <= 1e-10
    assert np.abs(res.values - res.values.T).max() <= 1e-14
    assert decompose(res).eigenvalues.min() >= -1e-10


def test_residual_correlation_rejects_fully_explained_series():
    x = normalize_rows(seeded_rng(3).standard_normal((2, 300)))
    returns = ReturnPanel(g=x, assets=("AAA", "BBB"))
    market = Eigensignal(index=0, values=x[0])
    reg = remove_market_factor(returns, market)
    with pytest.raises(NumericError, match="AAA"):
        residual_correlation(reg)


@pytest.mark.parametrize("seed", range(8))
def test_market_removal_deflates_planted_factor(seed):
    n, t, c = 99, 1278, 0.5
    returns, dec, market = factor_fixture(n=n, t=t, c=c, seed=seed)
    edge = mp_bounds(t, n, 1.0)
    assert bulk_occupancy(dec, edge).above == 1  # one far outlier before removal
    reg = remove_market_factor(returns, market)
    dec_res = decompose(residual_correlation(reg))
    occ = bulk_occupancy(dec_res, edge)
    assert dec_res.lambda_max < 1.25 * edge.lambda_plus
    assert dec_res.lambda_max < 0.1 * dec.lambda_max
    assert occ.above <= 3
    assert occ.inside_fraction >= 0.9


def test_component_histogram_uniform_eigenvector():
    n = 99
    dec = decompose(CorrelationMatrix(values=uniform_correlation(n, 0.5)))
    top = dec.vector(1)
    assert np.abs(top - 1.0 / np.sqrt(n)).max() <= 1e-10
    hist = component_histogram(dec, which=1, bins=11)
    assert hist.total == n
    # all mass in the single bin containing 1/sqrt(N)
    assert hist.counts.max() == n


def test_component_histogram_all_components_moments():
    n = 99
    g = normalize_rows(iid_returns(n, 1277, seed=4))
    dec = decompose(correlation_matrix(ReturnPanel(g=g)))
    hist = component_histogram(dec, which="all")
    assert hist.total == n * n
    values = dec.eigenvectors.ravel()
    assert abs(values.mean()) <= 0.02  # sign convention leaves a small positive bias
    assert abs(values.var() - 1.0 / n) <= 1e-3  # orthonormality fixes sum of squares
    assert abs(float(np.sum(hist.density * hist.widths)) - 1.0) <= 1e-12


def test_component_histogram_explicit_edges_must_cover():
    dec = decompose(CorrelationMatrix(values=uniform_correlation(5, 0.2)))
    with pytest.raises(InputError, match="cover"):
        component_histogram(dec, which="all", bins=np.linspace(-0.1, 0.1, 5))
