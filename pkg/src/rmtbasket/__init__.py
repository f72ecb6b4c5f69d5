"""Random-matrix spectral analysis of asset baskets under base-currency rebasing.

The pipeline: load a daily price table, express every series in a chosen base
(the quote currency, any asset, or a seeded fictitious currency), compute
normalized log returns and their correlation matrix, and compare the spectrum
against the Marchenko-Pastur bulk. On top of that sit market-mode removal,
surrogate null models, per-base eigenvalue ladders, and rolling-window
tracking of the largest eigenvalue.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import InputError, NumericError, RmtBasketError
from .market_data import (
    DROP_INCOMPLETE_ASSETS,
    MISSING_POLICIES,
    REJECT_INCOMPLETE,
    PriceTable,
    align_and_filter,
    load_price_table,
    write_price_table,
)
from .market_mode import (
    FactorRegression,
    component_histogram,
    remove_market_factor,
    residual_correlation,
    variance_split,
)
from .rebase import (
    KIND_ASSET,
    KIND_FICTITIOUS,
    KIND_QUOTE,
    RNG_NAME,
    BaseSelector,
    RebasedPanel,
    generate_fictitious_series,
    parse_base,
    rebase,
    seeded_rng,
)
from .rmt import (
    SIGMA_FIXED_UNIT,
    SIGMA_MODES,
    SIGMA_TRACE_COMPENSATED,
    BulkOccupancy,
    MPReference,
    bulk_occupancy,
    comparability_scale,
    fit_sigma,
    mp_bounds,
    mp_density,
    overlay_curve,
)
from .rolling import (
    CapitalizationShares,
    RollingConfig,
    RollingSeries,
    capitalization_shares,
    rolling_lambda_max,
)
from .spectra import (
    CorrelationMatrix,
    Eigensignal,
    Histogram,
    ReturnPanel,
    SpectralDecomposition,
    compute_returns,
    correlation_matrix,
    decompose,
    eigensignals,
    element_histogram,
    leading_eigensignal,
    normalize_rows,
)
from .surrogates import (
    KIND_FICT_BASE,
    KIND_IID,
    KIND_ONE_FACTOR,
    SURROGATE_KINDS,
    SurrogateSpec,
    export_surrogate,
    generate_fictitious_base_panel,
    generate_iid_panel,
    generate_one_factor_panel,
    generate_panel,
    panel_to_price_table,
)

__all__ = [
    "__version__",
    "RmtBasketError",
    "InputError",
    "NumericError",
    "PriceTable",
    "load_price_table",
    "write_price_table",
    "align_and_filter",
    "REJECT_INCOMPLETE",
    "DROP_INCOMPLETE_ASSETS",
    "MISSING_POLICIES",
    "BaseSelector",
    "RebasedPanel",
    "rebase",
    "parse_base",
    "generate_fictitious_series",
    "seeded_rng",
    "RNG_NAME",
    "KIND_QUOTE",
    "KIND_ASSET",
    "KIND_FICTITIOUS",
    "ReturnPanel",
    "CorrelationMatrix",
    "SpectralDecomposition",
    "Eigensignal",
    "Histogram",
    "compute_returns",
    "correlation_matrix",
    "decompose",
    "eigensignals",
    "leading_eigensignal",
    "element_histogram",
    "normalize_rows",
    "MPReference",
    "BulkOccupancy",
    "mp_bounds",
    "mp_density",
    "bulk_occupancy",
    "comparability_scale",
    "fit_sigma",
    "overlay_curve",
    "SIGMA_FIXED_UNIT",
    "SIGMA_TRACE_COMPENSATED",
    "SIGMA_MODES",
    "FactorRegression",
    "remove_market_factor",
    "residual_correlation",
    "component_histogram",
    "variance_split",
    "SurrogateSpec",
    "generate_iid_panel",
    "generate_one_factor_panel",
    "generate_fictitious_base_panel",
    "generate_panel",
    "panel_to_price_table",
    "export_surrogate",
    "SURROGATE_KINDS",
    "KIND_IID",
    "KIND_ONE_FACTOR",
    "KIND_FICT_BASE",
    "RollingConfig",
    "RollingSeries",
    "CapitalizationShares",
    "rolling_lambda_max",
    "capitalization_shares",
]
