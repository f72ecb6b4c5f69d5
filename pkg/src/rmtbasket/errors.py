"""Exception taxonomy shared by the library and the CLI.

The CLI maps these onto exit codes: usage problems exit 1 (handled by the
argument parser), ``InputError`` exits 2, ``NumericError`` exits 3.
"""

from __future__ import annotations


class RmtBasketError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RmtBasketError):
    """Invalid or inconsistent user input: files, cells, flags, selectors."""


class NumericError(RmtBasketError):
    """Numeric breakdown during analysis: degenerate series, non-convergence,
    non-finite intermediate values."""
