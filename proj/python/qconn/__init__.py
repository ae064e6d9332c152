"""Exact p-adic analysis of quantum connections.

Thin wrapper over the compiled module: scalars cross the boundary as strings
in "a" or "a/b" form; the helpers here convert to fractions.Fraction.
"""

from fractions import Fraction

from ._qconn import (  # noqa: F401
    QconnError,
    __version__,
    bgamma_cohomology,
    block_split,
    build_connection_file,
    check_log_decay,
    covariant_derivative,
    diag_class_trials,
    equivariant_cohomology_file,
    extend_endomorphism,
    factorial_valuation,
    mod_p_reduction_degree,
    newton_polygon,
    reduce_mod,
    reference_series,
    ring_summary,
    slope_floor,
    split_file,
    theta_squared,
    valuation,
)


def fractions(strings):
    """Convert a list of scalar strings to Fractions."""
    return [Fraction(s) for s in strings]


def reference_fractions(name, order):
    """reference_series with Fraction output."""
    return fractions(reference_series(name, order))


def matrix_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]
