"""Python bindings for the labeled coupon collector library."""

from fractions import Fraction

from . import _core
from ._core import (
    LccpError,
    ccp_expected,
    ccp_expected_full,
    ccp_expected_partial,
    conjectured_2lccp_expected,
    expected_complete,
    harmonic,
    known_coupons,
    kp3_expected,
    kp_dist,
    min_samples,
    min_witness_k2,
    oracle_expected,
    parse_grid,
    run_cli,
    simulate,
    st1_expected,
    st1_tail,
    sweep_csv,
    t1_expected_series,
    tail_distribution,
    verify,
)


def expected_complete_exact(n, p):
    """Exact expectation for K(p); p may be a Fraction, int or decimal string."""
    p = Fraction(p)
    num, den = _core.expected_complete_exact(n, p.numerator, p.denominator)
    return Fraction(int(num), int(den))


__all__ = [name for name in dir() if not name.startswith("_") and name != "Fraction"]
