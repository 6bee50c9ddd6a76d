"""Truncated power series arithmetic.

Oracles: closed-form coefficient sequences (geometric series, exp of a
logarithm) and round-trip identities that pair ts_exp with ts_log and
ts_mul with hand convolution.
"""

from fractions import Fraction

import pytest

from cyclemeter.errors import UsageError
from cyclemeter.series import (BivariateSeries, TruncatedSeries, bv_exp_wg,
                               ts_exp, ts_log, ts_mul)


def harmonic_log_series(theta, order):
    # g(t) = theta * log(1/(1-t)) truncated: coefficients theta/k.
    coeffs = [Fraction(0)] + [Fraction(theta) / k for k in range(1, order + 1)]
    return TruncatedSeries.exact(coeffs)


def test_exp_of_two_log_gives_integers():
    # exp(2 log(1/(1-t))) = (1-t)^{-2} = sum (n+1) t^n.
    g = harmonic_log_series(2, 12)
    h = ts_exp(g)
    assert list(h.coeffs) == [Fraction(n + 1) for n in range(13)]


def test_exp_of_log_is_geometric():
    g = harmonic_log_series(1, 9)
    h = ts_exp(g)
    assert list(h.coeffs) == [Fraction(1)] * 10


def test_exp_double_matches_exact():
    g_exact = harmonic_log_series(Fraction(1, 3), 20)
    g_double = TruncatedSeries.double([float(c) for c in g_exact.coeffs])
    h_exact = ts_exp(g_exact)
    h_double = ts_exp(g_double)
    for n in range(21):
        assert abs(h_double[n] - float(h_exact[n])) <= 1e-13 * float(h_exact[n])


def test_log_exp_round_trip():
    coeffs = [Fraction(0)]
    state = 17
    for _ in range(15):
        state = (state * 48271) % 2147483647
        coeffs.append(Fraction(state % 19 - 9, (state % 7) + 1))
    g = TruncatedSeries.exact(coeffs)
    assert list(ts_log(ts_exp(g)).coeffs) == coeffs


def test_mul_matches_hand_convolution():
    a = TruncatedSeries.exact([1, 2, 3])
    b = TruncatedSeries.exact([4, 0, 5])
    prod = ts_mul(a, b)
    # (1 + 2t + 3t^2)(4 + 5t^2) truncated at t^2.
    assert list(prod.coeffs) == [Fraction(4), Fraction(8), Fraction(17)]


def test_mul_double():
    a = TruncatedSeries.double([1.0, 2.0, 3.0])
    b = TruncatedSeries.double([4.0, 0.0, 5.0])
    prod = ts_mul(a, b)
    assert prod.coeffs[2] == pytest.approx(17.0, abs=0)


def test_exp_requires_zero_constant_term():
    with pytest.raises(UsageError):
        ts_exp(TruncatedSeries.exact([1, 1]))


def test_log_requires_unit_constant_term():
    with pytest.raises(UsageError):
        ts_log(TruncatedSeries.exact([2, 1]))


def test_mul_rejects_mixed_kinds():
    a = TruncatedSeries.exact([1, 1])
    b = TruncatedSeries.double([1.0, 1.0])
    with pytest.raises(UsageError):
        ts_mul(a, b)


def test_index_out_of_range():
    a = TruncatedSeries.exact([1, 1])
    with pytest.raises(UsageError):
        a[2]


def test_bivariate_unit_weights_row_two():
    # exp(w log(1/(1-t))): t^2 coefficient is w/2 + w^2/2.
    g = harmonic_log_series(1, 4)
    biv = bv_exp_wg(g)
    assert biv.w_coeff(2, 1) == Fraction(1, 2)
    assert biv.w_coeff(2, 2) == Fraction(1, 2)
    assert biv.w_coeff(2, 0) == 0


def test_bivariate_rows_sum_to_univariate():
    # Setting w = 1 recovers exp(g).
    g = harmonic_log_series(Fraction(3, 2), 8)
    biv = bv_exp_wg(g)
    h = ts_exp(g)
    for n in range(9):
        assert sum(biv.row(n)) == h[n]


def test_bivariate_w_degree_bound():
    g = harmonic_log_series(2, 6)
    biv = bv_exp_wg(g)
    assert biv.w_coeff(3, 4) == 0
    assert biv.w_coeff(6, 6) == Fraction(2, 1) ** 6 / Fraction(720)


def test_bivariate_double_matches_exact():
    g_exact = harmonic_log_series(Fraction(5, 4), 12)
    g_double = TruncatedSeries.double([float(c) for c in g_exact.coeffs])
    be = bv_exp_wg(g_exact)
    bd = bv_exp_wg(g_double)
    for n in range(13):
        for k in range(n + 1):
            ref = float(be.w_coeff(n, k))
            assert abs(bd.w_coeff(n, k) - ref) <= 1e-12 * max(1.0, abs(ref))
