import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from meub.errors import DomainError
from meub.special_fn import erf, erfc, log_gamma, std_normal_cdf


@pytest.mark.parametrize(
    "x, expected",
    [
        (0.5, 0.5 * math.log(math.pi)),
        (5.0, math.log(24.0)),
        (1.5, math.log(math.sqrt(math.pi) / 2.0)),
    ],
)
def test_log_gamma_known_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_log_gamma_against_mpmath():
    for x in np.geomspace(1e-3, 1e3, 200):
        ref = float(mpmath.loggamma(mpmath.mpf(x)))
        assert abs(log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_nan_propagates():
    assert math.isnan(log_gamma(math.nan))
    assert math.isnan(erf(math.nan))
    assert math.isnan(std_normal_cdf(math.nan))


@given(st.floats(0.1, 100.0))
def test_log_gamma_recurrence(x):
    lhs = log_gamma(x + 1.0)
    assert abs(lhs - (log_gamma(x) + math.log(x))) <= 1e-12 * max(1.0, abs(lhs))


def test_erf_and_cdf_points():
    assert erf(0.0) == 0.0
    assert std_normal_cdf(0.0) == 0.5
    # adaptive quadrature of the normal pdf over (-inf, -0.5]
    assert std_normal_cdf(-0.5) == pytest.approx(0.3085375387259869, abs=1e-15)


def test_erf_against_mpmath():
    for x in np.linspace(-6, 6, 241):
        assert abs(erf(x) - float(mpmath.erf(x))) <= 1e-12
        assert abs(erfc(x) - float(mpmath.erfc(x))) <= 1e-12 * max(1.0, float(mpmath.erfc(x)))


@given(st.floats(-8.0, 8.0))
def test_erf_odd_and_cdf_symmetry(x):
    assert abs(erf(x) + erf(-x)) <= 1e-15
    assert abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-14


@given(st.floats(-8.0, 8.0))
def test_cdf_identity_chain(x):
    phi = std_normal_cdf(x)
    assert abs(phi - 0.5 * (1.0 + erf(x / math.sqrt(2.0)))) <= 1e-13
    assert abs(phi - 0.5 * erfc(-x / math.sqrt(2.0))) <= 1e-13


def test_far_lower_tail_keeps_relative_precision():
    ref = float(mpmath.ncdf(-30))
    assert std_normal_cdf(-30.0) == pytest.approx(ref, rel=1e-12)
