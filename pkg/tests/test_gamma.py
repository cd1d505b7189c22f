import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lindeloef.errors import DomainError, PoleAtNonpositiveInteger
from lindeloef.gamma import gamma_abs_asymptotic, log_gamma, log_gamma_abs_asymptotic
from lindeloef.zeta import SPoint


def test_integer_and_half_integer_values():
    assert log_gamma(5) == pytest.approx(math.log(24), abs=1e-14)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)
    assert log_gamma(1).real == pytest.approx(0.0, abs=1e-15)


def test_reflection_modulus_on_half_line():
    # |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    expected = 0.5 * (math.log(math.pi) - (10 * math.pi + math.log1p(math.exp(-20 * math.pi)) - math.log(2)))
    assert log_gamma(complex(0.5, 10)).real == pytest.approx(expected, rel=1e-13)


# principal-branch values from mpmath.loggamma at 40 digits
FROZEN = [
    (complex(0.5, 10), complex(-14.789024734744293451, 13.030020034911089851)),
    (complex(-3.5, 2), complex(-6.4200913945756578534, -9.7119076581964872305)),
    (complex(0.1, -1e6), complex(-1570800.934060586600262145, -12815509.92964570505281598)),
]


@pytest.mark.parametrize("s, expected", FROZEN)
def test_frozen_branch_values(s, expected):
    got = log_gamma(s)
    assert abs(got.real - expected.real) <= 1e-12 * max(1.0, abs(expected.real))
    assert abs(got.imag - expected.imag) <= 1e-12 * max(1.0, abs(expected.imag))


def test_accepts_spoint():
    assert log_gamma(SPoint(0.5, 10)) == log_gamma(complex(0.5, 10))


@pytest.mark.parametrize("s", [0, -1, -7, complex(-3, 0)])
def test_poles(s):
    with pytest.raises(PoleAtNonpositiveInteger):
        log_gamma(s)


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        log_gamma(complex(math.inf, 0))


@settings(max_examples=150, deadline=None)
@given(
    st.floats(min_value=-10, max_value=10, allow_nan=False),
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
)
def test_matches_mpmath(sigma, t):
    s = complex(sigma, t)
    if t == 0 and sigma <= 0 and sigma == math.floor(sigma):
        return
    expected = complex(mpmath.loggamma(mpmath.mpc(sigma, t)))
    got = log_gamma(s)
    assert abs(got.real - expected.real) <= 1e-12 * max(1.0, abs(expected.real))
    assert abs(got.imag - expected.imag) <= 1e-12 * max(1.0, abs(expected.imag))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.5, max_value=5), st.floats(min_value=1, max_value=50))
def test_recurrence(sigma, t):
    s = complex(sigma, t)
    lhs = cmath.exp(log_gamma(s + 1) - log_gamma(s))
    assert abs(lhs - s) <= 1e-11 * abs(s)


def test_asymptotic_examples():
    assert gamma_abs_asymptotic(0.5, 10) == pytest.approx(math.sqrt(2 * math.pi) * math.exp(-5 * math.pi), rel=1e-14)
    assert gamma_abs_asymptotic(2, 1) == pytest.approx(math.sqrt(2 * math.pi) * math.exp(-math.pi / 2), rel=1e-14)
    assert gamma_abs_asymptotic(0.5, -10) == gamma_abs_asymptotic(0.5, 10)


def test_asymptotic_underflows_to_zero():
    assert gamma_abs_asymptotic(0.5, 1e4) == 0.0
    assert math.isfinite(log_gamma_abs_asymptotic(0.5, 1e4))


def test_asymptotic_rejects_small_t():
    with pytest.raises(DomainError):
        gamma_abs_asymptotic(0.5, 0.5)


@pytest.mark.parametrize("t", [10.0, 1e2, 1e3, 1e4])
@pytest.mark.parametrize("sigma", [0.0, 0.5, 1.0, 2.0])
def test_asymptotic_ratio_within_one_over_t(sigma, t):
    log_ratio = log_gamma(complex(sigma, t)).real - log_gamma_abs_asymptotic(sigma, t)
    assert abs(math.expm1(log_ratio)) <= 1.0 / t
