import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindeloef.errors import DomainError, TruncationTooLarge
from lindeloef.expsum import (
    f_sum_truncated,
    f_tail_bound,
    functional_eq_check,
    functional_eq_residual,
    functional_eq_rhs,
    phase_bound,
    phase_sum,
)
from lindeloef.zeta import Method, hurwitz_zeta

ZETA2 = math.pi**2 / 6


def test_phase_sum_examples():
    assert abs(phase_sum(4, 0.5)) <= 1e-15
    assert abs(phase_sum(2, 0.25) - complex(-1, 1)) <= 1e-15
    assert phase_sum(2.9, 0.25) == phase_sum(2, 0.25)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=10**4), st.floats(min_value=-3, max_value=3))
def test_phase_sum_matches_naive(x, omega):
    if omega == math.floor(omega):
        return
    # reduce k * omega mod 1 exactly so the oracle carries no phase drift
    num, den = omega.as_integer_ratio()
    frac = np.array([(k * num) % den / den for k in range(1, x + 1)])
    naive = complex(math.fsum(np.cos(2 * np.pi * frac)), math.fsum(np.sin(2 * np.pi * frac)))
    got = phase_sum(x, omega)
    assert abs(got - naive) <= 1e-10 * max(1.0, phase_bound(omega))
    assert abs(got) <= phase_bound(omega) * (1 + 1e-12)


def test_phase_sum_domain():
    with pytest.raises(DomainError):
        phase_sum(0.5, 0.3)
    with pytest.raises(DomainError):
        phase_sum(3, 2.0)
    assert phase_bound(0.5) == 1.0


def test_f_sum_absolute_convergence():
    r = f_sum_truncated(2, 0.3, 10**5)
    assert abs(r.value) <= ZETA2
    assert r.method is Method.DIRECT_SERIES
    assert r.abs_err_bound == f_tail_bound(2, 0.3, 10**5)


def test_f_sum_truncations_agree_within_bounds():
    s = complex(0.5, 10)
    a = f_sum_truncated(s, 0.3, 100)
    b = f_sum_truncated(s, 0.3, 10**4)
    assert abs(a.value - b.value) <= a.abs_err_bound + b.abs_err_bound


def test_f_sum_conjugate_symmetry():
    s = complex(0.7, 12)
    minus = f_sum_truncated(s, -0.3, 500).value
    plus_conj = f_sum_truncated(s.conjugate(), 0.3, 500).value.conjugate()
    assert abs(minus - plus_conj) <= 1e-12
    real_minus = f_sum_truncated(1.5, -0.3, 500).value
    assert abs(real_minus - f_sum_truncated(1.5, 0.3, 500).value.conjugate()) <= 1e-12


def test_f_sum_matches_naive():
    s = complex(0.5, 7)
    k = np.arange(1, 301)
    naive = complex(np.sum(k ** (-s) * np.exp(2j * np.pi * k * 0.37)))
    assert abs(f_sum_truncated(s, 0.37, 300).value - naive) <= 1e-12


def test_f_sum_domain():
    with pytest.raises(TruncationTooLarge):
        f_sum_truncated(2, 0.3, 11, cap=10)
    with pytest.raises(DomainError):
        f_sum_truncated(complex(0.4, 1), 0.3, 10)
    with pytest.raises(DomainError):
        f_sum_truncated(2, 0.3, 0)
    with pytest.raises(DomainError):
        f_sum_truncated(2, 1.0, 10)


def test_rhs_in_absolutely_convergent_regime():
    s = complex(2, 5)
    rhs, budget = functional_eq_rhs(s, 0.3, 10**5)
    assert rhs.method is Method.TRUNCATED_FUNCTIONAL_EQ
    ref = hurwitz_zeta(1 - s, 0.3)
    assert abs(rhs.value - ref.value) <= budget.total + ref.abs_err_bound
    assert functional_eq_residual(s, 0.3, 10**5) < 1e-4


def test_rhs_on_critical_line():
    s = complex(0.5, 20)
    rhs, budget = functional_eq_rhs(s, 0.5, 400)
    ref = hurwitz_zeta(1 - s, 0.5)
    assert abs(rhs.value - ref.value) <= budget.total + ref.abs_err_bound
    assert budget.total == pytest.approx(budget.truncation_f_plus + budget.truncation_f_minus + budget.gamma_factor)


def test_prefactor_ratio():
    t = 10.0
    s = complex(0.5, t)
    ratio = abs(cmath.exp(0.5j * math.pi * s) / cmath.exp(-0.5j * math.pi * s))
    assert ratio == pytest.approx(math.exp(-math.pi * t), rel=1e-2)


def test_check_at_quarter_parameter():
    c = functional_eq_check(complex(0.5, 30), 0.25, 900)
    assert c.ok
    assert c.residual <= c.budget.total


def test_residual_symmetric_at_half():
    s = complex(0.5, 12)
    assert functional_eq_residual(s, 0.5, 144) == pytest.approx(functional_eq_residual(s, 1 - 0.5, 144), abs=0)


@pytest.mark.parametrize("omega", [0.1, 0.37, 0.9])
@pytest.mark.parametrize("t", [5.0, 22.5, 50.0])
def test_residual_within_budget(t, omega):
    K = math.ceil(t * t)
    c = functional_eq_check(complex(0.5, t), omega, K)
    assert c.residual <= c.budget.total


def test_rhs_domain():
    with pytest.raises(DomainError):
        functional_eq_rhs(complex(0.5, 5), 1.2, 25)
    with pytest.raises(DomainError):
        functional_eq_rhs(complex(0.5, -5), 0.3, 25)
