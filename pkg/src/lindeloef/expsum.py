"""Exponential sums F(omega, s), A(x, omega) and Hurwitz's functional equation.

The tail of F(omega, s) = sum_{k>=1} k^(-s) e(k omega) past K is bounded by
partial summation against A(x, omega) = sum_{k<=x} e(k omega), whose modulus
never exceeds G = 1/|sin(pi omega)| = 2/|1 - e(omega)|:

    |tail| <= G K^(-sigma) + |s| G int_K^inf u^(-sigma-1) du
            = G K^(-sigma) (1 + |s|/sigma)
           <= C_F (1 + |t|) K^(-sigma) G,   C_F = 2  (sigma >= 1/2).

The right-hand side of the functional equation,

    Gamma(s) (2 pi)^(-s) [e^(-i pi s/2) F(omega, s) + e^(i pi s/2) F(-omega, s)],

equals zeta(1 - s, omega); the residual check compares against that value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationTooLarge
from .gamma import LOG_2PI, log_gamma
from .zeta import EvalResult, Method, SPoint, hurwitz_zeta

C_F = 2.0
DEFAULT_K_CAP = 10**7
_CHUNK = 1 << 16
_U = np.finfo(np.float64).eps / 2


@dataclass(frozen=True)
class ErrorBudget:
    truncation_f_plus: float
    truncation_f_minus: float
    gamma_factor: float
    total: float


@dataclass(frozen=True)
class FunctionalEqCheck:
    s: complex
    omega: float
    K: int
    residual: float
    budget: ErrorBudget
    zeta_err_bound: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.budget.total + self.zeta_err_bound


def _require_nonintegral(omega: float) -> None:
    if omega == math.floor(omega):
        raise DomainError(f"omega must not be an integer, got {omega!r}")


def _sinpi(x: float) -> float:
    return math.sin(math.pi * math.fmod(x, 2.0))


def _cispi(x: float) -> complex:
    r = math.pi * math.fmod(x, 2.0)
    return complex(math.cos(r), math.sin(r))


def phase_bound(omega: float) -> float:
    """2/|1 - e^{2 pi i omega}|, the uniform bound on |A(x, omega)|."""
    _require_nonintegral(omega)
    return 1.0 / abs(_sinpi(omega))


def phase_sum(x: float, omega: float) -> complex:
    """A(x, omega) = sum_{k=1}^{floor x} e^{2 pi i k omega}, in closed form."""
    if x < 1:
        raise DomainError(f"phase_sum needs x >= 1, got {x!r}")
    _require_nonintegral(omega)
    m = math.floor(x)
    return _cispi((m + 1) * omega) * _sinpi(m * omega) / _sinpi(omega)


def _f_partial(sigma: float, t: float, omega: float, K: int) -> tuple[complex, float, float]:
    frac_omega = omega - math.floor(omega)
    total = np.zeros(4)
    parts = []
    for k0 in range(1, K + 1, _CHUNK):
        k = np.arange(k0, min(K, k0 + _CHUNK - 1) + 1, dtype=np.float64)
        logk = np.log(k)
        cycles = np.modf(k * frac_omega)[0]
        phase = 2.0 * np.pi * cycles - t * logk
        amp = np.exp(-sigma * logk)
        parts.append(
            (np.sum(amp * np.cos(phase)), np.sum(amp * np.sin(phase)), np.sum(amp), np.sum(amp * amp))
        )
    total[:] = np.sum(np.asarray(parts), axis=0)
    log_max = math.log(K) + 1.0
    per_term = _U * (abs(t) * log_max + 2.0 * math.pi * K * frac_omega + abs(sigma) * log_max + 8)
    rounding = 3.0 * per_term * math.sqrt(total[3]) + _U * (math.log2(K + 1) + K / _CHUNK + 2) * total[2]
    return complex(total[0], total[1]), float(rounding), float(total[2])


def f_tail_bound(s, omega: float, K: int) -> float:
    sp = SPoint.of(s)
    return C_F * (1.0 + abs(sp.t)) * K ** (-sp.sigma) * phase_bound(omega)


def _f_sum(s, omega: float, K: int, cap: int) -> tuple[EvalResult, float]:
    sp = SPoint.of(s)
    if K < 1:
        raise DomainError("K must be >= 1")
    if K > cap:
        raise TruncationTooLarge(f"K={K} exceeds the configured cap {cap}")
    if sp.sigma < 0.5:
        raise DomainError(f"the truncated F-sum tail bound needs sigma >= 1/2, got {sp.sigma}")
    _require_nonintegral(omega)
    value, rounding, _ = _f_partial(sp.sigma, sp.t, float(omega), int(K))
    bound = f_tail_bound(sp, omega, K)
    return EvalResult(value, bound, int(K), Method.DIRECT_SERIES), rounding


def f_sum_truncated(s, omega: float, K: int, cap: int = DEFAULT_K_CAP) -> EvalResult:
    """sum_{k=1}^K k^(-s) e^{2 pi i k omega} with the partial-summation tail bound.

    Negative omega gives the truncation of F(-omega, s).
    """
    return _f_sum(s, omega, K, cap)[0]


def functional_eq_rhs(s, omega: float, K: int, cap: int = DEFAULT_K_CAP) -> tuple[EvalResult, ErrorBudget]:
    """K-truncated right-hand side of Hurwitz's formula, an approximation of zeta(1 - s, omega)."""
    sp = SPoint.of(s)
    if not 0.0 < omega < 1.0:
        raise DomainError(f"omega must lie in (0, 1), got {omega!r}")
    if sp.sigma <= 0 or sp.t <= 0:
        raise DomainError(f"need sigma > 0 and t > 0, got s={sp.s}")
    z = sp.s
    f_plus, round_plus = _f_sum(z, omega, K, cap)
    f_minus, round_minus = _f_sum(z, -omega, K, cap)

    base = log_gamma(z) - z * LOG_2PI
    exp_minus = base - 0.5j * math.pi * z
    exp_plus = base + 0.5j * math.pi * z
    pref_minus = cmath.exp(exp_minus)
    pref_plus = cmath.exp(exp_plus)
    value = pref_minus * f_plus.value + pref_plus * f_minus.value

    # relative error of a prefactor formed as exp(sum of logs)
    def rel(e: complex) -> float:
        return 1e-14 * max(1.0, abs(log_gamma(z))) + 4 * _U * (abs(e) + 10)

    trunc_plus = abs(pref_minus) * f_plus.abs_err_bound
    trunc_minus = abs(pref_plus) * f_minus.abs_err_bound
    gamma_factor = float(
        abs(pref_minus) * (abs(f_plus.value) * rel(exp_minus) + round_plus)
        + abs(pref_plus) * (abs(f_minus.value) * rel(exp_plus) + round_minus)
        + 4 * _U * abs(value)
    )
    budget = ErrorBudget(trunc_plus, trunc_minus, gamma_factor, trunc_plus + trunc_minus + gamma_factor)
    return EvalResult(value, budget.total, 2 * int(K), Method.TRUNCATED_FUNCTIONAL_EQ), budget


def functional_eq_check(s, omega: float, K: int, target_abs_err: float = 1e-10) -> FunctionalEqCheck:
    sp = SPoint.of(s)
    rhs, budget = functional_eq_rhs(sp, omega, K)
    reference = hurwitz_zeta(1.0 - sp.s, omega, target_abs_err)
    return FunctionalEqCheck(sp.s, float(omega), int(K), abs(reference.value - rhs.value), budget, reference.abs_err_bound)


def functional_eq_residual(s, omega: float, K: int) -> float:
    """|zeta(1 - s, omega) - functional_eq_rhs(s, omega, K)|."""
    return functional_eq_check(s, omega, K).residual
