"""Complex log-gamma and the vertical-line asymptotic for |Gamma(s)|."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import DomainError, PoleAtNonpositiveInteger

# B_2, B_4, ..., B_30
BERNOULLI_2K: tuple[Fraction, ...] = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
    Fraction(8553103, 6),
    Fraction(-23749461029, 870),
    Fraction(8615841276005, 14322),
)

LOG_2PI = math.log(2.0 * math.pi)
HALF_LOG_2PI = 0.5 * LOG_2PI

_STIRLING_TERMS = 10
# B_{2k} / (2k (2k-1))
_STIRLING_COEFFS = tuple(
    float(BERNOULLI_2K[k - 1] / (2 * k * (2 * k - 1))) for k in range(1, _STIRLING_TERMS + 1)
)
# Stirling is applied only once Re z >= 10 and |z| >= 15; there the
# truncated series is below 1e-22 in absolute terms.
_MIN_REAL = 10.0
_MIN_ABS = 15.0


def _as_complex(s) -> complex:
    if hasattr(s, "sigma") and hasattr(s, "t"):
        return complex(s.sigma, s.t)
    return complex(s)


def _stirling(z: complex) -> complex:
    w = 1.0 / z
    w2 = w * w
    series = 0j
    for c in reversed(_STIRLING_COEFFS):
        series = series * w2 + c
    return (z - 0.5) * cmath.log(z) - z + HALF_LOG_2PI + series * w


def log_gamma(s) -> complex:
    """Principal branch of log Gamma(s).

    The argument is shifted upward with Gamma(z) = Gamma(z + m) / prod(z + j)
    until the Stirling series is accurate, and the principal logs of the
    factors are subtracted. Summing principal logs keeps the result on the
    branch that is continuous from the positive real axis.
    """
    z = _as_complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {z.real:g}")

    shift = 0
    while (z.real + shift) < _MIN_REAL or abs(z + shift) < _MIN_ABS:
        shift += 1
    correction = 0j
    for j in range(shift):
        correction += cmath.log(z + j)
    return _stirling(z + shift) - correction


def log_gamma_abs_asymptotic(sigma: float, t: float) -> float:
    """log of sqrt(2 pi) |t|^(sigma - 1/2) exp(-pi |t| / 2)."""
    if abs(t) < 1.0:
        raise DomainError(f"asymptotic needs |t| >= 1, got t={t!r}")
    at = abs(t)
    return HALF_LOG_2PI + (sigma - 0.5) * math.log(at) - 0.5 * math.pi * at


def gamma_abs_asymptotic(sigma: float, t: float) -> float:
    """Leading-order |Gamma(sigma + it)| for large |t|; 0.0 once it underflows."""
    return math.exp(log_gamma_abs_asymptotic(sigma, t))
