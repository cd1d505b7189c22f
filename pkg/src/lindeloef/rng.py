"""Stateless counter-based random numbers.

Every draw is a pure function of ``(seed, domain, stream, counter)``: the
splitmix64 finalizer is applied to a key built from the first three, then
again to ``key + counter * golden``. Draws for replication ``r`` and array
index ``k`` therefore never depend on how many other draws were made or in
which order, which is what makes parallel runs bitwise reproducible.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

# domain tags keep unrelated uses of one seed apart
OMEGA = 1
NOISE = 2
FUZZ = 3
TASK = 4


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _u64(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype == np.uint64:
        return arr
    if arr.dtype.kind == "i":
        return arr.astype(np.int64).view(np.uint64)
    if arr.dtype.kind == "u":
        return arr.astype(np.uint64)
    # python ints beyond int64
    return np.asarray([int(v) & MASK64 for v in np.ravel(arr)], dtype=np.uint64).reshape(arr.shape)


def random_bits(seed: int, domain: int, stream, counter) -> np.ndarray:
    """64-bit draws; ``stream`` and ``counter`` broadcast against each other."""
    with np.errstate(over="ignore"):
        key = _mix(np.atleast_1d(_u64(int(seed) & MASK64)) + _GOLDEN * np.uint64(domain))
        key = _mix(key ^ (_u64(stream) * _M1 + _GOLDEN))
        return _mix(key + _u64(counter) * _GOLDEN + _GOLDEN)


def uniform(seed: int, domain: int, stream, counter) -> np.ndarray:
    """Doubles in the open interval (0, 1)."""
    bits = random_bits(seed, domain, stream, counter) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def quarter_phase(seed: int, domain: int, stream, counter) -> np.ndarray:
    """Uniform draws from {1, i, -1, -i}: mean zero, unit modulus, exact."""
    q = (random_bits(seed, domain, stream, counter) >> np.uint64(62)).astype(np.int64)
    table = np.array([1 + 0j, 1j, -1 + 0j, -1j])
    return table[q]


def normal_complex(seed: int, domain: int, stream, counter) -> np.ndarray:
    """Standard complex normals (E|z|^2 = 1) by Box-Muller on paired counters."""
    c = np.asarray(counter)
    u1 = uniform(seed, domain, stream, 2 * c)
    u2 = uniform(seed, domain, stream, 2 * c + 1)
    return np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)
