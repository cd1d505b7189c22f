"""Dyadic maximal inequalities and the quasi-LIL trajectory simulator.

Covers the deterministic Rademacher-Menchoff bound for a finite complex
sequence, its expectation form for sums of pairwise uncorrelated variables,
the normaliser phi(n) = n^beta (log n)^(3/2 + eps), and seeded simulation of
diagonal sums S_n^(n) for a few concrete triangular arrays.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import rng
from .errors import DomainError, InvalidSpec, LengthMismatch


# --- dyadic chains and the deterministic inequality -------------------------


@dataclass(frozen=True)
class DyadicChain:
    p: int
    n: int
    chain: tuple[int, ...]  # p_0 = p >= p_1 >= ... >= p_{n+1} = 0
    bits: tuple[int, ...]  # eps_0 .. eps_n

    @property
    def multipliers(self) -> tuple[int, ...]:
        """delta_{k+1} = p_{k+1} / 2^{k+1} for k = 0..n."""
        return tuple(self.chain[k + 1] >> (k + 1) for k in range(self.n + 1))


def dyadic_chain(p: int, n: int) -> DyadicChain:
    """Binary truncations of p: p_k keeps only the bits of weight >= 2^k."""
    if n < 0:
        raise DomainError(f"depth n must be >= 0, got {n}")
    if not 1 <= p < 2 ** (n + 1):
        raise DomainError(f"need 1 <= p < 2^(n+1) = {2 ** (n + 1)}, got p={p}")
    chain = tuple((p >> k) << k for k in range(n + 2))
    bits = tuple((p >> k) & 1 for k in range(n + 1))
    return DyadicChain(p, n, chain, bits)


def chain_table(n: int) -> np.ndarray:
    """Rows are the chains of p = 1 .. 2^(n+1)-1; shape (2^(n+1)-1, n+2)."""
    p = np.arange(1, 2 ** (n + 1), dtype=np.int64)[:, None]
    k = np.arange(n + 2, dtype=np.int64)[None, :]
    return (p >> k) << k


@dataclass(frozen=True)
class PrefixArray:
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if self.n < 0:
            raise DomainError("depth n must be >= 0")
        if vals.shape != (2 ** (self.n + 1),):
            raise LengthMismatch(f"expected {2 ** (self.n + 1)} values for n={self.n}, got shape {vals.shape}")
        if vals[0] != 0:
            raise DomainError("a(0) must be 0")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_increments(cls, increments) -> "PrefixArray":
        inc = np.asarray(increments, dtype=np.complex128)
        n = int(round(math.log2(inc.size + 1))) - 1
        return cls(n, np.concatenate(([0j], np.cumsum(inc))))


def telescope(a: PrefixArray, chain: DyadicChain) -> complex:
    v = a.values
    c = chain.chain
    return complex(sum(v[c[k]] - v[c[k + 1]] for k in range(chain.n + 1)))


def _rm_bound_rows(values: np.ndarray, n: int) -> np.ndarray:
    total = np.zeros(values.shape[0])
    for k in range(n + 1):
        lo = np.arange(0, 2 ** (n - k), dtype=np.int64) << (k + 1)
        hi = lo + (1 << k)
        total += np.sum(np.abs(values[:, hi] - values[:, lo]) ** 2, axis=1)
    return (n + 1) * total


def rm_bound(a: PrefixArray) -> float:
    """(n+1) * sum_k sum_j |a(2^k + j 2^{k+1}) - a(j 2^{k+1})|^2, which dominates max_p |a(p)|^2."""
    return float(_rm_bound_rows(a.values[None, :], a.n)[0])


def max_prefix_sq(a: PrefixArray) -> float:
    return float(np.max(np.abs(a.values[1:]) ** 2))


@dataclass(frozen=True)
class FuzzSummary:
    trials: int
    violations: int
    telescoping_failures: int
    worst_ratio: float  # max over trials of max|a|^2 / bound


def rm_fuzz(trials: int, max_depth: int = 6, seed: int = 0, batch: int = 4096) -> FuzzSummary:
    """Check the dyadic maximal inequality and chain telescoping on random prefix arrays.

    Trial i has depth i mod (max_depth + 1) and one of three increment shapes
    (complex normal, heavy-tailed, or a single spike), all drawn from the
    counter RNG at (seed, i).
    """
    violations = failures = 0
    worst = 0.0
    depths = np.arange(trials) % (max_depth + 1)
    for n in range(max_depth + 1):
        ids = np.flatnonzero(depths == n)
        size = 2 ** (n + 1) - 1
        chains = chain_table(n)
        for b0 in range(0, ids.size, batch):
            idx = ids[b0 : b0 + batch]
            inc = rng.normal_complex(seed, rng.FUZZ, idx[:, None], np.arange(size)[None, :])
            shape = idx % 3
            heavy = shape == 1
            inc[heavy] = inc[heavy] / rng.uniform(seed, rng.FUZZ, idx[heavy, None], size + np.arange(size)[None, :])
            spike = shape == 2
            if np.any(spike):
                pos = (rng.random_bits(seed, rng.FUZZ, idx[spike], 2 * size + 1) % np.uint64(size)).astype(np.int64)
                spiked = np.zeros((pos.size, size), complex)
                spiked[np.arange(pos.size), pos] = inc[spike, 0]
                inc[spike] = spiked
            values = np.concatenate([np.zeros((idx.size, 1), complex), np.cumsum(inc, axis=1)], axis=1)

            peak = np.max(np.abs(values[:, 1:]) ** 2, axis=1)
            bound = _rm_bound_rows(values, n)
            violations += int(np.sum(peak > bound))
            nz = bound > 0
            if np.any(nz):
                worst = max(worst, float(np.max(peak[nz] / bound[nz])))

            # telescoping for one random p per trial
            p = (rng.random_bits(seed, rng.FUZZ, idx, 2 * size + 2) % np.uint64(size)).astype(np.int64) + 1
            ch = chains[p - 1]
            rows = np.arange(idx.size)[:, None]
            diffs = values[rows, ch[:, :-1]] - values[rows, ch[:, 1:]]
            tele = np.sum(diffs, axis=1)
            scale = np.max(np.abs(values[rows, ch]), axis=1)
            err = np.abs(tele - values[np.arange(idx.size), p])
            failures += int(np.sum(err > 1e-12 * np.maximum(scale, np.finfo(float).tiny)))
            failures += int(np.sum(ch[:, 0] != p) + np.sum(ch[:, -1] != 0) + np.sum(np.diff(ch, axis=1) > 0))
    return FuzzSummary(int(trials), violations, failures, worst)


# --- expectation form ---------------------------------------------------------


def lemma4_bound(m: int, sigmas) -> float:
    """(m^2 + 1) * sum of sigma_i^2 over the block 2^m < i <= 2^(m+1)."""
    sig = np.asarray(sigmas, dtype=np.float64)
    if m < 0:
        raise DomainError("m must be >= 0")
    if sig.shape != (2**m,):
        raise LengthMismatch(f"expected {2**m} standard deviations for m={m}, got {sig.shape}")
    if np.any(sig < 0):
        raise DomainError("standard deviations must be >= 0")
    return float((m * m + 1) * math.fsum(sig * sig))


class Kernel(str, Enum):
    HURWITZ_PHASE = "HurwitzPhase"
    POWER_NOISE = "PowerNoise"
    DETERMINISTIC_HARMONIC = "DeterministicHarmonic"


@dataclass(frozen=True)
class ArraySpec:
    """A triangular array X_k^(n).

    HurwitzPhase: k^(-1/2 - it) e(k omega) with t = sqrt(n), omega ~ U(0, 1).
    PowerNoise: scale * k^(-alpha) * xi_k, xi_k uniform on {1, i, -1, -i}.
    DeterministicHarmonic: k^(-1/2), not centred; a negative control.
    """

    kernel: Kernel
    alpha: float = 0.5
    epsilon: float = 0.1
    seed: int = 0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kernel", Kernel(self.kernel))
        if not self.epsilon > 0:
            raise InvalidSpec(f"epsilon must be > 0, got {self.epsilon}")
        if self.kernel is not Kernel.POWER_NOISE and self.alpha != 0.5:
            raise InvalidSpec(f"{self.kernel.value} fixes alpha = 1/2, got {self.alpha}")
        if self.scale < 0:
            raise InvalidSpec("scale must be >= 0")

    def sigmas(self, k: np.ndarray) -> np.ndarray:
        """Standard deviations sigma_k (the deterministic control has none)."""
        k = np.asarray(k, dtype=np.float64)
        if self.kernel is Kernel.DETERMINISTIC_HARMONIC:
            return np.zeros_like(k)
        if self.kernel is Kernel.HURWITZ_PHASE:
            return k**-0.5
        return self.scale * k ** (-self.alpha)


def lemma4_empirical(m: int, spec: ArraySpec, reps: int, seed: int | None = None) -> tuple[float, float]:
    """Monte Carlo mean of max_{2^m < k <= 2^(m+1)} |S_k - S_{2^m}|^2, and the bound."""
    if spec.kernel is Kernel.DETERMINISTIC_HARMONIC:
        raise InvalidSpec("DeterministicHarmonic is not centred or uncorrelated; the maximal second-moment bound does not apply")
    if reps < 100:
        raise DomainError(f"reps must be >= 100, got {reps}")
    if m < 0:
        raise DomainError("m must be >= 0")
    seed = spec.seed if seed is None else seed
    k = np.arange(2**m + 1, 2 ** (m + 1) + 1, dtype=np.int64)
    sig = spec.sigmas(k)
    bound = lemma4_bound(m, sig)
    r = np.arange(reps, dtype=np.int64)[:, None]
    if spec.kernel is Kernel.POWER_NOISE:
        x = sig[None, :] * rng.quarter_phase(seed, rng.NOISE, r, k[None, :])
    else:
        omega = rng.uniform(seed, rng.OMEGA, r, 0)
        x = _hurwitz_terms(k[None, :], omega, math.sqrt(2 ** (m + 1)))
    partial = np.cumsum(x, axis=1)
    peaks = np.max(partial.real**2 + partial.imag**2, axis=1)
    return math.fsum(peaks) / reps, bound


# --- normaliser and correlations ----------------------------------------------


def beta_exponent(alpha: float) -> float:
    return 0.0 if alpha >= 0.5 else 0.5 - alpha


def phi(n, alpha: float, epsilon: float):
    """n^beta (log n)^(3/2 + epsilon), beta = max(0, 1/2 - alpha)."""
    arr = np.asarray(n, dtype=np.float64)
    if np.any(arr < 2):
        raise DomainError("phi needs n >= 2")
    if not epsilon > 0:
        raise DomainError("epsilon must be > 0")
    out = arr ** beta_exponent(alpha) * np.log(arr) ** (1.5 + epsilon)
    return float(out) if out.ndim == 0 else out


def pair_correlation_exact(j: int, k: int, t: float = 0.0) -> complex:
    """E[conj(X_j) X_k] for X_k = k^(-1/2-it) e(k omega), omega ~ U(0, 1).

    The omega-integral of e((k - j) omega) is 1 when j == k and 0 otherwise,
    and the t-dependent phases cancel on the diagonal.
    """
    if j < 1 or k < 1:
        raise DomainError("indices start at 1")
    return complex(1.0 / j) if j == k else 0j


def pair_correlation_mc(j: int, k: int, samples: int, seed: int = 0, t: float = 0.0) -> complex:
    omega = rng.uniform(seed, rng.OMEGA, 0, np.arange(samples))
    xj = _hurwitz_terms(np.array([j]), omega[:, None], t)[:, 0]
    xk = _hurwitz_terms(np.array([k]), omega[:, None], t)[:, 0]
    return complex(np.mean(np.conj(xj) * xk))


def _hurwitz_terms(k: np.ndarray, omega, t: float) -> np.ndarray:
    k = np.asarray(k, dtype=np.float64)
    logk = np.log(k)
    cycles = np.modf(k * np.asarray(omega, dtype=np.float64))[0]
    return k**-0.5 * np.exp(1j * (2.0 * np.pi * cycles - t * logk))


# --- trajectories --------------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryReport:
    kernel: Kernel
    member: int
    omega: float  # nan unless HurwitzPhase
    n_grid: np.ndarray
    ratios: np.ndarray  # |S_n^(n)| / phi(n)
    is_dyadic: np.ndarray
    dyadic_k: np.ndarray
    s_ratios: np.ndarray  # |S_{2^k}^(n_k)| / phi(2^k), n_k = 2^(k+1)
    y_ratios: np.ndarray  # Y_k^(n_k) / phi(2^k)

    @property
    def global_max(self) -> float:
        return float(np.max(self.ratios))

    @property
    def last_block_max(self) -> float:
        """max r(n) over grid points in the last dyadic block (2^(L-1), 2^L]."""
        top = int(self.n_grid[self.is_dyadic].max())
        return float(np.max(self.ratios[self.n_grid > top // 2]))


def qlil_grid(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Dyadic points 2^4..2^L and block midpoints 3 * 2^(k-2), sorted."""
    if n_max < 16:
        raise DomainError(f"n_max must be >= 16, got {n_max}")
    top = int(math.floor(math.log2(n_max)))
    pts = {2**k: True for k in range(4, top + 1)}
    for k in range(5, top + 2):
        mid = 3 * 2 ** (k - 2)
        if mid <= n_max:
            pts.setdefault(mid, False)
    n = np.array(sorted(pts), dtype=np.int64)
    return n, np.array([pts[v] for v in n])


def _member_omega(spec: ArraySpec, member: int) -> float:
    return float(rng.uniform(spec.seed, rng.OMEGA, member, 0)[0])


def _row(spec: ArraySpec, n: int, member: int, omega: float) -> np.ndarray:
    """X_1^(n) .. X_n^(n)."""
    k = np.arange(1, n + 1, dtype=np.int64)
    if spec.kernel is Kernel.HURWITZ_PHASE:
        return _hurwitz_terms(k, omega, math.sqrt(n))
    if spec.kernel is Kernel.DETERMINISTIC_HARMONIC:
        return (k.astype(np.float64) ** -0.5).astype(np.complex128)
    return spec.sigmas(k) * rng.quarter_phase(spec.seed, rng.NOISE, member, k)


def qlil_trajectory(spec: ArraySpec, n_max: int, member: int = 0, omega: float | None = None) -> TrajectoryReport:
    """Ratios |S_n^(n)|/phi(n) on the dyadic-plus-midpoint grid.

    For HurwitzPhase each grid point n needs its own row (t = sqrt n); the
    other kernels do not depend on n, so one row of prefix sums serves all.
    The subsequence n_k of the dyadic diagnostics is fixed to 2^(k+1).
    """
    n_grid, is_dyadic = qlil_grid(n_max)
    alpha = spec.alpha
    if spec.kernel is Kernel.HURWITZ_PHASE:
        omega = _member_omega(spec, member) if omega is None else float(omega)
        if not 0 < omega < 1:
            raise DomainError("omega must lie in (0, 1)")
    else:
        omega = math.nan

    def prefix(n: int) -> np.ndarray:
        return np.cumsum(_row(spec, n, member, omega))

    if spec.kernel is Kernel.HURWITZ_PHASE:
        cache = {}

        def sums_for(n):
            if n not in cache:
                cache[n] = prefix(n)
            return cache[n]
    else:
        shared = prefix(int(n_grid[-1]))

        def sums_for(n):
            return shared

    ratios = np.array([abs(sums_for(n)[n - 1]) for n in n_grid]) / phi(n_grid, alpha, spec.epsilon)

    top = int(n_grid[is_dyadic].max())
    ks = np.arange(4, int(math.log2(top)), dtype=np.int64)
    s_rat = np.empty(ks.size)
    y_rat = np.empty(ks.size)
    for i, k in enumerate(ks):
        lo = 2 ** int(k)
        s = sums_for(2 * lo)
        base = s[lo - 1]
        norm = phi(lo, alpha, spec.epsilon)
        s_rat[i] = abs(base) / norm
        y_rat[i] = np.max(np.abs(s[lo : 2 * lo] - base)) / norm
    return TrajectoryReport(spec.kernel, member, omega, n_grid, ratios, is_dyadic, ks, s_rat, y_rat)


def qlil_ensemble(spec: ArraySpec, n_max: int, members: int, workers: int = 1) -> list[TrajectoryReport]:
    ids = range(members)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda j: qlil_trajectory(spec, n_max, j), ids))
    return [qlil_trajectory(spec, n_max, j) for j in ids]
