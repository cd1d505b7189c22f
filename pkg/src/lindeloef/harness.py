"""Desk-scale experiments on zeta(1/2 + it, omega) as a function of omega and t.

Each experiment returns plain dataclass rows plus summary statistics; limits
("o(.)", "limsup", "almost everywhere") are rendered as tail and ensemble
statistics over seeded omega samples, never as claims about true limits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import DomainError, InsufficientBlocks, NonConvergence, QuadratureNotConverged
from .zeta import DEFAULT_TARGET, hurwitz_zeta, hurwitz_zeta_many, zeta1_many

GL_ORDER = 8
MEAN_VALUE_T_CAP = 2e4
SCAN_T_CAP = 1e5
SECTION_T_CAP = 1e7
_U = np.finfo(np.float64).eps / 2


def _pmap(fn, items, workers: int):
    items = list(items)
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def seeded_omegas(count: int, seed: int, lo: float = 0.05, hi: float = 0.95) -> np.ndarray:
    """Ensemble member j gets lo + (hi - lo) * U_j with U_j from the counter RNG."""
    u = rng.uniform(seed, rng.OMEGA, np.arange(count), 0)
    return lo + (hi - lo) * u


@dataclass(frozen=True)
class TGrid:
    t_min: float
    t_max: float
    points: int
    spacing: str = "Geometric"

    def __post_init__(self):
        if self.spacing != "Geometric":
            raise DomainError(f"unsupported spacing {self.spacing!r}")
        if not (self.t_min > math.e and self.t_max > self.t_min):
            raise DomainError(f"need e < t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.points < 2:
            raise DomainError("a grid needs at least 2 points")

    def values(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.points)


# --- mean value ----------------------------------------------------------------


@dataclass(frozen=True)
class MeanValueRow:
    t: float
    integral: float
    log_t: float
    ratio: float
    quad_err_bound: float
    panels: int


def _gauss_legendre_nodes(panels: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(GL_ORDER)
    h = 1.0 / panels
    left = np.arange(panels) * h
    nodes = (left[:, None] + 0.5 * h * (x[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * h * w, panels)
    return nodes, weights


def _zeta1_sq_integral(t: float, panels: int, abs_err: float, workers: int) -> tuple[float, float]:
    nodes, weights = _gauss_legendre_nodes(panels)
    values, bounds, _ = zeta1_many(complex(0.5, t), nodes, abs_err, workers)
    sq = values.real**2 + values.imag**2
    eval_err = float(np.sum(weights * (2.0 * np.abs(values) * bounds + bounds**2)))
    return float(np.sum(weights * sq)), eval_err


def mean_value_integral(
    t: float,
    panels: int | None = None,
    abs_err: float = DEFAULT_TARGET,
    workers: int = 1,
    t_cap: float = MEAN_VALUE_T_CAP,
) -> MeanValueRow:
    """int_0^1 |zeta_1(1/2 + it, omega)|^2 d omega by composite 8-point Gauss-Legendre.

    The integrand oscillates in omega at a rate proportional to t, so the
    panel count scales with t. The error estimate is the change on halving
    the panel count, plus the propagated evaluator bounds.
    """
    if not 10 <= t <= t_cap:
        raise DomainError(f"t must lie in [10, {t_cap:g}], got {t}")
    min_panels = max(256, math.ceil(t))
    panels = min_panels if panels is None else int(panels)
    if panels < min_panels:
        raise DomainError(f"need at least {min_panels} panels at t={t}, got {panels}")
    fine, eval_err = _zeta1_sq_integral(t, panels, abs_err, workers)
    coarse, _ = _zeta1_sq_integral(t, panels // 2, abs_err, workers)
    change = abs(fine - coarse)
    if change > 0.01 * abs(fine):
        raise QuadratureNotConverged(f"halving panels changed the integral by {change:.3g} (integral {fine:.6g})")
    err = change + eval_err + 64 * _U * abs(fine)
    log_t = math.log(t)
    return MeanValueRow(t, fine, log_t, fine / log_t, err, panels)


def mean_value_slope(rows: list[MeanValueRow]) -> float:
    """Least-squares slope of the integral against log t."""
    x = np.array([r.log_t for r in rows])
    y = np.array([r.integral for r in rows])
    return float(np.polyfit(x, y, 1)[0])


# --- Chebyshev tail measure -------------------------------------------------------


@dataclass(frozen=True)
class TailMeasureRow:
    C: float
    threshold: float
    measure_hat: float
    std_err: float


def chebyshev_tail_measure(
    t: float,
    C_list,
    samples: int,
    seed: int = 0,
    abs_err: float = DEFAULT_TARGET,
    workers: int = 1,
) -> list[TailMeasureRow]:
    """Fraction of omega ~ U(0, 1) with |zeta(1/2 + it, omega)| >= C sqrt(log t).

    One omega sample set serves every C, so the estimates are exactly
    nonincreasing in C.
    """
    if t < 10:
        raise DomainError(f"t must be >= 10, got {t}")
    if samples < 1000:
        raise DomainError(f"samples must be >= 1000, got {samples}")
    omegas = rng.uniform(seed, rng.OMEGA, 0, np.arange(samples))
    values, _, _ = hurwitz_zeta_many(complex(0.5, t), omegas, abs_err, workers)
    mags = np.abs(values)
    scale = math.sqrt(math.log(t))
    rows = []
    for c in C_list:
        c = float(c)
        if not c > 0:
            raise DomainError(f"C must be > 0, got {c}")
        thr = c * scale
        p = float(np.count_nonzero(mags >= thr)) / samples
        rows.append(TailMeasureRow(c, thr, p, math.sqrt(p * (1.0 - p) / samples)))
    return rows


# --- growth scan and mu estimate ----------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    t: float
    abs: float
    ratio: float
    failed: bool = False


@dataclass(frozen=True)
class ScanReport:
    omega: float
    epsilon: float
    rows: list[ScanRow]
    global_max_ratio: float
    tail_max_ratio: float
    mu_hat: float | None = None

    @property
    def failures(self) -> int:
        return sum(r.failed for r in self.rows)


def _abs_or_nan(s: complex, omega: float, abs_err: float) -> float:
    try:
        return abs(hurwitz_zeta(s, omega, abs_err).value)
    except NonConvergence:
        return math.nan


def growth_scan(
    omega: float,
    grid: TGrid,
    epsilon: float,
    abs_err: float = DEFAULT_TARGET,
    workers: int = 1,
    omega_window: tuple[float, float] = (0.05, 0.95),
    t_cap: float = SCAN_T_CAP,
) -> ScanReport:
    """|zeta(1/2 + it, omega)| / (log t)^(3/2 + eps) along a geometric t-grid.

    ``tail_max_ratio`` is the maximum over the last decade t >= t_max / 10.
    """
    lo, hi = omega_window
    if not lo <= omega <= hi:
        raise DomainError(f"omega={omega} is outside the scan window [{lo}, {hi}]")
    if grid.t_max > t_cap:
        raise DomainError(f"t_max={grid.t_max:g} exceeds the cap {t_cap:g}")
    if not epsilon > 0:
        raise DomainError("epsilon must be > 0")
    ts = grid.values()
    mags = _pmap(lambda t: _abs_or_nan(complex(0.5, t), omega, abs_err), ts, workers)
    rows = []
    for t, m in zip(ts, mags):
        failed = not math.isfinite(m)
        rows.append(ScanRow(float(t), m, m / math.log(t) ** (1.5 + epsilon), failed))
    ok = [r for r in rows if not r.failed]
    if not ok:
        raise NonConvergence("every row of the scan failed")
    global_max = max(r.ratio for r in ok)
    tail = [r.ratio for r in ok if r.t >= grid.t_max / 10]
    tail_max = max(tail) if tail else math.nan
    return ScanReport(float(omega), float(epsilon), rows, global_max, tail_max)


@dataclass(frozen=True)
class MuEstimate:
    sigma: float
    omega: float
    mu_hat: float
    blocks: int


def mu_exponent_estimate(
    sigma: float,
    omega: float,
    grid: TGrid,
    abs_err: float = DEFAULT_TARGET,
    workers: int = 1,
) -> MuEstimate:
    """Slope of the dyadic-block maxima of log|zeta(sigma + it, omega)| against log t."""
    if grid.points < 100:
        raise DomainError(f"need at least 100 grid points, got {grid.points}")
    if not -1.0 <= sigma <= 4.0:
        raise DomainError(f"sigma must lie in [-1, 4], got {sigma}")
    ts = grid.values()
    vals = _pmap(lambda t: abs(hurwitz_zeta(complex(sigma, t), omega, abs_err).value), ts, workers)
    log_abs = np.log(np.asarray(vals))
    block = np.floor(np.log2(ts)).astype(np.int64)
    xs, ys = [], []
    for b in np.unique(block):
        idx = np.flatnonzero(block == b)
        i = idx[np.argmax(log_abs[idx])]
        xs.append(math.log(ts[i]))
        ys.append(log_abs[i])
    if len(xs) < 4:
        raise InsufficientBlocks(f"only {len(xs)} dyadic blocks in [{grid.t_min}, {grid.t_max}]; need 4")
    slope = float(np.polyfit(np.array(xs), np.array(ys), 1)[0])
    return MuEstimate(float(sigma), float(omega), slope, len(xs))


# --- section profile ----------------------------------------------------------------


@dataclass(frozen=True)
class SectionRow:
    x: float
    y: float


def section_profile(
    t: float,
    x_grid,
    abs_err: float = DEFAULT_TARGET,
    workers: int = 1,
    t_cap: float = SECTION_T_CAP,
) -> list[SectionRow]:
    """y(x) = |zeta(1/2 + it, x) - x^(-1/2 - it)| / (log t)^2 for x in [0.02, 1]."""
    xs = np.sort(np.asarray(x_grid, dtype=np.float64))
    if xs.size == 0:
        return []
    if xs[0] < 0.02 or xs[-1] > 1.0:
        raise DomainError("x_grid must lie within [0.02, 1]")
    if not 3 <= t <= t_cap:
        raise DomainError(f"t must lie in [3, {t_cap:g}], got {t}")
    s = complex(0.5, t)
    norm = math.log(t) ** 2
    try:
        values, _, _ = zeta1_many(s, xs, abs_err, workers)
        mags = np.abs(values)
    except NonConvergence:
        mags = np.array(_pmap(lambda x: _abs_or_nan(s, x + 1.0, abs_err), xs, workers))
    return [SectionRow(float(x), float(m / norm)) for x, m in zip(xs, mags)]


def lag_autocorrelation(y, lag: int = 1) -> float:
    y = np.asarray(y, dtype=np.float64)
    d = y - y.mean()
    return float(np.dot(d[:-lag], d[lag:]) / np.dot(d, d))


def ensemble_scan(
    omegas,
    grid: TGrid,
    epsilon: float,
    abs_err: float = DEFAULT_TARGET,
    workers: int = 1,
) -> list[ScanReport]:
    return [growth_scan(float(w), grid, epsilon, abs_err, workers) for w in omegas]


__all__ = [
    "TGrid",
    "MeanValueRow",
    "TailMeasureRow",
    "ScanRow",
    "ScanReport",
    "MuEstimate",
    "SectionRow",
    "seeded_omegas",
    "mean_value_integral",
    "mean_value_slope",
    "chebyshev_tail_measure",
    "growth_scan",
    "ensemble_scan",
    "mu_exponent_estimate",
    "section_profile",
    "lag_autocorrelation",
]
