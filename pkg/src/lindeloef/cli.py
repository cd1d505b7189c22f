"""Command-line front end: one subcommand per experiment.

Exit codes: 0 success, 1 numeric failure (partial rows are still written and
the failure is recorded in meta), 2 invalid flags.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import statistics
import sys
import time

import numpy as np

from . import __version__
from .errors import DomainError, LindeloefError
from .expsum import functional_eq_check
from .harness import (
    TGrid,
    chebyshev_tail_measure,
    growth_scan,
    lag_autocorrelation,
    mean_value_integral,
    mean_value_slope,
    mu_exponent_estimate,
    section_profile,
    seeded_omegas,
)
from .menchoff import ArraySpec, Kernel, lemma4_empirical, qlil_ensemble, rm_fuzz
from .report import Report, emit
from .zeta import hurwitz_zeta

log = logging.getLogger("lindeloef")

MASK64 = (1 << 64) - 1
THREADS_ENV = "LINDELOEF_THREADS"
# execution-only settings, kept out of the report so reruns are byte-identical
_NOT_ECHOED = {"threads", "out", "func"}

SCHEMAS = {
    "eval": ["sigma", "t", "omega", "re", "im", "abs", "err_bound", "terms", "method"],
    "identity-check": ["identity", "sigma", "t", "omega", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err", "abs_err", "err_bound"],
    "funceq-check": ["sigma", "t", "omega", "K", "residual", "budget_total", "zeta_err_bound", "ok"],
    "rm-check": ["trials", "max_depth", "violations", "telescoping_failures", "worst_ratio"],
    "lemma4-check": ["alpha", "m", "empirical", "bound", "ok"],
    "qlil": ["member", "n", "ratio", "is_dyadic"],
    "meanvalue": ["t", "integral", "log_t", "ratio", "quad_err"],
    "tailmeasure": ["C", "threshold", "measure_hat", "std_err"],
    "scan": ["omega", "t", "abs", "ratio"],
    "section": ["x", "y"],
    "mu": ["sigma", "omega", "mu_hat", "blocks"],
}


class CliError(Exception):
    """Invalid flag value detected after parsing (exit 2)."""


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _seed(text: str) -> int:
    if text == "random":
        return time.time_ns() & MASK64
    try:
        value = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'random', got {text!r}") from exc
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _abs_err(text: str) -> float:
    value = float(text)
    if not 1e-13 <= value <= 1e-2:
        raise argparse.ArgumentTypeError(f"--abs-err must lie in [1e-13, 1e-2], got {text}")
    return value


def resolve_threads(flag: int) -> int:
    if flag and flag > 0:
        return flag
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            n = int(env)
            if n > 0:
                return n
        except ValueError:
            log.warning("ignoring invalid %s=%r", THREADS_ENV, env)
    return os.cpu_count() or 1


# --- subcommands -----------------------------------------------------------------


def cmd_eval(a, rep: Report, workers: int) -> int:
    r = hurwitz_zeta(complex(a.sigma, a.t), a.omega, a.abs_err)
    rep.add(a.sigma, a.t, a.omega, r.value.real, r.value.imag, abs(r.value), r.abs_err_bound, r.terms_used, r.method.value)
    return 0


def identity_grid(points: int = 200):
    """Point i: sigma cycles through {0.5, 1.5, 2.5}, omega through 0.1..0.9
    (every 3rd step), t geometric on [1, 100]."""
    sigmas = (0.5, 1.5, 2.5)
    omegas = tuple(round(0.1 * j, 1) for j in range(1, 10))
    ts = np.geomspace(1.0, 100.0, points)
    return [(sigmas[i % 3], float(ts[i]), omegas[(i // 3) % 9]) for i in range(points)]


def cmd_identity(a, rep: Report, workers: int) -> int:
    worst = {"half": 0.0, "shift": 0.0}
    for sigma, t, omega in identity_grid(a.points):
        s = complex(sigma, t)
        half = hurwitz_zeta(s, 0.5, a.abs_err)
        riemann = hurwitz_zeta(s, 1.0, a.abs_err)
        rhs = (2.0**s - 1.0) * riemann.value
        bound = half.abs_err_bound + abs(2.0**s - 1.0) * riemann.abs_err_bound
        diff = abs(half.value - rhs)
        rel = diff / abs(rhs)
        worst["half"] = max(worst["half"], rel)
        rep.add("half", sigma, t, 0.5, half.value.real, half.value.imag, rhs.real, rhs.imag, rel, diff, bound)

        lhs = hurwitz_zeta(s, omega, a.abs_err)
        shifted = hurwitz_zeta(s, omega + 1.0, a.abs_err)
        rhs = omega ** (-s) + shifted.value
        bound = lhs.abs_err_bound + shifted.abs_err_bound
        diff = abs(lhs.value - rhs)
        rel = diff / abs(rhs)
        worst["shift"] = max(worst["shift"], rel)
        rep.add("shift", sigma, t, omega, lhs.value.real, lhs.value.imag, rhs.real, rhs.imag, rel, diff, bound)
    rep.summary.update(max_rel_err_half=worst["half"], max_rel_err_shift=worst["shift"], tolerance=1e-9,
                       passed=max(worst.values()) <= 1e-9)
    return 0


def cmd_funceq(a, rep: Report, workers: int) -> int:
    points = [(a.sigma, float(t), float(w)) for t in np.linspace(a.t_min, a.t_max, a.t_points)
              for w in np.linspace(0.1, 0.9, a.omega_points)]
    if a.include_absolute:
        points.append((2.0, 5.0, 0.3))
    all_ok = True
    worst_frac = 0.0
    for sigma, t, omega in points:
        K = a.k if a.k > 0 else (10**5 if sigma > 1 else math.ceil(t * t))
        c = functional_eq_check(complex(sigma, t), omega, K, a.abs_err)
        all_ok &= c.ok
        worst_frac = max(worst_frac, c.residual / c.budget.total)
        rep.add(sigma, t, omega, K, c.residual, c.budget.total, c.zeta_err_bound, c.ok)
    rep.summary.update(points=len(points), all_within_budget=all_ok, max_residual_over_budget=worst_frac)
    return 0


def cmd_rm(a, rep: Report, workers: int) -> int:
    f = rm_fuzz(a.trials, a.n, a.seed)
    rep.add(f.trials, a.n, f.violations, f.telescoping_failures, f.worst_ratio)
    rep.summary.update(violations=f.violations, telescoping_failures=f.telescoping_failures,
                       passed=f.violations == 0 and f.telescoping_failures == 0)
    return 0


def cmd_lemma4(a, rep: Report, workers: int) -> int:
    ok_all = True
    for alpha in a.alphas:
        spec = ArraySpec(Kernel.POWER_NOISE, alpha=alpha, seed=a.seed)
        for m in range(a.m_max + 1):
            emp, bound = lemma4_empirical(m, spec, a.reps, a.seed)
            ok = emp <= bound
            ok_all &= ok
            rep.add(alpha, m, emp, bound, ok)
    rep.summary.update(all_within_bound=ok_all)
    return 0


def cmd_qlil(a, rep: Report, workers: int) -> int:
    kernel = Kernel(a.kernel)
    alpha = a.alpha if kernel is Kernel.POWER_NOISE else 0.5
    spec = ArraySpec(kernel, alpha=alpha, epsilon=a.epsilon, seed=a.seed)
    members = 1 if kernel is Kernel.DETERMINISTIC_HARMONIC else a.members
    reports = qlil_ensemble(spec, a.n_max, members, workers)
    for r in reports:
        for n, ratio, dy in zip(r.n_grid, r.ratios, r.is_dyadic):
            rep.add(r.member, int(n), float(ratio), bool(dy))
    last = [r.last_block_max for r in reports]
    glob = [r.global_max for r in reports]
    ks = reports[0].dyadic_k
    rep.summary.update(
        members=members,
        median_last_block_max=statistics.median(last),
        median_global_max=statistics.median(glob),
        last_block_below_global=statistics.median(last) < statistics.median(glob),
        dyadic_k=[int(k) for k in ks],
        median_s_ratio=[float(np.median([r.s_ratios[i] for r in reports])) for i in range(ks.size)],
        median_y_ratio=[float(np.median([r.y_ratios[i] for r in reports])) for i in range(ks.size)],
    )
    if kernel is Kernel.HURWITZ_PHASE:
        rep.summary["omegas"] = [r.omega for r in reports]
    return 0


def cmd_meanvalue(a, rep: Report, workers: int) -> int:
    rows = []
    for t in a.t_list:
        r = mean_value_integral(t, a.panels or None, a.abs_err, workers, t_cap=a.t_cap)
        rows.append(r)
        rep.add(r.t, r.integral, r.log_t, r.ratio, r.quad_err_bound)
    if len(rows) >= 2:
        rep.summary["slope_vs_log_t"] = mean_value_slope(rows)
    rep.summary["max_rel_quad_err"] = max(r.quad_err_bound / r.integral for r in rows)
    return 0


def cmd_tail(a, rep: Report, workers: int) -> int:
    rows = chebyshev_tail_measure(a.t, a.c_list, a.samples, a.seed, a.abs_err, workers)
    for r in rows:
        rep.add(r.C, r.threshold, r.measure_hat, r.std_err)
    ordered = sorted(rows, key=lambda r: r.C)
    rep.summary.update(
        max_c2_measure=max(r.C**2 * r.measure_hat for r in rows),
        nonincreasing=all(x.measure_hat >= y.measure_hat for x, y in zip(ordered, ordered[1:])),
    )
    return 0


def cmd_scan(a, rep: Report, workers: int) -> int:
    grid = TGrid(a.t_min, a.t_max, a.points)
    omegas = [a.omega] if a.omega is not None else [float(w) for w in seeded_omegas(a.members, a.seed)]
    per = []
    failures = 0
    for w in omegas:
        sr = growth_scan(w, grid, a.epsilon, a.abs_err, workers)
        failures += sr.failures
        for row in sr.rows:
            rep.add(sr.omega, row.t, row.abs, row.ratio)
        per.append({"omega": sr.omega, "global_max_ratio": sr.global_max_ratio, "tail_max_ratio": sr.tail_max_ratio})
    rep.summary.update(
        per_omega=per,
        max_global_max_ratio=max(p["global_max_ratio"] for p in per),
        tail_below_global=sum(p["tail_max_ratio"] < p["global_max_ratio"] for p in per),
        failed_rows=failures,
    )
    if failures:
        rep.meta["failure"] = f"{failures} scan rows did not converge"
        return 1
    return 0


def cmd_section(a, rep: Report, workers: int) -> int:
    xs = np.linspace(a.x_min, a.x_max, a.points)
    rows = section_profile(a.t, xs, a.abs_err, workers)
    for r in rows:
        rep.add(r.x, r.y)
    ys = np.array([r.y for r in rows])
    finite = ys[np.isfinite(ys)]
    rep.summary["lag1_autocorrelation"] = lag_autocorrelation(finite) if finite.size > 2 else None
    if finite.size < ys.size:
        rep.meta["failure"] = f"{ys.size - finite.size} section rows did not converge"
        return 1
    return 0


def cmd_mu(a, rep: Report, workers: int) -> int:
    est = mu_exponent_estimate(a.sigma, a.omega, TGrid(a.t_min, a.t_max, a.points), a.abs_err, workers)
    rep.add(est.sigma, est.omega, est.mu_hat, est.blocks)
    return 0


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="lindeloef", description=__doc__, formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit seed, or 'random' for wall-clock seeding")
    common.add_argument("--threads", type=int, default=0, help=f"worker threads; 0 = ${THREADS_ENV} or CPU count")
    common.add_argument("--out", default="-", help="output path, '-' for standard output")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    common.add_argument("--abs-err", type=_abs_err, default=1e-10, help="target absolute error per zeta value")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text, formatter_class=fmt)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate zeta(sigma + it, omega)")
    p.add_argument("--sigma", type=float, default=0.5, help="real part of s")
    p.add_argument("--t", type=float, default=100.0, help="imaginary part of s")
    p.add_argument("--omega", type=float, default=0.3, help="Hurwitz parameter in (0, 2]")

    p = add("identity-check", cmd_identity, "half-parameter and shift identities on a 200-point grid")
    p.add_argument("--points", type=int, default=200, help="grid points")

    p = add("funceq-check", cmd_funceq, "functional-equation residual against its error budget")
    p.add_argument("--sigma", type=float, default=0.5, help="real part of s")
    p.add_argument("--t-min", type=float, default=5.0, help="smallest t")
    p.add_argument("--t-max", type=float, default=50.0, help="largest t")
    p.add_argument("--t-points", type=int, default=10, help="t grid points")
    p.add_argument("--omega-points", type=int, default=9, help="omega grid points in [0.1, 0.9]")
    p.add_argument("--k", type=int, default=0, help="truncation K; 0 = ceil(t^2)")
    p.add_argument("--no-absolute", dest="include_absolute", action="store_false",
                   help="skip the extra absolutely convergent point s = 2 + 5i, omega = 0.3")

    p = add("rm-check", cmd_rm, "fuzz the dyadic maximal inequality and chain telescoping")
    p.add_argument("--n", type=int, default=6, help="largest dyadic depth")
    p.add_argument("--trials", type=int, default=100000, help="random prefix arrays")

    p = add("lemma4-check", cmd_lemma4, "Monte Carlo maximal second moment against (m^2+1) sum sigma^2")
    p.add_argument("--alphas", type=_float_list, default=[0.0, 0.5, 1.0], help="decay exponents")
    p.add_argument("--m-max", type=int, default=7, help="largest block index m")
    p.add_argument("--reps", type=int, default=10000, help="replications per (alpha, m)")

    p = add("qlil", cmd_qlil, "diagonal-sum ratios |S_n^(n)|/phi(n) on a dyadic grid")
    p.add_argument("--kernel", choices=[k.value for k in Kernel], default=Kernel.HURWITZ_PHASE.value, help="array kernel")
    p.add_argument("--alpha", type=float, default=0.5, help="decay exponent (PowerNoise only)")
    p.add_argument("--epsilon", type=float, default=0.1, help="epsilon in phi")
    p.add_argument("--n-max", type=int, default=2**16, help="largest n")
    p.add_argument("--members", type=int, default=100, help="ensemble size")

    p = add("meanvalue", cmd_meanvalue, "int_0^1 |zeta_1(1/2+it, omega)|^2 d omega versus log t")
    p.add_argument("--t-list", type=_float_list, default=[1e2, 1e3, 1e4], help="values of t")
    p.add_argument("--panels", type=int, default=0, help="quadrature panels; 0 = max(256, ceil t)")
    p.add_argument("--t-cap", type=float, default=2e4, help="largest accepted t")

    p = add("tailmeasure", cmd_tail, "measure of omega with |zeta(1/2+it, omega)| >= C sqrt(log t)")
    p.add_argument("--t", type=float, default=1000.0, help="imaginary part of s")
    p.add_argument("--c-list", type=_float_list, default=[2.0, 4.0, 8.0], help="values of C")
    p.add_argument("--samples", type=int, default=10000, help="omega samples")

    p = add("scan", cmd_scan, "|zeta(1/2+it, omega)| / (log t)^(3/2+eps) on a geometric t grid")
    p.add_argument("--omega", type=float, default=None, help="single omega; default is a seeded ensemble")
    p.add_argument("--members", type=int, default=20, help="seeded omegas in [0.05, 0.95]")
    p.add_argument("--t-min", type=float, default=10.0, help="smallest t")
    p.add_argument("--t-max", type=float, default=1e4, help="largest t")
    p.add_argument("--points", type=int, default=400, help="grid points")
    p.add_argument("--epsilon", type=float, default=0.1, help="epsilon in the normaliser")

    p = add("section", cmd_section, "omega-section |zeta_1(1/2+it, x)| / (log t)^2")
    p.add_argument("--t", type=float, default=1e6, help="imaginary part of s")
    p.add_argument("--points", type=int, default=512, help="x grid points")
    p.add_argument("--x-min", type=float, default=0.05, help="smallest x")
    p.add_argument("--x-max", type=float, default=0.95, help="largest x")

    p = add("mu", cmd_mu, "dyadic upper-envelope estimate of the growth exponent mu_omega(sigma)")
    p.add_argument("--sigma", type=float, default=0.5, help="real part of s")
    p.add_argument("--omega", type=float, default=0.3, help="Hurwitz parameter")
    p.add_argument("--t-min", type=float, default=10.0, help="smallest t")
    p.add_argument("--t-max", type=float, default=1e4, help="largest t")
    p.add_argument("--points", type=int, default=400, help="grid points")
    return parser


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    workers = resolve_threads(args.threads)
    rep = Report(
        SCHEMAS[args.subcommand],
        meta={"tool": "lindeloef", "version": __version__, "subcommand": args.subcommand,
              "seed": args.seed, "config": _config_echo(args), "status": "ok"},
    )
    start = time.perf_counter()
    code = 0
    try:
        code = args.func(args, rep, workers)
    except (DomainError, CliError) as exc:
        print(f"lindeloef {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except LindeloefError as exc:
        rep.meta["failure"] = f"{type(exc).__name__}: {exc}"
        code = 1
    if code:
        rep.meta["status"] = "partial"
    try:
        emit(rep, args.format, args.out)
    except LindeloefError as exc:
        print(f"lindeloef: {exc}", file=sys.stderr)
        return 1
    log.info("%s: %d rows, %d threads, %.2fs", args.subcommand, len(rep.rows), workers, time.perf_counter() - start)
    return code


def main() -> None:
    logging.basicConfig(level=os.environ.get("LINDELOEF_LOG", "INFO"), format="%(message)s", stream=sys.stderr)
    sys.exit(run())


if __name__ == "__main__":
    main()
