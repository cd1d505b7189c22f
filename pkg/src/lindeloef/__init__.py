"""Hurwitz zeta evaluation, exponential sums, dyadic maximal inequalities and
desk-scale experiments on zeta(1/2 + it, omega)."""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    InsufficientBlocks,
    InvalidSpec,
    InvalidTolerance,
    LengthMismatch,
    LindeloefError,
    NonConvergence,
    PoleAtNonpositiveInteger,
    PoleAtOne,
    QuadratureNotConverged,
    ReportIOError,
    TruncationTooLarge,
)
from .expsum import (
    ErrorBudget,
    FunctionalEqCheck,
    f_sum_truncated,
    functional_eq_check,
    functional_eq_residual,
    functional_eq_rhs,
    phase_bound,
    phase_sum,
)
from .gamma import gamma_abs_asymptotic, log_gamma, log_gamma_abs_asymptotic
from .harness import (
    TGrid,
    chebyshev_tail_measure,
    growth_scan,
    mean_value_integral,
    mean_value_slope,
    mu_exponent_estimate,
    section_profile,
)
from .menchoff import (
    ArraySpec,
    Kernel,
    PrefixArray,
    dyadic_chain,
    lemma4_bound,
    lemma4_empirical,
    phi,
    qlil_ensemble,
    qlil_trajectory,
    rm_bound,
    rm_fuzz,
    telescope,
)
from .report import Report, emit
from .zeta import (
    EvalResult,
    Method,
    SPoint,
    dirichlet_series_direct,
    hurwitz_zeta,
    hurwitz_zeta_many,
    zeta1,
)
