import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindeloef.errors import DomainError, InvalidSpec, LengthMismatch
from lindeloef.menchoff import (
    ArraySpec,
    Kernel,
    PrefixArray,
    beta_exponent,
    chain_table,
    dyadic_chain,
    lemma4_bound,
    lemma4_empirical,
    max_prefix_sq,
    pair_correlation_exact,
    pair_correlation_mc,
    phi,
    qlil_ensemble,
    qlil_grid,
    qlil_trajectory,
    rm_bound,
    rm_fuzz,
    telescope,
)


def test_chain_examples():
    c = dyadic_chain(5, 2)
    assert c.chain == (5, 4, 4, 0) and c.bits == (1, 0, 1)
    assert dyadic_chain(1, 3).chain == (1, 0, 0, 0, 0)
    n = 4
    full = dyadic_chain(2 ** (n + 1) - 1, n).chain
    assert [full[k] - full[k + 1] for k in range(n + 1)] == [2**k for k in range(n + 1)]


def test_chain_multipliers_and_table():
    c = dyadic_chain(13, 3)
    # p_{k+1} = delta_{k+1} 2^{k+1}
    assert all(m << (k + 1) == c.chain[k + 1] for k, m in enumerate(c.multipliers))
    table = chain_table(3)
    assert table.shape == (15, 5)
    assert tuple(table[12]) == c.chain


def test_chain_domain():
    with pytest.raises(DomainError):
        dyadic_chain(0, 2)
    with pytest.raises(DomainError):
        dyadic_chain(8, 2)


def test_rm_bound_examples():
    z = complex(3, -4)
    a = PrefixArray(0, [0, z])
    assert rm_bound(a) == pytest.approx(25.0) and max_prefix_sq(a) == pytest.approx(25.0)
    b = PrefixArray(1, [0, 1, 1, 1])
    assert rm_bound(b) == 4.0 and max_prefix_sq(b) == 1.0


def test_prefix_array_validation():
    with pytest.raises(LengthMismatch):
        PrefixArray(2, [0, 1, 2])
    with pytest.raises(DomainError):
        PrefixArray(0, [1, 2])
    a = PrefixArray.from_increments([1, 2, 3])
    assert a.n == 1 and list(a.values.real) == [0, 1, 3, 6]


@st.composite
def prefix_arrays(draw):
    n = draw(st.integers(min_value=0, max_value=5))
    parts = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
    inc = draw(st.lists(st.tuples(parts, parts), min_size=2 ** (n + 1) - 1, max_size=2 ** (n + 1) - 1))
    return PrefixArray.from_increments([complex(x, y) for x, y in inc])


@settings(max_examples=200, deadline=None)
@given(prefix_arrays())
def test_inequality_and_telescoping(a):
    bound = rm_bound(a)
    assert max_prefix_sq(a) <= bound * (1 + 1e-12) + 1e-300
    for p in range(1, 2 ** (a.n + 1)):
        tel = telescope(a, dyadic_chain(p, a.n))
        assert abs(tel - a.values[p]) <= 1e-12 * max(1.0, np.max(np.abs(a.values)))


@settings(max_examples=50, deadline=None)
@given(prefix_arrays(), st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_bound_scales_quadratically(a, c):
    scaled = PrefixArray(a.n, c * a.values)
    assert rm_bound(scaled) == pytest.approx(abs(c) ** 2 * rm_bound(a), rel=1e-9, abs=1e-300)


def test_fuzz_summary():
    f = rm_fuzz(5000, 6, seed=7)
    assert f.trials == 5000 and f.violations == 0 and f.telescoping_failures == 0
    assert 0 < f.worst_ratio <= 1
    assert rm_fuzz(500, 3, seed=1) == rm_fuzz(500, 3, seed=1)


def test_lemma4_bound_examples():
    assert lemma4_bound(0, [1.0]) == 1.0
    assert lemma4_bound(1, [1.0, 1.0]) == 4.0
    assert lemma4_bound(3, np.zeros(8)) == 0.0
    with pytest.raises(LengthMismatch):
        lemma4_bound(2, [1.0, 1.0])


def test_lemma4_single_increment_equality():
    emp, bound = lemma4_empirical(0, ArraySpec(Kernel.POWER_NOISE, alpha=0.0), 10**4, 0)
    # one unit-modulus increment: the maximum is exactly sigma^2
    assert emp == 1.0 and bound == 1.0


def test_lemma4_zero_scale():
    assert lemma4_empirical(4, ArraySpec(Kernel.POWER_NOISE, scale=0.0), 200, 0) == (0.0, 0.0)


def test_lemma4_top_block():
    emp, bound = lemma4_empirical(7, ArraySpec(Kernel.POWER_NOISE, alpha=0.5), 10**4, 0)
    assert bound == pytest.approx(50 * sum(1 / (128 + i) for i in range(1, 129)))
    assert bound == pytest.approx(50 * math.log(2), rel=0.01)
    assert emp <= bound


def test_lemma4_hurwitz_kernel_within_bound():
    emp, bound = lemma4_empirical(5, ArraySpec(Kernel.HURWITZ_PHASE), 2000, 3)
    assert 0 < emp <= bound


def test_lemma4_rejects_control_and_small_reps():
    with pytest.raises(InvalidSpec):
        lemma4_empirical(2, ArraySpec(Kernel.DETERMINISTIC_HARMONIC), 1000)
    with pytest.raises(DomainError):
        lemma4_empirical(2, ArraySpec(Kernel.POWER_NOISE), 99)


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        ArraySpec(Kernel.HURWITZ_PHASE, alpha=0.7)
    with pytest.raises(InvalidSpec):
        ArraySpec(Kernel.POWER_NOISE, epsilon=0.0)
    assert ArraySpec("PowerNoise").kernel is Kernel.POWER_NOISE


def test_phi_examples():
    assert beta_exponent(0.7) == 0.0 and beta_exponent(0.2) == pytest.approx(0.3)
    assert phi(1024, 1.0, 0.5) == pytest.approx(math.log(1024) ** 2)
    assert phi(1024, 1.0, 0.5) == pytest.approx(48.045, abs=1e-3)
    assert phi(100, 0.0, 0.1) == pytest.approx(115.1, abs=0.1)
    with pytest.raises(DomainError):
        phi(1, 0.5, 0.1)


def test_pair_correlation_exact():
    assert pair_correlation_exact(4, 4) == 0.25
    assert pair_correlation_exact(2, 3) == 0
    assert pair_correlation_exact(7, 7, t=123.4) == pytest.approx(1 / 7)


@pytest.mark.parametrize("j, k", [(1, 1), (1, 2), (3, 5), (8, 8), (10, 64), (63, 64)])
def test_pair_correlation_monte_carlo(j, k):
    samples = 10**4
    mc = pair_correlation_mc(j, k, samples, seed=0, t=17.0)
    assert abs(mc - pair_correlation_exact(j, k)) <= 3 / math.sqrt(samples) / math.sqrt(j * k)


def test_qlil_grid():
    n, dy = qlil_grid(256)
    assert list(n[dy]) == [16, 32, 64, 128, 256]
    assert list(n[~dy]) == [24, 48, 96, 192]
    with pytest.raises(DomainError):
        qlil_grid(8)


def test_power_noise_fast_decay_ratio_decreases():
    r = qlil_trajectory(ArraySpec(Kernel.POWER_NOISE, alpha=2.0), 2**14)
    assert np.all(np.diff(r.ratios) < 0)


def test_deterministic_control_grows():
    r = qlil_trajectory(ArraySpec(Kernel.DETERMINISTIC_HARMONIC), 2**16)
    n = r.n_grid
    assert r.ratios[n == 2**16][0] > r.ratios[n == 2**8][0]
    expected = 2 * np.sqrt(n) / np.log(n) ** 1.6
    assert np.allclose(r.ratios, expected, rtol=0.25)


def test_hurwitz_trajectory_direct_sum():
    spec = ArraySpec(Kernel.HURWITZ_PHASE, seed=5)
    r = qlil_trajectory(spec, 256, member=2)
    n = 48
    k = np.arange(1, n + 1)
    direct = abs(np.sum(k ** (-0.5 - 1j * math.sqrt(n)) * np.exp(2j * np.pi * k * r.omega)))
    assert r.ratios[list(r.n_grid).index(n)] == pytest.approx(direct / phi(n, 0.5, 0.1), rel=1e-10)


def test_ensemble_worker_independent():
    spec = ArraySpec(Kernel.HURWITZ_PHASE, seed=11)
    a = qlil_ensemble(spec, 2**10, 6, workers=1)
    b = qlil_ensemble(spec, 2**10, 6, workers=3)
    assert all(np.array_equal(x.ratios, y.ratios) and x.omega == y.omega for x, y in zip(a, b))
    assert len({x.omega for x in a}) == 6
    assert a[0].last_block_max <= a[0].global_max
