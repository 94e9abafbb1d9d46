import math

import numpy as np
import pytest

from probtransforms.discrete import Atoms, Binomial, Cox, Dirac, ExplicitPmf, Geometric, NegBinomial, Poisson
from probtransforms.laplace import Convolution, Erlang, Exponential, Mixture, UnsupportedShape, survival
from probtransforms.sim import (
    Mode,
    PointSequence,
    RngState,
    SamplerExhausted,
    first_thinned_point,
    make_rng,
    sample_cont_n,
    sample_discrete,
    sample_discrete_n,
    sample_m_transform_n,
    sample_poisson_process,
    sample_survival_root,
    sample_thinned,
    sample_thinned_n,
    survival_root_oracle,
    survival_root_oracle_n,
    thin_process,
)
from probtransforms.stattest import histogram, ks_one_sample, ks_two_sample, tv_discrete
from probtransforms.transforms import PositivityRequired, m_transform_cdf, thin

N = 100_000


def test_dirac_sampler_is_constant():
    rng = make_rng(0)
    assert all(sample_discrete(Dirac(4), rng) == 4 for _ in range(50))
    assert np.all(sample_thinned_n(Dirac(0), 0.5, 1000, rng) == 0)
    assert sample_thinned(Dirac(0), 0.3, rng) == 0


def test_poisson_mean():
    x = sample_discrete_n(Poisson(3), N, make_rng(11))
    assert abs(x.mean() - 3) < 3 * math.sqrt(3) / math.sqrt(N)


@pytest.mark.parametrize(
    "d",
    [Cox(Atoms(((1.0, 0.5), (3.0, 0.5)))), Geometric(0.3), NegBinomial(2.5, 0.4), Binomial(7, 0.35),
     ExplicitPmf((0.1, 0.0, 0.6, 0.3))],
    ids=lambda d: type(d).__name__,
)
def test_sampler_matches_pmf(d):
    x = sample_discrete_n(d, N, make_rng(5))
    assert tv_discrete(histogram(x), d, 40).passed


def test_sampler_rejects_unlocated_tail():
    with pytest.raises(UnsupportedShape):
        sample_discrete_n(ExplicitPmf((0.5,), tail=0.5), 10, make_rng(0))


@pytest.mark.parametrize("d, p", [(Poisson(3), 0.4), (Binomial(5, 0.5), 0.5), (Geometric(0.4), 0.7)])
def test_thinned_sampler_matches_thinned_law(d, p):
    x = sample_thinned_n(d, p, N, make_rng(21))
    assert tv_discrete(histogram(x), thin(d, p), 40).passed


def test_thinned_sampler_agrees_with_direct_sampler():
    d, p = Poisson(3.0), 0.4
    a = sample_thinned_n(d, p, N, make_rng(1))
    b = sample_discrete_n(thin(d, p), N, make_rng(2))
    assert ks_two_sample(a, b).passed


@pytest.mark.parametrize("mode", list(Mode))
def test_m_transform_dirac_one_is_uniform(mode):
    x = sample_m_transform_n(Dirac(1), 10_000, make_rng(8), mode)
    assert np.all((x > 0) & (x < 1))
    assert ks_one_sample(x, lambda v: v).statistic < 0.0136


@pytest.mark.parametrize("mode", list(Mode))
def test_m_transform_dirac_two(mode):
    x = sample_m_transform_n(Dirac(2), 10_000, make_rng(9), mode)
    assert ks_one_sample(x, lambda v: v**2).statistic < 0.0136


def test_m_transform_modes_agree():
    d = Dirac(3)
    a = sample_m_transform_n(d, 10_000, make_rng(1), Mode.MAX_OF_UNIFORMS)
    b = sample_m_transform_n(d, 10_000, make_rng(2), Mode.POWER_OF_UNIFORM)
    assert ks_two_sample(a, b).passed


def test_m_transform_requires_positive_law():
    with pytest.raises(PositivityRequired):
        sample_m_transform_n(Geometric(0.5), 10, make_rng(0))


def test_m_transform_against_cdf_for_mixed_law():
    d = ExplicitPmf((0.0, 0.5, 0.3, 0.2))
    x = sample_m_transform_n(d, 10_000, make_rng(4), Mode.MAX_OF_UNIFORMS)
    assert ks_one_sample(x, lambda v: np.array([m_transform_cdf(d, u) for u in v])).passed


def test_poisson_process_count_mean():
    lam, T, runs = 2.0, 5.0, 10_000
    rng = make_rng(3)
    counts = [len(sample_poisson_process(lam, T, rng)) for _ in range(runs)]
    assert abs(np.mean(counts) - lam * T) <= 3 * math.sqrt(lam * T / runs)


def test_poisson_process_points_sorted_in_window():
    ps = sample_poisson_process(50.0, 3.0, make_rng(0))
    assert all(0 < a < b <= 3.0 for a, b in zip(ps.points, ps.points[1:]))
    assert len(ps) > 100


def _point_laws_pass(seed):
    rng = make_rng(seed)
    lam = 2.0
    first, third = [], []
    for _ in range(10_000):
        ps = sample_poisson_process(lam, 10.0, rng)
        first.append(ps.points[0])
        third.append(ps.points[2])
    return (
        ks_one_sample(first, lambda x: 1 - np.exp(-lam * x)).passed
        and ks_one_sample(third, lambda x: 1 - survival(Erlang(3, lam), x)).passed
    )


def test_process_point_laws():
    # each seed passes both 95% KS tests with probability about 0.9
    assert sum(_point_laws_pass(seed) for seed in range(5)) >= 3


def test_thin_process_identity_and_order():
    ps = sample_poisson_process(5.0, 2.0, make_rng(0))
    assert thin_process(ps, 1.0, make_rng(1)) == ps
    kept = thin_process(ps, 0.5, make_rng(1))
    assert set(kept.points) <= set(ps.points)
    assert list(kept.points) == sorted(kept.points)


def test_first_survivor_laws():
    rng = make_rng(44)
    lam, p = 2.0, 0.5
    coords, idx = zip(*(first_thinned_point(lam, p, rng) for _ in range(N)))
    assert ks_one_sample(coords[:10_000], lambda x: 1 - np.exp(-p * lam * x)).statistic < 0.0136
    shifted = np.asarray(idx) - 1  # index k+1 <-> geometric k
    assert tv_discrete(histogram(shifted), Geometric(p), 60).statistic < 0.01


def test_rng_determinism():
    a = sample_discrete_n(Poisson(2.0), 100, RngState(7, 1).generator())
    b = sample_discrete_n(Poisson(2.0), 100, RngState(7, 1).generator())
    c = sample_discrete_n(Poisson(2.0), 100, RngState(7, 2).generator())
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    r1 = [sample_survival_root(Exponential(1), 2, make_rng(5)) for _ in range(3)]
    r2 = [sample_survival_root(Exponential(1), 2, make_rng(5)) for _ in range(3)]
    assert r1 == r2


def test_point_sequence_invariants():
    with pytest.raises(ValueError):
        PointSequence((0.5, 0.2), 1.0)
    with pytest.raises(ValueError):
        PointSequence((0.5, 2.0), 1.0)


def test_cont_sampler_rejects_signed():
    signed = Mixture((2.0, -1.0), (Exponential(1), Exponential(2)), is_signed=True)
    with pytest.raises(UnsupportedShape):
        sample_cont_n(signed, 10, make_rng(0))


# -- survival root -------------------------------------------------------


def test_survival_root_n1_is_first_draw():
    rng_a, rng_b = make_rng(9), make_rng(9)
    for _ in range(20):
        v = sample_survival_root(Exponential(1.0), 1, rng_a)
        rng_b.geometric(1.0)
        assert v == sample_cont_n(Exponential(1.0), 64, rng_b)[0]


def test_survival_root_exp_halves_rate():
    rng = make_rng(2024)
    out = []
    while len(out) < 5000:
        try:
            out.append(sample_survival_root(Exponential(1.0), 2, rng))
        except SamplerExhausted:
            pass
    assert ks_one_sample(out, lambda x: 1 - np.exp(-0.5 * x)).statistic < 0.02


def test_survival_root_exhaustion():
    # alpha >= 2 is almost certain for n = 1000 and two draws cannot make two records often
    rng = make_rng(0)
    with pytest.raises(SamplerExhausted):
        for _ in range(50):
            sample_survival_root(Exponential(1.0), 1000, rng, max_draws=1)


def test_records_nondecreasing():
    # with a tiny budget, track the record walk directly
    x = sample_cont_n(Exponential(1.0), 5000, make_rng(3))
    records = [x[0]]
    for v in x[1:]:
        if v >= records[-1]:
            records.append(v)
    assert records[0] == x[0]
    assert all(b >= a for a, b in zip(records, records[1:]))


def test_oracle_exp_inverse():
    # survival e^{-x} = u^2  =>  x = -2 ln u, an Exponential(1/2) draw
    x = survival_root_oracle_n(Exponential(1.0), 2, 10_000, make_rng(6))
    assert ks_one_sample(x, lambda v: 1 - np.exp(-0.5 * v)).passed


def test_oracle_solver_contract():
    rng = make_rng(1)
    for c in (Exponential(1.0), Erlang(3, 2.0)):
        for n in (1, 2, 5):
            state = rng.bit_generator.state
            x = survival_root_oracle(c, n, rng)
            replay = np.random.Generator(np.random.PCG64())
            replay.bit_generator.state = state
            u = 1.0 - replay.random()
            assert abs(survival(c, x) - u**n) <= 1e-9


def test_oracle_n1_is_inversion():
    x = survival_root_oracle_n(Erlang(2, 1.0), 1, 10_000, make_rng(7))
    assert ks_one_sample(x, lambda v: 1 - survival(Erlang(2, 1.0), v)).passed


def test_record_sampler_agrees_with_oracle_for_erlang():
    c = Erlang(2, 1.0)
    rng = make_rng(77)
    out = []
    while len(out) < 3000:
        try:
            out.append(sample_survival_root(c, 2, rng))
        except SamplerExhausted:
            pass
    oracle = survival_root_oracle_n(c, 2, 3000, make_rng(78))
    assert ks_two_sample(out, oracle).passed


def test_hypoexponential_survival_root():
    c = Convolution((Exponential(1.0), Exponential(3.0)))
    x = survival_root_oracle_n(c, 3, 5000, make_rng(2))
    assert ks_one_sample(x, lambda v: 1 - np.asarray(survival(c, v)) ** (1 / 3)).passed
