import math

import numpy as np
import pytest

import rimlab as rl
from rimlab.system import Phase, sample_word_from


def test_system_validation():
    lsv, att = rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.2)
    with pytest.raises(ValueError):
        rl.RandomSystem.of([lsv, att], [0.7, 0.4])  # does not sum to 1
    with pytest.raises(ValueError):
        rl.RandomSystem.of([lsv, att], [1.0, 0.0])  # zero probability
    with pytest.raises(ValueError):
        rl.RandomSystem.of([lsv, rl.MapSpec.lsv(0.7)], [0.5, 0.5])  # no attracting map
    with pytest.raises(ValueError):
        rl.RandomSystem.of([att, rl.MapSpec.attracting(0.6, 0.3)], [0.5, 0.5])  # no LSV
    with pytest.raises(ValueError):
        # alpha_min >= 1 violates the standing assumption
        rl.RandomSystem.of([rl.MapSpec.lsv(1.2), rl.MapSpec.attracting(1.5, 0.4)], [0.5, 0.5])


def test_eta_known_values(fig2a, fig2b):
    # single attracting map: eta = p_r * K_r^(-alpha_min)
    assert rl.eta(fig2a) == pytest.approx(0.4 * 0.2**-0.5, abs=1e-14)
    assert rl.eta(fig2a) == pytest.approx(0.894427, abs=1e-6)
    # Figure 2(a) regime: eta < 1 < p2/K2
    assert rl.eta(fig2a) < 1.0 < 0.4 / 0.2
    # Figure 2(b) regime: eta < p2/K2 < 1
    assert rl.eta(fig2b) == pytest.approx(0.4 * 0.8**-0.5, abs=1e-14)
    assert rl.eta(fig2b) < 0.4 / 0.8 < 1.0


def test_eta_vanishes_with_probability():
    sys_eps = rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.2)], [1 - 1e-9, 1e-9]
    )
    assert rl.eta(sys_eps) == pytest.approx(1e-9 * 0.2**-0.5, rel=1e-12)


def test_gamma_closed_form(fig2a, fig2b):
    # one attracting map: p * K^(-g) = 1 has the closed form g = ln p / ln K
    assert rl.gamma(fig2a) == pytest.approx(math.log(0.4) / math.log(0.2), abs=1e-10)
    assert rl.gamma(fig2b) == pytest.approx(math.log(0.4) / math.log(0.8), abs=1e-10)
    assert rl.gamma(fig2b) > 1.0  # so beta = 1 is admissible


def test_eta_gamma_consistency(fig2a, fig2b, eta_above_one):
    for system in (fig2a, fig2b, eta_above_one):
        g = rl.gamma(system)
        total = float(
            np.sum(system.attracting_probs * system.attracting_kappas ** (-g))
        )
        assert abs(total - 1.0) <= 1e-10
        # eta is the same sum evaluated at alpha_min
        e = float(
            np.sum(system.attracting_probs * system.attracting_kappas ** (-system.alpha_min))
        )
        assert rl.eta(system) == e
        if rl.eta(system) < 1.0:
            assert g > system.alpha_min


def test_classify_trichotomy(fig2a, eta_above_one):
    rep = rl.classify(fig2a)
    assert rep.phase is Phase.FINITE_ACS
    assert rep.beta_range == (0.5, pytest.approx(rl.gamma(fig2a)))
    assert rl.classify(eta_above_one).phase is Phase.NO_FINITE_ACS
    # engineered eta = 1: p_r = K_r^alpha_min with K = 0.25, alpha_min = 0.5
    critical = rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.25)], [0.5, 0.5]
    )
    assert rl.eta(critical) == 1.0
    assert rl.classify(critical).phase is Phase.CRITICAL


def test_classify_permutation_invariant(fig2a):
    swapped = rl.RandomSystem.of(tuple(reversed(fig2a.maps)), tuple(reversed(fig2a.probs)))
    a, b = rl.classify(fig2a), rl.classify(swapped)
    assert a.phase is b.phase
    assert a.eta == pytest.approx(b.eta, abs=1e-15)
    assert a.gamma == pytest.approx(b.gamma, abs=1e-12)


def test_sample_word_deterministic(fig2a):
    w1 = rl.sample_word(fig2a, 123, 1000)
    w2 = rl.sample_word(fig2a, 123, 1000)
    assert np.array_equal(w1, w2)
    assert not np.array_equal(w1, rl.sample_word(fig2a, 124, 1000))


def test_sample_word_lengths_and_symbols(fig2a):
    assert rl.sample_word(fig2a, 5, 0).size == 0
    w = rl.sample_word(fig2a, 5, 10_000)
    assert set(np.unique(w)) <= {1, 2}


def test_sample_word_degenerate_vector():
    sys_eps = rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.2)], [1 - 1e-9, 1e-9]
    )
    w = rl.sample_word(sys_eps, 9, 10_000)
    assert np.mean(w == 1) >= 0.999


def test_sample_word_frequency(fig2a):
    # binomial 4-sigma window: 4 * sqrt(0.6 * 0.4 / 1e6) ~ 0.00196
    w = rl.sample_word(fig2a, 1, 1_000_000)
    assert abs(np.mean(w == 1) - 0.6) <= 0.002


def test_iterate_orbit_fixed_points(fig2a):
    word = rl.sample_word(fig2a, 3, 500)
    trace = rl.iterate_orbit(fig2a, 0.0, word)
    assert np.all(trace.points == 0.0)
    att_word = np.full(100, 2, dtype=np.int64)  # symbol 2 is the attracting map
    trace = rl.iterate_orbit(fig2a, 1.0, att_word)
    assert np.all(trace.points == 1.0)
    assert len(trace.points) == len(att_word) + 1


def test_attracting_orbit_contracts_at_rate_kappa():
    system = rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.4)], [0.5, 0.5]
    )
    # 15 steps keep the gap well above ulp(0.5), so ratios are clean
    word = np.full(15, 2, dtype=np.int64)
    pts = rl.iterate_orbit(system, 0.75, word).points
    gaps = pts - 0.5
    assert np.all(np.diff(pts) < 0)  # monotone decrease toward 1/2
    ratios = gaps[1:] / gaps[:-1]
    # one-step contraction is exactly kappa + 2(1-kappa) * gap -> kappa
    # (points store 0.5 + gap, so gaps carry ~ulp(0.5)/gap relative noise)
    assert ratios[-1] == pytest.approx(0.4 + 1.2 * gaps[14], rel=1e-9)
    assert ratios[-1] == pytest.approx(0.4, abs=1e-5)


def test_orbit_stays_in_unit_interval(fig2a):
    trace = rl.random_orbit(fig2a, 0.3, 1_000_000, seed=11)
    assert trace.points.min() >= 0.0
    assert trace.points.max() <= 1.0


def test_intermittency_signature(fig2a):
    # finite-acs orbits keep visiting both laminar regions
    pts = rl.random_orbit(fig2a, 0.3, 1_000_000, seed=13).points
    assert np.mean(pts < 0.01) > 0.0
    assert np.mean((pts > 0.49) & (pts < 0.51)) > 0.0


def test_substreams_are_independent_of_count():
    # the i-th spawned stream does not depend on how many siblings exist
    a = rl.spawn_rngs(99, 3)[1].random(4)
    b = rl.spawn_rngs(99, 8)[1].random(4)
    assert np.array_equal(a, b)


def test_sample_word_from_shared_stream(fig2a):
    rng = rl.make_rng(2)
    w1 = sample_word_from(fig2a, rng, 10)
    w2 = sample_word_from(fig2a, rng, 10)
    assert not np.array_equal(w1, w2)  # stream advances
