import numpy as np
import pytest

import rimlab as rl
from rimlab.diagnostics import kac_set
from rimlab.system import Phase


# ---------------------------------------------------------------------------
# Ulam
# ---------------------------------------------------------------------------


def test_ulam_rows_are_stochastic(fig2a):
    model = rl.build_ulam(fig2a, 64)
    rows = np.asarray(model.transition.sum(axis=1)).ravel()
    assert np.abs(rows - 1.0).max() <= 1e-10
    assert model.stationary.min() >= 0.0
    assert model.stationary.sum() == pytest.approx(1.0, abs=1e-12)


def test_ulam_stationary_is_fixed_point(fig2a):
    model = rl.build_ulam(fig2a, 256)
    v = model.stationary
    assert np.abs(model.transition.T @ v - v).sum() <= 1e-8


def test_ulam_bin_validation(fig2a):
    with pytest.raises(ValueError):
        rl.build_ulam(fig2a, 100)  # not a power of two
    with pytest.raises(ValueError):
        rl.build_ulam(fig2a, 32)  # too few


def test_ulam_agrees_with_operator_on_mild_system(fig2b):
    # cross-estimator agreement where the stationary density is tame
    model = rl.build_ulam(fig2b, 1024)
    res = rl.power_iterate(fig2b, 600, nodes_per_half=1024)
    truth = res.density.bin_averages(model.edges)
    l1 = np.abs(truth - model.stationary_density).sum() / 1024
    assert l1 <= 0.05


# ---------------------------------------------------------------------------
# orbit histogram
# ---------------------------------------------------------------------------


def test_histogram_point_mass_at_zero(fig2a):
    hist = rl.orbit_histogram(fig2a, 0.0, seed=4, steps=100_000, bins=128)
    assert hist.counts[0] == hist.counts.sum()


def test_histogram_normalization(fig2a):
    hist = rl.orbit_histogram(fig2a, 0.3, seed=4, steps=200_000, bins=128)
    assert float(hist.density.sum() / 128) == pytest.approx(1.0, abs=1e-12)
    assert hist.counts.sum() == 200_000 - 2_000  # 1% burn-in discarded


def test_histogram_requires_enough_steps(fig2a):
    with pytest.raises(ValueError):
        rl.orbit_histogram(fig2a, 0.3, seed=4, steps=1000, bins=64)


def test_histogram_agrees_with_ulam_on_mild_system(fig2b):
    model = rl.build_ulam(fig2b, 512)
    hist = rl.orbit_histogram(fig2b, 0.3, seed=2, steps=2_000_000, bins=512)
    l1 = np.abs(hist.density - model.stationary_density).sum() / 512
    assert l1 <= 0.05


def test_weaker_trapping_puts_less_mass_next_to_half(fig2a, fig2b):
    # K = 0.8 releases orbits from 1/2 much faster than K = 0.2
    h_a = rl.orbit_histogram(fig2a, 0.3, seed=6, steps=1_000_000, bins=100)
    h_b = rl.orbit_histogram(fig2b, 0.3, seed=6, steps=1_000_000, bins=100)
    assert h_b.density[50] < h_a.density[50]  # bin (0.50, 0.51)


# ---------------------------------------------------------------------------
# Kac return times
# ---------------------------------------------------------------------------


def test_kac_set_geometry(fig2a):
    ks = kac_set(fig2a)
    lsv, att = fig2a.maps
    # LSV right-branch inverse of 3/4 is exactly 7/8
    assert ks.b_hi[0] == pytest.approx(0.875, abs=1e-15)
    # attracting endpoint: forward image must return 3/4 (round-trip oracle)
    assert rl.eval_map(att, ks.b_hi[1]) == pytest.approx(0.75, abs=1e-12)
    # A_j = (x_2, y(3/4)) is an interval in the left half
    for j in range(2):
        assert 0.25 < ks.a_lo[j] < ks.a_hi[j] <= 0.5
        assert rl.eval_map(fig2a.maps[j], ks.a_lo[j]) == pytest.approx(0.5, abs=1e-12)
        assert rl.eval_map(fig2a.maps[j], ks.a_hi[j]) == pytest.approx(0.75, abs=1e-12)
    assert ks.contains(1, 0.8) and not ks.contains(1, 0.9)


def test_kac_reproducible_and_thread_invariant(fig2a):
    r1 = rl.kac_experiment(fig2a, seed=3, samples=1000, cap=100_000)
    r2 = rl.kac_experiment(fig2a, seed=3, samples=1000, cap=100_000)
    r8 = rl.kac_experiment(fig2a, seed=3, samples=1000, cap=100_000, threads=8)
    assert np.array_equal(r1.times, r2.times)
    assert np.array_equal(r1.times, r8.times)
    assert np.array_equal(r1.start_points, r8.start_points)
    assert r1.times.min() >= 1
    assert r1.start_mode == "uniform"


def test_kac_mean_matches_kac_lemma_on_mild_system(fig2b, fig2b_run):
    # Kac: E[return time] = 1 / (p-weighted stationary mass of Y)
    result = rl.kac_experiment(
        fig2b, seed=3, samples=20_000, cap=1_000_000, density=fig2b_run.density
    )
    assert result.start_mode == "density"
    assert result.censored_fraction == 0.0
    assert result.mean == pytest.approx(result.predicted_mean, rel=0.1)


def test_kac_censoring_is_reported(fig2a):
    # a tiny cap forces censoring; censored runs count at the cap
    result = rl.kac_experiment(fig2a, seed=3, samples=1000, cap=2)
    assert result.censored.any()
    assert np.all(result.times[result.censored] == 2)
    summary = result.to_summary()
    assert summary["censored_count"] == int(result.censored.sum())


def test_kac_finite_phase_has_negligible_censoring(fig2a):
    result = rl.kac_experiment(fig2a, seed=3, samples=10_000, cap=10_000_000)
    assert result.censored_fraction < 0.001


# ---------------------------------------------------------------------------
# preimage sequences
# ---------------------------------------------------------------------------


def test_preimage_sequence_start_and_decay():
    seq = rl.preimage_sequence(rl.MapSpec.lsv(1.0), 200)
    assert seq[0] == 0.5
    assert np.all(np.diff(seq) < 0) and np.all(seq > 0)
    # alpha = 1: x_n ~ 1/n up to constants
    ratio = seq * np.arange(1, 201)
    assert ratio[-1] / ratio[9] < 5.0


def test_preimage_ratio_bounds():
    for alpha in (0.5, 1.0):
        rep = rl.preimage_bounds_check(rl.MapSpec.lsv(alpha), n_max=2000)
        assert rep.ratio_ok
        (lo, hi) = rep.ratios[1]
        assert hi / lo <= 100.0
        assert rep.ordering_ok is None


def test_preimage_ordering_against_fastest_map(fig2a):
    rep = rl.preimage_bounds_check(fig2a, seed=17, n_max=800, n_words=30)
    assert rep.ordering_ok
    assert rep.min_margin >= -1e-14
    assert rep.passed


def test_preimage_single_symbol_word_is_exact():
    # a word repeating the alpha_min symbol reproduces x_n(i) exactly
    system = rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.9, 0.5)], [1 - 1e-12, 1e-12]
    )
    rep = rl.preimage_bounds_check(system, seed=1, n_max=300, n_words=5)
    # all words are almost surely constant = symbol 1 = the alpha_min map
    assert rep.min_margin == 0.0


# ---------------------------------------------------------------------------
# continuity in p
# ---------------------------------------------------------------------------


def test_continuity_zero_delta_gives_zero_distance(fig2a):
    res = rl.continuity_experiment(
        fig2a, [1.0, -1.0], [0.0], nodes_per_half=64, iterations=30
    )
    assert res.distances[0] == 0.0


def test_continuity_requires_simplex_tangent(fig2a):
    with pytest.raises(ValueError):
        rl.continuity_experiment(fig2a, [1.0, 1.0], [0.01], nodes_per_half=64)


def test_continuity_rejects_phase_leaving_perturbations(fig2a):
    # moving mass onto the attracting map crosses eta = 1 at delta ~ 0.089
    with pytest.raises(ValueError):
        rl.continuity_experiment(fig2a, [-1.0, 1.0], [0.1], nodes_per_half=64)
    with pytest.raises(ValueError):
        rl.continuity_experiment(fig2a, [1.0, -1.0], [0.45], nodes_per_half=64)


def test_continuity_rejects_infinite_base(eta_above_one):
    with pytest.raises(ValueError):
        rl.continuity_experiment(eta_above_one, [1.0, -1.0], [0.01], nodes_per_half=64)


def test_continuity_distances_shrink(fig2a):
    res = rl.continuity_experiment(
        fig2a, [1.0, -1.0], [0.08, 0.04, 0.02], nodes_per_half=256, iterations=150
    )
    assert res.distances[0] > res.distances[1] > res.distances[2] > 0.0
