import numpy as np
import pytest

import rimlab as rl
from rimlab.maps import Kind, Side

LSV_HALF = rl.MapSpec.lsv(0.5)
LSV_ONE = rl.MapSpec.lsv(1.0)
ATT = rl.MapSpec.attracting(2.0, 0.4)


def test_spec_validation():
    with pytest.raises(ValueError):
        rl.MapSpec.lsv(0.0)
    with pytest.raises(ValueError):
        rl.MapSpec.attracting(0.5, 1.0)
    with pytest.raises(ValueError):
        rl.MapSpec.attracting(0.5, 0.0)
    with pytest.raises(ValueError):
        rl.MapSpec(Kind.LSV, 0.5, kappa=0.3)


def test_eval_map_known_values():
    # T(1/2) = 1 for every alpha: 0.5 * (1 + 2^a * 0.5^a) = 0.5 * 2
    for alpha in (0.25, 0.5, 1.0, 2.0):
        assert rl.eval_map(rl.MapSpec.lsv(alpha), 0.5) == pytest.approx(1.0, abs=1e-15)
    assert rl.eval_map(LSV_HALF, 0.75) == pytest.approx(0.5, abs=1e-15)
    # hand evaluation: 0.5 + 0.4*0.25 + 2*0.6*0.0625
    assert rl.eval_map(ATT, 0.75) == pytest.approx(0.675, abs=1e-15)
    assert rl.eval_map(ATT, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_eval_map_domain():
    assert rl.eval_map(LSV_HALF, 1.0 + 1e-14) <= 1.0
    with pytest.raises(rl.MapDomainError):
        rl.eval_map(LSV_HALF, 1.1)
    with pytest.raises(rl.MapDomainError):
        rl.eval_map(LSV_HALF, -0.1)


def test_fixed_point_structure():
    for spec in (LSV_HALF, LSV_ONE, ATT):
        assert rl.eval_map(spec, 0.0) == 0.0
    assert rl.eval_map(ATT, 1.0) == pytest.approx(1.0, abs=1e-15)
    # right limit at 1/2 is a fixed point of the attracting branch
    w = 1e-12
    assert rl.eval_map(ATT, 0.5 + w) == pytest.approx(0.5, abs=1e-11)


def test_derivative_known_values():
    # neutral fixed point
    assert rl.eval_derivative(LSV_ONE, rl.BranchPoint(0.0, Side.LEFT)) == 1.0
    # attracting slope at 1/2 from the right is kappa
    assert rl.eval_derivative(ATT, rl.BranchPoint(0.5, Side.RIGHT)) == pytest.approx(0.4)
    # and 2 - kappa at 1
    assert rl.eval_derivative(ATT, rl.BranchPoint(1.0, Side.RIGHT)) == pytest.approx(1.6)
    assert rl.eval_derivative(LSV_HALF, rl.BranchPoint(0.8, Side.RIGHT)) == 2.0


def test_branch_point_side_consistency():
    with pytest.raises(ValueError):
        rl.BranchPoint(0.7, Side.LEFT)
    with pytest.raises(ValueError):
        rl.BranchPoint(0.2, Side.RIGHT)
    assert rl.BranchPoint.of(0.5).side is Side.LEFT
    assert rl.BranchPoint.of(0.500001).side is Side.RIGHT


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(42)
    h = 1e-5
    for spec in (LSV_HALF, LSV_ONE, ATT, rl.MapSpec.attracting(0.7, 0.9)):
        # interior points away from the kink at 1/2
        xs = rng.uniform(0.05, 0.49, 500)
        xs = np.concatenate([xs, rng.uniform(0.51, 0.99, 500)])
        for x in xs:
            side = Side.LEFT if x <= 0.5 else Side.RIGHT
            fd = (rl.eval_map(spec, x + h) - rl.eval_map(spec, x - h)) / (2 * h)
            d = rl.eval_derivative(spec, rl.BranchPoint(x, side))
            assert abs(fd - d) / d < 1e-6


def test_left_inverse_oracle():
    # forward oracle: T(0.25) = 0.25 * (1 + 2 * 0.25) = 0.375 for alpha = 1
    assert rl.eval_map(LSV_ONE, 0.25) == pytest.approx(0.375, abs=1e-15)
    assert rl.left_inverse(LSV_ONE, 0.375) == pytest.approx(0.25, abs=1e-13)
    for alpha in (0.3, 0.5, 1.0, 2.5):
        spec = rl.MapSpec.lsv(alpha)
        assert rl.left_inverse(spec, 1.0) == pytest.approx(0.5, abs=1e-13)
        assert rl.left_inverse(spec, 0.0) == 0.0


def test_left_inverse_round_trip():
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.0, 1.0, 1000)
    for alpha in (0.4, 0.5, 1.0, 1.7):
        spec = rl.MapSpec.lsv(alpha)
        ys = rl.left_inverse(spec, xs)
        assert np.all(ys >= 0.0) and np.all(ys <= 0.5)
        back = np.array([rl.eval_map(spec, y) for y in ys])
        assert np.max(np.abs(back - xs)) <= 1e-12


def test_right_inverse_attracting_round_trip():
    rng = np.random.default_rng(8)
    xs = 0.5 + rng.uniform(0.0, 0.5, 1000) + 1e-12
    for kappa in (0.1, 0.4, 0.9, 1.0 - 1e-10):
        spec = rl.MapSpec.attracting(0.5, kappa)
        zs = rl.right_inverse_attracting(spec, xs)
        assert np.all(zs > 0.5) and np.all(zs <= 1.0 + 1e-12)
        back = np.array([rl.eval_map(spec, z) for z in zs])
        assert np.max(np.abs(back - xs)) <= 1e-12


def test_right_inverse_attracting_known():
    assert rl.right_inverse_attracting(ATT, 0.675) == pytest.approx(0.75, abs=1e-13)
    assert rl.right_inverse_attracting(ATT, 1.0) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(rl.MapDomainError):
        rl.right_inverse_attracting(ATT, 0.5)
    with pytest.raises(ValueError):
        rl.right_inverse_attracting(LSV_HALF, 0.75)


def test_right_inverse_lsv():
    assert rl.right_inverse_lsv(1.0) == 1.0
    assert rl.right_inverse_lsv(0.5) == 0.75
    assert rl.right_inverse_lsv(0.2) == pytest.approx(0.6, abs=1e-15)


def test_xi_endpoints_and_values():
    for alpha in (0.5, 1.0, 2.0):
        spec = rl.MapSpec.lsv(alpha)
        assert rl.xi(spec, 0.0) == 0.0
        assert rl.xi(spec, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert rl.xi(LSV_ONE, 0.375) == pytest.approx(0.5, abs=1e-12)


def test_inverses_strictly_increasing():
    xs = np.linspace(1e-6, 1.0, 2000)
    for spec in (LSV_HALF, LSV_ONE):
        ys = rl.left_inverse(spec, xs)
        assert np.all(np.diff(ys) > 0)
        assert np.all(np.diff(rl.xi(spec, xs)) > 0)
    assert np.all(np.diff(rl.right_inverse_lsv(xs)) > 0)
    xr = np.linspace(0.5 + 1e-9, 1.0, 2000)
    zr = rl.right_inverse_attracting(ATT, xr)
    assert np.all(np.diff(zr) > 0)
