"""Annealed Perron-Frobenius operator on densities over (0, 1].

The operator acts on a density f through the inverse branches of the maps:

    Pf(x) = sum_j p_j f(y_j(x)) / (1 + (alpha_j + 1) xi_j(x))
            + p_S f((x+1)/2) / 2                        for x in (0, 1/2]

with an extra term sum_r p_r f(z_r(x)) / DR_r(z_r(x)) on (1/2, 1], where
z_r is the inverse of the attracting right branch and DR_r its derivative.
Its fixed point is the stationary density, which generically has a pole at
0 and (when sum_r p_r / K_r > 1) a second pole at 1/2 from the right.

Densities are held on two geometrically refined grids, one per half
interval, dense toward the singular points 0 and 1/2+. Between nodes the
density is piecewise linear (which preserves monotonicity); below the
smallest node of a half it is extended by the envelope power law
c * s^(-t), whose exponent is stored with the grid, and the mass of that
sub-floor tail is integrated analytically.

The cone checks verify the structure the stationary density must have:

    C0: non-negative, non-increasing on each half
    C1: x^d f(x) and (x-1/2)^d f(x) non-decreasing, d = alpha_max + 2
    C2: power-law envelopes a1 * x^(-t1), a2 * (x-1/2)^(-t2) and unit mass

with t1 = alpha_min + 1 - beta and t2 = 1 - beta for an admissible beta.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .maps import (
    BranchPoint,
    MapSpec,
    Side,
    eval_derivative,
    left_inverse,
    right_inverse_attracting,
    right_inverse_lsv,
    xi,
)
from .system import Phase, RandomSystem, classify, gamma

__all__ = [
    "DensityGrid",
    "ConeParams",
    "TransferOperator",
    "PowerIterationResult",
    "GridMismatchError",
    "apply_operator",
    "apply_operator_at",
    "power_iterate",
    "l1_distance",
    "check_cone_C0",
    "check_cone_C1",
    "check_cone_C2",
    "lipschitz_envelope_check",
    "auxiliary_monotone_checks",
    "pole_slope",
    "random_cone_member",
]

MIN_NODES_PER_HALF = 16
MAX_FLOOR = 1e-6


class GridMismatchError(ValueError):
    """Two DensityGrids do not share the same nodes."""


@dataclass(frozen=True)
class DensityGrid:
    """A density on (0,1] sampled on two singularity-refined grids.

    left_nodes lie in (0, 1/2] ending exactly at 1/2; right_nodes lie in
    (1/2, 1] ending at 1, with offsets node - 1/2 refined toward 0.

    Below the smallest node of each half the density is extended by a
    power law c * s^(-t) whose exponent is fitted to the bottom decade of
    the data (clipped to [0, 0.99]); during transients the profile near
    the floor is shallower than the asymptotic envelope, and a fitted
    exponent keeps the analytic tail mass consistent with the grid.
    """

    left_nodes: np.ndarray
    right_nodes: np.ndarray
    left_values: np.ndarray
    right_values: np.ndarray

    def __post_init__(self):
        for nodes, values, name in (
            (self.left_nodes, self.left_values, "left"),
            (self.right_nodes, self.right_values, "right"),
        ):
            if nodes.shape != values.shape or nodes.ndim != 1:
                raise ValueError(f"{name} nodes/values must be matching 1-d arrays")
            if nodes.size < MIN_NODES_PER_HALF:
                raise ValueError(f"need at least {MIN_NODES_PER_HALF} {name} nodes")
            if np.any(np.diff(nodes) <= 0):
                raise ValueError(f"{name} nodes must be strictly increasing")
            if not np.all(np.isfinite(values)) or np.any(values < 0):
                raise ValueError(f"{name} values must be finite and non-negative")
        if not (0.0 < self.left_nodes[0] <= MAX_FLOOR and self.left_nodes[-1] == 0.5):
            raise ValueError("left nodes must refine to <= 1e-6 and end at 1/2")
        off0 = self.right_nodes[0] - 0.5
        if not (0.0 < off0 <= MAX_FLOOR and self.right_nodes[-1] == 1.0):
            raise ValueError("right offsets must refine to <= 1e-6 and end at 1")

    @cached_property
    def tail_exponents(self) -> tuple[float, float]:
        """Fitted sub-floor power-law exponents (left, right)."""
        return (
            _fit_tail_exponent(self.left_nodes, self.left_values),
            _fit_tail_exponent(self.right_nodes - 0.5, self.right_values),
        )

    # -- construction -------------------------------------------------------

    @classmethod
    def flat(cls, nodes_per_half: int = 1024, floor: float = 1e-8) -> "DensityGrid":
        """The constant density 1 on geometric nodes from `floor` to the
        half-width; mass is exactly 1."""
        nodes = np.geomspace(floor, 0.5, nodes_per_half)
        nodes[-1] = 0.5
        return cls(nodes, 0.5 + nodes, np.ones(nodes_per_half), np.ones(nodes_per_half))

    def with_values(self, left_values, right_values) -> "DensityGrid":
        return DensityGrid(
            self.left_nodes,
            self.right_nodes,
            np.asarray(left_values, dtype=float),
            np.asarray(right_values, dtype=float),
        )

    def same_nodes(self, other: "DensityGrid") -> bool:
        return np.array_equal(self.left_nodes, other.left_nodes) and np.array_equal(
            self.right_nodes, other.right_nodes
        )

    # -- evaluation ---------------------------------------------------------

    def evaluate_left(self, pts: np.ndarray) -> np.ndarray:
        out = np.interp(pts, self.left_nodes, self.left_values)
        x0 = self.left_nodes[0]
        below = pts < x0
        if np.any(below):
            t1 = self.tail_exponents[0]
            out = np.where(below, self.left_values[0] * (pts / x0) ** (-t1), out)
        return out

    def evaluate_right(self, pts: np.ndarray) -> np.ndarray:
        out = np.interp(pts, self.right_nodes, self.right_values)
        w0 = self.right_nodes[0] - 0.5
        below = pts < self.right_nodes[0]
        if np.any(below):
            t2 = self.tail_exponents[1]
            w = np.maximum(pts - 0.5, 1e-300)
            out = np.where(below, self.right_values[0] * (w / w0) ** (-t2), out)
        return out

    def evaluate(self, pts) -> np.ndarray:
        """Piecewise-linear evaluation with power-law tails; (0,1/2] routes
        to the left half, (1/2,1] to the right."""
        pts = np.asarray(pts, dtype=float)
        left = pts <= 0.5
        out = np.empty_like(pts)
        out[left] = self.evaluate_left(pts[left])
        out[~left] = self.evaluate_right(pts[~left])
        return out

    # -- integration --------------------------------------------------------

    @property
    def mass(self) -> float:
        """Trapezoid over both halves plus the analytic sub-floor tails."""
        return self.integrate(0.0, 1.0)

    def integrate(self, a: float, b: float) -> float:
        """Integral of the density over (a, b) within (0, 1]."""
        a, b = max(float(a), 0.0), min(float(b), 1.0)
        if b <= a:
            return 0.0
        total = 0.0
        if a < 0.5:
            total += _half_integral(
                self.left_nodes, self.left_values, self.tail_exponents[0], a, min(b, 0.5)
            )
        if b > 0.5:
            total += _half_integral(
                self.right_nodes - 0.5,
                self.right_values,
                self.tail_exponents[1],
                max(a, 0.5) - 0.5,
                b - 0.5,
            )
        return total

    def normalize(self) -> "DensityGrid":
        m = self.mass
        if not m > 0:
            raise ValueError("cannot normalize a zero-mass density")
        return self.with_values(self.left_values / m, self.right_values / m)

    def bin_averages(self, edges) -> np.ndarray:
        """Mean density over each cell of an edge partition of [0,1];
        resamples the grid onto a histogram for estimator comparisons."""
        edges = np.asarray(edges, dtype=float)
        out = np.empty(edges.size - 1)
        for i in range(out.size):
            out[i] = self.integrate(edges[i], edges[i + 1]) / (edges[i + 1] - edges[i])
        return out

    def to_rows(self):
        """(half, x, f) rows in ascending x across both halves."""
        rows = [("left", x, v) for x, v in zip(self.left_nodes, self.left_values)]
        rows += [("right", x, v) for x, v in zip(self.right_nodes, self.right_values)]
        return rows


def _fit_tail_exponent(coords, values, decades: float = 1.0) -> float:
    """Log-log slope of the bottom decade, as a tail exponent in [0, 0.99]."""
    lo = coords[0]
    mask = (coords <= lo * 10.0**decades) & (values > 0)
    if mask.sum() < 2 or values[0] <= 0:
        return 0.0
    slope = np.polyfit(np.log(coords[mask]), np.log(values[mask]), 1)[0]
    return float(np.clip(-slope, 0.0, 0.99))


def _half_integral(nodes, values, t, lo, hi):
    """Integral over (lo, hi) in half-local coordinates (offsets from the
    singular endpoint), with the power-law tail below the first node."""
    lo, hi = max(lo, 0.0), min(hi, float(nodes[-1]))
    if hi <= lo:
        return 0.0
    total = 0.0
    x0 = nodes[0]
    if lo < x0:
        c = values[0] * x0**t
        up = min(hi, x0)
        total += c / (1.0 - t) * (up ** (1.0 - t) - lo ** (1.0 - t))
    if hi > x0:
        lo2 = max(lo, x0)
        inner = nodes[(nodes > lo2) & (nodes < hi)]
        pts = np.concatenate(([lo2], inner, [hi]))
        vals = np.interp(pts, nodes, values)
        total += float(np.trapezoid(vals, pts))
    return total


def l1_distance(f: DensityGrid, g: DensityGrid) -> float:
    """Trapezoidal L1 distance over both halves (node-supported part)."""
    if not f.same_nodes(g):
        raise GridMismatchError("densities live on different grids")
    d_left = np.abs(f.left_values - g.left_values)
    d_right = np.abs(f.right_values - g.right_values)
    return float(
        np.trapezoid(d_left, f.left_nodes) + np.trapezoid(d_right, f.right_nodes)
    )


# ---------------------------------------------------------------------------
# cone parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeParams:
    """Exponents and envelope constants of the invariant cones.

    d = alpha_max + 2, t1 = alpha_min + 1 - beta, t2 = 1 - beta for a
    beta in (alpha_min, gamma) intersected with (0, 1]. a1/a2 are envelope
    constants; left as None they are fitted from the data under test.
    """

    d: float
    beta: float
    t1: float
    t2: float
    a1: float | None = None
    a2: float | None = None

    @classmethod
    def for_system(
        cls, system: RandomSystem, beta: float | None = None
    ) -> "ConeParams":
        a_min, a_max = system.alpha_min, system.alpha_max
        g = gamma(system)
        if beta is None:
            if g > a_min:
                beta = min(1.0, 0.5 * (a_min + g))
            else:
                # no admissible beta exists outside the finite-acs phase;
                # fall back to a usable extrapolation exponent
                beta = 0.5 * (a_min + 1.0)
        beta = float(beta)
        if not (a_min < beta <= 1.0):
            raise ValueError(
                f"beta must lie in (alpha_min, 1] = ({a_min}, 1], got {beta}"
            )
        if g > a_min and beta >= g and not np.isclose(beta, 1.0):
            warnings.warn(
                f"beta={beta} is outside the admissible interval "
                f"({a_min}, {g}); envelope bounds are not guaranteed",
                RuntimeWarning,
                stacklevel=2,
            )
        return cls(d=a_max + 2.0, beta=beta, t1=a_min + 1.0 - beta, t2=1.0 - beta)

    def with_constants(self, a1: float, a2: float) -> "ConeParams":
        return replace(self, a1=a1, a2=a2)


# ---------------------------------------------------------------------------
# the operator
# ---------------------------------------------------------------------------


class TransferOperator:
    """Annealed operator bound to a fixed grid.

    All inverse-branch data (preimages, branch derivatives) depend only on
    the nodes, so they are computed once; each application is then a few
    interpolations and weighted sums per half. Node evaluations are
    independent, vectorized elementwise, and bitwise-reproducible.
    """

    def __init__(
        self,
        system: RandomSystem,
        grid: DensityGrid,
        beta: float | None = None,
    ):
        self.system = system
        self.params = ConeParams.for_system(system, beta)
        self.template = grid.with_values(
            np.ones_like(grid.left_values), np.ones_like(grid.right_values)
        )
        L, R = grid.left_nodes, grid.right_nodes
        p = system.prob_array

        # left-branch terms, grouped by distinct exponent alpha
        self._left_terms = []
        for a in sorted(set(system.alphas.tolist())):
            weight = float(p[system.alphas == a].sum())
            spec = MapSpec.lsv(a)
            y_L = left_inverse(spec, L)
            y_R = left_inverse(spec, R)
            den_L = 1.0 + (a + 1.0) * (2.0 * y_L) ** a
            den_R = 1.0 + (a + 1.0) * (2.0 * y_R) ** a
            self._left_terms.append((weight, y_L, den_L, y_R, den_R))

        self._z_L = 0.5 * (L + 1.0)
        self._z_R = 0.5 * (R + 1.0)
        self._p_lsv = system.p_lsv

        # attracting right-branch terms (right half only)
        self._right_terms = []
        for j in system.attracting_symbols:
            spec = system.spec(j)
            zr = right_inverse_attracting(spec, R)
            dr = spec.kappa + 4.0 * (1.0 - spec.kappa) * (zr - 0.5)
            self._right_terms.append((float(p[j - 1]), zr, dr))

    def _apply_values(self, grid: DensityGrid):
        out_L = np.zeros_like(grid.left_values)
        out_R = np.zeros_like(grid.right_values)
        for weight, y_L, den_L, y_R, den_R in self._left_terms:
            out_L += weight * grid.evaluate_left(y_L) / den_L
            out_R += weight * grid.evaluate_left(y_R) / den_R
        out_L += 0.5 * self._p_lsv * grid.evaluate_right(self._z_L)
        out_R += 0.5 * self._p_lsv * grid.evaluate_right(self._z_R)
        for p_r, zr, dr in self._right_terms:
            out_R += p_r * grid.evaluate_right(zr) / dr
        return out_L, out_R

    def apply(self, grid: DensityGrid) -> DensityGrid:
        """One application of the operator, renormalized to mass 1."""
        new, _ = self.apply_with_mass(grid)
        return new

    def apply_with_mass(self, grid: DensityGrid):
        """Apply and also return the pre-normalization mass, which the exact
        operator would preserve; its drift from the input mass measures the
        quadrature error."""
        if not grid.same_nodes(self.template):
            raise GridMismatchError("grid does not match the operator's nodes")
        out_L, out_R = self._apply_values(grid)
        raw = self.template.with_values(out_L, out_R)
        pre_mass = raw.mass
        return raw.with_values(out_L / pre_mass, out_R / pre_mass), pre_mass

    def power_iterate(
        self,
        n: int,
        *,
        start: DensityGrid | None = None,
        cesaro: bool = False,
        residual_tol: float = 1e-10,
    ) -> "PowerIterationResult":
        f = (self.template if start is None else start).normalize()
        residuals, masses = [], []
        sum_L = f.left_values.copy()
        sum_R = f.right_values.copy()
        steps = 0
        for _ in range(n):
            nxt, pre_mass = self.apply_with_mass(f)
            residuals.append(l1_distance(nxt, f))
            masses.append(pre_mass)
            f = nxt
            steps += 1
            sum_L += f.left_values
            sum_R += f.right_values
            if residuals[-1] < residual_tol:
                break
        if cesaro:
            avg = self.template.with_values(
                sum_L / (steps + 1), sum_R / (steps + 1)
            ).normalize()
            density = avg
        else:
            density = f
        return PowerIterationResult(
            density=density,
            residuals=np.asarray(residuals),
            prenorm_masses=np.asarray(masses),
            iterations=steps,
            params=self.params,
            cesaro=cesaro,
        )


@dataclass(frozen=True)
class PowerIterationResult:
    density: DensityGrid
    residuals: np.ndarray
    prenorm_masses: np.ndarray
    iterations: int
    params: ConeParams
    cesaro: bool


def apply_operator(
    system: RandomSystem, f: DensityGrid, beta: float | None = None
) -> DensityGrid:
    """One application of the annealed operator on f's own grid."""
    return TransferOperator(system, f, beta).apply(f)


def power_iterate(
    system: RandomSystem,
    n: int,
    *,
    nodes_per_half: int = 1024,
    floor: float = 1e-8,
    beta: float | None = None,
    cesaro: bool = False,
    residual_tol: float = 1e-10,
) -> PowerIterationResult:
    """Iterate the operator n times starting from the constant density 1.

    Outside the finite-acs phase there is nothing to converge to; a warning
    is emitted and the iteration runs anyway.
    """
    report = classify(system)
    if report.phase is not Phase.FINITE_ACS:
        warnings.warn(
            f"phase is {report.phase.value} (eta={report.eta:.6g}); "
            "power iteration has no finite stationary density to approximate",
            RuntimeWarning,
            stacklevel=2,
        )
    grid = DensityGrid.flat(nodes_per_half, floor)
    op = TransferOperator(system, grid, beta)
    return op.power_iterate(n, cesaro=cesaro, residual_tol=residual_tol)


def apply_operator_at(system: RandomSystem, f, x, side: Side | None = None) -> float:
    """Pointwise operator application for an arbitrary evaluable density.

    x may be a BranchPoint; a bare float at exactly 1/2 defaults to the
    left-half formula. The right-half formula at exactly 1/2 needs the
    right limit f(1/2+), which a plain callable cannot express.
    """
    if isinstance(x, BranchPoint):
        side = x.side
        x = x.x
    if not 0.0 < x <= 1.0:
        raise ValueError(f"x must lie in (0,1], got {x}")
    if side is None:
        side = Side.LEFT if x <= 0.5 else Side.RIGHT
    total = 0.0
    for j, spec in enumerate(system.maps):
        p_j = system.probs[j]
        y = left_inverse(spec, x)
        total += p_j * f(y) / (1.0 + (spec.alpha + 1.0) * xi(spec, x))
    total += 0.5 * system.p_lsv * f(right_inverse_lsv(x))
    if side is Side.RIGHT:
        if x == 0.5:
            raise ValueError(
                "the right-half formula at exactly 1/2 requires the right "
                "limit f(1/2+); use a DensityGrid instead of a callable"
            )
        for j in system.attracting_symbols:
            spec = system.spec(j)
            zr = right_inverse_attracting(spec, x)
            dr = eval_derivative(spec, BranchPoint(zr, Side.RIGHT))
            total += system.probs[j - 1] * f(zr) / dr
    return float(total)


# ---------------------------------------------------------------------------
# cone membership checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneReport:
    passed: bool
    #: (half, node index i, x_i, x_{i+1}, value_i, value_{i+1}) of the first
    #: violating adjacent pair, if any
    first_violation: tuple | None
    max_violation: float


def _check_monotone(nodes, values, half, direction, slack):
    diffs = np.diff(values) * direction  # must be >= -slack
    bad = diffs < -slack
    if not np.any(bad):
        return True, None, float(max(0.0, -diffs.min(initial=0.0)))
    i = int(np.argmax(bad))
    viol = (half, i, float(nodes[i]), float(nodes[i + 1]), float(values[i]), float(values[i + 1]))
    return False, viol, float(-diffs[bad].min())


def check_cone_C0(f: DensityGrid, slack_rel: float = 1e-9) -> MonotoneReport:
    """Non-negative and non-increasing on each half, up to relative slack."""
    if np.any(f.left_values < 0) or np.any(f.right_values < 0):
        return MonotoneReport(False, ("sign", -1, 0.0, 0.0, 0.0, 0.0), np.inf)
    scale = max(f.left_values.max(), f.right_values.max(), 1e-300)
    slack = slack_rel * scale
    ok_l, viol_l, m_l = _check_monotone(f.left_nodes, f.left_values, "left", -1.0, slack)
    ok_r, viol_r, m_r = _check_monotone(f.right_nodes, f.right_values, "right", -1.0, slack)
    return MonotoneReport(ok_l and ok_r, viol_l or viol_r, max(m_l, m_r))


def check_cone_C1(f: DensityGrid, params: ConeParams, slack_rel: float = 1e-9) -> MonotoneReport:
    """x^d f and (x-1/2)^d f non-decreasing on their halves."""
    phi = f.left_nodes**params.d * f.left_values
    psi = (f.right_nodes - 0.5) ** params.d * f.right_values
    ok_l, viol_l, m_l = _check_monotone(
        f.left_nodes, phi, "left", 1.0, slack_rel * max(phi.max(), 1e-300)
    )
    ok_r, viol_r, m_r = _check_monotone(
        f.right_nodes, psi, "right", 1.0, slack_rel * max(psi.max(), 1e-300)
    )
    return MonotoneReport(ok_l and ok_r, viol_l or viol_r, max(m_l, m_r))


@dataclass(frozen=True)
class EnvelopeReport:
    passed: bool
    #: smallest constants that would make the envelopes hold on this grid
    fitted_a1: float
    fitted_a2: float
    given_a1: float | None
    given_a2: float | None
    mass: float


def check_cone_C2(
    f: DensityGrid,
    params: ConeParams,
    a1: float | None = None,
    a2: float | None = None,
) -> EnvelopeReport:
    """Envelope bounds f <= a1 x^-t1 (left) and f <= a2 (x-1/2)^-t2 (right).

    Constants default to params.a1/params.a2; the smallest passing
    constants are always reported. With no constants given anywhere the
    check passes trivially at the fitted ones.
    """
    a1 = params.a1 if a1 is None else a1
    a2 = params.a2 if a2 is None else a2
    fitted_a1 = float(np.max(f.left_values * f.left_nodes**params.t1))
    fitted_a2 = float(np.max(f.right_values * (f.right_nodes - 0.5) ** params.t2))
    ok = True
    if a1 is not None:
        ok &= fitted_a1 <= a1 * (1.0 + 1e-12)
    if a2 is not None:
        ok &= fitted_a2 <= a2 * (1.0 + 1e-12)
    return EnvelopeReport(bool(ok), fitted_a1, fitted_a2, a1, a2, f.mass)


@dataclass(frozen=True)
class LipschitzReport:
    passed: bool
    worst_ratio: float
    first_violation: tuple | None


def lipschitz_envelope_check(
    f: DensityGrid, params: ConeParams, slack_rel: float = 1e-9
) -> LipschitzReport:
    """Adjacent-node Lipschitz bound on the cone-weighted density.

    With phi = x^d f and psi = (x-1/2)^d f the increments between adjacent
    nodes must obey |dphi| <= a1 * 2^(1+t1-d) * d * dx and the analogous
    right-half bound with a2, t2. This is the testable form of the local
    Lipschitz property of the stationary density. Constants default to the
    fitted envelope constants of f.
    """
    rep = check_cone_C2(f, params)
    a1 = params.a1 if params.a1 is not None else rep.fitted_a1
    a2 = params.a2 if params.a2 is not None else rep.fitted_a2
    d = params.d
    worst = 0.0
    viol = None
    for half, nodes, values, a, t in (
        ("left", f.left_nodes, f.left_nodes**d * f.left_values, a1, params.t1),
        ("right", f.right_nodes, (f.right_nodes - 0.5) ** d * f.right_values, a2, params.t2),
    ):
        bound = a * 2.0 ** (1.0 + t - d) * d * np.diff(nodes)
        incr = np.abs(np.diff(values))
        ratio = incr / np.maximum(bound, 1e-300)
        worst = max(worst, float(ratio.max()))
        bad = incr > bound * (1.0 + slack_rel)
        if viol is None and np.any(bad):
            i = int(np.argmax(bad))
            viol = (half, i, float(nodes[i]), float(nodes[i + 1]))
    return LipschitzReport(viol is None, worst, viol)


@dataclass(frozen=True)
class AuxMonotoneReport:
    """Grid check of the two monotonicity facts behind cone preservation."""

    ratio_increasing: bool
    h_direction: str | None
    h_monotone: bool | None

    @property
    def passed(self) -> bool:
        return self.ratio_increasing and self.h_monotone is not False


def auxiliary_monotone_checks(
    alpha: float, kappa: float, b: float, d: float, n: int = 10_000
) -> AuxMonotoneReport:
    """Verify that (1+x)^d / (1 + (alpha+1)x) is non-decreasing on [0,1]
    and that H_{K,b}(x) = (K + 2(1-K)(x-1/2))^b / (K + 4(1-K)(x-1/2)) is
    non-decreasing on [1/2,1] when b >= 2 and non-increasing when b <= 1.
    For b strictly between 1 and 2 no direction is asserted."""
    x = np.linspace(0.0, 1.0, n)
    g = (1.0 + x) ** d / (1.0 + (alpha + 1.0) * x)
    ratio_ok = bool(np.all(np.diff(g) >= -1e-12 * g.max()))
    s = np.linspace(0.5, 1.0, n)
    w = s - 0.5
    h = (kappa + 2.0 * (1.0 - kappa) * w) ** b / (kappa + 4.0 * (1.0 - kappa) * w)
    slack = 1e-12 * float(np.abs(h).max())
    if b >= 2.0:
        direction, ok = "increasing", bool(np.all(np.diff(h) >= -slack))
    elif b <= 1.0:
        direction, ok = "decreasing", bool(np.all(np.diff(h) <= slack))
    else:
        direction, ok = None, None
    return AuxMonotoneReport(ratio_ok, direction, ok)


def pole_slope(f: DensityGrid, half: str = "left", decades: float = 1.0) -> float:
    """Least-squares log-log slope of the density over the decade(s)
    nearest the singular endpoint of the given half."""
    if half == "left":
        coords, values = f.left_nodes, f.left_values
    elif half == "right":
        coords, values = f.right_nodes - 0.5, f.right_values
    else:
        raise ValueError("half must be 'left' or 'right'")
    lo = coords[0]
    mask = (coords <= lo * 10.0**decades) & (values > 0)
    if mask.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log10(coords[mask]), np.log10(values[mask]), 1)[0])


def random_cone_member(
    grid: DensityGrid, params: ConeParams, rng: np.random.Generator
) -> DensityGrid:
    """A random element of C2: mixtures of power laws x^-t with t drawn
    below the envelope exponent of each half, normalized to unit mass.

    Every such mixture is decreasing, has x^d f increasing (d exceeds all
    exponents) and sits under a finite envelope, so membership in
    C0, C1 and C2 holds by construction.
    """
    def mixture(coords, t_max):
        k = int(rng.integers(1, 4))
        ts = rng.uniform(0.0, t_max, size=k) if t_max > 0 else np.zeros(k)
        cs = rng.uniform(0.2, 1.0, size=k)
        return sum(c * coords ** (-t) for c, t in zip(cs, ts))

    lv = mixture(grid.left_nodes, params.t1) * rng.uniform(0.5, 2.0)
    rv = mixture(grid.right_nodes - 0.5, params.t2) * rng.uniform(0.5, 2.0)
    return grid.with_values(lv, rv).normalize()
