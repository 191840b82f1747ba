"""Interval map families and their branch inverses.

Two families of maps of [0,1] share the same left branch with a neutral
fixed point at 0:

    left branch  (x in [0, 1/2]):   T(x) = x * (1 + 2^alpha * x^alpha)

and differ on (1/2, 1]:

    LSV:         T(x) = 2x - 1                       (onto (0, 1])
    attracting:  T(x) = 1/2 + K(x-1/2) + 2(1-K)(x-1/2)^2

The attracting right branch fixes 1/2 (from the right) and 1 and has slope
K < 1 at 1/2, so orbits in (1/2, 1) are pulled exponentially toward 1/2
until a LSV map ejects them near 0.

Besides forward evaluation and one-sided derivatives, this module provides
the inverse-branch functions used by the transfer operator:

    left_inverse(spec, x)            y with T(y) = x, y in [0, 1/2]
    xi(spec, x)                      (2 * left_inverse)^alpha
    right_inverse_lsv(x)             (x + 1) / 2
    right_inverse_attracting(spec,x) inverse of the quadratic right branch

All functions accept scalars or numpy arrays and are pure; they can be
evaluated concurrently without shared state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Kind",
    "Side",
    "MapSpec",
    "BranchPoint",
    "MapDomainError",
    "ConvergenceError",
    "eval_map",
    "eval_derivative",
    "left_inverse",
    "xi",
    "right_inverse_lsv",
    "right_inverse_attracting",
]

#: absolute tolerance of the left-branch root finder
LEFT_INVERSE_TOL = 1e-13
_LEFT_INVERSE_MAX_ITER = 200


class MapDomainError(ValueError):
    """Argument outside the domain of a branch (beyond tolerance)."""


class ConvergenceError(RuntimeError):
    """A root finder or fixed-point iteration failed to converge."""


class Kind(enum.Enum):
    LSV = "lsv"
    ATTRACTING = "attracting"


class Side(enum.Enum):
    """Disambiguates x = 1/2, which belongs to both closed half-intervals.

    Densities and one-sided derivatives live on (0, 1/2] and (1/2, 1]; the
    side flag selects the branch when evaluating exactly at 1/2.
    """

    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class MapSpec:
    """One interval map: LSV(alpha) or attracting(alpha, kappa).

    kappa is the slope of the right branch at the fixed point 1/2 and must
    lie in (0, 1); it is None for LSV maps.
    """

    kind: Kind
    alpha: float
    kappa: float | None = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.kind is Kind.ATTRACTING:
            if self.kappa is None or not 0.0 < self.kappa < 1.0:
                raise ValueError(
                    f"attracting map needs kappa in (0,1), got {self.kappa}"
                )
        elif self.kappa is not None:
            raise ValueError("kappa is only meaningful for attracting maps")

    @classmethod
    def lsv(cls, alpha: float) -> "MapSpec":
        return cls(Kind.LSV, float(alpha))

    @classmethod
    def attracting(cls, alpha: float, kappa: float) -> "MapSpec":
        return cls(Kind.ATTRACTING, float(alpha), float(kappa))

    @property
    def is_attracting(self) -> bool:
        return self.kind is Kind.ATTRACTING


@dataclass(frozen=True)
class BranchPoint:
    """A point of [0,1] tagged with the half-interval it belongs to."""

    x: float
    side: Side

    def __post_init__(self):
        if self.side is Side.LEFT and self.x > 0.5:
            raise ValueError(f"left-half point must have x <= 1/2, got {self.x}")
        if self.side is Side.RIGHT and self.x < 0.5:
            raise ValueError(f"right-half point must have x >= 1/2, got {self.x}")

    @classmethod
    def of(cls, x: float) -> "BranchPoint":
        """Default tagging: (0,1/2] is left, (1/2,1] is right."""
        return cls(float(x), Side.LEFT if x <= 0.5 else Side.RIGHT)


def _as_array(x):
    a = np.asarray(x, dtype=float)
    return a, a.ndim == 0


def _ret(a: np.ndarray, scalar: bool):
    return float(a) if scalar else a


def left_branch(alpha: float, x):
    """x * (1 + 2^alpha * x^alpha) on [0, 1/2]; shared by both families."""
    a, scalar = _as_array(x)
    return _ret(a * (1.0 + 2.0**alpha * a**alpha), scalar)


def eval_map(spec: MapSpec, x, *, tol: float = 1e-12):
    """Evaluate T(x) piecewise; left branch for x <= 1/2, right for x > 1/2.

    Raises MapDomainError if x leaves [0,1] by more than tol; values within
    tol of the endpoints are clamped.
    """
    a, scalar = _as_array(x)
    if np.any(a < -tol) or np.any(a > 1.0 + tol):
        raise MapDomainError(f"x outside [0,1] beyond tolerance {tol}")
    a = np.clip(a, 0.0, 1.0)
    left = a <= 0.5
    out = np.empty_like(a)
    out[left] = left_branch(spec.alpha, a[left])
    xr = a[~left]
    if spec.kind is Kind.LSV:
        out[~left] = 2.0 * xr - 1.0
    else:
        w = xr - 0.5
        out[~left] = 0.5 + spec.kappa * w + 2.0 * (1.0 - spec.kappa) * w * w
    return _ret(out, scalar)


def eval_derivative(spec: MapSpec, point: BranchPoint) -> float:
    """One-sided derivative DT at a branch point.

    Left branch: 1 + (alpha+1) * 2^alpha * x^alpha (equals 1 at the neutral
    fixed point 0). LSV right branch: 2. Attracting right branch:
    K + 4(1-K)(x - 1/2), which is K in the limit x -> 1/2+ and 2-K at 1.
    """
    x = point.x
    if not 0.0 <= x <= 1.0:
        raise MapDomainError(f"x must lie in [0,1], got {x}")
    if point.side is Side.LEFT:
        return 1.0 + (spec.alpha + 1.0) * 2.0**spec.alpha * x**spec.alpha
    if spec.kind is Kind.LSV:
        return 2.0
    return spec.kappa + 4.0 * (1.0 - spec.kappa) * (x - 0.5)


def left_inverse(spec: MapSpec, x):
    """Inverse of the left branch: the unique y in [0,1/2] with T(y) = x.

    Solved by Newton iteration from the right end of the bracket
    [x/2, min(x, 1/2)] (g is convex and increasing there, so the iteration
    is monotone); tolerance LEFT_INVERSE_TOL, at most 200 steps.
    """
    return _left_inverse_alpha(spec.alpha, x)


def _left_inverse_alpha(alpha: float, x):
    a, scalar = _as_array(x)
    if np.any(a < 0.0) or np.any(a > 1.0 + 1e-12):
        raise MapDomainError("left_inverse needs x in [0,1]")
    a = np.clip(a, 0.0, 1.0)
    c = 2.0**alpha
    y = np.minimum(a, 0.5)
    lo = 0.5 * a
    for _ in range(_LEFT_INVERSE_MAX_ITER):
        g = y * (1.0 + c * y**alpha) - a
        gp = 1.0 + (alpha + 1.0) * c * y**alpha
        step = g / gp
        y = np.maximum(y - step, lo)
        if np.max(np.abs(step)) <= LEFT_INVERSE_TOL * 0.1:
            break
    else:
        raise ConvergenceError("left-branch Newton iteration did not converge")
    resid = np.max(np.abs(y * (1.0 + c * y**alpha) - a))
    if resid > 1e-12:
        raise ConvergenceError(f"left-branch inverse residual {resid:.3e}")
    return _ret(y, scalar)


def xi(spec: MapSpec, x):
    """(2 * left_inverse(x))^alpha; increases from 0 at x=0 to 1 at x=1."""
    a, scalar = _as_array(x)
    y = _left_inverse_alpha(spec.alpha, a)
    return _ret((2.0 * np.asarray(y)) ** spec.alpha, scalar)


def right_inverse_lsv(x):
    """Inverse of the LSV right branch: (x+1)/2, mapping (0,1] into (1/2,1]."""
    a, scalar = _as_array(x)
    return _ret(0.5 * (a + 1.0), scalar)


def right_inverse_attracting(spec: MapSpec, x):
    """Inverse of the quadratic right branch on (1/2, 1].

    With w = x - 1/2, the positive root of 2(1-K)u^2 + Ku - w = 0 is
    evaluated in the rationalized form

        u = 2w / (K + sqrt(K^2 + 8(1-K)w)),

    which is algebraically identical to the quadratic formula and free of
    cancellation both as x -> 1/2+ and as K -> 1.
    """
    if spec.kind is not Kind.ATTRACTING:
        raise ValueError("right_inverse_attracting needs an attracting map")
    a, scalar = _as_array(x)
    if np.any(a <= 0.5) or np.any(a > 1.0 + 1e-12):
        raise MapDomainError("right inverse needs x in (1/2, 1]")
    k = spec.kappa
    w = np.minimum(a, 1.0) - 0.5
    u = 2.0 * w / (k + np.sqrt(k * k + 8.0 * (1.0 - k) * w))
    return _ret(0.5 + u, scalar)
