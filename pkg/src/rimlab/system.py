"""Random systems of interval maps: thresholds, phases, words and orbits.

A RandomSystem couples a finite family T_1..T_N of maps (at least one LSV
and at least one attracting) with a strictly positive probability vector p.
At every step a symbol j is drawn i.i.d. from p and T_j applied, which is
the second coordinate of the skew product over the Bernoulli shift.

The phase of the system is decided by

    eta   = sum over attracting r of  p_r * K_r^(-alpha_min)
    gamma = unique delta >= 0 with  sum_r p_r * K_r^(-delta) = 1

A finite absolutely continuous stationary (acs) measure exists iff
eta < 1; for eta > 1 any acs measure is infinite.  eta = 1 is left
unclassified ("Critical"): nothing is proven there and this artifact
refuses to guess.

Randomness uses numpy's PCG64 behind SeedSequence, with spawned child
sequences for independent Monte-Carlo substreams, so every experiment is
reproducible from a single 64-bit seed independent of scheduling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .maps import ConvergenceError, Kind, MapSpec, eval_map

__all__ = [
    "Phase",
    "RandomSystem",
    "PhaseReport",
    "OrbitTrace",
    "eta",
    "gamma",
    "classify",
    "make_rng",
    "spawn_rngs",
    "sample_word",
    "sample_word_from",
    "iterate_orbit",
    "random_orbit",
]

#: half-width of the band around eta = 1 mapped to Phase.CRITICAL
CRITICAL_TOL = 1e-12


class Phase(enum.Enum):
    FINITE_ACS = "FiniteACS"
    NO_FINITE_ACS = "NoFiniteACS"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class RandomSystem:
    """A finite list of MapSpecs with a strictly positive probability vector.

    Symbols are 1-based (1..N) to match the word/orbit conventions; arrays
    indexed by symbol use position j-1.
    """

    maps: tuple[MapSpec, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ValueError("need at least two maps")
        if len(self.probs) != len(self.maps):
            raise ValueError("probs and maps must have the same length")
        p = np.asarray(self.probs, dtype=float)
        if np.any(p <= 0.0):
            raise ValueError("all probabilities must be strictly positive")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {p.sum()!r}")
        kinds = [m.kind for m in self.maps]
        if Kind.LSV not in kinds:
            raise ValueError("need at least one LSV map")
        if Kind.ATTRACTING not in kinds:
            raise ValueError("need at least one attracting map")
        if not min(m.alpha for m in self.maps) < 1.0:
            raise ValueError("standing assumption alpha_min < 1 violated")

    @classmethod
    def of(cls, maps, probs) -> "RandomSystem":
        return cls(tuple(maps), tuple(float(q) for q in probs))

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    @cached_property
    def prob_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    @cached_property
    def alphas(self) -> np.ndarray:
        return np.asarray([m.alpha for m in self.maps], dtype=float)

    @cached_property
    def lsv_symbols(self) -> tuple[int, ...]:
        return tuple(j + 1 for j, m in enumerate(self.maps) if m.kind is Kind.LSV)

    @cached_property
    def attracting_symbols(self) -> tuple[int, ...]:
        return tuple(j + 1 for j, m in enumerate(self.maps) if m.is_attracting)

    @property
    def alpha_min(self) -> float:
        return float(self.alphas.min())

    @property
    def alpha_max(self) -> float:
        return float(self.alphas.max())

    @property
    def p_lsv(self) -> float:
        """Total probability of choosing an LSV map (p_S)."""
        return float(sum(self.probs[j - 1] for j in self.lsv_symbols))

    @cached_property
    def attracting_probs(self) -> np.ndarray:
        return np.asarray([self.probs[j - 1] for j in self.attracting_symbols])

    @cached_property
    def attracting_kappas(self) -> np.ndarray:
        return np.asarray([self.maps[j - 1].kappa for j in self.attracting_symbols])

    def spec(self, symbol: int) -> MapSpec:
        return self.maps[symbol - 1]


@dataclass(frozen=True)
class PhaseReport:
    eta: float
    gamma: float
    alpha_min: float
    phase: Phase
    #: (alpha_min, min(gamma, 1)] when the phase admits a finite acs measure
    beta_range: tuple[float, float] | None

    def to_dict(self) -> dict:
        return {
            "eta": self.eta,
            "gamma": self.gamma,
            "alpha_min": self.alpha_min,
            "phase": self.phase.value,
            "beta_range": list(self.beta_range) if self.beta_range else None,
        }


@dataclass(frozen=True)
class OrbitTrace:
    """A realized symbol word with the induced point trajectory.

    points[0] = x0 and points[k+1] = T_{word[k]}(points[k]); the word is
    1-based symbols. seed records how the word was drawn (None when the
    word was supplied explicitly).
    """

    seed: int | None
    word: np.ndarray
    points: np.ndarray


def eta(system: RandomSystem) -> float:
    """Phase parameter: sum of p_r * K_r^(-alpha_min) over attracting maps."""
    return float(
        np.sum(system.attracting_probs * system.attracting_kappas ** (-system.alpha_min))
    )


def _attracting_sum(system: RandomSystem, delta: float) -> float:
    return float(np.sum(system.attracting_probs * system.attracting_kappas ** (-delta)))


def gamma(system: RandomSystem, *, tol: float = 1e-12) -> float:
    """Root of sum_r p_r K_r^(-delta) = 1 in delta.

    The sum is continuous and strictly increasing (all K_r < 1) and is
    below 1 at delta = 0 because the LSV maps carry positive probability,
    so the root exists, is unique and is found by bisection on a bracket
    grown geometrically from [0, 1].
    """
    if _attracting_sum(system, 0.0) >= 1.0:
        raise ValueError("attracting probabilities alone must sum below 1")
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if _attracting_sum(system, hi) >= 1.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ConvergenceError("gamma bracket growth failed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _attracting_sum(system, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify(system: RandomSystem, tol: float = CRITICAL_TOL) -> PhaseReport:
    """Classify the phase from eta, with a tolerance band around eta = 1."""
    e = eta(system)
    g = gamma(system)
    a_min = system.alpha_min
    if e < 1.0 - tol:
        phase = Phase.FINITE_ACS
        beta_range = (a_min, min(g, 1.0))
    elif e > 1.0 + tol:
        phase = Phase.NO_FINITE_ACS
        beta_range = None
    else:
        phase = Phase.CRITICAL
        beta_range = None
    return PhaseReport(e, g, a_min, phase, beta_range)


def make_rng(seed: int) -> np.random.Generator:
    """The package-wide generator: PCG64 keyed through SeedSequence(seed)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """n independent substreams for parallel replicas of one experiment."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def sample_word_from(system: RandomSystem, rng: np.random.Generator, n: int) -> np.ndarray:
    """n i.i.d. symbols in 1..N drawn by inverse CDF from one uniform each."""
    if n < 0:
        raise ValueError("word length must be non-negative")
    cum = np.cumsum(system.prob_array)
    u = rng.random(n)
    return (np.searchsorted(cum, u, side="right") + 1).astype(np.int64)


def sample_word(system: RandomSystem, seed: int, n: int) -> np.ndarray:
    return sample_word_from(system, make_rng(seed), n)


def iterate_orbit(
    system: RandomSystem, x0: float, word: np.ndarray, seed: int | None = None
) -> OrbitTrace:
    """Apply the maps of `word` in order, starting from x0."""
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0,1], got {x0}")
    word = np.asarray(word, dtype=np.int64)
    from ._kernels import orbit_points

    points = orbit_points(
        float(x0),
        word,
        system.alphas,
        _kind_codes(system),
        _kappa_array(system),
    )
    return OrbitTrace(seed=seed, word=word, points=points)


def random_orbit(system: RandomSystem, x0: float, n: int, seed: int) -> OrbitTrace:
    """Draw a word of length n from seed and iterate it from x0."""
    word = sample_word(system, seed, n)
    return iterate_orbit(system, x0, word, seed=seed)


def _kind_codes(system: RandomSystem) -> np.ndarray:
    return np.asarray(
        [1 if m.is_attracting else 0 for m in system.maps], dtype=np.int8
    )


def _kappa_array(system: RandomSystem) -> np.ndarray:
    return np.asarray(
        [m.kappa if m.is_attracting else 0.0 for m in system.maps], dtype=float
    )


def step_point(system: RandomSystem, symbol: int, x: float) -> float:
    """One forward step under the map with the given symbol."""
    return eval_map(system.spec(symbol), x)
