"""Independent estimators and experiments for the random systems.

Three routes to the stationary density that share no code with the
transfer-operator iteration:

  * build_ulam        exact-interval Ulam discretization of the annealed
                      operator into a row-stochastic sparse matrix
  * orbit_histogram   long-run Monte-Carlo occupation histogram
  * kac_experiment    first-return times to the two-sided return set Y,
                      whose sample mean stays finite exactly in the
                      finite-measure phase (Kac's Lemma) and diverges with
                      the sample size when eta > 1

plus the left-branch preimage sequences x_n with their n^(-1/alpha) decay
law, and the L1-continuity experiment of the stationary density as a
function of the probability vector.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from . import _kernels
from .maps import (
    ConvergenceError,
    Kind,
    MapSpec,
    left_branch,
    left_inverse,
    right_inverse_attracting,
    right_inverse_lsv,
)
from .maps import _left_inverse_alpha  # reused for grouped vector solves
from .system import (
    Phase,
    RandomSystem,
    classify,
    eta,
    make_rng,
    sample_word_from,
)
from .transfer import DensityGrid, PowerIterationResult, l1_distance, power_iterate

__all__ = [
    "UlamModel",
    "Histogram",
    "KacSet",
    "KacResult",
    "PreimageReport",
    "ContinuityResult",
    "build_ulam",
    "orbit_histogram",
    "kac_set",
    "kac_experiment",
    "preimage_sequence",
    "preimage_bounds_check",
    "continuity_experiment",
]

_CHUNK_SCHEDULE = (64, 512, 4096, 32768, 262144)
_CHUNK_MAX = 1 << 20


# ---------------------------------------------------------------------------
# Ulam discretization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UlamModel:
    bin_count: int
    #: row-stochastic transition matrix, entry (i, k) = annealed fraction of
    #: bin i mapped into bin k
    transition: sparse.csr_matrix
    #: stationary probability vector (left eigenvector, sums to 1)
    stationary: np.ndarray
    iterations: int
    residual: float

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.bin_count + 1)

    @property
    def stationary_density(self) -> np.ndarray:
        return self.stationary * self.bin_count


def _right_branch(spec: MapSpec, x: np.ndarray) -> np.ndarray:
    if spec.kind is Kind.LSV:
        return 2.0 * x - 1.0
    w = x - 0.5
    return 0.5 + spec.kappa * w + 2.0 * (1.0 - spec.kappa) * w * w


def _ulam_matrix(spec: MapSpec, bins: int) -> sparse.csr_matrix:
    """Transition matrix of one map: each bin's image interval is computed
    from its endpoints (both branches are monotone) and spread over the
    covered bins proportionally to overlap."""
    edges = np.linspace(0.0, 1.0, bins + 1)
    h = 1.0 / bins
    a, b = edges[:-1], edges[1:]
    half = bins // 2
    lo = np.empty(bins)
    hi = np.empty(bins)
    lo[:half] = left_branch(spec.alpha, a[:half])
    hi[:half] = left_branch(spec.alpha, b[:half])
    lo[half:] = _right_branch(spec, a[half:])
    hi[half:] = _right_branch(spec, b[half:])
    width = hi - lo
    klo = np.clip((lo / h).astype(np.int64), 0, bins - 1)
    khi = np.clip(np.ceil(hi / h).astype(np.int64) - 1, 0, bins - 1)
    khi = np.maximum(khi, klo)
    rows_idx = np.arange(bins, dtype=np.int64)
    rows, cols, vals = [], [], []
    for off in range(int((khi - klo).max()) + 1):
        c = klo + off
        m = c <= khi
        if not m.any():
            break
        seg = np.minimum(hi[m], (c[m] + 1) * h) - np.maximum(lo[m], c[m] * h)
        rows.append(rows_idx[m])
        cols.append(c[m])
        vals.append(seg / width[m])
    mat = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(bins, bins),
    )
    return mat.tocsr()


def build_ulam(
    system: RandomSystem,
    bins: int,
    *,
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> UlamModel:
    """Annealed Ulam model with the stationary vector by power iteration."""
    if bins < 64 or bins & (bins - 1):
        raise ValueError("bins must be a power of two, at least 64")
    annealed = sum(
        p * _ulam_matrix(spec, bins) for p, spec in zip(system.probs, system.maps)
    ).tocsr()
    row_sums = np.asarray(annealed.sum(axis=1)).ravel()
    annealed = sparse.diags(1.0 / row_sums) @ annealed
    transposed = annealed.T.tocsr()
    v = np.full(bins, 1.0 / bins)
    for it in range(1, max_iter + 1):
        nxt = transposed @ v
        nxt /= nxt.sum()
        resid = float(np.abs(nxt - v).sum())
        v = nxt
        if resid <= tol:
            return UlamModel(bins, annealed, v, it, resid)
    raise ConvergenceError(
        f"Ulam stationary vector did not reach residual {tol} in {max_iter} steps"
    )


# ---------------------------------------------------------------------------
# orbit histogram
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    #: normalized occupation density over [0,1]
    density: np.ndarray


def orbit_histogram(
    system: RandomSystem,
    x0: float,
    seed: int,
    steps: int,
    bins: int,
) -> Histogram:
    """Occupation histogram of one random orbit, first 1% discarded."""
    if steps < 100_000:
        raise ValueError("need at least 1e5 steps for a meaningful histogram")
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0,1], got {x0}")
    burnin = steps // 100
    alphas = system.alphas
    kinds = np.asarray([1 if m.is_attracting else 0 for m in system.maps], np.int8)
    kappas = np.asarray([m.kappa if m.is_attracting else 0.0 for m in system.maps])
    counts = np.zeros(bins, dtype=np.int64)
    rng = make_rng(seed)
    x = float(x0)
    done = 0
    while done < steps:
        m = min(_CHUNK_MAX, steps - done)
        symbols = sample_word_from(system, rng, m)
        x = _kernels.histogram_chunk(
            x, symbols, alphas, kinds, kappas, counts, done, burnin
        )
        done += m
    total = counts.sum()
    density = counts * (bins / total)
    edges = np.linspace(0.0, 1.0, bins + 1)
    return Histogram(edges, counts, density)


# ---------------------------------------------------------------------------
# Kac return-time experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KacSet:
    """The return set Y = union over symbols j of [j] x (A_j u B_j).

    A_j = (x_2(j), T_j|_left^{-1}(3/4)) sits in the left half and B_j =
    (3/4, T_j|_right^{-1}(3/4)) in the right half; both map into
    (1/2, 3/4) under T_j. Arrays are indexed by symbol-1.
    """

    a_lo: np.ndarray
    a_hi: np.ndarray
    b_lo: np.ndarray
    b_hi: np.ndarray

    def contains(self, symbol: int, x: float) -> bool:
        j = symbol - 1
        return (self.a_lo[j] < x < self.a_hi[j]) or (self.b_lo[j] < x < self.b_hi[j])

    def measure(self, system: RandomSystem, density: DensityGrid) -> float:
        """p-weighted density mass of Y, the reciprocal of the mean return
        time predicted by Kac's Lemma."""
        nu = 0.0
        for j, p in enumerate(system.probs):
            nu += p * (
                density.integrate(self.a_lo[j], self.a_hi[j])
                + density.integrate(self.b_lo[j], self.b_hi[j])
            )
        return nu


def kac_set(system: RandomSystem) -> KacSet:
    n = system.n_maps
    a_lo = np.empty(n)
    a_hi = np.empty(n)
    b_lo = np.full(n, 0.75)
    b_hi = np.empty(n)
    for j, spec in enumerate(system.maps):
        a_lo[j] = left_inverse(spec, 0.5)
        a_hi[j] = left_inverse(spec, 0.75)
        if spec.kind is Kind.LSV:
            b_hi[j] = right_inverse_lsv(0.75)
        else:
            b_hi[j] = right_inverse_attracting(spec, 0.75)
    return KacSet(a_lo, a_hi, b_lo, b_hi)


@dataclass(frozen=True)
class KacResult:
    times: np.ndarray
    censored: np.ndarray
    start_symbols: np.ndarray
    start_points: np.ndarray
    cap: int
    seed: int
    #: "density" when starts were drawn from an approximate stationary
    #: density restricted to Y, else "uniform"
    start_mode: str
    #: 1 / (p-weighted density mass of Y); None in uniform mode
    predicted_mean: float | None

    @property
    def mean(self) -> float:
        """Sample mean with censored runs counted at the cap, so it is a
        lower bound whenever censoring occurred."""
        return float(self.times.mean())

    @property
    def censored_fraction(self) -> float:
        return float(self.censored.mean())

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.times, q))

    def to_summary(self) -> dict:
        return {
            "samples": int(self.times.size),
            "cap": self.cap,
            "seed": self.seed,
            "start_mode": self.start_mode,
            "mean": self.mean,
            "median": self.quantile(0.5),
            "q90": self.quantile(0.9),
            "q99": self.quantile(0.99),
            "max": int(self.times.max()),
            "censored_count": int(self.censored.sum()),
            "censored_fraction": self.censored_fraction,
            "predicted_mean_kac": self.predicted_mean,
        }


class _StartSampler:
    """Inverse-CDF sampler for the starting point within A_j u B_j.

    The target law is the supplied density restricted to the union
    (uniform when no density is given). Every draw consumes exactly two
    uniforms (interval choice, position), so the stream layout does not
    depend on the mode.
    """

    def __init__(self, ks: KacSet, system: RandomSystem, density: DensityGrid | None):
        self.tables = []
        for j in range(system.n_maps):
            per_interval = []
            for lo, hi in ((ks.a_lo[j], ks.a_hi[j]), (ks.b_lo[j], ks.b_hi[j])):
                xs = np.linspace(lo, hi, 257)
                pdf = density.evaluate(xs) if density is not None else np.ones_like(xs)
                cdf = np.concatenate(([0.0], np.cumsum(np.diff(xs) * 0.5 * (pdf[1:] + pdf[:-1]))))
                per_interval.append((xs, cdf))
            w0 = per_interval[0][1][-1]
            w1 = per_interval[1][1][-1]
            self.tables.append((per_interval, w0 / (w0 + w1)))

    def draw(self, symbol: int, u_interval: float, u_pos: float) -> float:
        per_interval, w_a = self.tables[symbol - 1]
        xs, cdf = per_interval[0] if u_interval < w_a else per_interval[1]
        return float(np.interp(u_pos * cdf[-1], cdf, xs))


def kac_experiment(
    system: RandomSystem,
    seed: int,
    samples: int,
    cap: int = 10_000_000,
    *,
    density: DensityGrid | None = None,
    threads: int = 1,
) -> KacResult:
    """First-return times to Y from random starting fibers (j, x).

    j is drawn from p; x from the density restricted to A_j u B_j when a
    density is supplied (uniform fallback otherwise, recorded in the
    result). Searches longer than `cap` are reported as censored at the
    cap, never discarded: in the eta > 1 phase the expected return time is
    infinite and the censoring must stay visible.
    """
    if samples < 1_000:
        raise ValueError("need at least 1e3 samples")
    ks = kac_set(system)
    sampler = _StartSampler(ks, system, density)
    cum = np.cumsum(system.prob_array)
    alphas = system.alphas
    kinds = np.asarray([1 if m.is_attracting else 0 for m in system.maps], np.int8)
    kappas = np.asarray([m.kappa if m.is_attracting else 0.0 for m in system.maps])

    times = np.empty(samples, dtype=np.int64)
    censored = np.zeros(samples, dtype=bool)
    start_symbols = np.empty(samples, dtype=np.int64)
    start_points = np.empty(samples)
    children = np.random.SeedSequence(seed).spawn(samples)

    def run_block(lo: int, hi: int):
        for i in range(lo, hi):
            rng = np.random.Generator(np.random.PCG64(children[i]))
            u = rng.random(3)
            symbol = int(np.searchsorted(cum, u[0], side="right")) + 1
            x = sampler.draw(symbol, u[1], u[2])
            start_symbols[i] = symbol
            start_points[i] = x
            n_done = 0
            sym = symbol
            schedule = iter(_CHUNK_SCHEDULE)
            while True:
                size = min(next(schedule, _CHUNK_MAX), cap - n_done)
                found, x, sym, n_done = _kernels.return_time_chunk(
                    x, sym, rng.random(size), cum, alphas, kinds, kappas,
                    ks.a_lo, ks.a_hi, ks.b_lo, ks.b_hi, n_done,
                )
                if found >= 0:
                    times[i] = found
                    break
                if n_done >= cap:
                    times[i] = cap
                    censored[i] = True
                    break

    if threads <= 1:
        run_block(0, samples)
    else:
        block = math.ceil(samples / threads)
        bounds = [(b, min(b + block, samples)) for b in range(0, samples, block)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda lh: run_block(*lh), bounds))

    predicted = None
    if density is not None:
        nu = ks.measure(system, density.normalize())
        predicted = 1.0 / nu if nu > 0 else None
    return KacResult(
        times=times,
        censored=censored,
        start_symbols=start_symbols,
        start_points=start_points,
        cap=cap,
        seed=seed,
        start_mode="density" if density is not None else "uniform",
        predicted_mean=predicted,
    )


# ---------------------------------------------------------------------------
# preimage sequences
# ---------------------------------------------------------------------------


def preimage_sequence(spec: MapSpec, n_max: int) -> np.ndarray:
    """x_1 = 1/2, x_n = left_inverse(x_{n-1}): the point whose left-branch
    orbit needs n-1 steps to reach 1/2, decaying like n^(-1/alpha)."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    out = np.empty(n_max)
    out[0] = 0.5
    for n in range(1, n_max):
        out[n] = left_inverse(spec, out[n - 1])
    return out


@dataclass(frozen=True)
class PreimageReport:
    n_max: int
    #: per map symbol: (ratio min, ratio max) of x_n * n^(1/alpha) over
    #: n in [10, n_max]
    ratios: dict
    ratio_ok: bool
    #: smallest margin of x_n(word) - x_n(alpha_min symbol); None when only
    #: a single MapSpec was checked
    min_margin: float | None
    ordering_ok: bool | None

    @property
    def passed(self) -> bool:
        return self.ratio_ok and self.ordering_ok is not False


def preimage_bounds_check(
    target: MapSpec | RandomSystem,
    seed: int = 0,
    n_max: int = 10_000,
    n_words: int = 100,
    *,
    ratio_spread: float = 100.0,
    ordering_tol: float = 1e-14,
) -> PreimageReport:
    """Check the n^(-1/alpha) decay law and the word-wise lower bound.

    The ratio x_n(j) * n^(1/alpha_j) must stay within a bounded window
    (spread at most `ratio_spread`) over n in [10, n_max]. For a full
    system, random symbol streams are additionally composed innermost-first
    (each x_n then equals the backward recursion value of the reversed
    prefix word, a valid random word) and must dominate the sequence of
    the fastest map: x_n(i) <= x_n(word) + ordering_tol for alpha_i minimal.
    """
    if n_max > 10_000:
        raise ValueError("n_max is capped at 1e4")
    specs = [target] if isinstance(target, MapSpec) else list(target.maps)
    ratios = {}
    ratio_ok = True
    n = np.arange(1, n_max + 1, dtype=float)
    window = n >= 10.0
    for idx, spec in enumerate(specs):
        seq = preimage_sequence(spec, n_max)
        r = seq * n ** (1.0 / spec.alpha)
        r_win = r[window]
        lo, hi = float(r_win.min()), float(r_win.max())
        ratios[idx + 1] = (lo, hi)
        ratio_ok &= hi / lo <= ratio_spread

    min_margin = None
    ordering_ok = None
    if isinstance(target, RandomSystem):
        system = target
        i_sym = int(np.argmin(system.alphas)) + 1
        base = preimage_sequence(system.spec(i_sym), n_max)
        rng = make_rng(seed)
        symbols = np.empty((n_words, n_max - 1), dtype=np.int64)
        for w in range(n_words):
            symbols[w] = sample_word_from(system, rng, n_max - 1)
        v = np.full(n_words, 0.5)
        min_margin = np.inf
        for n_step in range(1, n_max):
            step_alphas = system.alphas[symbols[:, n_step - 1] - 1]
            for a in np.unique(step_alphas):
                mask = step_alphas == a
                v[mask] = _left_inverse_alpha(float(a), v[mask])
            min_margin = min(min_margin, float((v - base[n_step]).min()))
        ordering_ok = min_margin >= -ordering_tol
        min_margin = float(min_margin)
    return PreimageReport(n_max, ratios, bool(ratio_ok), min_margin, ordering_ok)


# ---------------------------------------------------------------------------
# continuity of the stationary density in p
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuityResult:
    deltas: tuple[float, ...]
    distances: tuple[float, ...]
    beta: float
    iterations: int


def continuity_experiment(
    system: RandomSystem,
    direction,
    deltas,
    *,
    nodes_per_half: int = 512,
    floor: float = 1e-8,
    iterations: int = 400,
    beta: float | None = None,
    residual_tol: float = 1e-10,
) -> ContinuityResult:
    """L1 distance of the converged density under simplex perturbations.

    Every perturbed vector p + delta * direction must stay strictly
    positive with eta < 1 (rejected otherwise); the same grid and the same
    envelope exponent beta are used for every run so the distances are
    directly comparable.
    """
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (system.n_maps,):
        raise ValueError("direction must have one entry per map")
    if abs(direction.sum()) > 1e-12 * max(1.0, np.abs(direction).max()):
        raise ValueError("direction must be tangent to the simplex (sum to 0)")
    if classify(system).phase is not Phase.FINITE_ACS:
        raise ValueError("continuity experiment needs a finite-acs base system")

    perturbed = []
    for delta in deltas:
        p_new = system.prob_array + float(delta) * direction
        if np.any(p_new <= 0.0):
            raise ValueError(f"delta={delta} pushes a probability to <= 0")
        candidate = RandomSystem.of(system.maps, p_new)
        if eta(candidate) >= 1.0:
            raise ValueError(
                f"delta={delta} leaves the finite-acs phase (eta={eta(candidate):.6g})"
            )
        perturbed.append(candidate)

    def converge(sys_: RandomSystem, beta_: float | None) -> PowerIterationResult:
        import warnings as _warnings

        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore", RuntimeWarning)
            return power_iterate(
                sys_,
                iterations,
                nodes_per_half=nodes_per_half,
                floor=floor,
                beta=beta_,
                residual_tol=residual_tol,
            )

    base = converge(system, beta)
    beta_used = base.params.beta
    distances = []
    for candidate in perturbed:
        res = converge(candidate, beta_used)
        distances.append(l1_distance(res.density, base.density))
    return ContinuityResult(
        tuple(float(d) for d in deltas),
        tuple(distances),
        beta_used,
        iterations,
    )
