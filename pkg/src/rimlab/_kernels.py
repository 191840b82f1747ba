"""Hot inner loops for orbit simulation and return-time searches.

Compiled with numba when available (sequential, nogil, so threaded callers
stay deterministic); the pure-Python bodies double as a fallback and as the
reference semantics. Maps are passed as flat parameter arrays indexed by
symbol-1: alphas, kind codes (0 = LSV, 1 = attracting) and kappas.
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    def _jit(func):
        return numba.njit(cache=True, nogil=True)(func)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    def _jit(func):
        return func

    HAVE_NUMBA = False


def _step(x, sym, alphas, kinds, kappas):
    j = sym - 1
    if x <= 0.5:
        a = alphas[j]
        return x * (1.0 + 2.0**a * x**a)
    if kinds[j] == 0:
        return 2.0 * x - 1.0
    k = kappas[j]
    w = x - 0.5
    return 0.5 + k * w + 2.0 * (1.0 - k) * w * w


def _orbit_points(x0, word, alphas, kinds, kappas):
    n = word.shape[0]
    points = np.empty(n + 1)
    points[0] = x0
    x = x0
    for i in range(n):
        x = _step(x, word[i], alphas, kinds, kappas)
        points[i + 1] = x
    return points


def _histogram_chunk(x, symbols, alphas, kinds, kappas, counts, start_index, burnin):
    bins = counts.shape[0]
    for i in range(symbols.shape[0]):
        x = _step(x, symbols[i], alphas, kinds, kappas)
        if start_index + i + 1 > burnin:
            b = int(x * bins)
            if b >= bins:
                b = bins - 1
            counts[b] += 1
    return x


def _return_time_chunk(
    x, sym, uniforms, cum_probs, alphas, kinds, kappas, a_lo, a_hi, b_lo, b_hi, n_done
):
    """Advance the first-return search through one chunk of uniforms.

    State is (current point x, symbol to apply next). Each step applies the
    pending map, draws the following symbol from one uniform, and tests
    whether the new point landed in that symbol's return set. Returns
    (return_time or -1 if the chunk ran out, x, pending symbol, steps done).
    """
    n_syms = cum_probs.shape[0]
    for i in range(uniforms.shape[0]):
        x = _step(x, sym, alphas, kinds, kappas)
        u = uniforms[i]
        ns = 1
        while ns < n_syms and u >= cum_probs[ns - 1]:
            ns += 1
        idx = ns - 1
        t = n_done + i + 1
        if (a_lo[idx] < x < a_hi[idx]) or (b_lo[idx] < x < b_hi[idx]):
            return t, x, ns, t
        sym = ns
    return -1, x, sym, n_done + uniforms.shape[0]


_step = _jit(_step)
orbit_points = _jit(_orbit_points)
histogram_chunk = _jit(_histogram_chunk)
return_time_chunk = _jit(_return_time_chunk)
