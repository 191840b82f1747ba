"""Matplotlib renderings of the report outputs.

Each saver mirrors one of the CSV/JSON products and writes a PNG next to
it; the delimited files remain the primary interface and carry the same
data. Rendering is deterministic (Agg backend, explicit metadata) so that
repeated runs produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import __version__
from .reporting import canonical_json

_DPI = 150


def _save(fig, path, config: dict):
    fig.tight_layout()
    fig.savefig(
        path,
        dpi=_DPI,
        metadata={
            "Software": f"rimlab {__version__}",
            "Description": canonical_json(config),
        },
    )
    plt.close(fig)


def save_density_figure(density, path, config: dict, title="stationary density estimate"):
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.5, 3.8))
    ax0.semilogy(density.left_nodes, density.left_values, lw=1.0, label="(0, 1/2]")
    ax0.semilogy(density.right_nodes, density.right_values, lw=1.0, label="(1/2, 1]")
    ax0.set_xlabel("x")
    ax0.set_ylabel("f(x)")
    ax0.set_title(title)
    ax0.legend(frameon=False)
    ax1.loglog(density.left_nodes, density.left_values, lw=1.0, label="vs x")
    ax1.loglog(density.right_nodes - 0.5, density.right_values, lw=1.0, label="vs x - 1/2")
    ax1.set_xlabel("distance to singular endpoint")
    ax1.set_ylabel("f")
    ax1.set_title("pole structure")
    ax1.legend(frameon=False)
    _save(fig, path, config)


def save_residual_figure(residuals, path, config: dict):
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.semilogy(np.arange(1, len(residuals) + 1), residuals, lw=1.0)
    ax.set_xlabel("iteration")
    ax.set_ylabel(r"$L^1$ residual")
    ax.set_title("power iteration residual")
    _save(fig, path, config)


def save_histogram_figure(hist, path, config: dict, overlay=None):
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    mids = 0.5 * (hist.edges[:-1] + hist.edges[1:])
    ax.semilogy(mids, np.maximum(hist.density, 1e-12), lw=0.8, label="orbit histogram")
    if overlay is not None:
        ax.semilogy(mids, np.maximum(overlay, 1e-12), lw=0.8, label="ulam stationary")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title("occupation density")
    ax.legend(frameon=False)
    _save(fig, path, config)


def save_orbit_figure(trace, path, config: dict):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(trace.points, lw=0.6)
    ax.axhline(0.5, color="gray", lw=0.5, ls=":")
    ax.set_xlabel("step")
    ax.set_ylabel("x")
    ax.set_title("random orbit")
    _save(fig, path, config)


def save_kac_figure(result, path, config: dict):
    fig, ax = plt.subplots(figsize=(5.4, 3.8))
    times = np.sort(result.times)
    ccdf = 1.0 - np.arange(1, times.size + 1) / times.size
    positive = ccdf > 0
    ax.loglog(times[positive], ccdf[positive], lw=1.0)
    ax.set_xlabel("return time")
    ax.set_ylabel("CCDF")
    title = "first-return times"
    if result.censored.any():
        title += f" ({int(result.censored.sum())} censored at cap)"
    ax.set_title(title)
    _save(fig, path, config)


def save_sweep_figure(values, etas, gammas, parameter, path, config: dict):
    fig, ax = plt.subplots(figsize=(5.6, 3.8))
    ax.plot(values, etas, "o-", ms=3, lw=1.0, label=r"eta")
    finite = np.isfinite(gammas)
    ax.plot(np.asarray(values)[finite], np.asarray(gammas)[finite], "s-", ms=3, lw=1.0, label=r"gamma")
    ax.axhline(1.0, color="gray", lw=0.6, ls="--")
    ax.set_xlabel(parameter)
    ax.set_title("phase thresholds along the sweep")
    ax.legend(frameon=False)
    _save(fig, path, config)


def save_continuity_figure(result, path, config: dict):
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.loglog(result.deltas, result.distances, "o-", lw=1.0)
    ax.set_xlabel("perturbation size")
    ax.set_ylabel(r"$L^1$ distance")
    ax.set_title("density continuity in p")
    _save(fig, path, config)
