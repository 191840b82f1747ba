"""Command-line front end.

Subcommands: classify, density, orbit, histogram, ulam, kac, cones,
preimages, continuity, sweep. Each loads a JSON config (strictly
validated, unknown keys rejected), runs the corresponding experiment, and
writes CSV/JSON outputs into --out; --plot additionally renders matplotlib
figures next to the delimited files. Exit codes: 0 success, 2 config
error, 3 numeric failure.

The provenance config embedded in every output contains the
experiment-defining fields only (maps, probs, grid, seed, command block);
execution details such as --threads or --out do not change output bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .maps import ConvergenceError, MapSpec
from .system import RandomSystem, classify, eta, gamma, random_orbit
from .transfer import (
    ConeParams,
    check_cone_C0,
    check_cone_C1,
    check_cone_C2,
    lipschitz_envelope_check,
    auxiliary_monotone_checks,
    pole_slope,
    power_iterate,
)
from .diagnostics import (
    build_ulam,
    continuity_experiment,
    kac_experiment,
    orbit_histogram,
    preimage_bounds_check,
)
from .reporting import write_csv, write_json

COMMANDS = (
    "classify",
    "density",
    "orbit",
    "histogram",
    "ulam",
    "kac",
    "cones",
    "preimages",
    "continuity",
    "sweep",
)


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# config loading and validation
# ---------------------------------------------------------------------------


def _check_keys(obj: dict, allowed, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")


def _number(obj, key, where, *, lo=None, hi=None, integer=False, default=None):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{where}: missing required key '{key}'")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    if integer and int(v) != v:
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(f"{where}.{key}: must be >= {lo}, got {v!r}")
    if hi is not None and v > hi:
        raise ConfigError(f"{where}.{key}: must be <= {hi}, got {v!r}")
    return int(v) if integer else float(v)


_TOP_KEYS = {
    "maps", "probs", "grid", "seed", "threads",
    "density", "orbit", "histogram", "ulam", "kac",
    "cones", "preimages", "continuity", "sweep",
}


@dataclass
class RunConfig:
    system: RandomSystem
    grid: dict
    seed: int
    threads: int
    blocks: dict

    def provenance(self, command: str) -> dict:
        """Experiment-defining fields embedded in every output file."""
        out = {
            "maps": [
                {"kind": m.kind.value, "alpha": m.alpha}
                | ({"kappa": m.kappa} if m.kappa is not None else {})
                for m in self.system.maps
            ],
            "probs": list(self.system.probs),
            "grid": self.grid,
            "seed": self.seed,
            "command": command,
        }
        if command in self.blocks:
            out[command] = self.blocks[command]
        return out


def _parse_maps(raw, where="maps"):
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{where}: expected a non-empty list of map objects")
    specs = []
    for i, m in enumerate(raw):
        w = f"{where}[{i}]"
        _check_keys(m, {"kind", "alpha", "kappa"}, w)
        kind = m.get("kind")
        alpha = _number(m, "alpha", w)
        if kind == "lsv":
            if "kappa" in m:
                raise ConfigError(f"{w}: kappa is not a parameter of lsv maps")
            specs.append(MapSpec.lsv(alpha))
        elif kind == "attracting":
            kappa = _number(m, "kappa", w)
            try:
                specs.append(MapSpec.attracting(alpha, kappa))
            except ValueError as exc:
                raise ConfigError(f"{w}: {exc}") from exc
        else:
            raise ConfigError(f"{w}.kind: expected 'lsv' or 'attracting', got {kind!r}")
    return specs


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    _check_keys(raw, _TOP_KEYS, str(path))

    specs = _parse_maps(raw.get("maps"))
    probs = raw.get("probs")
    if not isinstance(probs, list) or len(probs) != len(specs):
        raise ConfigError("probs: expected one probability per map")
    try:
        system = RandomSystem.of(specs, probs)
    except ValueError as exc:
        raise ConfigError(f"system: {exc}") from exc

    grid_raw = raw.get("grid", {})
    _check_keys(grid_raw, {"nodes_per_half", "floor"}, "grid")
    grid = {
        "nodes_per_half": _number(grid_raw, "nodes_per_half", "grid", lo=16, integer=True, default=1024),
        "floor": _number(grid_raw, "floor", "grid", lo=1e-300, hi=1e-6, default=1e-8),
    }
    seed = _number(raw, "seed", "config", lo=0, integer=True, default=0)
    threads = _number(raw, "threads", "config", lo=1, integer=True, default=1)

    blocks = {}
    validators = {
        "density": _v_density,
        "orbit": _v_orbit,
        "histogram": _v_histogram,
        "ulam": _v_ulam,
        "kac": _v_kac,
        "cones": _v_cones,
        "preimages": _v_preimages,
        "continuity": _v_continuity,
        "sweep": _v_sweep,
    }
    for name, validator in validators.items():
        if name in raw:
            blocks[name] = validator(raw[name], system)
    return RunConfig(system=system, grid=grid, seed=seed, threads=threads, blocks=blocks)


def _v_density(obj, system):
    _check_keys(obj, {"iterations", "beta", "cesaro", "residual_tol"}, "density")
    beta = None
    if obj.get("beta") is not None:
        beta = _number(obj, "beta", "density", lo=1e-12, hi=1.0)
    cesaro = obj.get("cesaro", False)
    if not isinstance(cesaro, bool):
        raise ConfigError("density.cesaro: expected a boolean")
    return {
        "iterations": _number(obj, "iterations", "density", lo=0, integer=True, default=100),
        "beta": beta,
        "cesaro": cesaro,
        "residual_tol": _number(obj, "residual_tol", "density", lo=0.0, default=1e-10),
    }


def _v_orbit(obj, system):
    _check_keys(obj, {"x0", "steps"}, "orbit")
    return {
        "x0": _number(obj, "x0", "orbit", lo=0.0, hi=1.0, default=0.3),
        "steps": _number(obj, "steps", "orbit", lo=1, integer=True, default=1000),
    }


def _v_histogram(obj, system):
    _check_keys(obj, {"x0", "steps", "bins"}, "histogram")
    return {
        "x0": _number(obj, "x0", "histogram", lo=0.0, hi=1.0, default=0.3),
        "steps": _number(obj, "steps", "histogram", lo=100_000, integer=True, default=1_000_000),
        "bins": _number(obj, "bins", "histogram", lo=2, integer=True, default=4096),
    }


def _v_ulam(obj, system):
    _check_keys(obj, {"bins"}, "ulam")
    bins = _number(obj, "bins", "ulam", lo=64, integer=True, default=4096)
    if bins & (bins - 1):
        raise ConfigError("ulam.bins: must be a power of two")
    return {"bins": bins}


def _v_kac(obj, system):
    _check_keys(obj, {"samples", "cap", "start", "iterations"}, "kac")
    start = obj.get("start", "density")
    if start not in ("density", "uniform"):
        raise ConfigError("kac.start: expected 'density' or 'uniform'")
    return {
        "samples": _number(obj, "samples", "kac", lo=1_000, integer=True, default=10_000),
        "cap": _number(obj, "cap", "kac", lo=1, integer=True, default=10_000_000),
        "start": start,
        "iterations": _number(obj, "iterations", "kac", lo=0, integer=True, default=200),
    }


def _v_cones(obj, system):
    _check_keys(obj, {"iterations", "beta"}, "cones")
    beta = None
    if obj.get("beta") is not None:
        beta = _number(obj, "beta", "cones", lo=1e-12, hi=1.0)
    return {
        "iterations": _number(obj, "iterations", "cones", lo=1, integer=True, default=200),
        "beta": beta,
    }


def _v_preimages(obj, system):
    _check_keys(obj, {"n_max", "words"}, "preimages")
    return {
        "n_max": _number(obj, "n_max", "preimages", lo=10, hi=10_000, integer=True, default=10_000),
        "words": _number(obj, "words", "preimages", lo=1, integer=True, default=100),
    }


def _v_continuity(obj, system):
    _check_keys(obj, {"direction", "deltas", "iterations"}, "continuity")
    direction = obj.get("direction")
    if not isinstance(direction, list) or len(direction) != system.n_maps:
        raise ConfigError("continuity.direction: expected one entry per map")
    deltas = obj.get("deltas")
    if not isinstance(deltas, list) or not deltas:
        raise ConfigError("continuity.deltas: expected a non-empty list")
    return {
        "direction": [float(d) for d in direction],
        "deltas": [float(d) for d in deltas],
        "iterations": _number(obj, "iterations", "continuity", lo=1, integer=True, default=400),
    }


def _v_sweep(obj, system):
    _check_keys(obj, {"parameter", "symbol", "values", "density", "iterations"}, "sweep")
    parameter = obj.get("parameter")
    if parameter not in ("prob", "kappa", "alpha"):
        raise ConfigError("sweep.parameter: expected 'prob', 'kappa' or 'alpha'")
    symbol = _number(obj, "symbol", "sweep", lo=1, hi=system.n_maps, integer=True)
    values = obj.get("values")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values: expected a non-empty list")
    with_density = obj.get("density", False)
    if not isinstance(with_density, bool):
        raise ConfigError("sweep.density: expected a boolean")
    return {
        "parameter": parameter,
        "symbol": symbol,
        "values": [float(v) for v in values],
        "density": with_density,
        "iterations": _number(obj, "iterations", "sweep", lo=1, integer=True, default=50),
    }


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------


def _block(cfg: RunConfig, name: str):
    if name not in cfg.blocks:
        validators = {
            "density": _v_density, "orbit": _v_orbit, "histogram": _v_histogram,
            "ulam": _v_ulam, "kac": _v_kac, "cones": _v_cones,
            "preimages": _v_preimages, "continuity": _v_continuity,
        }
        if name in ("continuity", "sweep"):
            raise ConfigError(f"config block '{name}' is required for this command")
        cfg.blocks[name] = validators[name]({}, cfg.system)
    return cfg.blocks[name]


def _converge(cfg: RunConfig, iterations: int, beta=None, cesaro=False, residual_tol=1e-10):
    return power_iterate(
        cfg.system,
        iterations,
        nodes_per_half=cfg.grid["nodes_per_half"],
        floor=cfg.grid["floor"],
        beta=beta,
        cesaro=cesaro,
        residual_tol=residual_tol,
    )


def cmd_classify(cfg: RunConfig, out: Path, plot: bool) -> dict:
    report = classify(cfg.system)
    return report.to_dict()


def _density_summary(result) -> dict:
    density, params = result.density, result.params
    envelopes = check_cone_C2(density, params)
    return {
        "iterations_run": result.iterations,
        "cesaro": result.cesaro,
        "mass": density.mass,
        "residuals": [float(r) for r in result.residuals],
        "final_residual": float(result.residuals[-1]) if result.residuals.size else None,
        "prenorm_mass_drift": float(np.abs(result.prenorm_masses - 1.0).max())
        if result.prenorm_masses.size
        else 0.0,
        "beta": params.beta,
        "cone_exponents": {"d": params.d, "t1": params.t1, "t2": params.t2},
        "fitted_envelope": {"a1": envelopes.fitted_a1, "a2": envelopes.fitted_a2},
        "pole_slopes": {
            "left": pole_slope(result.density, "left"),
            "right": pole_slope(result.density, "right"),
        },
        "right_half_max": float(density.right_values.max()),
    }


def cmd_density(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "density")
    result = _converge(
        cfg, block["iterations"], block["beta"], block["cesaro"], block["residual_tol"]
    )
    prov = cfg.provenance("density")
    write_csv(
        out / "density.csv",
        ["half", "x", "f"],
        result.density.to_rows(),
        config=prov,
    )
    summary = _density_summary(result)
    summary["phase"] = classify(cfg.system).to_dict()
    write_json(out / "density_summary.json", summary, config=prov)
    if plot:
        from . import plots

        plots.save_density_figure(result.density, out / "density.png", prov)
        if result.residuals.size:
            plots.save_residual_figure(result.residuals, out / "density_residuals.png", prov)
    return {"written": ["density.csv", "density_summary.json"], "final_residual": summary["final_residual"]}


def cmd_orbit(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "orbit")
    trace = random_orbit(cfg.system, block["x0"], block["steps"], cfg.seed)
    prov = cfg.provenance("orbit")
    rows = [(0, "", trace.points[0])]
    rows += [
        (k + 1, int(trace.word[k]), trace.points[k + 1]) for k in range(len(trace.word))
    ]
    write_csv(out / "orbit.csv", ["step", "symbol", "x"], rows, config=prov)
    if plot:
        from . import plots

        plots.save_orbit_figure(trace, out / "orbit.png", prov)
    return {"written": ["orbit.csv"], "steps": block["steps"]}


def cmd_histogram(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "histogram")
    hist = orbit_histogram(
        cfg.system, block["x0"], cfg.seed, block["steps"], block["bins"]
    )
    prov = cfg.provenance("histogram")
    rows = [
        (hist.edges[i], hist.edges[i + 1], int(hist.counts[i]), hist.density[i])
        for i in range(len(hist.counts))
    ]
    write_csv(
        out / "histogram.csv", ["bin_lo", "bin_hi", "count", "density"], rows, config=prov
    )
    write_json(
        out / "histogram_summary.json",
        {
            "steps": block["steps"],
            "burnin": block["steps"] // 100,
            "bins": block["bins"],
            "x0": block["x0"],
            "seed": cfg.seed,
        },
        config=prov,
    )
    if plot:
        from . import plots

        plots.save_histogram_figure(hist, out / "histogram.png", prov)
    return {"written": ["histogram.csv", "histogram_summary.json"]}


def cmd_ulam(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "ulam")
    model = build_ulam(cfg.system, block["bins"])
    prov = cfg.provenance("ulam")
    rows = [
        (model.edges[i], model.edges[i + 1], model.stationary[i], model.stationary_density[i])
        for i in range(model.bin_count)
    ]
    write_csv(
        out / "ulam.csv",
        ["bin_lo", "bin_hi", "stationary_prob", "density"],
        rows,
        config=prov,
    )
    write_json(
        out / "ulam_summary.json",
        {"bins": model.bin_count, "iterations": model.iterations, "residual": model.residual},
        config=prov,
    )
    if plot:
        from . import plots
        from .diagnostics import Histogram

        hist = Histogram(model.edges, model.stationary, model.stationary_density)
        plots.save_histogram_figure(hist, out / "ulam.png", prov)
    return {"written": ["ulam.csv", "ulam_summary.json"], "iterations": model.iterations}


def cmd_kac(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "kac")
    density = None
    if block["start"] == "density":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            density = _converge(cfg, block["iterations"]).density
    result = kac_experiment(
        cfg.system,
        cfg.seed,
        block["samples"],
        block["cap"],
        density=density,
        threads=cfg.threads,
    )
    prov = cfg.provenance("kac")
    rows = [
        (i, int(result.start_symbols[i]), result.start_points[i],
         int(result.times[i]), bool(result.censored[i]))
        for i in range(result.times.size)
    ]
    write_csv(
        out / "kac_samples.csv",
        ["index", "symbol", "x_start", "return_time", "censored"],
        rows,
        config=prov,
    )
    write_json(out / "kac_summary.json", result.to_summary(), config=prov)
    if plot:
        from . import plots

        plots.save_kac_figure(result, out / "kac.png", prov)
    return {"written": ["kac_samples.csv", "kac_summary.json"], **result.to_summary()}


def cmd_cones(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "cones")
    result = _converge(cfg, block["iterations"], block["beta"])
    density, params = result.density, result.params
    c0 = check_cone_C0(density)
    c1 = check_cone_C1(density, params)
    c2 = check_cone_C2(density, params)
    lip = lipschitz_envelope_check(density, params)
    aux = []
    for j in cfg.system.attracting_symbols:
        spec = cfg.system.spec(j)
        for b in (params.t2, params.d):
            rep = auxiliary_monotone_checks(spec.alpha, spec.kappa, b, params.d)
            aux.append(
                {"symbol": j, "b": b, "ratio_increasing": rep.ratio_increasing,
                 "h_direction": rep.h_direction, "h_monotone": rep.h_monotone}
            )
    payload = {
        "iterations_run": result.iterations,
        "beta": params.beta,
        "C0": {"passed": c0.passed},
        "C1": {"passed": c1.passed},
        "C2": {
            "passed": c2.passed,
            "fitted_a1": c2.fitted_a1,
            "fitted_a2": c2.fitted_a2,
        },
        "lipschitz": {"passed": lip.passed, "worst_ratio": lip.worst_ratio},
        "auxiliary_monotonicity": aux,
    }
    prov = cfg.provenance("cones")
    write_json(out / "cones.json", payload, config=prov)
    if plot:
        from . import plots

        plots.save_density_figure(density, out / "cones_density.png", prov)
    return {"written": ["cones.json"], "all_passed": c0.passed and c1.passed and c2.passed and lip.passed}


def cmd_preimages(cfg: RunConfig, out: Path, plot: bool) -> dict:
    block = _block(cfg, "preimages")
    report = preimage_bounds_check(
        cfg.system, cfg.seed, block["n_max"], block["words"]
    )
    prov = cfg.provenance("preimages")
    rows = []
    for symbol, (lo, hi) in sorted(report.ratios.items()):
        spec = cfg.system.spec(symbol)
        rows.append((symbol, spec.alpha, lo, hi, hi / lo))
    write_csv(
        out / "preimages.csv",
        ["symbol", "alpha", "ratio_min", "ratio_max", "spread"],
        rows,
        config=prov,
    )
    write_json(
        out / "preimages_summary.json",
        {
            "n_max": report.n_max,
            "ratio_ok": report.ratio_ok,
            "ordering_ok": report.ordering_ok,
            "min_margin": report.min_margin,
            "words": block["words"],
            "seed": cfg.seed,
        },
        config=prov,
    )
    return {"written": ["preimages.csv", "preimages_summary.json"], "passed": report.passed}


def cmd_continuity(cfg: RunConfig, out: Path, plot: bool) -> dict:
    if "continuity" not in cfg.blocks:
        raise ConfigError("config block 'continuity' is required for this command")
    block = cfg.blocks["continuity"]
    try:
        result = continuity_experiment(
            cfg.system,
            block["direction"],
            block["deltas"],
            nodes_per_half=cfg.grid["nodes_per_half"],
            floor=cfg.grid["floor"],
            iterations=block["iterations"],
        )
    except ValueError as exc:
        raise ConfigError(f"continuity: {exc}") from exc
    prov = cfg.provenance("continuity")
    rows = list(zip(result.deltas, result.distances))
    write_csv(out / "continuity.csv", ["delta", "l1_distance"], rows, config=prov)
    write_json(
        out / "continuity_summary.json",
        {
            "deltas": list(result.deltas),
            "distances": list(result.distances),
            "beta": result.beta,
            "iterations": result.iterations,
        },
        config=prov,
    )
    if plot:
        from . import plots

        plots.save_continuity_figure(result, out / "continuity.png", prov)
    return {"written": ["continuity.csv", "continuity_summary.json"]}


def _sweep_system(base: RandomSystem, parameter: str, symbol: int, value: float) -> RandomSystem:
    maps = list(base.maps)
    probs = np.array(base.prob_array)
    j = symbol - 1
    if parameter == "kappa":
        if not maps[j].is_attracting:
            raise ValueError(f"map {symbol} is not attracting; cannot sweep kappa")
        maps[j] = MapSpec.attracting(maps[j].alpha, value)
    elif parameter == "alpha":
        spec = maps[j]
        maps[j] = (
            MapSpec.attracting(value, spec.kappa) if spec.is_attracting else MapSpec.lsv(value)
        )
    else:
        if not 0.0 < value < 1.0:
            raise ValueError("swept probability must lie in (0,1)")
        old = probs[j]
        probs *= (1.0 - value) / (1.0 - old)
        probs[j] = value
    return RandomSystem.of(maps, probs)


def cmd_sweep(cfg: RunConfig, out: Path, plot: bool) -> dict:
    if "sweep" not in cfg.blocks:
        raise ConfigError("config block 'sweep' is required for this command")
    block = cfg.blocks["sweep"]
    prov = cfg.provenance("sweep")
    header = ["value", "eta", "gamma", "alpha_min", "phase", "error"]
    if block["density"]:
        header += ["final_residual", "pole_slope_left", "pole_slope_right", "right_half_max"]
    rows = []
    etas, gammas = [], []
    for value in block["values"]:
        try:
            system = _sweep_system(cfg.system, block["parameter"], block["symbol"], value)
            report = classify(system)
            row = [value, report.eta, report.gamma, report.alpha_min, report.phase.value, ""]
            etas.append(report.eta)
            gammas.append(report.gamma)
            if block["density"]:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    res = power_iterate(
                        system,
                        block["iterations"],
                        nodes_per_half=cfg.grid["nodes_per_half"],
                        floor=cfg.grid["floor"],
                    )
                row += [
                    float(res.residuals[-1]) if res.residuals.size else 0.0,
                    pole_slope(res.density, "left"),
                    pole_slope(res.density, "right"),
                    float(res.density.right_values.max()),
                ]
        except (ValueError, ConvergenceError) as exc:
            row = [value, "", "", "", "", str(exc).replace(",", ";")]
            etas.append(np.nan)
            gammas.append(np.nan)
            if block["density"]:
                row += ["", "", "", ""]
        rows.append(tuple(row))
    write_csv(out / "sweep.csv", header, rows, config=prov)
    if plot:
        from . import plots

        plots.save_sweep_figure(
            block["values"], etas, gammas, block["parameter"], out / "sweep.png", prov
        )
    return {"written": ["sweep.csv"], "points": len(rows)}


_HANDLERS = {
    "classify": cmd_classify,
    "density": cmd_density,
    "orbit": cmd_orbit,
    "histogram": cmd_histogram,
    "ulam": cmd_ulam,
    "kac": cmd_kac,
    "cones": cmd_cones,
    "preimages": cmd_preimages,
    "continuity": cmd_continuity,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rimlab",
        description="Random intermittent interval-map laboratory",
    )
    parser.add_argument("--version", action="version", version=f"rimlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--threads", type=int, default=None, help="worker threads for Monte-Carlo replicas")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--plot", action="store_true", help="render figures next to the CSV output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be a non-negative integer")
            cfg.seed = args.seed
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be at least 1")
            cfg.threads = args.threads
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        result = _HANDLERS[args.command](cfg, out, args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(result, sort_keys=True, default=_json_default))
    return 0


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


if __name__ == "__main__":
    sys.exit(main())
