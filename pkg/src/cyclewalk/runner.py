"""Experiment orchestration: engines, entropy sweeps and deterministic file emission."""
from __future__ import annotations

import json
import logging
import os
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

import cyclewalk
from cyclewalk import export
from cyclewalk.config import ExperimentConfig, format_angle
from cyclewalk.core import BlochCoin
from cyclewalk.decoherence import (
    NoiseModel,
    SuperoperatorPropagator,
    f_tilde,
    f_tilde_closed_y,
    monte_carlo_evolve,
)
from cyclewalk.observables import linear_entropy, position_distribution
from cyclewalk.walk import WalkState, classical_walk, evolve_direct, evolve_exact, f_coeff
from cyclewalk.wigner import wigner_function

log = logging.getLogger(__name__)

WORKERS_ENV = "CYCLEWALK_MAX_WORKERS"
CHECK_TOL = 1e-10


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class SweepRecord:
    t: int
    alpha: float
    S_L: float
    engine: str
    wall_time: float = 0.0


@dataclass
class RunResult:
    files: list[Path] = field(default_factory=list)
    manifest: Path | None = None
    engine_checks: list[dict] = field(default_factory=list)

    @property
    def checks_passed(self) -> bool:
        return all(c["passed"] is not False for c in self.engine_checks)


# -- engines ---------------------------------------------------------------------------

def _evolve_block(config: ExperimentConfig, state: WalkState, noise: NoiseModel | None):
    """Yield (t, rho_w) over the config's t values for one noise setting."""
    ts = sorted(set(config.ts))
    engine = config.engine
    if engine == "direct":
        for t in ts:
            yield t, evolve_direct(state, t)
    elif engine == "momentum":
        for t in ts:
            yield t, evolve_exact(state, t)
    elif engine == "superoperator":
        prop = SuperoperatorPropagator(state.N, state.coin0, noise)
        dec = state.decomposition
        for t, grid in prop.iter_grids(ts):
            yield t, state.walker.copy() if t == 0 else dec.to_position(grid)
    elif engine == "montecarlo":
        for t in ts:
            yield t, monte_carlo_evolve(state, t, noise, config.seed, config.samples)
    else:
        raise ValueError(f"unknown engine {engine!r}")


def _parallel_map(fn, items):
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def evolve_all(config: ExperimentConfig) -> list[tuple[NoiseModel | None, int, np.ndarray]]:
    """Walker states for every (noise, t) of the config, in canonical order."""
    config.validate()
    state = WalkState(config.walker_state(), config.coin_state())

    def block(noise):
        return [(noise, t, rho) for t, rho in _evolve_block(config, state, noise)]

    return [item for blk in _parallel_map(block, config.noise_models()) for item in blk]


def entropy_sweep(config: ExperimentConfig) -> list[SweepRecord]:
    """Linear entropy for every (t, alpha) requested by the config."""
    config.validate()
    state = WalkState(config.walker_state(), config.coin_state())
    if config.engine == "superoperator":
        # trace of rho^2 is basis independent, so stay in momentum space
        c = state.decomposition.c

        def block(noise):
            start = time.perf_counter()
            prop = SuperoperatorPropagator(state.N, state.coin0, noise)
            out = []
            for t, grid in prop.iter_grids(config.ts):
                out.append(SweepRecord(t, noise.alpha, linear_entropy(c * grid), config.engine))
            per = (time.perf_counter() - start) / max(1, len(out))
            for rec in out:
                rec.wall_time = per
            return out
    else:
        def block(noise):
            out = []
            for t, rho in _evolve_block(config, state, noise):
                start = time.perf_counter()
                alpha = 0.0 if noise is None else noise.alpha
                out.append(SweepRecord(t, alpha, linear_entropy(rho), config.engine,
                                       time.perf_counter() - start))
            return out

    return [r for blk in _parallel_map(block, config.noise_models()) for r in blk]


def engine_checks(config: ExperimentConfig) -> list[dict]:
    """Cross-check one f~ value against a closed form whenever gamma is 0 or 1."""
    checks = []
    if config.engine not in ("superoperator", "montecarlo"):
        return checks
    N = config.n
    k, kp = 1, 0
    t = max(1, max(config.ts))
    coin0 = config.coin_state()
    for noise in config.noise_models():
        entry = {"axis": noise.axis, "alpha": format_angle(noise.alpha), "k": k, "kp": kp, "t": t}
        if abs(noise.gamma - 1) < 1e-12:
            ref, kind = f_coeff(k, kp, t, coin0, N), "unitary f"
        elif abs(noise.gamma) < 1e-12 and noise.axis in ("y", "z"):
            ref, kind = f_tilde_closed_y(k, kp, t, BlochCoin.from_density(coin0).p_x, N), "gamma=0 closed form"
        else:
            continue
        diff = abs(f_tilde(k, kp, t, coin0, noise, N) - ref)
        entry.update(reference=kind, abs_diff=float(f"{diff:.3e}"), passed=bool(diff <= CHECK_TOL))
        checks.append(entry)
    return checks


# -- file emission ---------------------------------------------------------------------

def _stem(config: ExperimentConfig, kind: str, t: int | None = None, noise: NoiseModel | None = None) -> str:
    parts = [config.label] if config.label else []
    parts.append(kind)
    if t is not None:
        parts.append(f"t{t}")
    if noise is not None:
        parts.append(f"{noise.axis}{format_angle(noise.alpha)}")
    return "_".join(parts)


def run_experiment(config: ExperimentConfig, out_dir: Path, manifest_name: str | None = None) -> RunResult:
    """Compute everything first, then write outputs and a manifest in canonical order."""
    config.validate()
    out_dir = Path(out_dir)
    pending: list[tuple[str, callable]] = []
    N = config.n

    if config.command == "evolve":
        for noise, t, rho in evolve_all(config):
            p = position_distribution(rho)
            pending.append((_stem(config, "distribution", t, noise) + ".csv",
                            lambda path, p=p: export.write_csv(path, ["site", "probability"], enumerate(p))))
        if config.initial == "localized":
            for t in sorted(set(config.ts)):
                p = classical_walk(config.sites[0], t, N)
                pending.append((_stem(config, "classical", t) + ".csv",
                                lambda path, p=p: export.write_csv(path, ["site", "probability"], enumerate(p))))
    elif config.command == "wigner":
        formats = config.formats or ("txt", "ppm")
        for noise, t, rho in evolve_all(config):
            W = wigner_function(rho)
            stem = _stem(config, "wigner", t, noise)
            if "txt" in formats:
                pending.append((stem + ".txt", lambda path, W=W: export.write_matrix_text(path, W.values)))
                pending.append((_stem(config, "density_abs", t, noise) + ".txt",
                                lambda path, r=np.abs(rho): export.write_matrix_text(path, r)))
            if "pgm" in formats:
                pending.append((stem + ".pgm", lambda path, W=W: export.write_pgm(path, W.values)))
            if "ppm" in formats:
                pending.append((stem + ".ppm", lambda path, W=W: export.write_ppm(path, W.values)))
    elif config.command in ("entropy", "sweep"):
        records = entropy_sweep(config)
        for r in records:
            log.info("t=%d alpha=%s S_L=%.6f (%.3fs)", r.t, format_angle(r.alpha), r.S_L, r.wall_time)
        rows = [(r.t, format_angle(r.alpha), r.S_L) for r in records]
        pending.append((_stem(config, config.command) + ".csv",
                        lambda path: export.write_csv(path, ["t", "alpha", "S_L"], rows)))

    checks = engine_checks(config)
    result = RunResult(engine_checks=checks)
    for name, writer in pending:
        result.files.append(writer(out_dir / name))

    manifest = {
        "config": config.to_text(),
        "config_sha256": config.digest(),
        "seed": config.seed,
        "versions": {
            "cyclewalk": cyclewalk.__version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "outputs": [{"file": p.name, "sha256": export.sha256_file(p)} for p in result.files],
        "engine_checks": checks,
    }
    name = manifest_name or (_stem(config, "manifest") + ".json")
    result.manifest = export._write_text(out_dir / name, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return result

