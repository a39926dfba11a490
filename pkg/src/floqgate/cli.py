"""Batch front door: config-driven experiments with provenance artifacts.

Configs are JSON documents with a strict schema (unknown keys are errors).
Frequencies carry the suffix ``_mhz`` and are read as "MHz meaning
2*pi*value rad/us" unless the config sets ``"angular": true``, in which
case they are taken as rad/us directly.  Every run writes ``result.json``,
experiment CSV tables, and ``manifest.json`` echoing the resolved
parameters in both unit conventions.
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .design import design_gate, return_ratio_candidates
from .errors import ConfigInvalid, FloqgateError
from .grover import SearchSpec, run_search
from .lindblad import IntegratorConfig, floquet_map
from .protocol import (
    average_gate_fidelity,
    build_schedule,
    fidelity_trajectory,
    realize_channel,
)
from .reporting import density_matrix_payload, write_csv, write_json
from .robustness import DisorderSpec, DopplerSpec, disorder_sweep, doppler_sweep
from .system import SystemParams

TWO_PI = 2.0 * math.pi

_COMMON_SCHEMA = {
    "experiment": (str, None),
    "seed": (int, 12345),
    "threads": (int, 1),
    "output_dir": (str, "."),
    "angular": (bool, False),
    "rel_tol": (float, 1e-8),
    "abs_tol": (float, 1e-10),
    "sample_count": (int, 1000),
}

_GATE_SCHEMA = {
    "v_mhz": (float, 70.18),
    "rabi_mhz": (float, 3.5),
    "branch": (int, 0),
    "theta_rad": (float, math.pi / 2.0),
    "lifetime_us": (float, 400.0),
    "shape": (str, "square"),
}

_SCHEMAS = {
    "design-gate": {
        **_GATE_SCHEMA,
        "use_affine_ratio": (bool, False),
        "max_branch": (int, 3),
    },
    "simulate-gate": {
        **_GATE_SCHEMA,
        "use_affine_ratio": (bool, False),
        "trajectory_samples": (int, 1000),
    },
    "floquet-map": {
        "rabi_mhz": (float, 1.0),
        "v_over_rabi": (float, 20.0),
        "alpha_min": (float, 0.0),
        "alpha_max": (float, 4.0),
        "alpha_count": (int, 41),
        "omega_ratio_min": (float, 10.0),
        "omega_ratio_max": (float, 30.0),
        "omega_ratio_count": (int, 41),
        "horizon_us": (float, 10.0),
        "lifetime_us": (float, 0.0),
    },
    "robustness": {
        **_GATE_SCHEMA,
        "kind": (str, "time"),
        "half_widths": (list, [0.05, 0.1]),
        "samples": (int, 1001),
    },
    "doppler": {
        **_GATE_SCHEMA,
        "temperatures_uk": (list, [10.0]),
        "samples": (int, 1001),
        "lambda1_nm": (float, 780.0),
        "lambda2_nm": (float, 480.0),
        "atomic_mass_kg": (float, 1.443e-25),
    },
    "grover": {
        **_GATE_SCHEMA,
        "variant": (str, "one_item"),
        "mode": (str, "pulse"),
    },
}

EXPERIMENTS = tuple(sorted(_SCHEMAS))

_POSITIVE_KEYS = {
    "v_mhz", "rabi_mhz", "lifetime_us", "horizon_us", "rel_tol", "abs_tol",
    "lambda1_nm", "lambda2_nm", "atomic_mass_kg", "v_over_rabi",
}
_NONNEGATIVE_LIST_KEYS = {"temperatures_uk", "half_widths"}


def _coerce(key: str, value, expected: type):
    if expected is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if expected is int and isinstance(value, bool):
        raise ConfigInvalid(f"{key}: expected integer, got boolean")
    if not isinstance(value, expected):
        raise ConfigInvalid(f"{key}: expected {expected.__name__}, got {type(value).__name__}")
    return value


def resolve_config(raw: dict) -> dict:
    """Validate against the strict schema and fill defaults."""
    if not isinstance(raw, dict):
        raise ConfigInvalid("config root must be a JSON object")
    experiment = raw.get("experiment")
    if experiment not in _SCHEMAS:
        raise ConfigInvalid(
            f"experiment: must be one of {', '.join(EXPERIMENTS)} (got {experiment!r})"
        )
    schema = {**_COMMON_SCHEMA, **_SCHEMAS[experiment]}
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {', '.join(unknown)}")
    resolved = {}
    for key, (expected, default) in schema.items():
        if key in raw:
            resolved[key] = _coerce(key, raw[key], expected)
        elif default is None:
            raise ConfigInvalid(f"{key}: required key missing")
        else:
            resolved[key] = default
    for key in _POSITIVE_KEYS & set(resolved):
        if key == "lifetime_us":
            if resolved[key] < 0:
                raise ConfigInvalid(f"{key}: must be non-negative")
        elif resolved[key] <= 0:
            raise ConfigInvalid(f"{key}: must be positive")
    for key in _NONNEGATIVE_LIST_KEYS & set(resolved):
        for i, item in enumerate(resolved[key]):
            if not isinstance(item, (int, float)) or isinstance(item, bool):
                raise ConfigInvalid(f"{key}[{i}]: expected number")
            if item < 0:
                raise ConfigInvalid(f"{key}[{i}]: must be non-negative")
    for key in ("samples", "sample_count", "threads", "alpha_count",
                "omega_ratio_count", "trajectory_samples"):
        if key in resolved and resolved[key] < 1:
            raise ConfigInvalid(f"{key}: must be at least 1")
    if resolved.get("branch", 0) < 0:
        raise ConfigInvalid("branch: must be non-negative")
    if "shape" in resolved and resolved["shape"] not in ("square", "gaussian"):
        raise ConfigInvalid("shape: must be 'square' or 'gaussian'")
    if "kind" in resolved and resolved["kind"] not in ("rabi", "detuning", "time"):
        raise ConfigInvalid("kind: must be 'rabi', 'detuning' or 'time'")
    return resolved


def _to_angular(cfg: dict, key: str) -> float:
    """Frequency config value in rad/us."""
    value = cfg[key]
    return value if cfg["angular"] else TWO_PI * value


def _integrator(cfg: dict) -> IntegratorConfig:
    return IntegratorConfig(
        rel_tol=cfg["rel_tol"], abs_tol=cfg["abs_tol"], sample_count=cfg["sample_count"]
    )


def _gate_context(cfg: dict):
    v = _to_angular(cfg, "v_mhz")
    omega = _to_angular(cfg, "rabi_mhz")
    gamma = 0.0 if cfg["lifetime_us"] == 0 else 1.0 / (2.0 * cfg["lifetime_us"])
    system = SystemParams(v_int=v, gamma0=gamma, gamma1=gamma)
    design = design_gate(
        system,
        omega,
        branch=cfg["branch"],
        theta=cfg["theta_rad"],
        use_affine_ratio=cfg.get("use_affine_ratio", False),
    )
    return system, design, omega


def _design_payload(design) -> dict:
    return {
        "branch": design.branch,
        "ratio": design.ratio,
        "ratio_affine": design.ratio_affine,
        "ratio_source": design.ratio_source,
        "alpha": design.alpha,
        "omega_mod_rad_us": design.omega_mod,
        "omega_eff_a_rad_us": design.omega_eff_a,
        "omega_eff_b_rad_us": design.omega_eff_b,
        "tau_us": design.tau,
        "gate_time_us": design.gate_time,
        "theta_rad": design.theta,
    }


# ------------------------------------------------------------------
# experiment runners (each returns the result payload dict)
# ------------------------------------------------------------------

def _run_design_gate(cfg: dict, outdir: Path) -> dict:
    system, design, _ = _gate_context(cfg)
    candidates = return_ratio_candidates_payload(cfg["max_branch"])
    write_csv(
        outdir / "candidates.csv",
        ["branch", "affine_formula", "numeric_root", "discrepancy",
         "population_residual", "phase_residual"],
        [[c["branch"], c["affine_formula"], c["numeric_root"], c["discrepancy"],
          c["population_residual"], c["phase_residual"]] for c in candidates],
    )
    return {"design": _design_payload(design), "candidates": candidates,
            "v_int_rad_us": system.v_int}


def return_ratio_candidates_payload(max_branch: int) -> list[dict]:
    return [
        {
            "branch": c.branch,
            "affine_formula": c.affine_formula,
            "numeric_root": c.numeric_root,
            "discrepancy": c.discrepancy,
            "population_residual": c.population_residual,
            "phase_residual": c.phase_residual,
        }
        for c in return_ratio_candidates(max_branch)
    ]


def _run_simulate_gate(cfg: dict, outdir: Path) -> dict:
    system, design, omega = _gate_context(cfg)
    drive = build_schedule(design, cfg["shape"], omega)
    integ = _integrator(cfg)
    trajectory = fidelity_trajectory(system, drive, cfg["theta_rad"], integ,
                                     samples=cfg["trajectory_samples"])
    write_csv(outdir / "fidelity_trajectory.csv", ["time_us", "avg_gate_fidelity"],
              [[t, f] for t, f in trajectory])
    channel = realize_channel(system, drive, integ)
    final = average_gate_fidelity(channel, cfg["theta_rad"])
    return {
        "design": _design_payload(design),
        "shape": cfg["shape"],
        "final_avg_gate_fidelity": final,
        "leakage": channel.leakage,
        "gate_time_us": drive.duration,
        "trajectory_csv": "fidelity_trajectory.csv",
    }


def _run_floquet_map(cfg: dict, outdir: Path) -> dict:
    omega = _to_angular(cfg, "rabi_mhz")
    v = cfg["v_over_rabi"] * omega
    gamma = 0.0 if cfg["lifetime_us"] == 0 else 1.0 / (2.0 * cfg["lifetime_us"])
    system = SystemParams(v_int=v, gamma0=gamma, gamma1=gamma)
    alphas = np.linspace(cfg["alpha_min"], cfg["alpha_max"], cfg["alpha_count"])
    ratios = np.linspace(cfg["omega_ratio_min"], cfg["omega_ratio_max"],
                         cfg["omega_ratio_count"])
    omegas = ratios * omega
    grid = floquet_map(system, omega, alphas, omegas, cfg["horizon_us"],
                       _integrator(cfg), threads=cfg["threads"])
    rows = []
    for i, alpha in enumerate(alphas):
        for j, ratio in enumerate(ratios):
            rows.append([alpha, ratio, omegas[j], grid[i, j]])
    write_csv(outdir / "map.csv",
              ["alpha", "omega_ratio", "omega_mod_rad_us", "avg_prr"], rows)
    return {
        "map_csv": "map.csv",
        "alpha_count": int(alphas.size),
        "omega_ratio_count": int(ratios.size),
        "grid_max": float(grid.max()),
        "column_means": {repr(float(a)): float(grid[i].mean()) for i, a in enumerate(alphas)},
    }


def _run_robustness(cfg: dict, outdir: Path) -> dict:
    system, design, omega = _gate_context(cfg)
    drive = build_schedule(design, cfg["shape"], omega)
    integ = _integrator(cfg)
    summary_rows = []
    per_width = []
    for w_raw in cfg["half_widths"]:
        width = TWO_PI * w_raw if (cfg["kind"] == "detuning" and not cfg["angular"]) else w_raw
        spec = DisorderSpec(kind=cfg["kind"], half_width=float(width),
                            samples=cfg["samples"], seed=cfg["seed"])
        summary = disorder_sweep(system, drive, spec, integ, threads=cfg["threads"])
        tag = repr(float(w_raw)).replace(".", "p").replace("-", "m")
        write_csv(outdir / f"samples_w{tag}.csv",
                  ["index", "draw", "bell_fidelity"],
                  [[i, d, f] for i, (d, f) in
                   enumerate(zip(summary.draws, summary.fidelities))])
        summary_rows.append([w_raw, summary.mean, summary.std, summary.minimum,
                             summary.maximum, summary.samples, summary.seed])
        per_width.append({"half_width": w_raw, "mean": summary.mean, "std": summary.std})
    write_csv(outdir / "summary.csv",
              ["half_width", "mean", "std", "min", "max", "samples", "seed"],
              summary_rows)
    return {"kind": cfg["kind"], "shape": cfg["shape"], "summary": per_width,
            "summary_csv": "summary.csv"}


def _run_doppler(cfg: dict, outdir: Path) -> dict:
    system, design, omega = _gate_context(cfg)
    drive = build_schedule(design, cfg["shape"], omega)
    integ = _integrator(cfg)
    summary_rows = []
    per_temp = []
    for temp in cfg["temperatures_uk"]:
        spec = DopplerSpec(
            temperature_uk=float(temp),
            lambda1_nm=cfg["lambda1_nm"],
            lambda2_nm=cfg["lambda2_nm"],
            atomic_mass_kg=cfg["atomic_mass_kg"],
            samples=cfg["samples"],
            seed=cfg["seed"],
        )
        summary = doppler_sweep(system, drive, spec, integ, threads=cfg["threads"])
        tag = repr(float(temp)).replace(".", "p")
        write_csv(outdir / f"samples_T{tag}.csv",
                  ["index", "draw", "bell_fidelity"],
                  [[i, d, f] for i, (d, f) in
                   enumerate(zip(summary.draws, summary.fidelities))])
        summary_rows.append([temp, summary.mean, summary.std, summary.minimum,
                             summary.maximum, summary.samples, summary.seed])
        per_temp.append({"temperature_uk": temp, "mean": summary.mean, "std": summary.std})
    write_csv(outdir / "summary.csv",
              ["temperature_uk", "mean", "std", "min", "max", "samples", "seed"],
              summary_rows)
    return {"shape": cfg["shape"], "summary": per_temp, "summary_csv": "summary.csv"}


def _run_grover(cfg: dict, outdir: Path) -> dict:
    spec = SearchSpec(variant=cfg["variant"],
                      mode="ideal" if cfg["mode"] == "ideal" else "pulse")
    if spec.mode == "ideal":
        result = run_search(spec)
    else:
        system, design, omega = _gate_context(cfg)
        result = run_search(spec, sys=system, design=design,
                            shape_kind=cfg["shape"], omega_peak=omega,
                            cfg=_integrator(cfg))
    if result.stage_populations:
        write_csv(outdir / "stages.csv",
                  ["stage", "p00", "p01", "p10", "p11"],
                  [[i, s["p00"], s["p01"], s["p10"], s["p11"]]
                   for i, s in enumerate(result.stage_populations)])
    if result.final_density is not None:
        write_json(outdir / "final_state.json",
                   {"density_matrix_re_im": density_matrix_payload(result.final_density)})
    return {
        "variant": result.variant,
        "mode": result.mode,
        "thetas_rad": result.thetas_used,
        "fidelity": result.fidelity,
    }


_RUNNERS = {
    "design-gate": _run_design_gate,
    "simulate-gate": _run_simulate_gate,
    "floquet-map": _run_floquet_map,
    "robustness": _run_robustness,
    "doppler": _run_doppler,
    "grover": _run_grover,
}


def _manifest(cfg: dict, wall_time: float) -> dict:
    both_units = {}
    for key, value in cfg.items():
        if key.endswith("_mhz"):
            both_units[key] = value
            both_units[key.replace("_mhz", "_rad_us")] = (
                value if cfg["angular"] else TWO_PI * value
            )
        else:
            both_units[key] = value
    return {
        "package_version": __version__,
        "resolved_config": both_units,
        "seed": cfg["seed"],
        "threads": cfg["threads"],
        "wall_time_s": wall_time,
    }


def run(config_path: str | Path, output_dir: str | None = None,
        seed: int | None = None, threads: int | None = None) -> int:
    """Execute the configured experiment; returns a process exit status."""
    try:
        with open(config_path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "ConfigUnreadable", "message": str(exc)}),
              file=_sys.stderr)
        return 2
    try:
        cfg = resolve_config(raw)
    except ConfigInvalid as exc:
        print(json.dumps({"error": "ConfigInvalid", "message": str(exc)}),
              file=_sys.stderr)
        return 2
    if output_dir is not None:
        cfg["output_dir"] = output_dir
    if seed is not None:
        cfg["seed"] = seed
    if threads is not None:
        cfg["threads"] = threads
    outdir = Path(cfg["output_dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        payload = _RUNNERS[cfg["experiment"]](cfg, outdir)
    except FloqgateError as exc:
        write_json(outdir / "error.json",
                   {"error": type(exc).__name__, "message": str(exc)})
        print(f"error: experiment failed: {exc}", file=_sys.stderr)
        return 1
    payload["experiment"] = cfg["experiment"]
    write_json(outdir / "result.json", payload)
    write_json(outdir / "manifest.json", _manifest(cfg, time.perf_counter() - start))
    return 0


def list_experiments() -> str:
    """Stable text table of experiments, their keys and defaults."""
    lines = []
    for name in EXPERIMENTS:
        lines.append(name)
        schema = {**_COMMON_SCHEMA, **_SCHEMAS[name]}
        for key in sorted(schema):
            expected, default = schema[key]
            state = "required" if default is None else f"default={default!r}"
            lines.append(f"  {key:<22} {expected.__name__:<6} {state}")
        if "lifetime_us" in schema and name != "floquet-map":
            lines.append("  # decay split: gamma0 = gamma1 = 1/(2*lifetime_us)")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="floqgate",
                                     description="modulated Rydberg gate experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run an experiment config")
    run_p.add_argument("config")
    run_p.add_argument("--output-dir", default=None)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--threads", type=int, default=None)
    sub.add_parser("list", help="list experiments and their config keys")
    args = parser.parse_args(argv)
    if args.command == "list":
        print(list_experiments())
        return 0
    return run(args.config, output_dir=args.output_dir, seed=args.seed,
               threads=args.threads)


if __name__ == "__main__":
    raise SystemExit(main())
