"""Named, reproducible experiment scenarios and their result bundles.

Each scenario has a complete default configuration; user configs override
defaults key by key and unknown keys are rejected. Runs are deterministic:
independent trajectory tasks may execute on a thread pool, but results are
assembled in input order, so CSV bytes never depend on the thread count.
"""

from __future__ import annotations

import copy
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np
import yaml

from . import circuit as circuit_mod
from . import dirac, evolve, report
from ._version import __version__
from .errors import ConfigError
from .linalg import propagator

SCENARIO_NAMES = (
    "free-dirac-scan",
    "spin-texture",
    "pair-production",
    "schwinger-scan",
    "circuit-validation",
    "bell-check",
)

_SUPPORTED_MODEL = {
    "free-dirac-scan": "ideal4",
    "spin-texture": "ideal4",
    "pair-production": "ideal4",
    "schwinger-scan": "ideal4",
    "circuit-validation": "circuit9",
    "bell-check": "ideal4",
}

_SCAN_MASSES = [0.5 * i for i in range(41)]

_DEFAULTS: dict[str, dict] = {
    "free-dirac-scan": {
        "scenario": "free-dirac-scan",
        "model": "ideal4",
        "seed": 0,
        "out": None,
        "physics": {
            "masses_mhz": [0.0, 5.0, 10.0, 15.0, 20.0],
            "momentum_mhz": [20.0, 0.0, 0.0],
        },
        "grid": {"t_start_us": 0.0, "t_end_us": 0.2, "n_samples": 2001},
    },
    "spin-texture": {
        "scenario": "spin-texture",
        "model": "ideal4",
        "seed": 0,
        "out": None,
        "physics": {"energy_mhz": 20.0, "n_polar": 12, "n_azimuthal": 24},
    },
    "pair-production": {
        "scenario": "pair-production",
        "model": "ideal4",
        "seed": 0,
        "out": None,
        "physics": {
            "trajectory_mass_mhz": 40.0,
            "momentum_mhz": [0.0, 0.0, 0.0],
            "schedule": {
                "target_component": "px",
                "start_mhz": -50.0,
                "end_mhz": 50.0,
                "rate_mhz2": 100.0,
            },
            "scan_masses_mhz": list(_SCAN_MASSES),
        },
        "grid": {"n_samples": 501},
        "tolerances": {"chirp_tol": 1e-7},
    },
    "schwinger-scan": {
        "scenario": "schwinger-scan",
        "model": "ideal4",
        "seed": 0,
        "out": None,
        "physics": {
            "momentum_mhz": [0.0, 0.0, 0.0],
            "schedule": {
                "target_component": "px",
                "start_mhz": -50.0,
                "end_mhz": 50.0,
                "rate_mhz2": 100.0,
            },
            "masses_mhz": list(_SCAN_MASSES),
        },
        "tolerances": {"chirp_tol": 1e-7},
    },
    "circuit-validation": {
        "scenario": "circuit-validation",
        "model": "circuit9",
        "seed": 0,
        "out": None,
        "physics": {
            "circuit": {"omega0_ghz": 5.0, "kappa_mhz": -300.0, "g_mhz": 100.0},
            "dirac": {"mass_mhz": 5.0, "momentum_mhz": [20.0, 0.0, 0.0]},
            "drive_modes": ["naive", "calibrated"],
            "frame": "rotating",
            "drive_second_qubit": False,
            "scale": 1.0,
        },
        "grid": {"t_start_us": 0.0, "t_end_us": 0.5, "n_samples": 251},
        "tolerances": {"circuit_tol": 1e-5},
    },
    "bell-check": {
        "scenario": "bell-check",
        "model": "ideal4",
        "seed": 0,
        "out": None,
        "physics": {
            "px_values_mhz": [-20.0, -10.0, -5.0, 0.0, 5.0, 10.0, 20.0],
            "mass_values_mhz": [0.0, 1.0, 5.0, 10.0, 20.0],
            "trajectory": {"mass_mhz": 10.0, "px_mhz": 20.0},
            "residual_tol": 1e-10,
        },
        "grid": {"t_start_us": 0.0, "t_end_us": 0.1, "n_samples": 501},
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario configuration (defaults merged, keys checked)."""

    scenario: str
    model: str
    seed: int
    out: str | None
    settings: dict


def scenario_defaults(name: str) -> dict:
    if name not in _DEFAULTS:
        raise ConfigError(
            f"unknown scenario {name!r}; valid: " + ", ".join(SCENARIO_NAMES)
        )
    return copy.deepcopy(_DEFAULTS[name])


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping at the top level")
    return raw


def _coerce(default_value, raw_value, path: str):
    if default_value is None:
        if raw_value is None or isinstance(raw_value, str):
            return raw_value
        raise ConfigError(f"{path}: expected a string or null")
    if isinstance(default_value, bool):
        if isinstance(raw_value, bool):
            return raw_value
        raise ConfigError(f"{path}: expected true/false")
    if isinstance(default_value, int):
        if isinstance(raw_value, int) and not isinstance(raw_value, bool):
            return raw_value
        raise ConfigError(f"{path}: expected an integer")
    if isinstance(default_value, float):
        if isinstance(raw_value, (int, float)) and not isinstance(raw_value, bool):
            value = float(raw_value)
            if not math.isfinite(value):
                raise ConfigError(f"{path}: value must be finite")
            return value
        raise ConfigError(f"{path}: expected a number")
    if isinstance(default_value, str):
        if isinstance(raw_value, str):
            return raw_value
        raise ConfigError(f"{path}: expected a string")
    if isinstance(default_value, list):
        if not isinstance(raw_value, list):
            raise ConfigError(f"{path}: expected a list")
        proto = default_value[0] if default_value else 0.0
        return [_coerce(proto, v, f"{path}[{i}]") for i, v in enumerate(raw_value)]
    raise ConfigError(f"{path}: unsupported config structure")


def _merge(defaults: dict, raw: dict, prefix: str) -> dict:
    merged = copy.deepcopy(defaults)
    for key, raw_value in raw.items():
        if key not in defaults:
            raise ConfigError(f"unknown config key: {prefix}{key}")
        default_value = defaults[key]
        if isinstance(default_value, dict):
            if not isinstance(raw_value, dict):
                raise ConfigError(f"{prefix}{key}: expected a mapping")
            merged[key] = _merge(default_value, raw_value, f"{prefix}{key}.")
        else:
            merged[key] = _coerce(default_value, raw_value, f"{prefix}{key}")
    return merged


def resolve_config(raw: dict) -> ScenarioConfig:
    """Merge a raw config onto the scenario defaults with strict key checking."""
    if "scenario" not in raw:
        raise ConfigError("config must name a scenario")
    name = raw["scenario"]
    if not isinstance(name, str) or name not in _DEFAULTS:
        raise ConfigError(
            f"unknown scenario {name!r}; valid: " + ", ".join(SCENARIO_NAMES)
        )
    settings = _merge(_DEFAULTS[name], raw, "")
    model = settings["model"]
    if model not in ("ideal4", "circuit9"):
        raise ConfigError("model must be 'ideal4' or 'circuit9'")
    if model != _SUPPORTED_MODEL[name]:
        raise ConfigError(
            f"scenario {name} runs on the {_SUPPORTED_MODEL[name]} model only"
        )
    return ScenarioConfig(
        scenario=name,
        model=model,
        seed=int(settings["seed"]),
        out=settings["out"],
        settings=settings,
    )


def _parallel_map(fn, items, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _momentum_tuple(values, path: str) -> tuple[float, float, float]:
    if len(values) != 3:
        raise ConfigError(f"{path} must have exactly three components")
    return tuple(float(v) for v in values)


def _grid_from(settings: dict) -> evolve.TimeGrid:
    g = settings["grid"]
    return evolve.TimeGrid(
        t_start_us=float(g["t_start_us"]),
        t_end_us=float(g["t_end_us"]),
        n_samples=int(g["n_samples"]),
    )


# ---------------------------------------------------------------------------
# scenario runners; each returns (csv tables, svg builders, summary)
# where tables is {name: (header, rows)} and svg builders are callables
# writing one file when invoked with a path.


def _run_free_dirac_scan(cfg: ScenarioConfig, threads: int):
    phys = cfg.settings["physics"]
    masses = [float(m) for m in phys["masses_mhz"]]
    if not masses:
        raise ConfigError("physics.masses_mhz must be non-empty")
    momentum = _momentum_tuple(phys["momentum_mhz"], "physics.momentum_mhz")
    grid = _grid_from(cfg.settings)
    psi0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)

    def one(mass: float):
        params = dirac.DiracParams(mass_mhz=mass, momentum_mhz=momentum)
        h = dirac.build_dirac_hamiltonian(params)
        traj = evolve.evolve_static(h, psi0, grid)
        elapsed = traj.times - grid.t_start_us
        oracle = np.cos(dirac.relativistic_energy(params) * elapsed) ** 2
        return params, traj, oracle

    results = _parallel_map(one, masses, threads)

    tables = {}
    summary_rows = []
    max_p3 = 0.0
    max_err = 0.0
    p0_series = {}
    for params, traj, oracle in results:
        pops = traj.populations
        rows = [
            (
                traj.times[i],
                pops[i, 0],
                pops[i, 1],
                pops[i, 2],
                pops[i, 3],
                oracle[i],
            )
            for i in range(len(traj.times))
        ]
        name = "trace_m" + report.format_value(params.mass_mhz)
        tables[name] = (
            ["time_us", "p0", "p1", "p2", "p3", "p0_oracle"],
            rows,
        )
        m_p3 = float(pops[:, 3].max())
        m_err = float(np.abs(pops[:, 0] - oracle).max())
        max_p3 = max(max_p3, m_p3)
        max_err = max(max_err, m_err)
        summary_rows.append(
            (params.mass_mhz, params.energy_mhz, m_p3, m_err)
        )
        p0_series[f"m={report.format_value(params.mass_mhz)}"] = pops[:, 0]
    tables["summary"] = (
        ["mass_mhz", "energy_mhz", "max_p3", "max_p0_oracle_error"],
        summary_rows,
    )

    times = results[0][1].times

    def svg(path):
        report.svg_line_plot(
            path, times, p0_series, "Level-0 population vs time", "time (us)", "P0"
        )

    summary = {"max_p3": max_p3, "max_p0_oracle_error": max_err}
    return tables, {"p0_traces": svg}, summary


def _run_spin_texture(cfg: ScenarioConfig, threads: int):
    phys = cfg.settings["physics"]
    samples = dirac.spin_texture(
        float(phys["energy_mhz"]), int(phys["n_polar"]), int(phys["n_azimuthal"])
    )
    header = [
        "theta_rad",
        "phi_rad",
        "nx",
        "ny",
        "nz",
        "sx",
        "sy",
        "sz",
        "radial_component",
        "helicity",
        "at_north_pole",
        "stereo_x",
        "stereo_y",
    ]
    rows = []
    max_gap = 0.0
    for s in samples:
        rows.append(
            (
                s.theta_rad,
                s.phi_rad,
                s.direction[0],
                s.direction[1],
                s.direction[2],
                s.spin.sx,
                s.spin.sy,
                s.spin.sz,
                s.radial_component,
                s.helicity,
                s.at_north_pole,
                s.stereo_x,
                s.stereo_y,
            )
        )
        max_gap = max(max_gap, abs(s.radial_component - s.helicity))
    tables = {"texture": (header, rows)}

    def svg(path):
        pts = [s for s in samples if not s.at_north_pole]
        report.svg_quiver_plot(
            path,
            [s.stereo_x for s in pts],
            [s.stereo_y for s in pts],
            [s.spin.sx for s in pts],
            [s.spin.sy for s in pts],
            "Bright-state spin texture (stereographic)",
            arrow_scale=0.6,
        )

    summary = {"max_radial_vs_helicity_gap": max_gap, "n_samples": len(samples)}
    return tables, {"texture_quiver": svg}, summary


def _schedule_from(block: dict) -> evolve.ChirpSchedule:
    return evolve.ChirpSchedule(
        target_component=str(block["target_component"]),
        start_mhz=float(block["start_mhz"]),
        end_mhz=float(block["end_mhz"]),
        rate_mhz2=float(block["rate_mhz2"]),
    )


def _scan_final_manifold(
    masses, momentum, schedule, tol, threads
) -> list[tuple[float, float, float, float]]:
    """Per-mass (mass, final {0,1} population, closed-form value, deviation)."""

    def one(mass: float):
        params = dirac.DiracParams(mass_mhz=mass, momentum_mhz=momentum)
        grid = evolve.TimeGrid(0.0, schedule.duration_us, 2)
        traj = evolve.evolve_chirped(
            params, schedule, dirac.PLUS_01, grid, tol=tol
        )
        final = evolve.manifold_population(traj.final_state(), {0, 1})
        ideal = evolve.schwinger_probability(mass, schedule.rate_mhz2)
        return (mass, final, ideal, abs(final - ideal))

    return _parallel_map(one, [float(m) for m in masses], threads)


def _scan_table(rows):
    return (
        ["mass_mhz", "final_manifold_01", "schwinger_probability", "deviation"],
        rows,
    )


def _scan_svg(rows):
    masses = [r[0] for r in rows]
    series = {
        "simulated": np.array([r[1] for r in rows]),
        "closed_form": np.array([r[2] for r in rows]),
    }

    def svg(path):
        report.svg_line_plot(
            path,
            masses,
            series,
            "Final {0,1} population vs mass",
            "mass (MHz)",
            "population",
        )

    return svg


def _run_pair_production(cfg: ScenarioConfig, threads: int):
    phys = cfg.settings["physics"]
    schedule = _schedule_from(phys["schedule"])
    momentum = _momentum_tuple(phys["momentum_mhz"], "physics.momentum_mhz")
    tol = float(cfg.settings["tolerances"]["chirp_tol"])
    n_samples = int(cfg.settings["grid"]["n_samples"])
    grid = evolve.TimeGrid(0.0, schedule.duration_us, n_samples)
    traj_mass = float(phys["trajectory_mass_mhz"])
    traj_params = dirac.DiracParams(mass_mhz=traj_mass, momentum_mhz=momentum)

    initials = [
        ("trace_plus01", dirac.PLUS_01),
        ("trace_minus01", dirac.MINUS_01),
        ("trace_level0", np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)),
    ]

    def one_trace(item):
        name, psi0 = item
        traj = evolve.evolve_chirped(traj_params, schedule, psi0, grid, tol=tol)
        return name, traj

    traces = _parallel_map(one_trace, initials, threads)

    basis_states = {
        "pop_plus01": dirac.PLUS_01,
        "pop_minus01": dirac.MINUS_01,
        "pop_plus23": dirac.PLUS_23,
        "pop_minus23": dirac.MINUS_23,
    }
    tables = {}
    trace_summary = {}
    for name, traj in traces:
        overlaps = {
            key: np.abs(traj.states @ vec.conj()) ** 2
            for key, vec in basis_states.items()
        }
        header = ["time_us", "p0", "p1", "p2", "p3"] + list(basis_states) + [
            "manifold_01",
            "manifold_23",
        ]
        rows = []
        for i in range(len(traj.times)):
            rows.append(
                (
                    traj.times[i],
                    *[traj.populations[i, k] for k in range(4)],
                    *[overlaps[key][i] for key in basis_states],
                    traj.observables["manifold_01"][i],
                    traj.observables["manifold_23"][i],
                )
            )
        tables[name] = (header, rows)
        entry = {
            "final_manifold_01": float(traj.observables["manifold_01"][-1]),
            "final_minus23": float(overlaps["pop_minus23"][-1]),
            "n_steps": int(traj.n_steps),
        }
        if name == "trace_plus01":
            entry["max_opposite_sign"] = float(overlaps["pop_minus01"].max())
        elif name == "trace_minus01":
            entry["max_opposite_sign"] = float(overlaps["pop_plus01"].max())
        trace_summary[name] = entry

    scan_rows = _scan_final_manifold(
        phys["scan_masses_mhz"], momentum, schedule, tol, threads
    )
    tables["scan"] = _scan_table(scan_rows)

    plus_traj = traces[0][1]
    series = {
        "manifold_01": plus_traj.observables["manifold_01"],
        "manifold_23": plus_traj.observables["manifold_23"],
    }

    def traj_svg(path):
        report.svg_line_plot(
            path,
            plus_traj.times,
            series,
            "Pair-production sweep from the + superposition",
            "time (us)",
            "population",
        )

    svgs = {"trace_plus01": traj_svg, "scan": _scan_svg(scan_rows)}
    summary = {
        "traces": trace_summary,
        "scan_max_deviation": float(max(r[3] for r in scan_rows)),
    }
    return tables, svgs, summary


def _run_schwinger_scan(cfg: ScenarioConfig, threads: int):
    phys = cfg.settings["physics"]
    schedule = _schedule_from(phys["schedule"])
    momentum = _momentum_tuple(phys["momentum_mhz"], "physics.momentum_mhz")
    tol = float(cfg.settings["tolerances"]["chirp_tol"])
    masses = phys["masses_mhz"]
    if not masses:
        raise ConfigError("physics.masses_mhz must be non-empty")
    rows = _scan_final_manifold(masses, momentum, schedule, tol, threads)
    tables = {"scan": _scan_table(rows)}
    summary = {
        "max_deviation": float(max(r[3] for r in rows)),
        "deviation_at_largest_mass": float(rows[-1][3]),
    }
    return tables, {"scan": _scan_svg(rows)}, summary


def _run_circuit_validation(cfg: ScenarioConfig, threads: int):
    phys = cfg.settings["physics"]
    cp_block = phys["circuit"]
    cparams = circuit_mod.CircuitParams(
        omega0_ghz=float(cp_block["omega0_ghz"]),
        kappa_mhz=float(cp_block["kappa_mhz"]),
        g_mhz=float(cp_block["g_mhz"]),
    )
    dp_block = phys["dirac"]
    dparams = dirac.DiracParams(
        mass_mhz=float(dp_block["mass_mhz"]),
        momentum_mhz=_momentum_tuple(dp_block["momentum_mhz"], "physics.dirac.momentum_mhz"),
    )
    modes = [str(m) for m in phys["drive_modes"]]
    for mode in modes:
        if mode not in ("naive", "calibrated"):
            raise ConfigError("drive_modes entries must be 'naive' or 'calibrated'")
    frame = str(phys["frame"])
    if frame not in ("rotating", "lab"):
        raise ConfigError("physics.frame must be 'rotating' or 'lab'")
    tol = float(cfg.settings["tolerances"]["circuit_tol"])
    grid = _grid_from(cfg.settings)

    basis = circuit_mod.dressed_basis(cparams)
    h4 = dirac.build_dirac_hamiltonian(dparams)
    psi4 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    ideal = evolve.evolve_static(h4, psi4, grid)

    def one_mode(mode: str):
        program = circuit_mod.dirac_drive_mapping(
            dparams,
            basis,
            mode=mode,
            scale=float(phys["scale"]),
            drive_second_qubit=bool(phys["drive_second_qubit"]),
        )
        traj9 = circuit_mod.evolve_circuit(
            cparams, program, basis.diamond_states[0], grid, frame=frame, tol=tol
        )
        projected, leakage = circuit_mod.project_to_diamond(traj9, basis)
        return mode, traj9, projected, leakage

    results = _parallel_map(one_mode, modes, threads)

    tables = {}
    ideal_rows = [
        (ideal.times[i], *[ideal.populations[i, k] for k in range(4)])
        for i in range(len(ideal.times))
    ]
    tables["ideal"] = (["time_us", "p0", "p1", "p2", "p3"], ideal_rows)

    summary = {}
    summary_rows = []
    svgs = {}
    for mode, traj9, projected, leakage in results:
        bare_rows = [
            (traj9.times[i], *[traj9.populations[i, k] for k in range(9)])
            for i in range(len(traj9.times))
        ]
        tables[f"bare_{mode}"] = (
            ["time_us"] + [f"bare{k}" for k in range(9)],
            bare_rows,
        )
        dressed_rows = [
            (
                projected.times[i],
                *[projected.populations[i, k] for k in range(4)],
                leakage[i],
            )
            for i in range(len(projected.times))
        ]
        tables[f"dressed_{mode}"] = (
            ["time_us", "d0", "d1", "d2", "d3", "leakage"],
            dressed_rows,
        )
        diff = projected.populations - ideal.populations
        rms = float(np.sqrt(np.mean(diff**2)))
        max_err = float(np.abs(diff).max())
        max_leak = float(leakage.max())
        summary[mode] = {
            "rms_error": rms,
            "max_error": max_err,
            "max_leakage": max_leak,
            "n_steps": int(traj9.n_steps),
        }
        summary_rows.append((mode, rms, max_err, max_leak, int(traj9.n_steps)))

        series = {f"circuit_d{k}": projected.populations[:, k] for k in range(4)}
        series.update({f"ideal_p{k}": ideal.populations[:, k] for k in range(4)})
        times = projected.times

        def svg(path, series=series, times=times, mode=mode):
            report.svg_line_plot(
                path,
                times,
                series,
                f"Diamond populations, {mode} drive",
                "time (us)",
                "population",
            )

        svgs[f"dressed_{mode}"] = svg

    tables["summary"] = (
        ["mode", "rms_error", "max_error", "max_leakage", "n_steps"],
        summary_rows,
    )
    return tables, svgs, summary


def _run_bell_check(cfg: ScenarioConfig, threads: int):
    phys = cfg.settings["physics"]
    tol = float(phys["residual_tol"])
    u = dirac.bell_transform()
    rows = []
    max_residual = 0.0
    for mass in phys["mass_values_mhz"]:
        for px in phys["px_values_mhz"]:
            params = dirac.DiracParams(
                mass_mhz=float(mass), momentum_mhz=(float(px), 0.0, 0.0)
            )
            h = dirac.build_dirac_hamiltonian(params)
            target = dirac.TWO_PI * np.kron(
                np.eye(2),
                float(px) * np.array([[0, 1], [1, 0]], dtype=complex)
                + float(mass) * np.array([[0, -1j], [1j, 0]]),
            )
            residual = float(np.abs(u @ h @ u.conj().T - target).max())
            rows.append((float(mass), float(px), residual, residual <= tol))
            max_residual = max(max_residual, residual)
    tables = {
        "residuals": (["mass_mhz", "px_mhz", "residual", "factored"], rows)
    }

    tblock = phys["trajectory"]
    params = dirac.DiracParams(
        mass_mhz=float(tblock["mass_mhz"]),
        momentum_mhz=(float(tblock["px_mhz"]), 0.0, 0.0),
    )
    grid = _grid_from(cfg.settings)
    h = dirac.build_dirac_hamiltonian(params)
    traj = evolve.evolve_static(
        h, dirac.PLUS_01, grid
    )
    bell_amps = traj.states @ u.T
    bell_pops = np.abs(bell_amps) ** 2

    # Single-qubit prediction: in the Bell frame only the second factor
    # evolves, under px*sx + m*sy (angular). Writing the Bell amplitudes as
    # a 2x2 matrix M[i, j] (first factor i, second factor j), the evolution
    # is M(t) = M(0) @ u2(t)^T, and a product state keeps rank one.
    h_qubit = dirac.TWO_PI * (
        params.momentum_mhz[0] * np.array([[0, 1], [1, 0]], dtype=complex)
        + params.mass_mhz * np.array([[0, -1j], [1j, 0]])
    )
    elapsed = traj.times - grid.t_start_us
    m0 = (u @ dirac.PLUS_01).reshape(2, 2)
    residuals = []
    schmidt = []
    for i, t in enumerate(elapsed):
        u2 = propagator(h_qubit, float(t))
        predicted = np.abs((m0 @ u2.T).reshape(-1)) ** 2
        residuals.append(float(np.abs(bell_pops[i] - predicted).max()))
        schmidt.append(float(np.linalg.svd(bell_amps[i].reshape(2, 2), compute_uv=False)[1]))
    header = [
        "time_us",
        "bell_phi_plus",
        "bell_psi_plus",
        "bell_psi_minus",
        "bell_phi_minus",
        "product_residual",
        "schmidt_residual",
    ]
    t_rows = [
        (traj.times[i], *[bell_pops[i, k] for k in range(4)], residuals[i], schmidt[i])
        for i in range(len(traj.times))
    ]
    tables["trajectory"] = (header, t_rows)

    series = {f"bell_{k}": bell_pops[:, k] for k in range(4)}

    def svg(path):
        report.svg_line_plot(
            path,
            traj.times,
            series,
            "Bell-basis populations under a factorizable drive",
            "time (us)",
            "population",
        )

    summary = {
        "max_residual": max_residual,
        "max_product_residual": float(max(residuals)),
        "max_schmidt_residual": float(max(schmidt)),
    }
    return tables, {"trajectory": svg}, summary


_RUNNERS = {
    "free-dirac-scan": _run_free_dirac_scan,
    "spin-texture": _run_spin_texture,
    "pair-production": _run_pair_production,
    "schwinger-scan": _run_schwinger_scan,
    "circuit-validation": _run_circuit_validation,
    "bell-check": _run_bell_check,
}


def run_scenario(
    cfg: ScenarioConfig,
    out_dir: str | None = None,
    threads: int = 1,
    emit_svg: bool = True,
) -> report.ResultBundle:
    """Execute one scenario and persist its result bundle.

    Output layout: <out>/<scenario>/<name>.csv plus manifest.json and
    optional SVG plots. ``threads`` parallelizes independent trajectory
    tasks; outputs are identical for any thread count.
    """
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    root = out_dir or cfg.out or "results"
    scen_dir = report.ensure_dir(os.path.join(root, cfg.scenario))
    tables, svg_builders, summary = _RUNNERS[cfg.scenario](cfg, threads)

    bundle = report.ResultBundle(
        scenario=cfg.scenario,
        out_dir=scen_dir,
        manifest_path=os.path.join(scen_dir, "manifest.json"),
        summary=summary,
    )
    for name in sorted(tables):
        header, rows = tables[name]
        path = os.path.join(scen_dir, f"{name}.csv")
        report.write_csv(path, header, rows)
        bundle.csv_paths[name] = path
    if emit_svg:
        for name in sorted(svg_builders):
            path = os.path.join(scen_dir, f"{name}.svg")
            svg_builders[name](path)
            bundle.svg_paths[name] = path

    manifest = {
        "scenario": cfg.scenario,
        "version": __version__,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": cfg.settings,
        "summary": summary,
        "outputs": {
            "csv": {k: os.path.basename(v) for k, v in sorted(bundle.csv_paths.items())},
            "svg": {k: os.path.basename(v) for k, v in sorted(bundle.svg_paths.items())},
        },
    }
    report.write_manifest(bundle.manifest_path, manifest)
    return bundle
