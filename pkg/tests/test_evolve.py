import math

import numpy as np
import pytest

from diracsim import (
    ChirpSchedule,
    ConvergenceFailure,
    DiracParams,
    InvalidInput,
    PLUS_01,
    TimeGrid,
    build_dirac_hamiltonian,
    evolve_chirped,
    evolve_static,
    manifold_population,
    relativistic_energy,
    schwinger_probability,
)

SWEEP = ChirpSchedule(target_component="px", start_mhz=-50.0, end_mhz=50.0, rate_mhz2=100.0)
SWEEP_GRID = TimeGrid(0.0, SWEEP.duration_us, 2)


def test_time_grid_validation():
    with pytest.raises(InvalidInput):
        TimeGrid(0.0, 0.0, 10)
    with pytest.raises(InvalidInput):
        TimeGrid(1.0, 0.5, 10)
    with pytest.raises(InvalidInput):
        TimeGrid(0.0, 1.0, 1)
    grid = TimeGrid(0.0, 2.0, 5)
    assert grid.duration_us == pytest.approx(2.0)
    assert grid.times() == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])


def test_chirp_schedule_validation():
    with pytest.raises(InvalidInput):
        ChirpSchedule(target_component="qx", start_mhz=0.0, end_mhz=1.0, rate_mhz2=1.0)
    with pytest.raises(InvalidInput):
        ChirpSchedule(target_component="px", start_mhz=0.0, end_mhz=1.0, rate_mhz2=0.0)
    with pytest.raises(InvalidInput):
        ChirpSchedule(target_component="px", start_mhz=1.0, end_mhz=1.0, rate_mhz2=1.0)
    with pytest.raises(InvalidInput):
        ChirpSchedule(target_component="m", start_mhz=-1.0, end_mhz=1.0, rate_mhz2=1.0)


def test_chirp_schedule_ramp_values():
    assert SWEEP.duration_us == pytest.approx(1.0)
    assert SWEEP.slope_mhz_per_us == pytest.approx(100.0)
    assert SWEEP.component_at(0.25) == pytest.approx(-25.0)
    down = ChirpSchedule(target_component="px", start_mhz=50.0, end_mhz=-50.0, rate_mhz2=100.0)
    assert down.slope_mhz_per_us == pytest.approx(-100.0)
    base = DiracParams(mass_mhz=3.0, momentum_mhz=(9.0, 2.0, 1.0))
    mid = SWEEP.params_at(base, 0.5)
    assert mid.momentum_mhz == pytest.approx((0.0, 2.0, 1.0))
    assert mid.mass_mhz == pytest.approx(3.0)
    mass_ramp = ChirpSchedule(target_component="m", start_mhz=0.0, end_mhz=4.0, rate_mhz2=2.0)
    assert mass_ramp.params_at(base, 1.0).mass_mhz == pytest.approx(2.0)


def test_static_evolution_matches_closed_form(rng):
    # starting from the bottom level: P0 = cos^2(E t), top level never fills
    from conftest import draw_params

    grid = TimeGrid(0.0, 0.3, 61)
    psi0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    for _ in range(20):
        params = draw_params(rng, max_scale=30.0)
        if params.is_zero():
            continue
        h = build_dirac_hamiltonian(params)
        traj = evolve_static(h, psi0, grid)
        e = relativistic_energy(params)
        expected = np.cos(e * grid.times()) ** 2
        assert np.abs(traj.populations[:, 0] - expected).max() <= 1e-10
        assert np.abs(traj.populations[:, 3]).max() <= 1e-12


def test_static_evolution_conserves_norm_and_energy(rng):
    from conftest import draw_params

    params = draw_params(rng, min_momentum=5.0)
    h = build_dirac_hamiltonian(params)
    psi0 = PLUS_01
    traj = evolve_static(h, psi0, TimeGrid(0.0, 1.0, 101), extra_observables={"energy": h})
    norms = np.linalg.norm(traj.states, axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-12
    energy = traj.observables["energy"]
    assert np.abs(energy - energy[0]).max() <= 1e-8 * max(abs(energy[0]), 1.0)


def test_manifold_population_examples():
    level0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    assert manifold_population(level0, (0,)) == pytest.approx(1.0)
    mixed = np.array([1.0, 0.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    assert manifold_population(mixed, (0, 2)) == pytest.approx(1.0)
    assert manifold_population(mixed, (0, 1)) == pytest.approx(0.5)
    assert manifold_population(PLUS_01, (0, 1)) == pytest.approx(1.0)
    nine = np.zeros(9, dtype=complex)
    nine[5] = 1.0
    assert manifold_population(nine, (5,)) == pytest.approx(1.0)
    with pytest.raises(InvalidInput):
        manifold_population(level0, ())
    with pytest.raises(InvalidInput):
        manifold_population(level0, (4,))


def test_schwinger_probability_properties():
    assert schwinger_probability(0.0, 100.0) == pytest.approx(1.0)
    values = [schwinger_probability(m, 100.0) for m in (0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert schwinger_probability(1.0, 100.0) == pytest.approx(
        0.8208687174155399, rel=1e-14
    )
    with pytest.raises(InvalidInput):
        schwinger_probability(1.0, 0.0)
    with pytest.raises(InvalidInput):
        schwinger_probability(-1.0, 100.0)


def test_sweep_survival_regression_light_mass():
    params = DiracParams(mass_mhz=1.0)
    traj = evolve_chirped(params, SWEEP, PLUS_01, SWEEP_GRID, n_steps=4000)
    survival = manifold_population(traj.final_state(), (0, 1))
    assert survival == pytest.approx(0.8290904421823164, abs=1e-12)
    # crossing probability consistent with the analytic sweep formula
    assert abs(survival - schwinger_probability(1.0, 100.0)) <= 0.02


def test_sweep_transfer_regression_heavy_mass():
    # heavy mass sweeps adiabatically into the partner superposition
    from diracsim import MINUS_23

    params = DiracParams(mass_mhz=40.0)
    traj = evolve_chirped(params, SWEEP, PLUS_01, SWEEP_GRID)
    transfer = manifold_population(traj.final_state(), (2, 3))
    assert transfer == pytest.approx(0.988782762934386, abs=1e-6)
    # the trajectory never leaves the {|+(0,1)>, |-(2,3)>} plane
    overlap = abs(np.vdot(MINUS_23, traj.final_state())) ** 2
    assert overlap == pytest.approx(transfer, abs=1e-10)


def test_sweep_grid_span_must_match_schedule():
    with pytest.raises(InvalidInput):
        evolve_chirped(DiracParams(mass_mhz=1.0), SWEEP, PLUS_01, TimeGrid(0.0, 0.5, 2))


def test_sweep_step_count_validation():
    params = DiracParams(mass_mhz=1.0)
    grid = TimeGrid(0.0, 1.0, 3)
    with pytest.raises(InvalidInput):
        evolve_chirped(params, SWEEP, PLUS_01, grid, n_steps=7)
    with pytest.raises(InvalidInput):
        evolve_chirped(params, SWEEP, PLUS_01, grid, n_steps=0)
    traj = evolve_chirped(params, SWEEP, PLUS_01, grid, n_steps=8)
    assert traj.n_steps == 8
    assert traj.times == pytest.approx([0.0, 0.5, 1.0])


def test_sweep_unitarity_and_observables():
    params = DiracParams(mass_mhz=2.0, momentum_mhz=(0.0, 1.0, 3.0))
    traj = evolve_chirped(params, SWEEP, PLUS_01, TimeGrid(0.0, 1.0, 21), n_steps=2000)
    norms = np.linalg.norm(traj.states, axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-12
    for key in ("spin_x", "spin_y", "spin_z", "manifold_01", "manifold_23"):
        assert key in traj.observables
    total = traj.observables["manifold_01"] + traj.observables["manifold_23"]
    assert np.abs(total - 1.0).max() <= 1e-12
    with pytest.raises(InvalidInput):
        evolve_chirped(
            params,
            SWEEP,
            PLUS_01,
            SWEEP_GRID,
            n_steps=100,
            extra_observables={"bad": np.eye(2)},
        )


def test_backward_pass_inverts_forward():
    params = DiracParams(mass_mhz=1.0)
    fwd = evolve_chirped(params, SWEEP, PLUS_01, SWEEP_GRID, n_steps=4000)
    back = evolve_chirped(
        params, SWEEP, fwd.final_state(), SWEEP_GRID, n_steps=4000, backward=True
    )
    assert back.times[0] == pytest.approx(SWEEP.duration_us)
    assert back.times[-1] == pytest.approx(0.0)
    assert np.abs(back.final_state() - PLUS_01).max() <= 1e-10


def test_refinement_failure_surfaces():
    params = DiracParams(mass_mhz=1.0)
    with pytest.raises(ConvergenceFailure):
        evolve_chirped(params, SWEEP, PLUS_01, SWEEP_GRID, tol=0.0, max_refinements=2)
