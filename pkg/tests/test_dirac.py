import math

import numpy as np
import pytest

from conftest import draw_params
from diracsim import (
    DegenerateDrive,
    DiracParams,
    InvalidInput,
    MINUS_01,
    MINUS_23,
    PLUS_01,
    PLUS_23,
    UnsupportedConfiguration,
    bell_transform,
    bright_states,
    build_dirac_hamiltonian,
    expectation,
    factored_check,
    helicity_operator,
    level_populations,
    manifold_spin,
    relativistic_energy,
    rotate_momentum_z,
    spin_operators,
    spin_rotation_z,
    spin_texture,
)
from diracsim.dirac import (
    COUPLING_MASS,
    COUPLING_PX,
    COUPLING_PY,
    COUPLING_PZ,
    LEVEL_OF_SLOT,
    TWO_PI,
    internal_from_level,
)


def test_coupling_pattern_layout_frozen():
    expect_px = np.zeros((4, 4), complex)
    expect_px[0, 3] = expect_px[1, 2] = expect_px[2, 1] = expect_px[3, 0] = 1
    expect_py = np.zeros((4, 4), complex)
    expect_py[0, 3] = expect_py[2, 1] = -1j
    expect_py[1, 2] = expect_py[3, 0] = 1j
    expect_pz = np.zeros((4, 4), complex)
    expect_pz[0, 2] = expect_pz[2, 0] = 1
    expect_pz[1, 3] = expect_pz[3, 1] = -1
    expect_m = np.zeros((4, 4), complex)
    expect_m[0, 2] = expect_m[1, 3] = -1j
    expect_m[2, 0] = expect_m[3, 1] = 1j
    assert np.array_equal(COUPLING_PX, expect_px)
    assert np.array_equal(COUPLING_PY, expect_py)
    assert np.array_equal(COUPLING_PZ, expect_pz)
    assert np.array_equal(COUPLING_MASS, expect_m)


def test_level_slot_map_is_involution():
    assert list(LEVEL_OF_SLOT[LEVEL_OF_SLOT]) == [0, 1, 2, 3]
    v = np.array([1.0, 2.0, 3.0, 4.0], dtype=complex)
    assert np.array_equal(internal_from_level(internal_from_level(v)), v)


def test_level_populations_reorders():
    # slot order holds levels (0, 3, 2, 1)
    state = np.array([1.0, 2.0, 3.0, 4.0], dtype=complex)
    pops = level_populations(state)
    assert pops == pytest.approx([1.0, 16.0, 9.0, 4.0])


def test_params_validation():
    with pytest.raises(InvalidInput):
        DiracParams(mass_mhz=-1.0)
    with pytest.raises(InvalidInput):
        DiracParams(momentum_mhz=(1.0, 2.0))
    with pytest.raises(InvalidInput):
        DiracParams(momentum_mhz=(np.inf, 0.0, 0.0))


def test_hamiltonian_squares_to_energy(rng):
    for _ in range(200):
        params = draw_params(rng)
        h = build_dirac_hamiltonian(params)
        assert np.abs(h - h.conj().T).max() <= 1e-12 * max(np.abs(h).max(), 1.0)
        e = relativistic_energy(params)
        assert np.abs(h @ h - e**2 * np.eye(4)).max() <= 1e-9 * max(e**2, 1.0)


def test_spectrum_pair_degeneracy(rng):
    for _ in range(50):
        params = draw_params(rng, min_momentum=1.0)
        vals = np.linalg.eigvalsh(build_dirac_hamiltonian(params))
        e = relativistic_energy(params)
        assert vals == pytest.approx([-e, -e, e, e], rel=1e-12, abs=1e-9)


def test_bright_states_structure(rng):
    for _ in range(100):
        params = draw_params(rng)
        if params.is_zero():
            continue
        pair = bright_states(params)
        v, lam = pair.bright_v, pair.bright_lambda
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(lam) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(v, lam)) <= 1e-12
        # support only on the middle levels (slots 2 and 3)
        assert abs(v[0]) == 0.0 and abs(v[1]) == 0.0
        # phase anchor: level-1 amplitude real nonnegative
        assert v[3].imag == pytest.approx(0.0, abs=1e-12)
        assert v[3].real >= -1e-15
        h = build_dirac_hamiltonian(params)
        e = relativistic_energy(params)
        src = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        # the V-system bright state carries the whole coupling out of |0>
        assert abs(np.vdot(v, h @ src)) == pytest.approx(e, rel=1e-12)
        assert abs(np.vdot(lam, h @ src)) <= 1e-9
        # and is dark with respect to the top level
        top = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
        assert abs(np.vdot(top, h @ v)) <= 1e-9


def test_bright_states_rejects_zero_params():
    with pytest.raises(DegenerateDrive):
        bright_states(DiracParams())


def test_spin_operator_algebra():
    sx, sy, sz = spin_operators()
    assert np.array_equal(np.diag(sz), 0.5 * np.array([1, -1, 1, -1]))
    assert np.abs(sx @ sy - sy @ sx - 1j * sz).max() <= 1e-12
    assert np.abs(sy @ sz - sz @ sy - 1j * sx).max() <= 1e-12
    assert np.abs(sz @ sx - sx @ sz - 1j * sy).max() <= 1e-12
    for s in (sx, sy, sz):
        assert np.linalg.eigvalsh(s) == pytest.approx([-0.5, -0.5, 0.5, 0.5])


def test_helicity_commutes_with_hamiltonian(rng):
    for _ in range(100):
        params = draw_params(rng, min_momentum=1.0)
        h = build_dirac_hamiltonian(params)
        hel = helicity_operator(params)
        comm = h @ hel - hel @ h
        assert np.abs(comm).max() <= 1e-10 * np.abs(h).max()
        assert np.linalg.eigvalsh(hel) == pytest.approx([-0.5, -0.5, 0.5, 0.5])


def test_helicity_rejects_zero_momentum():
    with pytest.raises(DegenerateDrive):
        helicity_operator(DiracParams(mass_mhz=1.0))


def test_manifold_spin_magnitude_and_projection(rng):
    for _ in range(100):
        params = draw_params(rng, min_momentum=1.0)
        v = bright_states(params).bright_v
        spin = manifold_spin(v)
        assert spin.magnitude == pytest.approx(0.5, abs=1e-12)
        n = np.array(params.momentum_mhz) / params.momentum_norm_mhz
        radial = float(spin.as_array() @ n)
        hel = expectation(v, helicity_operator(params))
        assert radial == pytest.approx(hel, abs=1e-10)


def test_manifold_spin_rejects_empty_manifold():
    with pytest.raises(DegenerateDrive):
        manifold_spin(np.array([1.0, 0.0, 0.0, 0.0], dtype=complex))


def test_spin_texture_grid_and_poles():
    samples = spin_texture(20.0, n_polar=8, n_azimuthal=16)
    assert len(samples) == 8 * 16
    north = [s for s in samples if s.at_north_pole]
    assert len(north) == 16
    for s in north:
        assert math.isnan(s.stereo_x) and math.isnan(s.stereo_y)
        assert s.spin.sz == pytest.approx(0.5, abs=1e-9)
    south = [s for s in samples if abs(s.theta_rad - math.pi) < 1e-12]
    for s in south:
        # south pole projects to the origin and also points spin-up
        assert abs(s.stereo_x) <= 1e-12 and abs(s.stereo_y) <= 1e-12
        assert s.spin.sz == pytest.approx(0.5, abs=1e-9)
    for s in samples:
        assert abs(s.radial_component - s.helicity) <= 1e-8


def test_spin_texture_validation():
    with pytest.raises(InvalidInput):
        spin_texture(20.0, n_polar=4, n_azimuthal=16)
    with pytest.raises(DegenerateDrive):
        spin_texture(0.0)


def test_rotation_covariance_about_z(rng):
    for _ in range(50):
        params = draw_params(rng, min_momentum=1.0)
        phi = float(rng.uniform(-math.pi, math.pi))
        rotated = rotate_momentum_z(params, phi)
        r = spin_rotation_z(phi)
        h = build_dirac_hamiltonian(params)
        h_rot = build_dirac_hamiltonian(rotated)
        assert np.abs(h_rot - r @ h @ r.conj().T).max() <= 1e-9 * max(np.abs(h).max(), 1.0)


def test_bell_transform_unitary_and_plus_state_factorizes():
    u = bell_transform()
    assert np.abs(u @ u.conj().T - np.eye(4)).max() <= 1e-12
    # the (|0>+|1>)/sqrt(2) superposition is a double |+> product in this frame
    mapped = u @ PLUS_01
    assert mapped == pytest.approx(np.full(4, 0.5), abs=1e-12)


def test_factored_check_random_pairs(rng):
    for _ in range(50):
        mass = float(rng.uniform(0.0, 40.0))
        px = float(rng.uniform(-40.0, 40.0))
        params = DiracParams(mass_mhz=mass, momentum_mhz=(px, 0.0, 0.0))
        assert factored_check(params, tol=1e-10)


def test_factored_check_rejects_transverse_momentum():
    with pytest.raises(UnsupportedConfiguration):
        factored_check(DiracParams(momentum_mhz=(1.0, 2.0, 0.0)))


def test_superposition_states_invariant_pairing():
    # the +(0,1) and -(2,3) superpositions close under any (px, m) drive
    params = DiracParams(mass_mhz=7.0, momentum_mhz=(13.0, 0.0, 0.0))
    h = build_dirac_hamiltonian(params)
    for start, partner in ((PLUS_01, MINUS_23), (MINUS_01, PLUS_23)):
        image = h @ start
        basis = np.vstack([start, partner])
        residual = image - basis.T @ (basis.conj() @ image)
        assert np.abs(residual).max() <= 1e-9
    # coupling strength between the paired states is the mass term
    coupling = np.vdot(MINUS_23, h @ PLUS_01)
    assert coupling == pytest.approx(1j * TWO_PI * params.mass_mhz, abs=1e-9)
