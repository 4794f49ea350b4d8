"""Four-level model of the free Dirac particle.

The four-component spinor is stored in the supersymmetric component ordering
(c0, c3, c2, c1): slot k of a state vector holds the amplitude of level
``LEVEL_OF_SLOT[k]``. All Hamiltonians and spin operators built here act on
vectors in that internal ordering; level-indexed populations are produced only
at the reporting boundary (see :func:`level_populations`).

User-facing parameters are ordinary frequencies in MHz; Hamiltonian entries
are angular (multiplied by 2*pi), and time is in microseconds, so that
i d(psi)/dt = H psi holds without stray factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDrive, InvalidInput, UnsupportedConfiguration
from .linalg import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, as_state, kron

TWO_PI = 2.0 * math.pi

# Internal slot k holds the amplitude of this level (an involution: the same
# permutation converts level-ordered vectors to internal ones and back).
LEVEL_OF_SLOT = np.array([0, 3, 2, 1])

# Coupling patterns of the 4x4 Hamiltonian in the internal ordering, one per
# drive parameter: H = 2*pi*(px*PX + py*PY + pz*PZ + m*MASS).
COUPLING_PX = np.zeros((4, 4), dtype=complex)
COUPLING_PX[0, 3] = COUPLING_PX[1, 2] = COUPLING_PX[2, 1] = COUPLING_PX[3, 0] = 1.0

COUPLING_PY = np.zeros((4, 4), dtype=complex)
COUPLING_PY[0, 3] = COUPLING_PY[2, 1] = -1.0j
COUPLING_PY[1, 2] = COUPLING_PY[3, 0] = 1.0j

COUPLING_PZ = np.zeros((4, 4), dtype=complex)
COUPLING_PZ[0, 2] = COUPLING_PZ[2, 0] = 1.0
COUPLING_PZ[1, 3] = COUPLING_PZ[3, 1] = -1.0

COUPLING_MASS = np.zeros((4, 4), dtype=complex)
COUPLING_MASS[0, 2] = COUPLING_MASS[1, 3] = -1.0j
COUPLING_MASS[2, 0] = COUPLING_MASS[3, 1] = 1.0j

# Equal superpositions of the degenerate level pairs, in the internal ordering.
PLUS_01 = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)
MINUS_01 = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / math.sqrt(2.0)
PLUS_23 = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)
MINUS_23 = np.array([0.0, -1.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class DiracParams:
    """Mass and 3-momentum of the simulated particle, as ordinary MHz."""

    mass_mhz: float = 0.0
    momentum_mhz: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        vals = (self.mass_mhz, *self.momentum_mhz)
        if len(self.momentum_mhz) != 3:
            raise InvalidInput("momentum_mhz must have three components")
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("parameters must be finite")
        if self.mass_mhz < 0.0:
            raise InvalidInput("mass_mhz must be >= 0")

    @property
    def momentum_norm_mhz(self) -> float:
        return math.sqrt(sum(p * p for p in self.momentum_mhz))

    @property
    def energy_mhz(self) -> float:
        return math.sqrt(self.mass_mhz**2 + sum(p * p for p in self.momentum_mhz))

    def is_zero(self) -> bool:
        return self.mass_mhz == 0.0 and self.momentum_norm_mhz == 0.0


@dataclass(frozen=True)
class BrightStatePair:
    """The two level-{1,2} superpositions reached from |0> and coupling to |3>.

    Both are unit vectors in the internal ordering. They are exactly
    orthogonal for any nonzero parameters: the state driven from |0>
    coincides with the dark state of the |3> couplings.
    """

    bright_v: np.ndarray
    bright_lambda: np.ndarray


@dataclass(frozen=True)
class SpinVector:
    """Dimensionless spin expectation triple (1/2 normalization included)."""

    sx: float
    sy: float
    sz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])

    @property
    def magnitude(self) -> float:
        return math.sqrt(self.sx**2 + self.sy**2 + self.sz**2)


@dataclass(frozen=True)
class SphereSample:
    """One momentum direction of a constant-energy sphere spin texture."""

    theta_rad: float
    phi_rad: float
    direction: tuple[float, float, float]
    spin: SpinVector
    radial_component: float
    helicity: float
    at_north_pole: bool
    stereo_x: float
    stereo_y: float


def level_populations(states: np.ndarray) -> np.ndarray:
    """Populations by level index 0..3 from internal-ordered state rows."""
    pops = np.abs(np.atleast_2d(states)) ** 2
    out = np.empty_like(pops)
    out[:, LEVEL_OF_SLOT] = pops
    return out if np.ndim(states) == 2 else out[0]


def internal_from_level(vector: np.ndarray) -> np.ndarray:
    """Convert a level-ordered 4-vector to the internal ordering (involution)."""
    return as_state(vector, 4)[LEVEL_OF_SLOT]


def build_dirac_hamiltonian(params: DiracParams) -> np.ndarray:
    """4x4 Hamiltonian in the internal ordering, entries in angular MHz."""
    px, py, pz = params.momentum_mhz
    return TWO_PI * (
        px * COUPLING_PX + py * COUPLING_PY + pz * COUPLING_PZ + params.mass_mhz * COUPLING_MASS
    )


def relativistic_energy(params: DiracParams) -> float:
    """Angular energy 2*pi*sqrt(m^2 + |p|^2) in rad/us."""
    return TWO_PI * math.sqrt(params.mass_mhz**2 + params.momentum_norm_mhz**2)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Make the level-1 amplitude real positive (level-2 if level-1 vanishes)."""
    anchor = vec[3] if abs(vec[3]) > 1e-14 else vec[2]
    return vec * (abs(anchor) / anchor)


def bright_states(params: DiracParams) -> BrightStatePair:
    """Bright states of the V system (driven from |0>) and the Lambda system (to |3>)."""
    if params.is_zero():
        raise DegenerateDrive("bright states are undefined for all-zero parameters")
    px, py, pz = params.momentum_mhz
    m = params.mass_mhz
    v = np.zeros(4, dtype=complex)
    v[3] = px + 1j * py  # level 1
    v[2] = pz + 1j * m  # level 2
    lam = np.zeros(4, dtype=complex)
    lam[3] = -pz + 1j * m
    lam[2] = px - 1j * py
    v = _fix_phase(v / np.linalg.norm(v))
    lam = _fix_phase(lam / np.linalg.norm(lam))
    return BrightStatePair(bright_v=v, bright_lambda=lam)


def spin_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin components (1/2)*I_2 (x) sigma_i in the internal ordering."""
    return tuple(0.5 * kron(IDENTITY_2, s) for s in (PAULI_X, PAULI_Y, PAULI_Z))


def helicity_operator(params: DiracParams) -> np.ndarray:
    """Spin projection along the momentum direction; requires |p| > 0."""
    p_norm = params.momentum_norm_mhz
    if p_norm == 0.0:
        raise DegenerateDrive("helicity is undefined at zero momentum")
    sx, sy, sz = spin_operators()
    px, py, pz = params.momentum_mhz
    return (px * sx + py * sy + pz * sz) / p_norm


def spin_rotation_z(phi_rad: float) -> np.ndarray:
    """exp(-i * phi * Sigma_z): conjugating H by it rotates momentum about z by phi."""
    half = 0.5 * phi_rad
    return kron(IDENTITY_2, np.diag([np.exp(-1j * half), np.exp(1j * half)]))


def rotate_momentum_z(params: DiracParams, phi_rad: float) -> DiracParams:
    """Parameters with the momentum rotated about the z axis by ``phi_rad``."""
    px, py, pz = params.momentum_mhz
    c, s = math.cos(phi_rad), math.sin(phi_rad)
    return DiracParams(
        mass_mhz=params.mass_mhz,
        momentum_mhz=(c * px - s * py, s * px + c * py, pz),
    )


def manifold_spin(bright_state: np.ndarray) -> SpinVector:
    """Spin of a state restricted to the {1,2} manifold, renormalized.

    The (level-2, level-1) amplitudes form a spin-1/2 doublet (up, down);
    the returned vector includes the 1/2 normalization, so pure states have
    magnitude exactly 1/2.
    """
    psi = as_state(bright_state, 4)
    a, b = psi[2], psi[3]  # level 2 (up), level 1 (down)
    norm2 = abs(a) ** 2 + abs(b) ** 2
    if norm2 < 1e-28:
        raise DegenerateDrive("state has no support on the {1,2} manifold")
    cross = np.conj(a) * b / norm2
    return SpinVector(
        sx=float(cross.real),
        sy=float(cross.imag),
        sz=0.5 * float((abs(a) ** 2 - abs(b) ** 2) / norm2),
    )


def spin_texture(
    energy_mhz: float, n_polar: int = 12, n_azimuthal: int = 24
) -> list[SphereSample]:
    """Bright-state spin over the sphere |p| = m = energy_mhz.

    The sphere is sampled on ``n_polar`` polar angles (poles included) by
    ``n_azimuthal`` azimuthal angles. The stereographic projection maps the
    south pole to the origin; samples at the north pole are flagged and carry
    nan projection coordinates.
    """
    if energy_mhz <= 0.0:
        raise DegenerateDrive("sphere energy must be positive")
    if n_polar < 8 or n_azimuthal < 16:
        raise InvalidInput("grid must be at least 8 polar by 16 azimuthal points")
    from .linalg import expectation  # local import to avoid a cycle at module load

    samples: list[SphereSample] = []
    thetas = np.linspace(0.0, math.pi, n_polar)
    phis = np.linspace(0.0, 2.0 * math.pi, n_azimuthal, endpoint=False)
    for theta in thetas:
        for phi in phis:
            n = (
                math.sin(theta) * math.cos(phi),
                math.sin(theta) * math.sin(phi),
                math.cos(theta),
            )
            params = DiracParams(
                mass_mhz=energy_mhz,
                momentum_mhz=tuple(energy_mhz * c for c in n),
            )
            bright = bright_states(params).bright_v
            spin = manifold_spin(bright)
            radial = float(spin.as_array() @ np.array(n))
            hel = expectation(bright, helicity_operator(params))
            at_north = theta < 1e-12
            if at_north:
                sx = sy = float("nan")
            else:
                sx = n[0] / (1.0 - n[2])
                sy = n[1] / (1.0 - n[2])
            samples.append(
                SphereSample(
                    theta_rad=float(theta),
                    phi_rad=float(phi),
                    direction=n,
                    spin=spin,
                    radial_component=radial,
                    helicity=hel,
                    at_north_pole=at_north,
                    stereo_x=sx,
                    stereo_y=sy,
                )
            )
    return samples


def bell_transform() -> np.ndarray:
    """Unitary whose rows are the four Bell states, acting on internal vectors.

    In the Bell picture the p_y = p_z = 0 Hamiltonian factorizes into
    identical single-qubit rotations: U H U^dag = I (x) (px*sx + m*sy).
    """
    bell_rows_level = np.array(
        [
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 1.0, -1.0, 0.0],
            [1.0, 0.0, 0.0, -1.0],
        ],
        dtype=complex,
    ) / math.sqrt(2.0)
    perm = np.zeros((4, 4), dtype=complex)
    perm[np.arange(4), LEVEL_OF_SLOT] = 1.0  # internal -> level ordering
    return bell_rows_level @ perm


def factored_check(params: DiracParams, tol: float = 1e-10) -> bool:
    """Verify the Bell-basis factorization for p_y = p_z = 0 parameters."""
    px, py, pz = params.momentum_mhz
    if py != 0.0 or pz != 0.0:
        raise UnsupportedConfiguration("factorization requires p_y = p_z = 0")
    u = bell_transform()
    h = build_dirac_hamiltonian(params)
    target = TWO_PI * kron(IDENTITY_2, px * PAULI_X + params.mass_mhz * PAULI_Y)
    residual = np.abs(u @ h @ u.conj().T - target).max()
    return bool(residual <= tol)
