"""Two coupled three-level transmons realizing the four-level diamond.

The 9-dim bare Hamiltonian conserves total excitation number, so the dressed
basis is computed block by block. The diamond is the dressed ground state,
the two single-excitation dressed states (lower = |1>, upper = |2>), and the
highest two-excitation dressed state (|3>); the remaining five dressed states
are spectators that a clean drive should not populate.

Dressed eigenvector phases are pinned on a fixed bare component per block
(|00>, |01>, |11>, |12>, |22>), which makes the drive matrix elements, and
hence calibrated tone amplitudes, reproducible across runs and platforms.

All Hamiltonians returned here are angular (2*pi * MHz, time in us); user
inputs and reported transition frequencies are ordinary MHz.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dirac import TWO_PI, DiracParams, LEVEL_OF_SLOT
from .errors import (
    ConvergenceFailure,
    DegenerateSpectrum,
    InvalidInput,
    UnsupportedConfiguration,
)
from .evolve import ChirpSchedule, TimeGrid, Trajectory, _ordered_product
from .linalg import as_state

DIM = 9

# Truncated three-level lowering operator: <0|a|1>=1, <1|a|2>=sqrt(2).
_LOWER_3 = np.array(
    [[0.0, 1.0, 0.0], [0.0, 0.0, math.sqrt(2.0)], [0.0, 0.0, 0.0]]
)
A_OP = np.kron(_LOWER_3, np.eye(3))
B_OP = np.kron(np.eye(3), _LOWER_3)

# Total excitation number of each bare product state |na, nb>, index 3*na+nb.
EXCITATION_NUMBERS = np.array([na + nb for na in range(3) for nb in range(3)])

# Bare component used to pin the dressed phase in each excitation block.
_PHASE_ANCHORS = {0: 0, 1: 1, 2: 4, 3: 5, 4: 8}

TRANSITION_KEYS = ("01", "02", "13", "23")

# Chunk bound for batched 9x9 step stacks (memory ~ chunk * 81 * 16 bytes).
_CHUNK_STEPS = 1 << 16


@dataclass(frozen=True)
class CircuitParams:
    """Bare transmon pair: first-transition frequency, anharmonicity, coupling."""

    omega0_ghz: float = 5.0
    kappa_mhz: float = -300.0
    g_mhz: float = 100.0

    def __post_init__(self) -> None:
        vals = (self.omega0_ghz, self.kappa_mhz, self.g_mhz)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("circuit parameters must be finite")
        if self.omega0_ghz <= 0.0:
            raise InvalidInput("omega0_ghz must be > 0")
        if self.kappa_mhz >= 0.0:
            raise InvalidInput("kappa_mhz must be < 0")
        if self.g_mhz <= 0.0:
            raise InvalidInput("g_mhz must be > 0")
        if abs(self.kappa_mhz) <= self.g_mhz:
            warnings.warn(
                "anharmonicity magnitude at or below the coupling g; "
                "dressed-level identification may be unreliable",
                stacklevel=2,
            )

    @property
    def omega0_mhz(self) -> float:
        return 1000.0 * self.omega0_ghz


@dataclass(frozen=True)
class DressedBasis:
    """Diamond and spectator dressed states with their energies (MHz)."""

    diamond_states: np.ndarray
    diamond_energies_mhz: np.ndarray
    spectator_states: np.ndarray
    spectator_energies_mhz: np.ndarray
    transition_frequencies_mhz: dict[str, float]
    block_energies_mhz: dict[int, np.ndarray]

    def all_states(self) -> np.ndarray:
        return np.vstack([self.diamond_states, self.spectator_states])


@dataclass(frozen=True)
class ToneSpec:
    """One drive tone: static complex amplitude plus an optional linear ramp.

    The instantaneous amplitude is static_mhz + sweep_coeff * c(t) where c(t)
    is the scheduled component value (MHz); with no schedule it is constant.
    """

    static_mhz: complex = 0.0
    sweep_coeff: complex = 0.0
    schedule: ChirpSchedule | None = None

    def amplitude_at(self, elapsed_us: float | np.ndarray):
        if self.schedule is None:
            return self.static_mhz + np.zeros_like(np.asarray(elapsed_us, dtype=float))
        return self.static_mhz + self.sweep_coeff * self.schedule.component_at(elapsed_us)


@dataclass(frozen=True)
class DriveProgram:
    """Four tones addressing the diamond transitions through the first transmon."""

    tones: dict[str, ToneSpec]
    frequencies_mhz: dict[str, float]
    drive_second_qubit: bool = False

    def __post_init__(self) -> None:
        if set(self.tones) != set(TRANSITION_KEYS):
            raise InvalidInput("tones must cover exactly the transitions 01, 02, 13, 23")
        if set(self.frequencies_mhz) != set(TRANSITION_KEYS):
            raise InvalidInput("frequencies must cover exactly the transitions 01, 02, 13, 23")
        for key, f in self.frequencies_mhz.items():
            if not (math.isfinite(f) and f > 0.0):
                raise InvalidInput(f"tone frequency {key} must be positive")

    def max_amplitude_mhz(self) -> float:
        """Largest instantaneous tone magnitude over the programmed ramps."""
        peak = 0.0
        for tone in self.tones.values():
            if tone.schedule is None:
                peak = max(peak, abs(tone.static_mhz))
            else:
                for end in (tone.schedule.start_mhz, tone.schedule.end_mhz):
                    peak = max(peak, abs(tone.static_mhz + tone.sweep_coeff * end))
        return peak


def build_bare_hamiltonian(params: CircuitParams) -> np.ndarray:
    """9x9 bare Hamiltonian (angular): two Kerr oscillators + exchange coupling."""
    na = A_OP.conj().T @ A_OP
    nb = B_OP.conj().T @ B_OP
    kerr_a = A_OP.conj().T @ A_OP.conj().T @ A_OP @ A_OP
    kerr_b = B_OP.conj().T @ B_OP.conj().T @ B_OP @ B_OP
    exchange = A_OP.conj().T @ B_OP + B_OP.conj().T @ A_OP
    h_mhz = (
        params.omega0_mhz * (na + nb)
        + 0.5 * params.kappa_mhz * (kerr_a + kerr_b)
        + params.g_mhz * exchange
    )
    return TWO_PI * h_mhz.astype(complex)


def _pin_phase(vec: np.ndarray, anchor: int) -> np.ndarray:
    amp = vec[anchor]
    if abs(amp) < 1e-12:
        order = np.argsort(-np.abs(vec), kind="stable")
        amp = vec[order[0]]
    return vec * (abs(amp) / amp)


def dressed_basis(params: CircuitParams) -> DressedBasis:
    """Blockwise eigenbasis with diamond labels and transition frequencies."""
    h_mhz = np.real(build_bare_hamiltonian(params)) / TWO_PI
    block_energies: dict[int, np.ndarray] = {}
    block_states: dict[int, np.ndarray] = {}
    for n in range(5):
        idx = np.where(EXCITATION_NUMBERS == n)[0]
        sub = h_mhz[np.ix_(idx, idx)]
        vals, vecs = np.linalg.eigh(sub)
        states = np.zeros((idx.size, DIM), dtype=complex)
        for k in range(idx.size):
            states[k, idx] = vecs[:, k]
            states[k] = _pin_phase(states[k], _PHASE_ANCHORS[n])
        block_energies[n] = vals
        block_states[n] = states

    for n in (1, 2):
        vals = block_energies[n]
        gaps = np.diff(vals)
        if gaps.size and gaps.min() < 1e-6:
            raise DegenerateSpectrum(
                f"excitation block {n} nearly degenerate; diamond labels ambiguous"
            )

    diamond_states = np.vstack(
        [
            block_states[0][0],
            block_states[1][0],
            block_states[1][1],
            block_states[2][-1],
        ]
    )
    diamond_energies = np.array(
        [
            block_energies[0][0],
            block_energies[1][0],
            block_energies[1][1],
            block_energies[2][-1],
        ]
    )
    spectator_states = np.vstack(
        [block_states[2][:-1], block_states[3], block_states[4]]
    )
    spectator_energies = np.concatenate(
        [block_energies[2][:-1], block_energies[3], block_energies[4]]
    )
    e0, e1, e2, e3 = diamond_energies
    freqs = {"01": e1 - e0, "02": e2 - e0, "13": e3 - e1, "23": e3 - e2}
    return DressedBasis(
        diamond_states=diamond_states,
        diamond_energies_mhz=diamond_energies,
        spectator_states=spectator_states,
        spectator_energies_mhz=spectator_energies,
        transition_frequencies_mhz={k: float(v) for k, v in freqs.items()},
        block_energies_mhz=block_energies,
    )


def drive_matrix_elements(basis: DressedBasis) -> dict[str, complex]:
    """Raising-operator matrix elements of the first transmon on the diamond."""
    d = basis.diamond_states
    adag = A_OP.conj().T
    return {
        "01": complex(d[1].conj() @ adag @ d[0]),
        "02": complex(d[2].conj() @ adag @ d[0]),
        "13": complex(d[3].conj() @ adag @ d[1]),
        "23": complex(d[3].conj() @ adag @ d[2]),
    }


# Complex drive couplings of the four diamond transitions as functions of the
# particle parameters, and the per-component sweep directions used when one
# parameter is chirped.
def _dirac_amplitudes(params: DiracParams) -> dict[str, complex]:
    px, py, pz = params.momentum_mhz
    m = params.mass_mhz
    return {
        "01": px - 1j * py,
        "02": pz - 1j * m,
        "13": -pz + 1j * m,
        "23": px - 1j * py,
    }


_SWEEP_DIRECTIONS = {
    "px": {"01": 1.0 + 0.0j, "23": 1.0 + 0.0j},
    "py": {"01": -1.0j, "23": -1.0j},
    "pz": {"02": 1.0 + 0.0j, "13": -1.0 + 0.0j},
    "m": {"02": -1.0j, "13": 1.0j},
}


def dirac_drive_mapping(
    params: DiracParams,
    basis: DressedBasis,
    mode: str = "calibrated",
    scale: float = 1.0,
    schedule: ChirpSchedule | None = None,
    drive_second_qubit: bool = False,
) -> DriveProgram:
    """Tone program whose four amplitudes encode (m, p), one per transition.

    In "naive" mode the tone amplitudes are the couplings verbatim; in
    "calibrated" mode each tone is divided by its dressed matrix element so
    the effective diamond couplings equal the requested values. ``scale``
    multiplies all four tones identically. A chirp on one component ramps the
    corresponding tone amplitudes; the swept component's static contribution
    is replaced by the schedule.
    """
    if mode not in ("naive", "calibrated"):
        raise InvalidInput("mode must be 'naive' or 'calibrated'")
    if not math.isfinite(scale):
        raise InvalidInput("scale must be finite")
    elements = drive_matrix_elements(basis)
    if mode == "calibrated":
        if drive_second_qubit:
            raise UnsupportedConfiguration(
                "symmetric two-qubit drive nulls the 0-1 matrix element; "
                "per-tone calibration is impossible"
            )
        if min(abs(v) for v in elements.values()) < 1e-9:
            raise UnsupportedConfiguration("vanishing drive matrix element")

    amplitudes = _dirac_amplitudes(params)
    sweep_dirs = _SWEEP_DIRECTIONS[schedule.target_component] if schedule else {}
    if schedule is not None:
        # Remove the swept component's static contribution from the affected
        # tones; the schedule supplies it as a function of time.
        swept_static = {
            key: direction * schedule.start_mhz for key, direction in sweep_dirs.items()
        }
        base_value = {
            "px": params.momentum_mhz[0],
            "py": params.momentum_mhz[1],
            "pz": params.momentum_mhz[2],
            "m": params.mass_mhz,
        }[schedule.target_component]
        for key, direction in sweep_dirs.items():
            amplitudes[key] = amplitudes[key] - direction * base_value

    tones = {}
    for key in TRANSITION_KEYS:
        divisor = elements[key] if mode == "calibrated" else 1.0
        coeff = sweep_dirs.get(key, 0.0)
        tones[key] = ToneSpec(
            static_mhz=scale * amplitudes[key] / divisor,
            sweep_coeff=scale * coeff / divisor,
            schedule=schedule if key in sweep_dirs else None,
        )
    return DriveProgram(
        tones=tones,
        frequencies_mhz=dict(basis.transition_frequencies_mhz),
        drive_second_qubit=drive_second_qubit,
    )


def _drive_field(
    program: DriveProgram, elapsed_us: np.ndarray, frame_freq_mhz: float
) -> np.ndarray:
    """Complex field multiplying the raising operator, in the chosen frame."""
    total = np.zeros(np.shape(elapsed_us), dtype=complex)
    for key in TRANSITION_KEYS:
        detuning = program.frequencies_mhz[key] - frame_freq_mhz
        amp = program.tones[key].amplitude_at(elapsed_us)
        total = total + amp * np.exp(-1j * TWO_PI * detuning * elapsed_us)
    return total


def build_drive_hamiltonian(program: DriveProgram, t_us: float) -> np.ndarray:
    """Lab-frame drive term at one instant: field * adag + conj(field) * a."""
    field = complex(_drive_field(program, np.asarray(float(t_us)), 0.0))
    ops = [(A_OP.conj().T, A_OP)]
    if program.drive_second_qubit:
        ops.append((B_OP.conj().T, B_OP))
    h = np.zeros((DIM, DIM), dtype=complex)
    for raise_op, lower_op in ops:
        h += TWO_PI * (field * raise_op + np.conj(field) * lower_op)
    return h


def to_rotating_frame(
    hamiltonian: np.ndarray, t_us: float, frame_freq_mhz: float
) -> np.ndarray:
    """Exact frame transform R H R^dag - w_f N with R = exp(i w_f t N)."""
    if not math.isfinite(frame_freq_mhz):
        raise InvalidInput("frame frequency must be finite")
    h = np.asarray(hamiltonian, dtype=complex)
    if h.shape != (DIM, DIM):
        raise InvalidInput("expected a 9x9 operator")
    theta = TWO_PI * frame_freq_mhz * t_us
    phases = np.exp(1j * theta * EXCITATION_NUMBERS)
    rotated = (phases[:, None] * h) * phases.conj()[None, :]
    return rotated - TWO_PI * frame_freq_mhz * np.diag(EXCITATION_NUMBERS.astype(float))


def _hamiltonian_batch(
    h_static: np.ndarray,
    program: DriveProgram,
    elapsed_us: np.ndarray,
    frame_freq_mhz: float,
) -> np.ndarray:
    field = _drive_field(program, elapsed_us, frame_freq_mhz)
    adag = A_OP.conj().T
    out = (
        h_static[None, :, :]
        + TWO_PI * field[:, None, None] * adag[None, :, :]
        + TWO_PI * field.conj()[:, None, None] * A_OP[None, :, :]
    )
    if program.drive_second_qubit:
        bdag = B_OP.conj().T
        out = (
            out
            + TWO_PI * field[:, None, None] * bdag[None, :, :]
            + TWO_PI * field.conj()[:, None, None] * B_OP[None, :, :]
        )
    return out


def _step_unitaries(h_batch: np.ndarray, dt_us: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(h_batch)
    phases = np.exp(-1j * vals * dt_us)
    return np.einsum("nij,nj,nkj->nik", vecs, phases, vecs.conj())


def _segment_unitary_circuit(
    h_static: np.ndarray,
    program: DriveProgram,
    seg_start_us: float,
    dt_us: float,
    n_steps: int,
    frame_freq_mhz: float,
) -> np.ndarray:
    acc = None
    for lo in range(0, n_steps, _CHUNK_STEPS):
        hi = min(lo + _CHUNK_STEPS, n_steps)
        mids = seg_start_us + (np.arange(lo, hi) + 0.5) * dt_us
        us = _step_unitaries(_hamiltonian_batch(h_static, program, mids, frame_freq_mhz), dt_us)
        part = _ordered_product(us)
        acc = part if acc is None else part @ acc
    return acc


def _circuit_frequency_scale(
    params: CircuitParams, program: DriveProgram, frame_freq_mhz: float
) -> float:
    h0_diag_mhz = np.real(np.diag(build_bare_hamiltonian(params))) / TWO_PI
    shifted = np.abs(h0_diag_mhz - frame_freq_mhz * EXCITATION_NUMBERS)
    f = max(shifted.max(), params.g_mhz, abs(params.kappa_mhz))
    for key in TRANSITION_KEYS:
        f = max(f, abs(program.frequencies_mhz[key] - frame_freq_mhz))
    return max(f, program.max_amplitude_mhz(), 1e-9)


def evolve_circuit(
    params: CircuitParams,
    program: DriveProgram,
    psi0: np.ndarray,
    grid: TimeGrid,
    *,
    frame: str = "rotating",
    frame_freq_mhz: float | None = None,
    tol: float = 1e-5,
    max_refinements: int = 12,
    n_steps: int | None = None,
) -> Trajectory:
    """Propagate the driven 9-dim circuit over the grid window.

    ``frame="rotating"`` (default) integrates in the frame rotating at the
    bare frequency for both oscillators, which removes the GHz carrier
    exactly; ``frame="lab"`` integrates the untransformed Hamiltonian.
    Populations of bare and dressed states are identical between frames
    because the frame rotation is diagonal within excitation blocks.

    Returned states are in the chosen frame. Time in tone phases and ramps
    is measured from grid.t_start_us. Step control mirrors the 4-level
    chirp stepper (midpoint exponential with halving to ``tol``).
    """
    psi = as_state(psi0, DIM)
    if frame not in ("rotating", "lab"):
        raise InvalidInput("frame must be 'rotating' or 'lab'")
    if frame_freq_mhz is None:
        frame_freq_mhz = params.omega0_mhz if frame == "rotating" else 0.0
    elif frame == "lab":
        raise InvalidInput("frame_freq_mhz is only meaningful for the rotating frame")
    n_segments = int(grid.n_samples) - 1
    duration = grid.duration_us

    h_static = build_bare_hamiltonian(params)
    if frame_freq_mhz:
        h_static = h_static - TWO_PI * frame_freq_mhz * np.diag(
            EXCITATION_NUMBERS.astype(float)
        )

    def run(n: int) -> np.ndarray:
        per_segment = n // n_segments
        dt = duration / n
        states = [psi]
        current = psi
        for seg in range(n_segments):
            u = _segment_unitary_circuit(
                h_static, program, seg * per_segment * dt, dt, per_segment, frame_freq_mhz
            )
            current = u @ current
            states.append(current)
        return np.array(states)

    def finish(states: np.ndarray, used: int) -> Trajectory:
        return Trajectory(
            times=grid.times(),
            states=states,
            populations=np.abs(states) ** 2,
            observables={},
            n_steps=used,
        )

    if n_steps is not None:
        if n_steps < n_segments or n_steps % n_segments:
            raise InvalidInput("n_steps must be a positive multiple of n_samples - 1")
        return finish(run(n_steps), n_steps)

    f_max = _circuit_frequency_scale(params, program, frame_freq_mhz)
    base_dt = min(0.25 / f_max, duration / 2000.0)
    n = max(int(math.ceil(duration / base_dt)), n_segments)
    n = ((n + n_segments - 1) // n_segments) * n_segments
    states = run(n)
    prev = np.abs(states[-1]) ** 2
    for _ in range(max_refinements):
        n *= 2
        states = run(n)
        pops = np.abs(states[-1]) ** 2
        if np.max(np.abs(pops - prev)) <= tol:
            return finish(states, n)
        prev = pops
    raise ConvergenceFailure(
        f"circuit populations still moving after {max_refinements} halvings"
    )


def project_to_diamond(
    traj: Trajectory, basis: DressedBasis
) -> tuple[Trajectory, np.ndarray]:
    """Diamond-frame view of a 9-dim trajectory plus its leakage series.

    Returns a 4-dim trajectory whose states hold the dressed diamond
    amplitudes (internal slot ordering, unnormalized) and whose populations
    are per-level overlaps, together with leakage(t) = 1 - sum of the four.
    """
    states9 = np.atleast_2d(traj.states)
    if states9.shape[1] != DIM:
        raise InvalidInput("expected a 9-dim trajectory")
    amps_level = states9 @ basis.diamond_states.conj().T
    amps_internal = amps_level[:, LEVEL_OF_SLOT]
    pops_level = np.abs(amps_level) ** 2
    leakage = 1.0 - pops_level.sum(axis=1)
    leakage = np.where(leakage < -1e-10, leakage, np.maximum(leakage, 0.0))
    observables = {
        "leakage": leakage,
        "manifold_01": pops_level[:, 0] + pops_level[:, 1],
        "manifold_23": pops_level[:, 2] + pops_level[:, 3],
    }
    projected = Trajectory(
        times=traj.times,
        states=amps_internal,
        populations=pops_level,
        observables=observables,
        n_steps=traj.n_steps,
    )
    return projected, leakage
