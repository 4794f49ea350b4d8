"""State propagation under static and linearly chirped Hamiltonians.

Static Hamiltonians use the exact eigendecomposition propagator. Chirped
drives use a piecewise-exponential midpoint stepper: each internal step
applies exp(-i*H(t_mid)*dt), which is unconditionally unitary and second
order accurate in dt. The internal step is refined by halving until the
final populations are stable; output sampling (TimeGrid) is independent of
the internal step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dirac
from .dirac import DiracParams, TWO_PI
from .errors import ConvergenceFailure, InvalidInput
from .linalg import as_operator, as_state, eigh, expectation

# Cap on the batched-step stack length; keeps transient memory bounded while
# leaving the pairwise product reduction effective.
_CHUNK_STEPS = 1 << 18

CHIRP_COMPONENTS = ("px", "py", "pz", "m")


@dataclass(frozen=True)
class TimeGrid:
    """Output sampling window; internal integration steps are separate."""

    t_start_us: float
    t_end_us: float
    n_samples: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_start_us) and math.isfinite(self.t_end_us)):
            raise InvalidInput("grid times must be finite")
        if self.t_end_us <= self.t_start_us:
            raise InvalidInput("t_end_us must exceed t_start_us")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise InvalidInput("n_samples must be an integer >= 2")

    @property
    def duration_us(self) -> float:
        return self.t_end_us - self.t_start_us

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start_us, self.t_end_us, int(self.n_samples))


@dataclass(frozen=True)
class ChirpSchedule:
    """Linear ramp of one drive component at a fixed rate.

    The rate is the ramp slope in MHz per microsecond, numerically equal to
    a quantity in MHz squared. Duration follows from the endpoints:
    |end - start| / rate.
    """

    target_component: str
    start_mhz: float
    end_mhz: float
    rate_mhz2: float

    def __post_init__(self) -> None:
        if self.target_component not in CHIRP_COMPONENTS:
            raise InvalidInput(
                "target_component must be one of " + ", ".join(CHIRP_COMPONENTS)
            )
        vals = (self.start_mhz, self.end_mhz, self.rate_mhz2)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("schedule parameters must be finite")
        if self.rate_mhz2 <= 0.0:
            raise InvalidInput("rate_mhz2 must be > 0")
        if self.end_mhz == self.start_mhz:
            raise InvalidInput("schedule endpoints must differ")
        if self.target_component == "m" and min(self.start_mhz, self.end_mhz) < 0.0:
            raise InvalidInput("a mass ramp cannot go negative")

    @property
    def duration_us(self) -> float:
        return abs(self.end_mhz - self.start_mhz) / self.rate_mhz2

    @property
    def slope_mhz_per_us(self) -> float:
        return math.copysign(self.rate_mhz2, self.end_mhz - self.start_mhz)

    def component_at(self, elapsed_us: float | np.ndarray) -> float | np.ndarray:
        return self.start_mhz + self.slope_mhz_per_us * elapsed_us

    def params_at(self, base: DiracParams, elapsed_us: float) -> DiracParams:
        """Drive parameters with the swept component evaluated mid-ramp."""
        value = float(self.component_at(elapsed_us))
        px, py, pz = base.momentum_mhz
        if self.target_component == "m":
            return DiracParams(mass_mhz=value, momentum_mhz=(px, py, pz))
        replaced = {"px": (value, py, pz), "py": (px, value, pz), "pz": (px, py, value)}
        return DiracParams(mass_mhz=base.mass_mhz, momentum_mhz=replaced[self.target_component])


@dataclass(frozen=True)
class Trajectory:
    """Sampled state history with per-level populations and named observables."""

    times: np.ndarray
    states: np.ndarray
    populations: np.ndarray
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    n_steps: int = 0

    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def final_populations(self) -> np.ndarray:
        return self.populations[-1]


def manifold_population(state: np.ndarray, levels) -> float:
    """Total population of the given level indices (level numbering, not slots)."""
    psi = as_state(np.asarray(state, dtype=complex))
    idx = sorted(set(int(l) for l in levels))
    if not idx:
        raise InvalidInput("levels must be non-empty")
    if idx[0] < 0 or idx[-1] >= psi.size:
        raise InvalidInput("level index out of range")
    if psi.size == 4:
        slots = dirac.LEVEL_OF_SLOT[idx]
    else:
        slots = np.array(idx)
    return float(np.sum(np.abs(psi[slots]) ** 2))


def schwinger_probability(mass_mhz: float, rate_mhz2: float) -> float:
    """Survival probability of a degenerate Landau-Zener sweep.

    Both the gap parameter and the sweep rate enter in angular units, giving
    the net exponent -2*pi^2*mass^2/rate for inputs in ordinary MHz. The
    convention is frozen by the calibration regression test (masses 1..6 MHz
    at rate 100 MHz^2); do not change it without re-running that comparison.
    """
    if rate_mhz2 <= 0.0:
        raise InvalidInput("rate_mhz2 must be > 0")
    if mass_mhz < 0.0:
        raise InvalidInput("mass_mhz must be >= 0")
    return math.exp(-2.0 * math.pi**2 * mass_mhz**2 / rate_mhz2)


def _default_observables(states: np.ndarray) -> dict[str, np.ndarray]:
    """Spin components and pair-manifold populations for 4-dim trajectories."""
    if states.shape[1] != 4:
        return {}
    sx, sy, sz = dirac.spin_operators()
    out: dict[str, np.ndarray] = {}
    for name, op in (("spin_x", sx), ("spin_y", sy), ("spin_z", sz)):
        out[name] = np.real(np.einsum("si,ij,sj->s", states.conj(), op, states))
    pops = np.abs(states) ** 2
    out["manifold_01"] = pops[:, 0] + pops[:, 3]
    out["manifold_23"] = pops[:, 1] + pops[:, 2]
    return out


def _attach_observables(
    states: np.ndarray, extra: dict[str, np.ndarray] | None
) -> dict[str, np.ndarray]:
    obs = _default_observables(states)
    if extra:
        for name, op in extra.items():
            mat = as_operator(op)
            if mat.shape[0] != states.shape[1]:
                raise InvalidInput(f"observable {name!r} has mismatched dimension")
            obs[str(name)] = np.array([expectation(s, mat) for s in states])
    return obs


def _populations(states: np.ndarray) -> np.ndarray:
    if states.shape[1] == 4:
        return dirac.level_populations(states)
    return np.abs(states) ** 2


def evolve_static(
    hamiltonian: np.ndarray,
    psi0: np.ndarray,
    grid: TimeGrid,
    extra_observables: dict[str, np.ndarray] | None = None,
) -> Trajectory:
    """Exact propagation under a constant Hamiltonian, sampled on the grid."""
    h = as_operator(hamiltonian)
    psi = as_state(psi0, h.shape[0])
    decomp = eigh(h)
    elapsed = grid.times() - grid.t_start_us
    weights = decomp.eigenvectors.conj().T @ psi
    phases = np.exp(-1j * np.outer(elapsed, decomp.eigenvalues))
    states = (phases * weights) @ decomp.eigenvectors.T
    return Trajectory(
        times=grid.times(),
        states=states,
        populations=_populations(states),
        observables=_attach_observables(states, extra_observables),
        n_steps=int(grid.n_samples) - 1,
    )


def _closed_form_steps(
    masses: np.ndarray,
    px: np.ndarray,
    py: np.ndarray,
    pz: np.ndarray,
    dt_us: float,
) -> np.ndarray:
    """Stack of exact 4x4 step unitaries exp(-i*H_k*dt) for parameter arrays.

    Uses H^2 = E^2 * I: exp(-i*H*dt) = cos(E*dt)*I - i*(sin(E*dt)/E)*H.
    """
    h = TWO_PI * (
        px[:, None, None] * dirac.COUPLING_PX
        + py[:, None, None] * dirac.COUPLING_PY
        + pz[:, None, None] * dirac.COUPLING_PZ
        + masses[:, None, None] * dirac.COUPLING_MASS
    )
    energy = TWO_PI * np.sqrt(masses**2 + px**2 + py**2 + pz**2)
    cos_term = np.cos(energy * dt_us)
    # sin(E*dt)/E, with the E -> 0 limit dt handled by sinc
    sin_term = dt_us * np.sinc(energy * dt_us / math.pi)
    return cos_term[:, None, None] * np.eye(4) - 1j * sin_term[:, None, None] * h


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """Product mats[n-1] @ ... @ mats[0] by pairwise halving (odd tail kept)."""
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            head, tail = mats[:-1], mats[-1:]
        else:
            head, tail = mats, None
        mats = np.matmul(head[1::2], head[0::2])
        if tail is not None:
            mats = np.concatenate([mats, tail])
    return mats[0]


def _segment_unitary(
    base: DiracParams,
    schedule: ChirpSchedule,
    seg_start_us: float,
    dt_us: float,
    n_steps: int,
) -> np.ndarray:
    """Ordered product of midpoint steps across one output segment."""
    px0, py0, pz0 = base.momentum_mhz
    acc = None
    for lo in range(0, n_steps, _CHUNK_STEPS):
        hi = min(lo + _CHUNK_STEPS, n_steps)
        mids = seg_start_us + (np.arange(lo, hi) + 0.5) * dt_us
        value = np.asarray(schedule.component_at(mids), dtype=float)
        const = np.full(hi - lo, 0.0)
        cols = {
            "m": (value, const + px0, const + py0, const + pz0),
            "px": (const + base.mass_mhz, value, const + py0, const + pz0),
            "py": (const + base.mass_mhz, const + px0, value, const + pz0),
            "pz": (const + base.mass_mhz, const + px0, const + py0, value),
        }[schedule.target_component]
        part = _ordered_product(_closed_form_steps(*cols, dt_us))
        acc = part if acc is None else part @ acc
    return acc


def _base_step_count(base: DiracParams, schedule: ChirpSchedule, n_segments: int) -> int:
    duration = schedule.duration_us
    f_max = 0.0
    for end in (0.0, duration):
        f_max = max(f_max, schedule.params_at(base, end).energy_mhz)
    dt = min(0.25 / max(f_max, 1e-9), duration / 2000.0)
    n = max(int(math.ceil(duration / dt)), n_segments)
    return ((n + n_segments - 1) // n_segments) * n_segments


def _run_chirp(
    base: DiracParams,
    schedule: ChirpSchedule,
    psi0: np.ndarray,
    grid: TimeGrid,
    n_steps: int,
    backward: bool,
) -> np.ndarray:
    n_segments = int(grid.n_samples) - 1
    per_segment = n_steps // n_segments
    duration = schedule.duration_us
    dt = duration / n_steps
    states = [psi0]
    psi = psi0
    for seg in range(n_segments):
        if backward:
            # Integrate schedule time from the ramp end toward zero.
            seg_start = duration - seg * per_segment * dt
            u = _segment_unitary(base, schedule, seg_start, -dt, per_segment)
        else:
            u = _segment_unitary(base, schedule, seg * per_segment * dt, dt, per_segment)
        psi = u @ psi
        states.append(psi)
    return np.array(states)


def evolve_chirped(
    params: DiracParams,
    schedule: ChirpSchedule,
    psi0: np.ndarray,
    grid: TimeGrid,
    *,
    tol: float = 1e-7,
    max_refinements: int = 12,
    n_steps: int | None = None,
    backward: bool = False,
    extra_observables: dict[str, np.ndarray] | None = None,
) -> Trajectory:
    """Integrate a linear chirp of one drive component over the grid window.

    The value of the swept component at elapsed time t is
    schedule.start_mhz + slope * t; the non-swept components come from
    ``params``. The grid span must equal the schedule duration. With
    ``backward=True`` the initial state is taken at the ramp end and stepped
    with negative dt back to the ramp start (the exact inverse of the forward
    pass at equal step count).

    The internal step count starts at the coarser of 0.25/f_max and
    duration/2000 (aligned to the sample segments) and is halved until the
    final populations move by at most ``tol``; more than ``max_refinements``
    halvings raises ConvergenceFailure. Pass ``n_steps`` to pin the count and
    skip the refinement loop.
    """
    psi = as_state(psi0, 4)
    duration = schedule.duration_us
    if abs(grid.duration_us - duration) > 1e-9 * max(duration, 1.0):
        raise InvalidInput("grid span must equal the schedule duration")
    n_segments = int(grid.n_samples) - 1

    def finish(states: np.ndarray, used: int) -> Trajectory:
        times = grid.times()
        if backward:
            times = times[::-1].copy()
        return Trajectory(
            times=times,
            states=states,
            populations=_populations(states),
            observables=_attach_observables(states, extra_observables),
            n_steps=used,
        )

    if n_steps is not None:
        if n_steps < n_segments or n_steps % n_segments:
            raise InvalidInput("n_steps must be a positive multiple of n_samples - 1")
        return finish(_run_chirp(params, schedule, psi, grid, n_steps, backward), n_steps)

    n = _base_step_count(params, schedule, n_segments)
    states = _run_chirp(params, schedule, psi, grid, n, backward)
    prev = _populations(states)[-1]
    for _ in range(max_refinements):
        n *= 2
        states = _run_chirp(params, schedule, psi, grid, n, backward)
        pops = _populations(states)[-1]
        if np.max(np.abs(pops - prev)) <= tol:
            return finish(states, n)
        prev = pops
    raise ConvergenceFailure(
        f"final populations still moving after {max_refinements} halvings"
    )
