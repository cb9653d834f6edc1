#!/usr/bin/env python3

"""Quantum trajectories of two Lambda atoms in a single-mode cavity.

Space ordering: atom I x atom II x cavity Fock space, atomic levels |1>, |2>,
|3> at indices 0, 1, 2 with energies 0, epsilon2, epsilon3 (hbar = 1). The
cavity is resonant with 1<->2; level 3 couples to nothing, so the state
(|31> + |13>)/sqrt 2 reached by Stokes emission is dark.

Between jumps the unnormalized state follows H - (i/2) sum_k L_k^dag L_k with
a fixed-step fourth-order propagator; a jump happens when its squared norm
falls below a uniform random threshold (waiting-time Monte Carlo).
"""

from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from functools import reduce
import csv
import logging

import numpy as np
from scipy.linalg import expm

from dynsym_entanglement.errors import (
    CutoffOverflowError, NoStokesJumpError, ParamsError, ShapeError)
from dynsym_entanglement.hilbert_core import HilbertShape, Operator, StateVector, reduced_density
from dynsym_entanglement.lie_observables import two_level_pair_set
from dynsym_entanglement.variance_ce import ce_check, total_variance

STOKES = "stokes"
CAVITY = "cavity"

MAX_STEP_LOSS = 0.05
MAX_STEP_PHASE = 1.0
CUTOFF_TOL = 1e-6
PHOTON_TOL = 1e-9

JumpEvent = namedtuple("JumpEvent", ["time", "channel", "index"])


def _transition(upper, lower):
    m = np.zeros((3, 3), dtype=np.complex128)
    m[upper - 1, lower - 1] = 1.0
    return m


@dataclass(frozen=True)
class LambdaParams:
    epsilon2: float = 1.0
    epsilon3: float = 0.4
    omega_c: object = None
    g: float = 0.5
    gamma_s: float = 0.2
    kappa: float = 0.0
    fock_cutoff: int = 2
    dt: float = 0.01
    t_max: float = 60.0
    seed: int = 0
    individual_jumps: bool = False
    snapshot_every: int = 10

    def __post_init__(self):
        if self.omega_c is None:
            object.__setattr__(self, "omega_c", self.epsilon2)
        for name in ("epsilon2", "epsilon3", "omega_c", "g", "gamma_s", "kappa", "t_max"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ParamsError("{} must be a finite value >= 0, got {!r}".format(name, value))
        if not self.dt > 0:
            raise ParamsError("dt must be positive, got {!r}".format(self.dt))
        if self.fock_cutoff < 1:
            raise ParamsError("fock_cutoff must be >= 1, got {}".format(self.fock_cutoff))
        if self.snapshot_every < 1:
            raise ParamsError("snapshot_every must be >= 1, got {}".format(self.snapshot_every))
        if self.seed < 0:
            raise ParamsError("seed must be >= 0, got {}".format(self.seed))

    @property
    def omega_s(self):
        return self.epsilon2 - self.epsilon3

    @property
    def shape(self):
        return HilbertShape((3, 3, self.fock_cutoff + 1))

    @classmethod
    def from_section(cls, section, **overrides):
        """Build from a ConfigParser section whose keys are field names."""
        known = {f.name: f for f in fields(cls)}
        values = {}
        for key in section:
            if key not in known:
                raise ParamsError("Unknown simulation parameter '{}'".format(key))
            raw = section[key].strip()
            try:
                if key == "omega_c":
                    values[key] = float(raw) if raw else None
                elif key == "individual_jumps":
                    values[key] = section.getboolean(key)
                elif key in ("fock_cutoff", "seed", "snapshot_every"):
                    values[key] = int(raw)
                else:
                    values[key] = float(raw)
            except ValueError:
                raise ParamsError("Cannot parse {} = '{}'".format(key, raw)) from None
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class TrajectoryRecord:
    params: LambdaParams
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    survival: list = field(default_factory=list)
    jumps: list = field(default_factory=list)

    def stokes_jumps(self):
        return [jump for jump in self.jumps if jump.channel == STOKES]

    def excitation_numbers(self):
        # cavity jumps up to and including each snapshot carry the lost excitation
        numbers = []
        for index, state in enumerate(self.states):
            lost = sum(1 for jump in self.jumps if jump.channel == CAVITY and jump.index <= index)
            numbers.append(excitation_number(state, lost))
        return numbers


@dataclass
class StokesReport:
    jump_time: float
    fidelity: float
    purity: float
    is_ce: bool
    residual: float
    total_variance: float
    atomic_energy: float
    energy_with_stokes_photon: float
    stability_deviation: float
    atomic_state: StateVector = None

    def as_dict(self):
        return {
            "jump_time": self.jump_time,
            "fidelity": self.fidelity,
            "purity": self.purity,
            "is_ce": self.is_ce,
            "residual": self.residual,
            "total_variance": self.total_variance,
            "atomic_energy": self.atomic_energy,
            "energy_with_stokes_photon": self.energy_with_stokes_photon,
            "stability_deviation": self.stability_deviation,
        }


@dataclass
class EnsembleReport:
    n_trajectories: int
    n_stokes: int
    mean_first_stokes_time: object
    mean_fidelity: object
    ce_pass_rate: object
    mean_total_variance: object
    max_stability_deviation: object
    first_stokes_times: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    jump_table: list = field(default_factory=list)

    def as_dict(self):
        return {
            "n_trajectories": self.n_trajectories,
            "n_stokes": self.n_stokes,
            "mean_first_stokes_time": self.mean_first_stokes_time,
            "mean_fidelity": self.mean_fidelity,
            "ce_pass_rate": self.ce_pass_rate,
            "mean_total_variance": self.mean_total_variance,
            "max_stability_deviation": self.max_stability_deviation,
        }


class LambdaModel():
    def __init__(self, p):
        self.p = p
        self.shape = p.shape
        self.n_fock = p.fock_cutoff + 1

        self.annihilation = self.lift_cavity(np.diag(np.sqrt(np.arange(1, self.n_fock)), 1))
        self.number = self.annihilation.conj().T @ self.annihilation
        self.level_projectors = {
            level: [self.lift_atom(_transition(level, level), j) for j in (0, 1)]
            for level in (1, 2, 3)}

        self.hamiltonian = self.build_hamiltonian()
        self.jump_operators = self.build_jump_operators()
        decay = sum((op.conj().T @ op for _, op in self.jump_operators),
                    np.zeros_like(self.hamiltonian))
        self.effective = self.hamiltonian - 0.5j * decay
        self.check_step_size(decay)
        self.step_matrix = self.taylor_step(-1j * self.effective * p.dt)

    def lift_atom(self, m, atom):
        factors = [np.eye(3), np.eye(3), np.eye(self.n_fock)]
        factors[atom] = m
        return reduce(np.kron, factors).astype(np.complex128)

    def lift_cavity(self, m):
        return np.kron(np.eye(9), m).astype(np.complex128)

    def build_hamiltonian(self):
        p = self.p
        h = p.omega_c * self.number
        for j in (0, 1):
            h = h + p.epsilon2 * self.level_projectors[2][j] + p.epsilon3 * self.level_projectors[3][j]
            raising = self.lift_atom(_transition(2, 1), j)
            coupling = self.annihilation @ raising
            h = h + p.g * (coupling + coupling.conj().T)
        return h

    def build_jump_operators(self):
        p = self.p
        stokes = [self.lift_atom(_transition(3, 2), j) for j in (0, 1)]
        operators = []
        if p.gamma_s > 0:
            if p.individual_jumps:
                operators += [(STOKES, np.sqrt(p.gamma_s) * op) for op in stokes]
            else:
                operators.append((STOKES, np.sqrt(p.gamma_s) * (stokes[0] + stokes[1])))
        if p.kappa > 0:
            operators.append((CAVITY, np.sqrt(p.kappa) * self.annihilation))
        return operators

    def check_step_size(self, decay):
        dt = self.p.dt
        loss_rate = float(np.linalg.eigvalsh(decay).max()) if decay.any() else 0.0
        step_loss = 1.0 - np.exp(-loss_rate * dt)
        if step_loss >= MAX_STEP_LOSS:
            raise ParamsError("dt={} loses {:.1%} of the norm per step, reduce dt".format(
                dt, step_loss))
        phase = dt * np.linalg.norm(self.effective, 2)
        if phase >= MAX_STEP_PHASE:
            raise ParamsError("dt={} is too coarse for generator norm {:.3g}".format(
                dt, phase / dt))

    @staticmethod
    def taylor_step(a):
        # fourth-order Taylor polynomial of exp(a), one RK4 step of a linear ODE
        step = np.eye(a.shape[0], dtype=np.complex128)
        term = np.eye(a.shape[0], dtype=np.complex128)
        for k in range(1, 5):
            term = term @ a / k
            step = step + term
        return step

    def check_cutoff(self, amplitudes, time):
        top = np.abs(amplitudes.reshape(9, self.n_fock)[:, -1]).max()
        if top > CUTOFF_TOL:
            raise CutoffOverflowError(
                "Photon amplitude {:.3g} at Fock cutoff {} at t={:.4g}, raise fock_cutoff".format(
                    top, self.p.fock_cutoff, time))

    def default_initial(self):
        # both atoms in |1>, one cavity photon
        amplitudes = np.zeros(self.shape.dim, dtype=np.complex128)
        amplitudes[np.ravel_multi_index((0, 0, 1), self.shape.dims)] = 1.0
        return StateVector(self.shape, amplitudes, label="|1,1>|n=1>")

    def run_trajectory(self, initial=None, rng=None, stop_at_first_stokes=False):
        p = self.p
        if initial is None:
            initial = self.default_initial()
        if initial.shape != self.shape:
            raise ShapeError("Initial state has shape {}, model needs {}".format(
                list(initial.dims), list(self.shape.dims)))
        if rng is None:
            rng = np.random.default_rng(p.seed)
        psi = initial.normalized().amplitudes.copy()
        self.check_cutoff(psi, 0.0)

        record = TrajectoryRecord(params=p)
        self.snapshot(record, 0.0, psi)
        threshold = rng.random()
        n_steps = int(round(p.t_max / p.dt))
        for step in range(1, n_steps + 1):
            time = step * p.dt
            psi = self.step_matrix @ psi
            self.check_cutoff(psi / np.linalg.norm(psi), time)
            norm_sq = np.vdot(psi, psi).real
            if norm_sq <= threshold:
                channel, psi = self.jump(psi, rng)
                threshold = rng.random()
                if channel is None:
                    continue
                self.snapshot(record, time, psi)
                record.jumps.append(JumpEvent(time, channel, len(record.states) - 1))
                logging.debug("{} jump at t={:.4g}".format(channel, time))
                if stop_at_first_stokes and channel == STOKES:
                    break
            elif step % p.snapshot_every == 0:
                self.snapshot(record, time, psi)
        return record

    def jump(self, psi, rng):
        candidates = [(channel, op @ psi) for channel, op in self.jump_operators]
        weights = np.array([np.vdot(v, v).real for _, v in candidates])
        if not candidates or weights.sum() < 1e-300:
            # norm loss from integration error only, restart the clock
            return None, psi / np.linalg.norm(psi)
        choice = rng.choice(len(candidates), p=weights / weights.sum())
        channel, jumped = candidates[choice]
        return channel, jumped / np.linalg.norm(jumped)

    def snapshot(self, record, time, psi):
        record.times.append(time)
        record.survival.append(float(np.vdot(psi, psi).real))
        record.states.append(StateVector(self.shape, psi / np.linalg.norm(psi)))

    def evolve(self, psi, horizon):
        """No-jump evolution under the full generator, renormalized."""
        evolved = expm(-1j * self.effective * horizon) @ psi
        norm = np.linalg.norm(evolved)
        return evolved / norm if norm > 0 else evolved

    def energy(self, state):
        return float(np.vdot(state.amplitudes, self.hamiltonian @ state.amplitudes).real)


def build_hamiltonian(p):
    return Operator(LambdaModel(p).hamiltonian)


def run_trajectory(p, initial=None, stop_at_first_stokes=False):
    return LambdaModel(p).run_trajectory(initial, stop_at_first_stokes=stop_at_first_stokes)


def atomic_state(amplitudes_13):
    """Two-atom state from a {(level_I, level_II): amplitude} dict, normalized."""
    amplitudes = np.zeros(9, dtype=np.complex128)
    for (level_one, level_two), value in amplitudes_13.items():
        amplitudes[3 * (level_one - 1) + (level_two - 1)] = value
    return StateVector.from_amplitudes(amplitudes, dims=(3, 3), normalize=True)


def pumped_ce_state():
    """(|21> + |12>)/sqrt 2, the state created by photon absorption."""
    return atomic_state({(2, 1): 1.0, (1, 2): 1.0})


def robust_ce_state():
    """(|31> + |13>)/sqrt 2, the state left after Stokes emission."""
    return atomic_state({(3, 1): 1.0, (1, 3): 1.0})


def with_cavity(atoms, p, photons=0):
    field_state = np.zeros(p.fock_cutoff + 1, dtype=np.complex128)
    field_state[photons] = 1.0
    return StateVector(p.shape, np.kron(atoms.amplitudes, field_state), label=atoms.label)


def excitation_number(state, n_cavity_jumps=0):
    """<a^dag a> + P2 + P3 summed over atoms, plus excitations lost through the cavity."""
    probabilities = np.abs(state.tensor()) ** 2
    photons = (probabilities.sum(axis=(0, 1)) * np.arange(probabilities.shape[2])).sum()
    excited = probabilities[1:, :, :].sum() + probabilities[:, 1:, :].sum()
    return float(photons + excited + n_cavity_jumps)


def energy_ledger(p):
    return {
        "E12": p.epsilon2,
        "E13": p.epsilon3 + p.omega_s,
        "E13_min": p.epsilon3,
        "omega_s": p.omega_s,
    }


def first_jump_survival(p, times):
    """No-jump probability of |1,1>|1> in the two-state block {|1,1>|1>, sym|0>}.

    The block is closed under the generator for collective and individual
    Stokes jumps alike, so this is exact for the default initial state.
    """
    coupling = p.g * np.sqrt(2.0)
    block = np.array([[p.omega_c - 0.5j * p.kappa, coupling],
                      [coupling, p.epsilon2 - 0.5j * p.gamma_s]], dtype=np.complex128)
    start = np.array([1.0, 0.0], dtype=np.complex128)
    return np.array([np.linalg.norm(expm(-1j * block * t) @ start) ** 2
                     for t in np.atleast_1d(times)])


def stability_check(p, state, horizon):
    """1 - |<psi(0)|psi(horizon)>|^2 under the no-jump generator."""
    if state.dims == (3, 3):
        state = with_cavity(state, p)
    if state.shape != p.shape:
        raise ShapeError("stability_check needs shape {} or (3, 3), got {}".format(
            list(p.shape.dims), list(state.dims)))
    photon_weight = (np.abs(state.tensor()[:, :, 1:]) ** 2).sum()
    if photon_weight > PHOTON_TOL:
        raise ParamsError("stability_check needs an empty cavity, photon weight {:.3g}".format(
            photon_weight))
    model = LambdaModel(p)
    psi = state.normalized().amplitudes
    evolved = model.evolve(psi, horizon)
    return float(max(0.0, 1.0 - abs(np.vdot(psi, evolved)) ** 2))


def post_stokes_analysis(rec, horizon=None):
    stokes = rec.stokes_jumps()
    if not stokes:
        raise NoStokesJumpError("Trajectory has no Stokes jump")
    p = rec.params
    event = stokes[0]
    state = rec.states[event.index]
    rho = reduced_density(state, {0, 1}).entries
    target = robust_ce_state().amplitudes
    fidelity = float(np.vdot(target, rho @ target).real)
    eigenvalues, vectors = np.linalg.eigh(rho)
    atoms = StateVector.from_amplitudes(vectors[:, -1], dims=(3, 3), normalize=True)
    pair13 = two_level_pair_set((1, 3))
    is_ce, residual = ce_check(pair13, atoms)
    level_energy = np.diag([0.0, p.epsilon2, p.epsilon3])
    atomic_hamiltonian = np.kron(level_energy, np.eye(3)) + np.kron(np.eye(3), level_energy)
    atomic_energy = float(np.trace(rho @ atomic_hamiltonian).real)
    deviation = stability_check(p, atoms, p.t_max if horizon is None else horizon)
    return StokesReport(
        jump_time=event.time,
        fidelity=fidelity,
        purity=float(eigenvalues[-1]),
        is_ce=is_ce,
        residual=residual,
        total_variance=total_variance(pair13, atoms).total,
        atomic_energy=atomic_energy,
        energy_with_stokes_photon=atomic_energy + p.omega_s,
        stability_deviation=deviation,
        atomic_state=atoms)


def run_ensemble(p, n_trajectories, initial=None, workers=1, stop_at_first_stokes=True):
    model = LambdaModel(p)
    children = np.random.SeedSequence(p.seed).spawn(n_trajectories)

    def job(child):
        return model.run_trajectory(initial, np.random.default_rng(child), stop_at_first_stokes)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(job, children))
    else:
        records = [job(child) for child in children]

    reports, jump_table = [], []
    for index, record in enumerate(records):
        jump_table += [(index, jump.time, jump.channel) for jump in record.jumps]
        if record.stokes_jumps():
            reports.append(post_stokes_analysis(record))

    def mean(values):
        return float(np.mean(values)) if values else None

    return EnsembleReport(
        n_trajectories=n_trajectories,
        n_stokes=len(reports),
        mean_first_stokes_time=mean([r.jump_time for r in reports]),
        mean_fidelity=mean([r.fidelity for r in reports]),
        ce_pass_rate=mean([1.0 if r.is_ce else 0.0 for r in reports]),
        mean_total_variance=mean([r.total_variance for r in reports]),
        max_stability_deviation=max((r.stability_deviation for r in reports), default=None),
        first_stokes_times=[r.jump_time for r in reports],
        reports=reports,
        jump_table=jump_table)


def export_jump_table(report, path):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["trajectory", "time", "channel"])
        for index, time, channel in report.jump_table:
            writer.writerow([index, repr(time), channel])


def test():
    p = LambdaParams()
    record = run_trajectory(p, stop_at_first_stokes=True)
    print(energy_ledger(p))
    print(post_stokes_analysis(record).as_dict())


if (__name__ == '__main__'):
    test()
