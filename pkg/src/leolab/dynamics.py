"""Parity-kick evolution: pulsed decoupling sequences and their ideal limit.

One cycle is free evolution for tau, the inverse pulse, free evolution for
tau again, then the pulse; both free segments count toward elapsed time,
so n cycles cover a total free time of 2 n tau. Because the pulse flips
the sign of every leakage coupling, the cycle is a first-order splitting
step for the leakage-free generator, and the sequence converges to
exp(-i (H_c + H_perp) T) like 1/n with an O(tau^2) single-cycle defect.

Pulses are ideal (instantaneous, error-free) in this version.
"""

from __future__ import annotations

import concurrent.futures
import os
import tempfile
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .leo import LeakageEliminationOperator
from .models import SystemBathModel
from .opalg import Operator, hermitian_exponential

STATE_CODE_TOL = 1e-12
STATE_NORM_TOL = 1e-10

REPORT_CSV_HEADER = "step,elapsed_time,leakage_population,code_fidelity"
SWEEP_CSV_HEADER = "n,tau,final_leakage,distance_to_limit"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True, eq=False)
class ParityKickSchedule:
    """Pulse timing: n_cycles cycles of two tau segments around the pulses.

    pulses=None means free evolution on the same time grid, which is the
    reference every pulsed run is compared against.
    """

    n_cycles: int
    tau: float
    pulses: LeakageEliminationOperator | None
    ideal_pulses: bool = True

    def __post_init__(self):
        if self.n_cycles < 0:
            raise ValueError("n_cycles must be nonnegative")
        if not (self.tau > 0.0 and np.isfinite(self.tau)):
            raise ValueError("tau must be positive and finite")
        if not self.ideal_pulses:
            raise ValueError("only ideal pulses are supported")

    @property
    def total_free_time(self) -> float:
        return 2 * self.n_cycles * self.tau


@dataclass(frozen=True)
class SimulationSample:
    step: int
    elapsed_time: float
    leakage_population: float
    code_fidelity: float


@dataclass(frozen=True, eq=False)
class SimulationReport:
    schedule: ParityKickSchedule
    samples: tuple[SimulationSample, ...]
    distance_to_limit: float
    metadata: Mapping[str, object]

    def __post_init__(self):
        for s in self.samples:
            if not -1e-12 <= s.leakage_population <= 1.0 + 1e-12:
                raise ValueError(
                    f"leakage population {s.leakage_population} outside [0, 1]"
                )

    @property
    def final_leakage(self) -> float:
        return self.samples[-1].leakage_population

    def csv_text(self) -> str:
        lines = [REPORT_CSV_HEADER]
        for s in self.samples:
            lines.append(
                f"{s.step},{_fmt(s.elapsed_time)},"
                f"{_fmt(s.leakage_population)},{_fmt(s.code_fidelity)}"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self, path: str) -> None:
        _atomic_write_text(path, self.csv_text())


@dataclass(frozen=True)
class SweepRow:
    n: int
    tau: float
    final_leakage: float
    distance_to_limit: float


@dataclass(frozen=True, eq=False)
class SweepTable:
    rows: tuple[SweepRow, ...]
    metadata: Mapping[str, object]

    def csv_text(self) -> str:
        lines = [SWEEP_CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.n},{_fmt(r.tau)},{_fmt(r.final_leakage)},"
                f"{_fmt(r.distance_to_limit)}"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self, path: str) -> None:
        _atomic_write_text(path, self.csv_text())


# ---------------------------------------------------------------------------
# propagators
# ---------------------------------------------------------------------------


def _joint_pulse(model: SystemBathModel,
                 pulse: LeakageEliminationOperator) -> np.ndarray:
    if pulse.code.label != model.code.label or pulse.dim != model.system_dim:
        raise ValueError(
            f"pulse targets code {pulse.code.label!r} (dim {pulse.dim}), model "
            f"uses {model.code.label!r} (dim {model.system_dim})"
        )
    return np.kron(pulse.unitary.mat, np.eye(model.bath_dim))


def _kick_cycle(model: SystemBathModel, tau: float,
                pulse: LeakageEliminationOperator) -> np.ndarray:
    segment = hermitian_exponential(model.h_joint, -tau).mat
    r = _joint_pulse(model, pulse)
    return segment @ r.conj().T @ segment @ r


def parity_kick_unitary(model: SystemBathModel,
                        schedule: ParityKickSchedule) -> Operator:
    """Total propagator of the pulsed sequence; identity for zero cycles."""
    if schedule.pulses is None:
        raise ValueError("schedule has no pulses; use free evolution directly")
    if schedule.n_cycles == 0:
        return Operator(np.eye(model.joint_dim), frozenset({"unitary"}))
    cycle = _kick_cycle(model, schedule.tau, schedule.pulses)
    u = np.linalg.matrix_power(cycle, schedule.n_cycles)
    return Operator(u, frozenset({"unitary"}))


def decoupled_limit_unitary(model: SystemBathModel,
                            total_free_time: float) -> Operator:
    """Evolution under the leakage-free generator H_c + H_perp."""
    h_dec = Operator(model.h_c.mat + model.h_perp.mat, frozenset({"hermitian"}))
    return hermitian_exponential(h_dec, -total_free_time)


# ---------------------------------------------------------------------------
# state-level simulation
# ---------------------------------------------------------------------------


def _partial_trace_bath(psi: np.ndarray, sys_dim: int, bath_dim: int) -> np.ndarray:
    a = psi.reshape(sys_dim, bath_dim)
    return a @ a.conj().T


def _sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    s = _sqrt_psd(rho)
    w = np.linalg.eigvalsh(s @ sigma @ s)
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(f, 1.0) if f < 1.0 + 1e-9 else f


def _code_fidelity(model: SystemBathModel, psi: np.ndarray,
                   target: np.ndarray) -> float:
    """Fidelity of the bath-traced state against the code-projected target."""
    rho = _partial_trace_bath(psi, model.system_dim, model.bath_dim)
    sigma = _partial_trace_bath(target, model.system_dim, model.bath_dim)
    p = model.code.projector
    sigma = p @ sigma @ p
    tr = np.trace(sigma).real
    if tr <= 0.0:
        return 0.0
    return _uhlmann_fidelity(rho, sigma / tr)


def _leakage(model: SystemBathModel, psi: np.ndarray) -> float:
    return float(np.vdot(psi, model.joint_complement_projector @ psi).real)


def simulate(
    model: SystemBathModel,
    schedule: ParityKickSchedule,
    initial_code_state: np.ndarray,
) -> SimulationReport:
    """Propagate a code state through the schedule, tracking leakage.

    The initial state is an ambient system vector that must lie in the code;
    it is tensored with the model's initial bath state. Records one sample
    per completed cycle (plus the initial point): leakage population and the
    fidelity of the bath-traced system state against the decoupled-limit
    target. With pulses=None the same grid is used for free evolution.
    """
    state = np.asarray(initial_code_state, dtype=complex)
    if state.shape != (model.system_dim,):
        raise ValueError(
            f"initial state must be a length-{model.system_dim} vector"
        )
    if abs(np.linalg.norm(state) - 1.0) > STATE_NORM_TOL:
        raise ValueError("initial state must be normalized")
    out_of_code = np.linalg.norm(model.code.complement_projector @ state)
    if out_of_code > STATE_CODE_TOL:
        raise ValueError(
            f"initial state leaves the code subspace by {out_of_code:.3e}"
        )

    pulsed = schedule.pulses is not None
    n = schedule.n_cycles
    tau = schedule.tau
    if pulsed:
        cycle = _kick_cycle(model, tau, schedule.pulses)
    else:
        cycle = hermitian_exponential(model.h_joint, -2 * tau).mat
    h_dec = Operator(model.h_c.mat + model.h_perp.mat, frozenset({"hermitian"}))
    target_step = hermitian_exponential(h_dec, -2 * tau).mat

    psi = np.kron(state, model.initial_bath_state)
    target = psi.copy()
    samples = [
        SimulationSample(0, 0.0, _leakage(model, psi),
                         _code_fidelity(model, psi, target))
    ]
    for k in range(1, n + 1):
        psi = cycle @ psi
        target = target_step @ target
        samples.append(
            SimulationSample(
                k, 2 * tau * k, _leakage(model, psi),
                _code_fidelity(model, psi, target),
            )
        )

    if n == 0:
        u_total = np.eye(model.joint_dim)
    else:
        u_total = np.linalg.matrix_power(cycle, n)
    u_total = Operator(u_total, frozenset({"unitary"}))  # rechecks unitarity
    u_limit = decoupled_limit_unitary(model, schedule.total_free_time)
    distance = float(np.linalg.norm(u_total.mat - u_limit.mat, 2))

    metadata = {
        "model": model.label,
        "g": model.coupling_strength,
        "bath_seed": model.bath_seed,
        "bath_dim": model.bath_dim,
        "pulse_route": schedule.pulses.route if pulsed else "free",
        "n_cycles": n,
        "tau": tau,
        "total_free_time": schedule.total_free_time,
    }
    return SimulationReport(schedule, tuple(samples), distance, metadata)


def sweep_cycles(
    model: SystemBathModel,
    total_free_time: float,
    n_list: Sequence[int],
    initial_code_state: np.ndarray,
    pulses: LeakageEliminationOperator,
    max_workers: int | None = None,
) -> SweepTable:
    """Convergence sweep: one pulsed run per cycle count at fixed total time.

    n_list must be ascending positive integers. Runs are independent, so
    they fan out over a thread pool; max_workers=None uses the machine's
    parallelism and 1 forces serial execution. Row order follows n_list
    either way.
    """
    if not (total_free_time > 0 and np.isfinite(total_free_time)):
        raise ValueError("total_free_time must be positive and finite")
    ns = [int(n) for n in n_list]
    if not ns or any(n < 1 for n in ns) or ns != sorted(set(ns)):
        raise ValueError("n_list must be strictly ascending positive integers")

    def one(n: int) -> SweepRow:
        tau = total_free_time / (2 * n)
        report = simulate(
            model, ParityKickSchedule(n, tau, pulses), initial_code_state
        )
        return SweepRow(n, tau, report.final_leakage, report.distance_to_limit)

    workers = (os.cpu_count() or 1) if max_workers is None else max_workers
    workers = max(1, min(workers, len(ns)))
    if workers == 1:
        rows = [one(n) for n in ns]
    else:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, ns))
    metadata = {
        "model": model.label,
        "g": model.coupling_strength,
        "bath_seed": model.bath_seed,
        "total_free_time": total_free_time,
        "pulse_route": pulses.route,
    }
    return SweepTable(tuple(rows), metadata)
