"""Command-line front end.

Five subcommands cover the workflow: decompose (classify operators against
a code), synth (build a pulse by a named route), verify (check a candidate
pulse), simulate (one pulsed or free run), and sweep (convergence over
cycle counts). All heavy inputs come from JSON config files; outputs are
written atomically so interrupted runs never leave torn files.

Exit codes: 0 success, 1 validation or config error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import codes as codes_mod
from . import leo as leo_mod
from .classify import classification_to_csv, classify_pauli_strings, decompose
from .dynamics import (
    ParityKickSchedule,
    SimulationReport,
    SweepTable,
    _atomic_write_text,
    simulate,
    sweep_cycles,
)
from .models import model_from_config
from .opalg import (
    NumericalDegeneracyError,
    Operator,
    operator_from_json,
    operator_to_json,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

_PROBE_SPEC = re.compile(r"^random:(\d+):seed=(\d+)$")


class ConfigError(ValueError):
    """Invalid command line, config file, or input combination."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route that through the
    # validation-error path instead
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    """Parsed and partially validated invocation."""

    command: str
    code_label: str | None = None
    route: str | None = None
    out_path: str | None = None
    operator_path: str | None = None
    sigma_path: str | None = None
    generator_spec: str | None = None
    leo_path: str | None = None
    probe_spec: str = "random:100:seed=5"
    config_path: str | None = None
    n_list: tuple[int, ...] = ()
    free: bool = False
    plot_out: str | None = None
    seed_override: int | None = None
    raw_config: dict = field(default_factory=dict)


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(
            f"{path}:{err.lineno}:{err.colno}: invalid JSON: {err.msg}"
        ) from err
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    return data


def _dump_json(path: str, data: dict) -> None:
    _atomic_write_text(path, json.dumps(data, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leolab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="classify operators against a code")
    p.add_argument("--code", required=True, help="code label, e.g. dfs2")
    p.add_argument("--operator", help="operator JSON to decompose "
                   "(default: full Pauli-string table)")
    p.add_argument("--out", required=True, help="output CSV or JSON path")

    p = sub.add_parser("synth", help="synthesize a pulse by route")
    p.add_argument("--code", required=True)
    p.add_argument("--route", required=True,
                   help=f"one of: {', '.join(leo_mod.ROUTES)}")
    p.add_argument("--sigma", help="involution operator JSON (canonical route)")
    p.add_argument("--generator",
                   help="generator operator JSON, or 'half_s_squared' "
                   "(generalized route)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="verify a candidate pulse")
    p.add_argument("--leo", required=True, help="pulse or operator JSON")
    p.add_argument("--code", help="code label (default: from the file)")
    p.add_argument("--probes", default="random:100:seed=5",
                   help="probe spec, e.g. random:100:seed=5")
    p.add_argument("--out", help="optional report JSON path")

    p = sub.add_parser("simulate", help="run one schedule from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="timeseries CSV path")
    p.add_argument("--free", action="store_true",
                   help="drop the pulses, keep the time grid")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--plot-out", help="two-column (time, leakage) data file")

    p = sub.add_parser("sweep", help="convergence sweep over cycle counts")
    p.add_argument("--config", required=True)
    p.add_argument("--n", required=True,
                   help="comma-separated cycle counts, e.g. 1,2,4,8")
    p.add_argument("--out", required=True, help="sweep CSV path")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--plot-out", help="two-column log-log convergence file")
    return parser


def config_from_args(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command)
    cfg.code_label = getattr(args, "code", None)
    cfg.out_path = getattr(args, "out", None)
    cfg.operator_path = getattr(args, "operator", None)
    cfg.route = getattr(args, "route", None)
    cfg.sigma_path = getattr(args, "sigma", None)
    cfg.generator_spec = getattr(args, "generator", None)
    cfg.leo_path = getattr(args, "leo", None)
    cfg.probe_spec = getattr(args, "probes", cfg.probe_spec)
    cfg.config_path = getattr(args, "config", None)
    cfg.free = bool(getattr(args, "free", False))
    cfg.plot_out = getattr(args, "plot_out", None)
    cfg.seed_override = getattr(args, "seed", None)
    if getattr(args, "n", None):
        try:
            cfg.n_list = tuple(int(tok) for tok in args.n.split(","))
        except ValueError as err:
            raise ConfigError(f"bad cycle list {args.n!r}: {err}") from err
    if cfg.config_path:
        cfg.raw_config = load_json(cfg.config_path)
    return cfg


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------


def _build_code(label: str):
    try:
        return codes_mod.build_code(label)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _run_decompose(cfg: RunConfig) -> int:
    code = _build_code(cfg.code_label)
    if cfg.operator_path:
        op = operator_from_json(load_json(cfg.operator_path))
        dec = decompose(op, code)
        payload = {
            "code_label": code.label,
            "e_norm": dec.e_norm,
            "eperp_norm": dec.eperp_norm,
            "l_norm": dec.l_norm,
            "e_part": operator_to_json(dec.e_part),
            "eperp_part": operator_to_json(dec.eperp_part),
            "l_part": operator_to_json(dec.l_part),
        }
        _dump_json(cfg.out_path, payload)
        print(
            f"decompose: leakage norm {dec.l_norm:.17g} against "
            f"{code.label} -> {cfg.out_path}"
        )
        return EXIT_OK
    n_qubits = code.ambient_dim.bit_length() - 1
    if 2**n_qubits != code.ambient_dim:
        raise ConfigError(
            f"code {code.label!r} has ambient dim {code.ambient_dim}, not a "
            f"qubit register; pass --operator for a single decomposition"
        )
    table = classify_pauli_strings(n_qubits, code)
    counts: dict[str, int] = {}
    for row in table.values():
        counts[row.klass] = counts.get(row.klass, 0) + 1
    _atomic_write_text(cfg.out_path, classification_to_csv(table))
    summary = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
    print(f"decompose: {len(table)} pauli strings -> {summary} -> {cfg.out_path}")
    return EXIT_OK


def _synthesize(cfg: RunConfig):
    route = cfg.route
    code_label = cfg.code_label
    if route not in leo_mod.ROUTES:
        raise ConfigError(
            f"unknown route {route!r}; valid routes: {', '.join(leo_mod.ROUTES)}"
        )
    code = _build_code(code_label)
    if route == "projector":
        return leo_mod.projector_leo(code)
    if route == "number_op":
        if not code.label.startswith("bare"):
            raise ConfigError("route number_op needs a bare<n> code")
        return leo_mod.number_operator_leo(code.ambient_dim)
    if route == "phase_shifter":
        if code.label != "dual_rail":
            raise ConfigError("route phase_shifter needs the dual_rail code")
        return leo_mod.phase_shifter_leo()
    if route == "s_squared":
        if code.label != "dfs4":
            raise ConfigError("route s_squared needs the dfs4 code")
        return leo_mod.s_squared_leo()
    if route == "exchange_2dfs":
        if code.label != "dfs2":
            raise ConfigError("route exchange_2dfs needs the dfs2 code")
        return leo_mod.exchange_dfs2_leo()
    if route == "canonical":
        if not cfg.sigma_path:
            raise ConfigError("route canonical needs --sigma <operator.json>")
        sigma = operator_from_json(load_json(cfg.sigma_path), tags=("hermitian",))
        return leo_mod.canonical_leo(sigma, code)
    # generalized
    if not cfg.generator_spec:
        raise ConfigError(
            "route generalized needs --generator <operator.json|half_s_squared>"
        )
    if cfg.generator_spec == "half_s_squared":
        gen = Operator(codes_mod.s_squared(4).mat / 2.0, frozenset({"hermitian"}))
    else:
        gen = operator_from_json(load_json(cfg.generator_spec),
                                 tags=("hermitian",))
    return leo_mod.generalized_leo(gen, code)


def _run_synth(cfg: RunConfig) -> int:
    pulse = _synthesize(cfg)
    _dump_json(cfg.out_path, leo_mod.leo_to_json(pulse))
    print(
        f"synth: {pulse.route} pulse for {pulse.code.label}, structural "
        f"residual {pulse.structural_error():.3e} -> {cfg.out_path}"
    )
    return EXIT_OK


def _parse_probes(spec: str, dim: int) -> list[Operator]:
    m = _PROBE_SPEC.match(spec)
    if not m:
        raise ConfigError(
            f"bad probe spec {spec!r}; expected random:<count>:seed=<seed>"
        )
    return leo_mod.random_probes(dim, int(m.group(1)), int(m.group(2)))


def _run_verify(cfg: RunConfig) -> int:
    data = load_json(cfg.leo_path)
    label = cfg.code_label or data.get("code_label")
    if not label:
        raise ConfigError("no code label: pass --code or use a pulse JSON")
    code = _build_code(str(label))
    candidate = operator_from_json(data)
    if candidate.dim != code.ambient_dim:
        raise ConfigError(
            f"operator dim {candidate.dim} does not match code "
            f"{code.label} (ambient {code.ambient_dim})"
        )
    probes = _parse_probes(cfg.probe_spec, code.ambient_dim)
    report = leo_mod.verify_leo(candidate, code, probes)
    if cfg.out_path:
        payload = {
            "passed": report.passed,
            "phase": [report.phase.real, report.phase.imag],
            "structural_residual": report.structural_residual,
            "max_residual": report.max_residual,
            "tolerance": report.tolerance,
            "probes": [
                {
                    "index": p.index,
                    "anticommutator_leakage": p.anticommutator_leakage,
                    "commutator_code": p.commutator_code,
                    "commutator_outside": p.commutator_outside,
                }
                for p in report.probe_checks
            ],
        }
        _dump_json(cfg.out_path, payload)
    print(f"verify: {report.summary()}")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def _initial_state(config: dict, code) -> np.ndarray:
    spec = config.get("initial_state", "code:0")
    if isinstance(spec, str):
        m = re.match(r"^code:(\d+)$", spec)
        if not m:
            raise ConfigError(
                f"bad initial_state {spec!r}; expected code:<k> or an object "
                f"with re/im arrays"
            )
        k = int(m.group(1))
        if k >= code.code_dim:
            raise ConfigError(
                f"initial_state index {k} out of range for code dim "
                f"{code.code_dim}"
            )
        return code.basis[:, k]
    if isinstance(spec, dict):
        try:
            re_part = np.array(spec["re"], dtype=float)
            im_part = np.array(spec["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError(f"bad initial_state object: {err}") from err
        return re_part + 1j * im_part
    raise ConfigError("initial_state must be a string or an object")


def _pulse_for_model(config: dict, model):
    pulse_cfg = config.get("leo", {})
    if not isinstance(pulse_cfg, dict):
        raise ConfigError("'leo' must be an object with a 'route'")
    route = pulse_cfg.get("route", "projector")
    sub = RunConfig(
        command="synth",
        code_label=model.code.label,
        route=route,
        sigma_path=pulse_cfg.get("sigma"),
        generator_spec=pulse_cfg.get("generator"),
    )
    return _synthesize(sub)


def _schedule_params(config: dict) -> tuple[int, float]:
    sched = config.get("schedule")
    if not isinstance(sched, dict):
        raise ConfigError("config needs a 'schedule' object")
    try:
        n_cycles = int(sched["n_cycles"])
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"schedule needs integer n_cycles: {err}") from err
    has_tau = "tau" in sched
    has_total = "total_time" in sched
    if has_tau == has_total:
        raise ConfigError("schedule needs exactly one of 'tau' or 'total_time'")
    if has_tau:
        tau = float(sched["tau"])
    else:
        total = float(sched["total_time"])
        if n_cycles < 1:
            raise ConfigError("total_time schedules need n_cycles >= 1")
        tau = total / (2 * n_cycles)
    if not (tau > 0 and math.isfinite(tau)):
        raise ConfigError("schedule tau must be positive and finite")
    return n_cycles, tau


def _model_from_cfg(cfg: RunConfig):
    config = dict(cfg.raw_config)
    if cfg.seed_override is not None:
        config["seed"] = cfg.seed_override
    try:
        return model_from_config(config), config
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _run_simulate(cfg: RunConfig) -> int:
    model, config = _model_from_cfg(cfg)
    n_cycles, tau = _schedule_params(config)
    pulses = None if cfg.free else _pulse_for_model(config, model)
    schedule = ParityKickSchedule(n_cycles, tau, pulses)
    state = _initial_state(config, model.code)
    try:
        report = simulate(model, schedule, state)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    report.to_csv(cfg.out_path)
    if cfg.plot_out:
        _atomic_write_text(cfg.plot_out, emit_plot_data(report, "timeseries"))
    kind = "free" if cfg.free else f"pulsed ({report.metadata['pulse_route']})"
    print(
        f"simulate: {kind}, final leakage "
        f"{report.final_leakage:.17g} after {n_cycles} cycles "
        f"(T={schedule.total_free_time:.17g}) -> {cfg.out_path}"
    )
    return EXIT_OK


def _run_sweep(cfg: RunConfig) -> int:
    model, config = _model_from_cfg(cfg)
    n_cycles, tau = _schedule_params(config)
    total = 2 * n_cycles * tau
    pulses = _pulse_for_model(config, model)
    state = _initial_state(config, model.code)
    env = os.environ.get("LEOLAB_THREADS", "").strip()
    max_workers = None
    if env:
        try:
            max_workers = max(1, int(env))
        except ValueError as err:
            raise ConfigError(f"bad LEOLAB_THREADS value {env!r}") from err
    try:
        table = sweep_cycles(model, total, cfg.n_list, state, pulses,
                             max_workers=max_workers)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    table.to_csv(cfg.out_path)
    if cfg.plot_out:
        _atomic_write_text(cfg.plot_out, emit_plot_data(table, "convergence"))
    last = table.rows[-1]
    print(
        f"sweep: {len(table.rows)} runs at T={total:.17g}, distance at "
        f"n={last.n}: {last.distance_to_limit:.17g} -> {cfg.out_path}"
    )
    return EXIT_OK


def emit_plot_data(obj: SimulationReport | SweepTable, style: str) -> str:
    """Two-column whitespace-separated plot data.

    timeseries: (elapsed_time, leakage_population) from a simulation report.
    convergence: (log10 n, log10 distance_to_limit) from a sweep table.
    """
    lines = []
    if style == "timeseries":
        if not isinstance(obj, SimulationReport):
            raise ConfigError("timeseries plot needs a simulation report")
        for s in obj.samples:
            lines.append(f"{s.elapsed_time:.17g} {s.leakage_population:.17g}")
    elif style == "convergence":
        if not isinstance(obj, SweepTable):
            raise ConfigError("convergence plot needs a sweep table")
        for r in obj.rows:
            dist = max(r.distance_to_limit, 1e-300)
            lines.append(f"{math.log10(r.n):.17g} {math.log10(dist):.17g}")
    else:
        raise ConfigError(f"unknown plot style {style!r}")
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "decompose": _run_decompose,
    "synth": _run_synth,
    "verify": _run_verify,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
}


def run(cfg: RunConfig) -> int:
    """Execute a parsed invocation; returns the process exit code."""
    try:
        return _COMMANDS[cfg.command](cfg)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDegeneracyError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: Sequence[str] | None = None) -> None:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else list(argv))
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    sys.exit(run(cfg))


if __name__ == "__main__":
    main()
