"""Command-line driver: simulate | difftest | solution.

stdout carries records (line-delimited JSON or ASCII rows); stderr carries
diagnostics.  Exit code 0 iff every requested check passed, 2 for bad
configuration or arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Tuple

from .config import (
    ConfigError,
    RunConfig,
    SolutionSpec,
    euler_state_json,
    euler_trace_json,
    parse_config,
    parse_solution_file,
    toda_state_json,
    toda_trace_json,
)
from .difftest import DiffBounds, run_difftest
from .euler import EulerState, euler_step, same_occupancy
from .geometry import CapacityProfile
from .render import render_counts
from .solutions import (
    EulerSolitonParams,
    TauParams,
    euler_nsoliton,
    tau_toda_state,
    verify_euler_solution,
    verify_tau_solution,
)
from .toda import CapacityViolation, DegenerateState, TodaState, enutoda_step, from_euler, to_euler
from .xint import XInt, decode_xint


def _emit(line: str) -> None:
    sys.stdout.write(line + "\n")


def _diag(line: str) -> None:
    sys.stderr.write(line + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _euler_initial_from_solution(spec: SolutionSpec) -> EulerState:
    params = spec.params
    assert isinstance(params, EulerSolitonParams)
    if spec.n_range is None:
        raise ConfigError("a counts-level solution initial needs params.n_range")
    lo, hi = spec.n_range
    if lo < 0:
        raise ConfigError("n_range must start at box 0 or later for a simulation")
    sl = euler_nsoliton(params, lo, hi, 0)
    counts = sl.U
    if counts.min() < 0:
        raise ConfigError("solution slice has negative counts; check parameters")
    if len(counts) >= 2 and (counts[0] != 0 or counts[-1] != 0):
        raise ConfigError("solution support touches the n_range edge; widen n_range")
    return EulerState(counts=counts, profile=params.profile, time=0, window_start=lo)


def _toda_initial_from_solution(spec: SolutionSpec) -> TodaState:
    params = spec.params
    assert isinstance(params, TauParams)
    ts = tau_toda_state(params, 0)
    return TodaState(
        Q=ts.Q,
        E=ts.E,
        X0=spec.x0,
        profile=CapacityProfile(default_capacity=params.Delta),
        time=0,
    )


def _initial_states(cfg: RunConfig) -> Tuple[Optional[EulerState], Optional[TodaState]]:
    """Build the state(s) the requested representation needs, deriving the
    missing picture from the given one at t=0."""
    euler = cfg.initial_euler
    toda = cfg.initial_toda
    if cfg.initial_solution is not None:
        if cfg.initial_solution.kind == "euler":
            euler = _euler_initial_from_solution(cfg.initial_solution)
        else:
            toda = _toda_initial_from_solution(cfg.initial_solution)
    need_euler = cfg.representation in ("euler", "both")
    need_toda = cfg.representation in ("toda", "both")
    if need_euler and euler is None:
        euler = to_euler(toda)
    if need_toda and toda is None:
        toda = from_euler(euler)
    return (euler if need_euler else None, toda if need_toda else None)


def cmd_simulate(args) -> int:
    cfg = parse_config(args.config)
    steps = args.steps if args.steps is not None else cfg.steps
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    render = args.render if args.render is not None else cfg.render
    euler, toda = _initial_states(cfg)

    all_equal = True
    for _ in range(steps):
        record = {}
        if euler is not None:
            euler, etrace = euler_step(euler, cfg.schedule)
            record["t"] = euler.time
            record["euler"] = euler_state_json(euler, cfg.schedule)
            record["trace"] = euler_trace_json(etrace)
        if toda is not None:
            toda, ttrace = enutoda_step(toda, cfg.schedule)
            record["t"] = toda.time
            record["toda"] = toda_state_json(toda)
            record["toda_trace"] = toda_trace_json(ttrace)
        if euler is not None and toda is not None:
            equal = same_occupancy(euler, to_euler(toda))
            record["verdict"] = "equal" if equal else "mismatch"
            all_equal = all_equal and equal
        if render == "json":
            _emit(_dump(record))
        elif render == "ascii":
            shown = euler if euler is not None else to_euler(toda)
            line = f"t={record['t']:>3} {render_counts(shown)}"
            if "verdict" in record:
                line += f"  [{record['verdict']}]"
            _emit(line)
    if not all_equal:
        _diag("simulate: representations diverged")
        return 1
    return 0


def _parse_m_choices(text: str) -> Tuple[XInt, ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        out.append(decode_xint(part if part == "inf" else int(part)))
    if not out:
        raise ConfigError("m-choices must name at least one capacity")
    return tuple(out)


def cmd_difftest(args) -> int:
    bounds = DiffBounds(
        window=args.window,
        max_delta=args.max_delta,
        m_choices=_parse_m_choices(args.m_choices) if args.m_choices else (),
        steps=args.steps,
        include_toda=not args.euler_only,
    )
    report = run_difftest(args.cases, args.seed, bounds)
    _emit(_dump(report.to_json_dict()))
    _diag(
        f"difftest: {report.cases} cases, {report.steps_checked} steps, "
        f"{len(report.failures)} failures, {report.elapsed:.2f}s"
    )
    return 0 if report.ok else 1


def _parse_range(text: str, what: str) -> Tuple[int, int]:
    try:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"{what} must look like A:B") from None
    if lo > hi:
        raise ConfigError(f"{what}: need A <= B")
    return lo, hi


def cmd_solution(args) -> int:
    spec = parse_solution_file(args.params, args.type)
    t_lo, t_hi = _parse_range(args.t_range or ("0:10" if args.type == "euler" else "0:15"), "--t-range")
    if spec.kind == "euler":
        params = spec.params
        n_range = _parse_range(args.n_range, "--n-range") if args.n_range else spec.n_range
        if n_range is None:
            raise ConfigError("need --n-range or params.n_range for the counts-level solution")
        lo, hi = n_range
        if args.verify:
            report = verify_euler_solution(params, lo, hi, t_lo, t_hi)
            _emit(
                _dump(
                    {
                        "type": "euler",
                        "residuals": report.residuals,
                        "max_residual": report.max_residual,
                        "ok": report.ok,
                        "n_range": [lo, hi],
                        "t_range": [t_lo, t_hi],
                    }
                )
            )
            return 0 if report.ok else 1
        for t in range(t_lo, t_hi + 1):
            sl = euler_nsoliton(params, lo, hi, t)
            _emit(
                _dump(
                    {
                        "t": t,
                        "n_start": sl.n_start,
                        "U": sl.U.tolist(),
                        "Ubar": sl.Ubar.tolist(),
                        "Zbar": sl.Zbar.tolist(),
                    }
                )
            )
        return 0

    params = spec.params
    if args.verify:
        report = verify_tau_solution(params, t_lo, t_hi)
        _emit(
            _dump(
                {
                    "type": "tau",
                    "residuals": report.residuals,
                    "boundary_failures": report.boundary_failures,
                    "max_residual": report.max_residual,
                    "min_q": report.min_q,
                    "min_interior_e": report.min_interior_e,
                    "ok": report.ok,
                    "t_range": [t_lo, t_hi],
                }
            )
        )
        return 0 if report.ok else 1
    for t in range(t_lo, t_hi + 1):
        ts = tau_toda_state(params, t)
        _emit(
            _dump(
                {
                    "t": t,
                    "Q": list(ts.Q),
                    "E": list(ts.E),
                    "Qbar": list(ts.Qbar),
                    "Ebar": list(ts.Ebar),
                    "Cbar": list(ts.Cbar),
                    "Dbar": list(ts.Dbar),
                }
            )
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxball",
        description="Box-ball system with box and carrier capacities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a configured simulation")
    p_sim.add_argument("--config", required=True, help="JSON run configuration")
    p_sim.add_argument("--steps", type=int, default=None, help="override config steps")
    p_sim.add_argument(
        "--render", choices=["ascii", "json", "none"], default=None,
        help="override config render mode",
    )
    p_sim.set_defaults(func=cmd_simulate)

    default_seed = int(os.environ.get("BBS_SEED", "0"))
    p_diff = sub.add_parser("difftest", help="seeded differential test of all pictures")
    p_diff.add_argument("--cases", type=int, required=True)
    p_diff.add_argument("--seed", type=int, default=default_seed,
                        help="default from BBS_SEED, else 0")
    p_diff.add_argument("--steps", type=int, default=20)
    p_diff.add_argument("--window", type=int, default=32)
    p_diff.add_argument("--max-delta", type=int, default=5)
    p_diff.add_argument(
        "--m-choices", default=None,
        help="comma list of carrier capacities, e.g. 5,6,inf "
        "(default: max-delta..max-delta+5 and inf)",
    )
    p_diff.add_argument(
        "--euler-only", action="store_true",
        help="skip the size-coordinate route (allows capacities above M)",
    )
    p_diff.set_defaults(func=cmd_difftest)

    p_sol = sub.add_parser("solution", help="evaluate or verify a closed-form solution")
    p_sol.add_argument("--params", required=True, help="JSON parameter file")
    p_sol.add_argument("--type", choices=["euler", "tau"], required=True)
    p_sol.add_argument("--verify", action="store_true",
                       help="check the update rules instead of printing slices")
    p_sol.add_argument("--t-range", default=None, help="A:B (default 0:10 / 0:15)")
    p_sol.add_argument("--n-range", default=None, help="A:B box window (euler type)")
    p_sol.set_defaults(func=cmd_solution)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _diag(f"error: {exc}")
        return 2
    except (CapacityViolation, DegenerateState) as exc:
        _diag(f"error: {type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
