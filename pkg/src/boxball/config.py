"""Strict JSON configuration and state (de)serialization.

Unknown keys are rejected everywhere so a typo never silently changes a
run.  Integers encode as JSON numbers; the two infinities encode as the
strings "inf" and "-inf".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .euler import EulerState, EulerStepTrace
from .geometry import CapacityProfile, CarrierSchedule
from .solutions import EulerSolitonParams, TauParams
from .toda import TodaState, TodaStepTrace
from .xint import decode_xint, encode_xint


class ConfigError(ValueError):
    """Malformed configuration, with the offending key or field named."""


def _check_keys(obj: dict, where: str, allowed: set, required: set) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"missing key(s) {missing} in {where}")


def _int(obj, where: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ConfigError(f"{where} must be an integer, got {obj!r}")
    return obj


def _int_list(obj, where: str) -> Tuple[int, ...]:
    if not isinstance(obj, list):
        raise ConfigError(f"{where} must be an array of integers")
    return tuple(_int(v, f"{where}[{i}]") for i, v in enumerate(obj))


def parse_profile(obj, where: str = "profile") -> CapacityProfile:
    _check_keys(obj, where, {"window_start", "capacities", "default"}, set())
    try:
        return CapacityProfile(
            capacities=_int_list(obj.get("capacities", []), f"{where}.capacities"),
            window_start=_int(obj.get("window_start", 0), f"{where}.window_start"),
            default_capacity=_int(obj.get("default", 1), f"{where}.default"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def profile_json(profile: CapacityProfile) -> dict:
    return {
        "window_start": profile.window_start,
        "capacities": list(profile.capacities),
        "default": profile.default_capacity,
    }


def parse_schedule(obj, where: str = "schedule") -> CarrierSchedule:
    _check_keys(obj, where, {"entries", "default"}, set())
    entries = obj.get("entries", {})
    if not isinstance(entries, dict):
        raise ConfigError(f"{where}.entries must be an object mapping t to M")
    parsed = {}
    for key, val in entries.items():
        try:
            t = int(key)
        except ValueError:
            raise ConfigError(f"{where}.entries key {key!r} is not an integer") from None
        try:
            parsed[t] = decode_xint(val)
        except ValueError as exc:
            raise ConfigError(f"{where}.entries[{key}]: {exc}") from exc
    try:
        default = decode_xint(obj.get("default", "inf"))
        return CarrierSchedule(entries=parsed, default=default)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def schedule_json(schedule: CarrierSchedule) -> dict:
    return {
        "entries": {str(t): encode_xint(m) for t, m in schedule.entries},
        "default": encode_xint(schedule.default),
    }


def parse_euler_state(obj, profile: CapacityProfile, where: str = "initial.euler") -> EulerState:
    _check_keys(obj, where, {"time", "window_start", "counts"}, {"counts"})
    try:
        return EulerState(
            counts=_int_list(obj["counts"], f"{where}.counts"),
            profile=profile,
            time=_int(obj.get("time", 0), f"{where}.time"),
            window_start=_int(obj.get("window_start", 0), f"{where}.window_start"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def euler_state_json(state: EulerState, schedule: Optional[CarrierSchedule] = None) -> dict:
    out = {
        "time": state.time,
        "window_start": state.window_start,
        "counts": state.counts.tolist(),
        "profile": profile_json(state.profile),
    }
    if schedule is not None:
        out["schedule"] = schedule_json(schedule)
    return out


def euler_trace_json(trace: EulerStepTrace) -> dict:
    return {
        "limited_counts": trace.limited_counts.tolist(),
        "carrier_loads": trace.carrier_loads.tolist(),
        "removed": trace.removed.tolist(),
        "recovered": trace.recovered.tolist(),
    }


def parse_toda_state(obj, profile: CapacityProfile, where: str = "initial.toda") -> TodaState:
    _check_keys(obj, where, {"time", "N", "Q", "E", "X0"}, {"Q", "E", "X0"})
    q = _int_list(obj["Q"], f"{where}.Q")
    e = _int_list(obj["E"], f"{where}.E")
    if "N" in obj and _int(obj["N"], f"{where}.N") != len(q):
        raise ConfigError(f"{where}.N does not match len(Q)")
    try:
        return TodaState(
            Q=q,
            E=e,
            X0=_int(obj["X0"], f"{where}.X0"),
            profile=profile,
            time=_int(obj.get("time", 0), f"{where}.time"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def toda_state_json(state: TodaState) -> dict:
    return {
        "time": state.time,
        "N": state.N,
        "Q": list(state.Q),
        "E": list(state.E),
        "X0": state.X0,
        "profile": profile_json(state.profile),
    }


def toda_trace_json(trace: TodaStepTrace) -> dict:
    return {
        "Qbar": list(trace.Qbar),
        "Ebar": list(trace.Ebar),
        "Cbar": list(trace.Cbar),
        "Dbar": list(trace.Dbar),
        "Xbar0": trace.Xbar0,
        "K": list(trace.K),
        "Lam": list(trace.Lam),
    }


SolutionParams = Union[EulerSolitonParams, TauParams]


@dataclass(frozen=True)
class SolutionSpec:
    kind: str  # "euler" | "tau"
    params: SolutionParams
    n_range: Optional[Tuple[int, int]] = None  # euler kind only
    x0: int = 0  # tau kind only: anchor for a size-coordinate initial state


def parse_solution_params(obj, kind: str, where: str = "params") -> SolutionSpec:
    if kind == "euler":
        _check_keys(
            obj, where, {"N", "P", "Xi", "profile", "schedule", "n_range"}, {"P", "Xi"}
        )
        profile = parse_profile(obj.get("profile", {}), f"{where}.profile")
        schedule = parse_schedule(obj.get("schedule", {}), f"{where}.schedule")
        p = _int_list(obj["P"], f"{where}.P")
        xi = _int_list(obj["Xi"], f"{where}.Xi")
        if "N" in obj and _int(obj["N"], f"{where}.N") != len(p):
            raise ConfigError(f"{where}.N does not match len(P)")
        n_range = None
        if "n_range" in obj:
            pair = _int_list(obj["n_range"], f"{where}.n_range")
            if len(pair) != 2 or pair[0] > pair[1]:
                raise ConfigError(f"{where}.n_range must be [lo, hi] with lo <= hi")
            n_range = (pair[0], pair[1])
        try:
            params = EulerSolitonParams(P=p, Xi=xi, profile=profile, schedule=schedule)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        return SolutionSpec(kind="euler", params=params, n_range=n_range)
    if kind == "tau":
        _check_keys(obj, where, {"N", "P", "W", "Delta", "schedule", "X0"}, {"P", "W", "Delta"})
        schedule = parse_schedule(obj.get("schedule", {}), f"{where}.schedule")
        p = _int_list(obj["P"], f"{where}.P")
        w = _int_list(obj["W"], f"{where}.W")
        if "N" in obj and _int(obj["N"], f"{where}.N") != len(p):
            raise ConfigError(f"{where}.N does not match len(P)")
        try:
            params = TauParams(
                P=p, W=w, Delta=_int(obj["Delta"], f"{where}.Delta"), schedule=schedule
            )
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        return SolutionSpec(
            kind="tau", params=params, x0=_int(obj.get("X0", 0), f"{where}.X0")
        )
    raise ConfigError(f"solution type must be \"euler\" or \"tau\", got {kind!r}")


@dataclass(frozen=True)
class RunConfig:
    representation: str  # euler | toda | both
    steps: int
    render: str  # ascii | json | none
    seed: Optional[int]
    profile: CapacityProfile
    schedule: CarrierSchedule
    initial_euler: Optional[EulerState] = None
    initial_toda: Optional[TodaState] = None
    initial_solution: Optional[SolutionSpec] = None


_TOP_KEYS = {
    "representation",
    "steps",
    "render",
    "seed",
    "profile",
    "schedule",
    "initial",
}


def parse_config_dict(data: dict) -> RunConfig:
    _check_keys(data, "config", _TOP_KEYS, {"representation", "steps", "initial"})
    rep = data["representation"]
    if rep not in ("euler", "toda", "both"):
        raise ConfigError(f"representation must be euler|toda|both, got {rep!r}")
    steps = _int(data["steps"], "steps")
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    render = data.get("render", "ascii")
    if render not in ("ascii", "json", "none"):
        raise ConfigError(f"render must be ascii|json|none, got {render!r}")
    seed = data.get("seed")
    if seed is not None:
        seed = _int(seed, "seed")

    initial = data["initial"]
    _check_keys(initial, "initial", {"euler", "toda", "solution"}, set())
    given = [k for k in ("euler", "toda", "solution") if k in initial]
    if len(given) != 1:
        raise ConfigError("initial must contain exactly one of euler|toda|solution")

    if given[0] == "solution":
        sol_obj = initial["solution"]
        _check_keys(sol_obj, "initial.solution", {"type", "params"}, {"type", "params"})
        spec = parse_solution_params(
            sol_obj["params"], sol_obj["type"], "initial.solution.params"
        )
        if "profile" in data or "schedule" in data:
            raise ConfigError(
                "with a solution initial, profile and schedule come from the "
                "solution params; remove the top-level keys"
            )
        if spec.kind == "euler":
            profile = spec.params.profile
        else:
            profile = CapacityProfile(default_capacity=spec.params.Delta)
        schedule = spec.params.schedule
        return RunConfig(
            representation=rep,
            steps=steps,
            render=render,
            seed=seed,
            profile=profile,
            schedule=schedule,
            initial_solution=spec,
        )

    profile = parse_profile(data.get("profile", {}))
    schedule = parse_schedule(data.get("schedule", {}))
    if given[0] == "euler":
        state = parse_euler_state(initial["euler"], profile)
        return RunConfig(
            representation=rep,
            steps=steps,
            render=render,
            seed=seed,
            profile=profile,
            schedule=schedule,
            initial_euler=state,
        )
    tstate = parse_toda_state(initial["toda"], profile)
    return RunConfig(
        representation=rep,
        steps=steps,
        render=render,
        seed=seed,
        profile=profile,
        schedule=schedule,
        initial_toda=tstate,
    )


def parse_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config_dict(data)


def parse_solution_file(path: str, kind: str) -> SolutionSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_solution_params(data, kind, where="params")
