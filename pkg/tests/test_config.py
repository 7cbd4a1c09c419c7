import json

import pytest

from boxball import POS_INF, CapacityProfile, EulerState, XInt, unit_profile
from boxball.config import (
    ConfigError,
    euler_state_json,
    parse_config_dict,
    parse_euler_state,
    parse_profile,
    parse_schedule,
    parse_solution_params,
    parse_toda_state,
    profile_json,
    schedule_json,
    toda_state_json,
)
from boxball.geometry import CarrierSchedule


def minimal_config():
    return {
        "representation": "euler",
        "steps": 3,
        "initial": {"euler": {"counts": [1, 0, 1]}},
    }


def test_minimal_config_parses():
    cfg = parse_config_dict(minimal_config())
    assert cfg.representation == "euler"
    assert cfg.steps == 3
    assert cfg.render == "ascii"
    assert cfg.initial_euler.counts.tolist() == [1, 0, 1]
    assert cfg.schedule.default == POS_INF


def test_inf_in_schedule():
    s = parse_schedule({"entries": {"1": 6, "2": "inf"}, "default": "inf"})
    assert s.at(1) == XInt(6)
    assert s.at(2) == POS_INF
    assert s.at(5) == POS_INF


def test_unknown_key_is_named():
    cfg = minimal_config()
    cfg["renderr"] = "ascii"
    with pytest.raises(ConfigError, match="renderr"):
        parse_config_dict(cfg)
    with pytest.raises(ConfigError, match="colour"):
        parse_profile({"colour": 1})
    with pytest.raises(ConfigError, match="foo"):
        parse_schedule({"foo": {}})


def test_steps_must_be_positive():
    cfg = minimal_config()
    cfg["steps"] = 0
    with pytest.raises(ConfigError, match="steps"):
        parse_config_dict(cfg)


def test_exactly_one_initial():
    cfg = minimal_config()
    cfg["initial"]["toda"] = {"Q": [1], "E": [], "X0": 0}
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config_dict(cfg)
    cfg["initial"] = {}
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config_dict(cfg)


def test_solution_initial_owns_profile_and_schedule():
    cfg = {
        "representation": "toda",
        "steps": 2,
        "profile": {},
        "initial": {
            "solution": {
                "type": "tau",
                "params": {"P": [3], "W": [0], "Delta": 2},
            }
        },
    }
    with pytest.raises(ConfigError, match="profile"):
        parse_config_dict(cfg)
    del cfg["profile"]
    parsed = parse_config_dict(cfg)
    assert parsed.profile.default_capacity == 2
    assert parsed.initial_solution.kind == "tau"


def test_toda_state_round_trip():
    p = CapacityProfile(capacities=(2, 3))
    st = parse_toda_state({"time": 1, "N": 2, "Q": [2, 1], "E": [3], "X0": 1}, p)
    out = toda_state_json(st)
    assert out["Q"] == [2, 1] and out["N"] == 2 and out["profile"]["capacities"] == [2, 3]
    again = parse_toda_state(
        {k: out[k] for k in ("time", "N", "Q", "E", "X0")}, p
    )
    assert again == st
    with pytest.raises(ConfigError, match="N"):
        parse_toda_state({"N": 3, "Q": [2, 1], "E": [3], "X0": 1}, p)


def test_euler_state_round_trip():
    st = EulerState(counts=[1, 0, 1], profile=unit_profile(), time=2)
    sched = CarrierSchedule(entries={1: 6})
    out = euler_state_json(st, sched)
    assert out["schedule"]["entries"] == {"1": 6}
    again = parse_euler_state(
        {k: out[k] for k in ("time", "window_start", "counts")},
        parse_profile(out["profile"]),
    )
    assert again == st
    assert json.dumps(schedule_json(sched), sort_keys=True) == json.dumps(
        schedule_json(sched), sort_keys=True
    )


def test_profile_json_round_trip():
    p = CapacityProfile(capacities=(3, 5), window_start=1, default_capacity=2)
    assert parse_profile(profile_json(p)) == p


def test_solution_params_validation():
    with pytest.raises(ConfigError, match="n_range"):
        parse_solution_params({"P": [1], "Xi": [0], "n_range": [5, 2]}, "euler")
    with pytest.raises(ConfigError, match="type"):
        parse_solution_params({"P": [1], "W": [0], "Delta": 1}, "hankel")
    spec = parse_solution_params(
        {"P": [1, 2], "Xi": [0, 3], "n_range": [-5, 20]}, "euler"
    )
    assert spec.n_range == (-5, 20)
    assert spec.params.profile.default_capacity == 1
