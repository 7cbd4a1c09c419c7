"""Seeded differential testing of the three state pictures.

Each case draws a random valid counts-level state plus a random carrier
schedule and evolves it along independent routes:

  (a) the coupled min-plus sweep (euler_step),
  (b) the literal ball-by-ball carrier walk (carrier_oracle_step),
  (c) sizes/gaps/anchor extracted once at t=0 and evolved entirely in the
      size coordinates, mapped back to counts for comparison.

Every step also re-checks ball conservation, the single-equation residual,
the carrier-load identity and bounds, and on route (c) the anchor and the
soliton count.  Cases are generated from (seed, case_index), so a report
is byte-identical across runs with the same arguments.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .euler import (
    EulerState,
    carrier_oracle_step,
    euler_step,
    same_occupancy,
    umkdv_residual,
)
from .expansion import bits_from_positions, expand
from .geometry import CapacityProfile, CarrierSchedule
from .toda import DegenerateState, enutoda_step, from_euler, to_euler
from .xint import POS_INF, XInt, encode_xint


@dataclass(frozen=True)
class DiffBounds:
    """Generator bounds.  m_choices empty means the safe default for the
    size-coordinate route: finite values max_delta .. max_delta+5 plus
    +inf (the route-(c) equations need capacities <= carrier capacity)."""

    window: int = 32
    max_delta: int = 5
    m_choices: Tuple[XInt, ...] = ()
    steps: int = 20
    include_toda: bool = True

    def effective_m_choices(self) -> Tuple[XInt, ...]:
        if self.m_choices:
            return self.m_choices
        return tuple(
            XInt(v) for v in range(self.max_delta, self.max_delta + 6)
        ) + (POS_INF,)


@dataclass(frozen=True)
class DiffFailure:
    case: int
    step: int
    quantity: str
    detail: str

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "step": self.step,
            "quantity": self.quantity,
            "detail": self.detail,
        }


@dataclass
class DiffReport:
    cases: int
    seed: int
    bounds: DiffBounds
    failures: List[DiffFailure] = field(default_factory=list)
    steps_checked: int = 0
    elapsed: float = 0.0  # diagnostics only, never serialized

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "cases": self.cases,
            "seed": self.seed,
            "bounds": {
                "window": self.bounds.window,
                "max_delta": self.bounds.max_delta,
                "m_choices": [encode_xint(m) for m in self.bounds.effective_m_choices()],
                "steps": self.bounds.steps,
                "include_toda": self.bounds.include_toda,
            },
            "steps_checked": self.steps_checked,
            "failures": [f.to_json_dict() for f in self.failures],
        }


def random_case(
    rng: np.random.Generator, bounds: DiffBounds
) -> Tuple[EulerState, CarrierSchedule]:
    """Window length <= bounds.window, capacities in [1, max_delta], counts
    uniform in [0, capacity], all-zero rejected, one carrier capacity drawn
    per evolved step."""
    wlen = int(rng.integers(1, bounds.window + 1))
    caps = rng.integers(1, bounds.max_delta + 1, size=wlen)
    while True:
        counts = rng.integers(0, caps + 1)
        if counts.sum() > 0:
            break
    profile = CapacityProfile(capacities=tuple(int(c) for c in caps))
    choices = bounds.effective_m_choices()
    entries = {
        t: choices[int(rng.integers(len(choices)))]
        for t in range(1, bounds.steps + 1)
    }
    schedule = CarrierSchedule(entries=entries, default=POS_INF)
    return EulerState(counts=counts, profile=profile), schedule


def _counts_list(state: EulerState) -> list:
    return state.counts.tolist()


def _run_case(
    case_index: int,
    state: EulerState,
    schedule: CarrierSchedule,
    bounds: DiffBounds,
    report: DiffReport,
) -> None:
    fail = report.failures

    def record(step: int, quantity: str, detail: str) -> None:
        fail.append(
            DiffFailure(case=case_index, step=step, quantity=quantity, detail=detail)
        )

    ea = eb = state
    ts = None
    if bounds.include_toda:
        ts = from_euler(state)

    for step in range(bounds.steps):
        m = schedule.at(ea.time + 1)
        total_before = ea.total_balls
        ea_next, trace = euler_step(ea, schedule)
        eb_next = carrier_oracle_step(eb, schedule)
        report.steps_checked += 1

        if not same_occupancy(ea_next, eb_next):
            record(
                step,
                "oracle_counts",
                f"euler={_counts_list(ea_next)} oracle={_counts_list(eb_next)}",
            )
            return
        if ea_next.total_balls != total_before:
            record(
                step,
                "ball_conservation",
                f"{total_before} -> {ea_next.total_balls}",
            )
            return

        res = umkdv_residual(ea, ea_next, trace, m)
        if res.max_violation != 0:
            record(step, "umkdv_residual", f"max={res.max_violation}")
            return
        if res.carrier_identity_max != 0:
            record(step, "carrier_identity", f"max={res.carrier_identity_max}")
            return
        loads = trace.carrier_loads
        if loads.min() < 0 or (m.is_finite and loads.max() > m.finite):
            record(step, "carrier_bound", f"loads in [{loads.min()}, {loads.max()}], M={m}")
            return

        if ts is not None:
            try:
                ts_next, ttrace = enutoda_step(ts, schedule)
            except DegenerateState as exc:
                record(step, "toda_degenerate", str(exc))
                return
            if sum(ts_next.Q) != sum(ts.Q):
                record(step, "soliton_conservation", f"{sum(ts.Q)} -> {sum(ts_next.Q)}")
                return
            m_ok = not m.is_finite or (
                max(ttrace.Dbar) <= m.finite and max(ttrace.Cbar) <= m.finite
            )
            if not m_ok or any(q > d for q, d in zip(ttrace.Qbar, ttrace.Dbar)):
                record(step, "trace_bounds", f"Qbar={ttrace.Qbar} Dbar={ttrace.Dbar} Cbar={ttrace.Cbar}")
                return
            if not same_occupancy(to_euler(ts_next), ea_next):
                record(
                    step,
                    "toda_counts",
                    f"euler={_counts_list(ea_next)} toda={_counts_list(to_euler(ts_next))}",
                )
                return
            # anchored decomposition check: runs laid at (X0, Q, E) must
            # reproduce the expansion bits exactly, not just the counts
            seq = expand(ea_next)
            try:
                raw = bits_from_positions(
                    ts_next.Q, ts_next.E, ts_next.X0, seq.segment_start, len(seq.bits)
                )
            except ValueError:
                raw = None
            if raw is None or not np.array_equal(seq.bits, raw):
                record(
                    step,
                    "anchor",
                    f"(Q,E,X0)=({ts_next.Q},{ts_next.E},{ts_next.X0}) "
                    f"does not match the evolved expansion",
                )
                return
            ts = ts_next

        ea, eb = ea_next, eb_next


def run_difftest(cases: int, seed: int, bounds: Optional[DiffBounds] = None) -> DiffReport:
    """Run `cases` independent cases; deterministic in (cases, seed, bounds)."""
    bounds = bounds or DiffBounds()
    report = DiffReport(cases=cases, seed=seed, bounds=bounds)
    start = _time.perf_counter()
    for i in range(cases):
        rng = np.random.default_rng([seed, i])
        state, schedule = random_case(rng, bounds)
        _run_case(i, state, schedule, bounds, report)
    report.elapsed = _time.perf_counter() - start
    return report
