"""Box-ball system with per-box capacities and a time-dependent carrier.

Exact integer (min-plus) simulation in three equivalent pictures -- ball
counts per box, soliton sizes/gaps, start positions -- connected by the
expansion map, plus closed-form soliton solutions with residual verifiers
and a seeded differential test harness.
"""

from .euler import (
    EulerState,
    EulerStepTrace,
    ResidualReport,
    WindowOverflow,
    carrier_oracle_step,
    euler_step,
    nukdv_step,
    same_occupancy,
    umkdv_residual,
)
from .expansion import (
    BinarySeq,
    BlockDecomposition,
    EmptySequence,
    expand,
    extract_blocks,
    positions_to_state,
    segment_to_box,
)
from .geometry import (
    CapacityProfile,
    CarrierSchedule,
    SegmentGeometry,
    constant_schedule,
    geometry,
    unbounded_schedule,
    unit_profile,
)
from .solutions import (
    EulerSolitonParams,
    TauParams,
    euler_nsoliton,
    tau_T,
    tau_olT,
    tau_toda_state,
    verify_euler_solution,
    verify_tau_solution,
)
from .toda import (
    CapacityViolation,
    DegenerateState,
    InconsistentPositions,
    TodaState,
    TodaStepTrace,
    capacities_for_state,
    enutoda_step,
    extoda_step,
    from_euler,
    lagrange_step,
    lagrange_to_toda,
    to_euler,
    toda_to_lagrange,
    utoda_step,
    utoda_step_sumform,
)
from .xint import (
    NEG_INF,
    POS_INF,
    FiniteOverflow,
    IndeterminateForm,
    XInt,
    tadd,
    tmax,
    tmin,
    tsub,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityProfile",
    "CapacityViolation",
    "CarrierSchedule",
    "BinarySeq",
    "BlockDecomposition",
    "DegenerateState",
    "EmptySequence",
    "EulerSolitonParams",
    "EulerState",
    "EulerStepTrace",
    "FiniteOverflow",
    "InconsistentPositions",
    "IndeterminateForm",
    "NEG_INF",
    "POS_INF",
    "ResidualReport",
    "SegmentGeometry",
    "TauParams",
    "TodaState",
    "TodaStepTrace",
    "WindowOverflow",
    "XInt",
    "capacities_for_state",
    "carrier_oracle_step",
    "constant_schedule",
    "enutoda_step",
    "euler_nsoliton",
    "euler_step",
    "expand",
    "extoda_step",
    "extract_blocks",
    "from_euler",
    "geometry",
    "lagrange_step",
    "lagrange_to_toda",
    "nukdv_step",
    "positions_to_state",
    "same_occupancy",
    "segment_to_box",
    "tadd",
    "tau_T",
    "tau_olT",
    "tau_toda_state",
    "tmax",
    "tmin",
    "to_euler",
    "toda_to_lagrange",
    "tsub",
    "umkdv_residual",
    "unbounded_schedule",
    "unit_profile",
    "utoda_step",
    "utoda_step_sumform",
    "verify_euler_solution",
    "verify_tau_solution",
]
