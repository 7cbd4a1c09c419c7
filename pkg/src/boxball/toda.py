"""Size coordinates (Toda picture) and start-position coordinates (Lagrange
picture) of the box-ball system.

The Toda picture evolves soliton sizes Q_n and interior gap sizes E_n with
the implicit boundary gaps E_0 = E_N = +inf.  The classical recurrence
(all capacities 1) is extended first to per-box capacities, where the box
capacities K_n / Lam_n sampled at each run start and gap start enter the
update, and then to a bounded carrier, where the carrier loads Cbar/Dbar
carry the size-limit bookkeeping and a recovery stage restores the trimmed
balls.  Capacities are resampled from the segment geometry every step,
since the positions move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .expansion import BlockDecomposition, counts_from_positions
from .euler import EulerState
from .geometry import CapacityProfile, CarrierSchedule, geometry
from .xint import XInt


class CapacityViolation(ValueError):
    """Some run-start box capacity exceeds the step's carrier capacity; the
    size coordinates are only faithful under K_n <= M."""


class DegenerateState(ValueError):
    """A step produced a run or interior gap of size < 1, so the state no
    longer describes distinct solitons."""


class InconsistentPositions(ValueError):
    """Start positions that do not interleave as runs and gaps of size >= 1."""


@dataclass(frozen=True)
class TodaState:
    """Soliton sizes Q (N >= 1), interior gaps E (N-1 entries), and the
    segment index X0 of the leftmost segment of soliton 0."""

    Q: Tuple[int, ...]
    E: Tuple[int, ...]
    X0: int
    profile: CapacityProfile
    time: int = 0

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(int(q) for q in self.Q))
        object.__setattr__(self, "E", tuple(int(e) for e in self.E))
        if len(self.Q) < 1:
            raise ValueError("need at least one soliton")
        if len(self.E) != len(self.Q) - 1:
            raise ValueError("E lists the interior gaps only")
        if any(q < 1 for q in self.Q) or any(e < 1 for e in self.E):
            raise ValueError("sizes and gaps must be >= 1")
        if self.X0 < 0:
            raise ValueError("X0 must be >= 0")

    @property
    def N(self) -> int:
        return len(self.Q)


@dataclass(frozen=True)
class TodaStepTrace:
    """Carrier bookkeeping of one step.

    Cbar has N+1 entries (Cbar[0] equals K[0]); Dbar and Qbar have N;
    Ebar the interior N-1.  Xbar0 is the anchor after the size-limit stage.
    """

    Qbar: Tuple[int, ...]
    Ebar: Tuple[int, ...]
    Cbar: Tuple[int, ...]
    Dbar: Tuple[int, ...]
    Xbar0: int
    K: Tuple[int, ...]
    Lam: Tuple[int, ...]


def utoda_step(
    Q: Sequence[int], E: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
    """Classical recurrence (all capacities 1, unbounded carrier):

        D_0 = Q_0,  D_n = D_{n-1} - Q'_{n-1} + Q_n,
        Q'_n = min(E_{n+1}, D_n),   E'_n = E_n - Q'_{n-1} + Q_n,

    with E_N = +inf so the last run takes the whole carrier load.
    Returns (Q', E', D).
    """
    n_runs = len(Q)
    if len(E) != n_runs - 1:
        raise ValueError("E lists the interior gaps only")
    d_list = []
    qp = []
    for n in range(n_runs):
        d = Q[0] if n == 0 else d_list[n - 1] - qp[n - 1] + Q[n]
        d_list.append(d)
        qp.append(d if n == n_runs - 1 else min(E[n], d))
    ep = [E[i] - qp[i] + Q[i + 1] for i in range(n_runs - 1)]
    if any(q < 1 for q in qp) or any(e < 1 for e in ep):
        raise AssertionError("positivity broke in utoda_step (bug)")
    return tuple(qp), tuple(ep), tuple(d_list)


def utoda_step_sumform(
    Q: Sequence[int], E: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Same step written with partial sums in place of the carrier load:

        Q'_n = min(E_{n+1}, sum_{j<=n} Q_j - sum_{j<n} Q'_j).
    """
    n_runs = len(Q)
    if len(E) != n_runs - 1:
        raise ValueError("E lists the interior gaps only")
    qp = []
    acc = 0  # sum Q[:n+1] - sum qp[:n]
    for n in range(n_runs):
        acc += Q[n]
        v = acc if n == n_runs - 1 else min(E[n], acc)
        qp.append(v)
        acc -= v
    ep = [E[i] - qp[i] + Q[i + 1] for i in range(n_runs - 1)]
    return tuple(qp), tuple(ep)


def toda_to_lagrange(
    Q: Sequence[int], E: Sequence[int], X0: int
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Start positions: X[n] of soliton n (n=0..N-1) and Y[n-1] of empty
    block n (n=1..N), via Y_n = X_{n-1} + Q_{n-1} and X_n = Y_n + E_n."""
    x = [X0]
    y = []
    for n in range(1, len(Q)):
        y.append(x[n - 1] + Q[n - 1])
        x.append(y[n - 1] + E[n - 1])
    y.append(x[-1] + Q[-1])
    return tuple(x), tuple(y)


def lagrange_to_toda(
    X: Sequence[int], Y: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
    """Inverse of toda_to_lagrange; raises InconsistentPositions unless the
    positions interleave with runs and gaps of size >= 1."""
    n_runs = len(X)
    if len(Y) != n_runs:
        raise InconsistentPositions("X and Y must both have N entries")
    q = tuple(Y[n] - X[n] for n in range(n_runs))
    e = tuple(X[n] - Y[n - 1] for n in range(1, n_runs))
    if any(v < 1 for v in q) or any(v < 1 for v in e):
        raise InconsistentPositions(f"implied sizes {q}, gaps {e}")
    return q, e, int(X[0])


def lagrange_step(
    X: Sequence[int], Y: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Advance the start positions one step:

        X'_n = Y_{n+1},
        Y'_n = Y_n + min(X_n - Y_n, A_n - B_n),

    where A_n = sum_{j<=n}(Y_j - X_{j-1}) and B_n = sum_{j<n}(Y'_j - X'_{j-1});
    the boundary X_N = +inf makes the last minimum the running sum itself.
    """
    lagrange_to_toda(X, Y)  # validates the interleaving
    n_runs = len(X)
    xp = tuple(Y)
    yp = []
    a = 0
    b = 0
    for n in range(1, n_runs + 1):
        a += Y[n - 1] - X[n - 1]
        inc = a - b if n == n_runs else min(X[n] - Y[n - 1], a - b)
        yp.append(Y[n - 1] + inc)
        b += yp[-1] - xp[n - 1]
    return xp, tuple(yp)


def capacities_for_state(state: TodaState) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Box capacities at each run start (K) and gap start (Lam), sampled
    from the segment geometry at the state's current positions."""
    geom = geometry(state.profile)
    k = []
    lam = []
    pos = state.X0
    for n in range(state.N):
        k.append(state.profile.capacity(geom.segment_to_box(pos)))
        gap_start = pos + state.Q[n]
        lam.append(state.profile.capacity(geom.segment_to_box(gap_start)))
        if n < state.N - 1:
            pos = gap_start + state.E[n]
    return tuple(k), tuple(lam)


def _capacity_args(m: XInt) -> Tuple[int, bool]:
    if m.is_pos_inf:
        return 0, False
    return m.finite, True


def enutoda_step(
    state: TodaState,
    schedule: CarrierSchedule,
    k_boundary: int = 0,
) -> Tuple[TodaState, TodaStepTrace]:
    """One step with box capacities and a bounded carrier.

    Size-limit stage (left to right, exactly in dependency order):

        Cbar_0 = K_0,
        Dbar_n = min(Cbar_n + Q_n - K_n, M),
        Qbar_n = min(E_{n+1} - max(0, Lam_{n+1} - Dbar_n), Dbar_n),
        Cbar_{n+1} = min(Dbar_n - Qbar_n + K_{n+1}, M),
        Ebar_n = E_n - Qbar_{n-1} + Q_n
                 - max(0, Lam_n - Dbar_{n-1}) + max(0, Lam_{n+1} - Dbar_n),

    recovery stage:

        Q'_n = Q_n + Cbar_n - Cbar_{n+1} - K_n + K_{n+1},
        E'_n = Ebar_n + Qbar_{n-1} - Q_n - Dbar_{n-1} + Dbar_n,

    and anchor motion

        Xbar_0 = X_0 + Q_0 + max(0, Lam_1 - Dbar_0),
        X'_0  = X_0 + max(Dbar_0, Lam_1).

    K_N is not a real box capacity; any value in [0, M] cancels out of the
    outputs, and k_boundary=0 is the convention used here.  Requires
    K_n <= M; with M = +inf the trimming disappears and the step coincides
    with extoda_step.
    """
    m = schedule.at(state.time + 1)
    m_val, m_capped = _capacity_args(m)
    k, lam = capacities_for_state(state)
    if m_capped:
        bad = [v for v in k if v > m_val]
        if bad:
            raise CapacityViolation(f"box capacities {bad} exceed carrier capacity {m_val}")
        if not 0 <= k_boundary <= m_val:
            raise ValueError("k_boundary must lie in [0, M]")
    elif k_boundary < 0:
        raise ValueError("k_boundary must be >= 0")

    q, e = state.Q, state.E
    n_runs = state.N

    def cap(x: int) -> int:
        return min(x, m_val) if m_capped else x

    cbar = [k[0]]
    dbar = []
    qbar = []
    for n in range(n_runs):
        d = cap(cbar[n] + q[n] - k[n])
        dbar.append(d)
        qb = d if n == n_runs - 1 else min(e[n] - max(0, lam[n] - d), d)
        qbar.append(qb)
        k_next = k[n + 1] if n + 1 < n_runs else k_boundary
        cbar.append(cap(d - qb + k_next))

    ebar = [
        e[i]
        - qbar[i]
        + q[i + 1]
        - max(0, lam[i] - dbar[i])
        + max(0, lam[i + 1] - dbar[i + 1])
        for i in range(n_runs - 1)
    ]

    qp = [
        q[n]
        + cbar[n]
        - cbar[n + 1]
        - k[n]
        + (k[n + 1] if n + 1 < n_runs else k_boundary)
        for n in range(n_runs)
    ]
    ep = [
        ebar[i] + qbar[i] - q[i + 1] - dbar[i] + dbar[i + 1]
        for i in range(n_runs - 1)
    ]

    xbar0 = state.X0 + q[0] + max(0, lam[0] - dbar[0])
    xp0 = state.X0 + max(dbar[0], lam[0])

    if sum(qp) != sum(q):
        raise AssertionError("ball count broke in enutoda_step (bug)")
    if any(v < 1 for v in qp) or any(v < 1 for v in ep):
        raise DegenerateState(f"step produced Q'={qp}, E'={ep}")

    new_state = TodaState(
        Q=tuple(qp), E=tuple(ep), X0=xp0, profile=state.profile, time=state.time + 1
    )
    trace = TodaStepTrace(
        Qbar=tuple(qbar),
        Ebar=tuple(ebar),
        Cbar=tuple(cbar),
        Dbar=tuple(dbar),
        Xbar0=xbar0,
        K=k,
        Lam=lam,
    )
    return new_state, trace


def extoda_step(state: TodaState) -> Tuple[TodaState, TodaStepTrace]:
    """One step with box capacities and an unbounded carrier:

        D_0 = Q_0,  D_n = D_{n-1} - Q'_{n-1} + Q_n,
        Q'_n = min(E_{n+1} - max(0, Lam_{n+1} - D_n), D_n),
        E'_n = E_n - Q'_{n-1} + Q_n
               - max(0, Lam_n - D_{n-1}) + max(0, Lam_{n+1} - D_n).

    Equals enutoda_step with carrier capacity +inf; with all capacities 1
    it reduces to utoda_step.
    """
    k, lam = capacities_for_state(state)
    q, e = state.Q, state.E
    n_runs = state.N

    d_list = []
    qp = []
    for n in range(n_runs):
        d = q[0] if n == 0 else d_list[n - 1] - qp[n - 1] + q[n]
        d_list.append(d)
        qp.append(
            d if n == n_runs - 1 else min(e[n] - max(0, lam[n] - d), d)
        )
    ep = [
        e[i]
        - qp[i]
        + q[i + 1]
        - max(0, lam[i] - d_list[i])
        + max(0, lam[i + 1] - d_list[i + 1])
        for i in range(n_runs - 1)
    ]

    xbar0 = state.X0 + q[0] + max(0, lam[0] - d_list[0])
    xp0 = state.X0 + max(d_list[0], lam[0])

    if any(v < 1 for v in qp) or any(v < 1 for v in ep):
        raise DegenerateState(f"step produced Q'={qp}, E'={ep}")

    new_state = TodaState(
        Q=tuple(qp), E=tuple(ep), X0=xp0, profile=state.profile, time=state.time + 1
    )
    trace = TodaStepTrace(
        Qbar=tuple(qp),
        Ebar=tuple(ep),
        Cbar=tuple(),
        Dbar=tuple(d_list),
        Xbar0=xbar0,
        K=k,
        Lam=lam,
    )
    return new_state, trace


def to_decomposition(state: TodaState) -> BlockDecomposition:
    k, lam = capacities_for_state(state)
    return BlockDecomposition(Q=state.Q, E=state.E, X0=state.X0, K=k, Lam=lam)


def to_euler(state: TodaState, window_start: int = 0) -> EulerState:
    """Counts-level view of a Toda state (runs laid at their positions)."""
    return counts_from_positions(
        state.Q,
        state.E,
        state.X0,
        state.profile,
        time=state.time,
        window_start=window_start,
    )


def from_euler(state: EulerState) -> TodaState:
    """Extract sizes, gaps and the anchor from a counts-level state."""
    from .expansion import expand, extract_blocks

    blocks = extract_blocks(expand(state))
    return TodaState(
        Q=blocks.Q,
        E=blocks.E,
        X0=blocks.X0,
        profile=state.profile,
        time=state.time,
    )
