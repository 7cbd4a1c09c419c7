"""Closed-form min-plus solutions and their residual verifiers.

Two families:

* a multi-soliton solution of the counts-level carrier system, built from
  potentials F that minimize over index subsets (exhaustive enumeration,
  2^N - 1 subsets);
* a particular solution of the fixed-box-capacity size-coordinate system,
  built from potentials T / Tbar that minimize over increasing index
  tuples (all C(N, n) of them).

Everything is exact integer arithmetic; verification is equality, not
tolerance.  Enumeration is deliberately the only evaluation strategy here:
these functions are oracles, and N stays desk-scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Optional, Tuple

import numpy as np

from .geometry import CapacityProfile, CarrierSchedule
from .xint import POS_INF, XInt, tmin

MAX_SOLITONS = 15  # 2^N subset enumeration stays trivial below this


@dataclass(frozen=True)
class EulerSolitonParams:
    """Speeds P_i >= 0 and phases Xi_i for the counts-level solution."""

    P: Tuple[int, ...]
    Xi: Tuple[int, ...]
    profile: CapacityProfile
    schedule: CarrierSchedule

    def __post_init__(self):
        object.__setattr__(self, "P", tuple(int(p) for p in self.P))
        object.__setattr__(self, "Xi", tuple(int(x) for x in self.Xi))
        if not 1 <= len(self.P) <= MAX_SOLITONS:
            raise ValueError(f"need 1..{MAX_SOLITONS} solitons")
        if len(self.Xi) != len(self.P):
            raise ValueError("P and Xi must have equal length")
        if any(p < 0 for p in self.P):
            raise ValueError("speeds P_i must be >= 0")

    @property
    def N(self) -> int:
        return len(self.P)


@dataclass(frozen=True)
class EulerFieldSlice:
    """U, Ubar, Zbar at one time over boxes n_start .. n_start+len-1.

    Ubar/Zbar belong to the sweep that produced this slice's U from the
    previous one.
    """

    time: int
    n_start: int
    U: np.ndarray
    Ubar: np.ndarray
    Zbar: np.ndarray


def _subset_tables(params: EulerSolitonParams) -> Tuple[np.ndarray, np.ndarray]:
    """All nonempty subsets as 0/1 masks plus their interaction weights
    sum over unordered pairs {i,j} in J of W_ij = 2*min(P_i, P_j).

    Each pair contributes once: that is the convention under which the
    underlying subset-sum ansatz solves the bilinear lattice (checked
    exactly in rational arithmetic in the test suite).
    """
    n = params.N
    p = params.P
    masks = np.zeros((2**n - 1, n), dtype=np.int64)
    pairw = np.zeros(2**n - 1, dtype=np.int64)
    for s in range(1, 2**n):
        idx = [i for i in range(n) if s >> i & 1]
        masks[s - 1, idx] = 1
        w = 0
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                w += 2 * min(p[idx[a]], p[idx[b]])
        pairw[s - 1] = w
    return masks, pairw


def _prefix_caps(params: EulerSolitonParams, n_lo: int, n_hi: int) -> np.ndarray:
    """S[i, n-n_lo] = sum_{j=0}^{n-1} min(P_i, cap_j) for n in [n_lo, n_hi],
    where sums with a negative upper index follow the signed convention
    (difference of prefix sums makes that automatic)."""
    j_lo = min(n_lo, 0)
    caps = params.profile.caps_array(j_lo, max(n_hi, 0) - j_lo)
    p = np.asarray(params.P, dtype=np.int64)
    terms = np.minimum(p[:, None], caps[None, :])
    pref = np.zeros((params.N, terms.shape[1] + 1), dtype=np.int64)
    np.cumsum(terms, axis=1, out=pref[:, 1:])
    zero_col = pref[:, 0 - j_lo]
    return pref[:, n_lo - j_lo : n_hi - j_lo + 1] - zero_col[:, None]


def _prefix_carrier(params: EulerSolitonParams, t_lo: int, t_hi: int) -> np.ndarray:
    """Same prefix construction in time: sum_{j=0}^{t-1} min(P_i, M_j)."""
    j_lo = min(t_lo, 0)
    ms = [params.schedule.at(j) for j in range(j_lo, max(t_hi, 0))]
    p = params.P
    terms = np.array(
        [[tmin(pi, m).finite for m in ms] for pi in p], dtype=np.int64
    ).reshape(params.N, len(ms))
    pref = np.zeros((params.N, len(ms) + 1), dtype=np.int64)
    np.cumsum(terms, axis=1, out=pref[:, 1:])
    zero_col = pref[:, 0 - j_lo]
    return pref[:, t_lo - j_lo : t_hi - j_lo + 1] - zero_col[:, None]


def _soliton_potential(
    params: EulerSolitonParams, k: int, t: int, n_lo: int, n_hi: int
) -> np.ndarray:
    """F^{k,t}_n = min(0, min over nonempty J of pair weight + sum of
    H^{k,t}_{i,n}) over n in [n_lo, n_hi] inclusive, where

        H^{0,t}_{i,n} = Xi_i - sum_{j<n} min(P_i, cap_j)
                             + sum_{j<t} min(P_i, M_j),
        H^{1,t}_{i,n} = H^{0,t}_{i,n} - P_i.
    """
    masks, pairw = _subset_tables(params)
    s_caps = _prefix_caps(params, n_lo, n_hi)
    s_car = _prefix_carrier(params, t, t)[:, 0]
    p = np.asarray(params.P, dtype=np.int64)
    xi = np.asarray(params.Xi, dtype=np.int64)
    h = (xi + s_car - k * p)[:, None] - s_caps
    totals = pairw[:, None] + masks @ h
    return np.minimum(0, totals.min(axis=0))


def euler_nsoliton(
    params: EulerSolitonParams, n_lo: int, n_hi: int, t: int
) -> EulerFieldSlice:
    """Evaluate the closed-form fields at time t over boxes [n_lo, n_hi]:

        U_n    = F0'_{n+1} - F0'_n + F1'_n - F1'_{n+1},
        Ubar_n = F0_n - F0_{n+1} + F0'_{n+1} - F0'_n,
        Zbar_n = F0_n - F0'_n + F1'_n - F1_n,

    with F0 = F^{0,t}, F0' = F^{0,t+1}, F1 = F^{1,t}, F1' = F^{1,t+1}.
    """
    f0 = _soliton_potential(params, 0, t, n_lo, n_hi + 1)
    f0p = _soliton_potential(params, 0, t + 1, n_lo, n_hi + 1)
    f1 = _soliton_potential(params, 1, t, n_lo, n_hi + 1)
    f1p = _soliton_potential(params, 1, t + 1, n_lo, n_hi + 1)
    u = f0p[1:] - f0p[:-1] + f1p[:-1] - f1p[1:]
    ubar = f0[:-1] - f0[1:] + f0p[1:] - f0p[:-1]
    zbar = f0[:-1] - f0p[:-1] + f1p[:-1] - f1[:-1]
    return EulerFieldSlice(time=t, n_start=n_lo, U=u, Ubar=ubar, Zbar=zbar)


@dataclass(frozen=True)
class EulerVerifyReport:
    """Max absolute residual of each update rule over the checked window."""

    residuals: Dict[str, int]
    n_lo: int
    n_hi: int
    t_lo: int
    t_hi: int

    @property
    def max_residual(self) -> int:
        return max(self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.max_residual == 0


def verify_euler_solution(
    params: EulerSolitonParams, n_lo: int, n_hi: int, t_lo: int, t_hi: int
) -> EulerVerifyReport:
    """Check the three coupled update rules between consecutive slices for
    every transition t -> t+1, t in [t_lo, t_hi).

    The rules are local in n, so they are checked pointwise wherever all
    referenced neighbours lie inside the window; no support assumption is
    needed.
    """
    caps = params.profile.caps_array(n_lo, n_hi - n_lo + 1)
    r_limit = 0
    r_load = 0
    r_recover = 0
    cur = euler_nsoliton(params, n_lo, n_hi, t_lo)
    for t in range(t_lo, t_hi):
        nxt = euler_nsoliton(params, n_lo, n_hi, t + 1)
        u, u1 = cur.U, nxt.U
        ub, zb = nxt.Ubar, nxt.Zbar
        m = params.schedule.at(t + 1)

        limit = np.minimum(caps - u, zb)
        r_limit = max(r_limit, int(np.max(np.abs(ub - limit), initial=0)))

        held = zb[:-1] + u[:-1]
        capped = held if m.is_pos_inf else np.minimum(held, m.finite)
        r_load = max(r_load, int(np.max(np.abs(zb[1:] - (capped - ub[:-1])), initial=0)))

        recover = u[:-1] + zb[:-1] - zb[1:]
        r_recover = max(
            r_recover, int(np.max(np.abs(u1[:-1] - recover), initial=0))
        )
        cur = nxt
    return EulerVerifyReport(
        residuals={
            "size_limit": r_limit,
            "carrier_load": r_load,
            "recovery": r_recover,
        },
        n_lo=n_lo,
        n_hi=n_hi,
        t_lo=t_lo,
        t_hi=t_hi,
    )


@dataclass(frozen=True)
class TauParams:
    """Nondecreasing speeds P, weights W, fixed box capacity Delta, and a
    carrier schedule with M_t >= Delta wherever the solution is evolved."""

    P: Tuple[int, ...]
    W: Tuple[int, ...]
    Delta: int
    schedule: CarrierSchedule

    def __post_init__(self):
        object.__setattr__(self, "P", tuple(int(p) for p in self.P))
        object.__setattr__(self, "W", tuple(int(w) for w in self.W))
        if not 1 <= len(self.P) <= MAX_SOLITONS:
            raise ValueError(f"need 1..{MAX_SOLITONS} solitons")
        if len(self.W) != len(self.P):
            raise ValueError("P and W must have equal length")
        if any(p < 0 for p in self.P):
            raise ValueError("speeds P_i must be >= 0")
        if any(a > b for a, b in zip(self.P, self.P[1:])):
            raise ValueError("P must be nondecreasing")
        if self.Delta < 1:
            raise ValueError("Delta must be >= 1")

    @property
    def N(self) -> int:
        return len(self.P)


@lru_cache(maxsize=65536)
def _carrier_prefix(p: int, upper: int, schedule: CarrierSchedule) -> int:
    """sum_{j=0}^{upper} min(p, M_j), with the signed convention
    sum_{j=0}^{u} := -sum_{j=u+1}^{-1} for u < -1 (empty at u = -1)."""
    if upper >= 0:
        return sum(tmin(p, schedule.at(j)).finite for j in range(0, upper + 1))
    return -sum(tmin(p, schedule.at(j)).finite for j in range(upper + 1, 0))


def _tau_min(params: TauParams, k: int, t: int, n: int, barred: bool) -> XInt:
    big_n = params.N
    if n == -1 or n == big_n + 1:
        return POS_INF
    if not -1 <= n <= big_n + 1:
        raise ValueError(f"index n={n} outside [-1, {big_n + 1}]")
    if n == 0:
        return XInt(0)
    p, w = params.P, params.W
    m_delta = [min(pi, params.Delta) for pi in p]
    upper = t - 1 if barred else t
    car = [_carrier_prefix(pi, upper, params.schedule) for pi in p]
    d = 2 * (n - 1) + t + k
    best: Optional[int] = None
    for subset in combinations(range(big_n), n):
        tot = 0
        for i, r in enumerate(subset):
            coeff = 2 * (n - 1 - i) - (0 if barred else 1)
            tot += w[r] + coeff * p[r] - d * m_delta[r] + car[r]
        if best is None or tot < best:
            best = tot
    return XInt(best)


def tau_T(params: TauParams, k: int, t: int, n: int) -> XInt:
    """Potential T^{k,t}_n: exact minimum over all increasing index tuples
    0 <= r_0 < ... < r_{n-1} <= N-1 of

        sum_i [ W_{r_i} + (2(n-1-i)-1) P_{r_i}
                - (2(n-1)+t+k) min(P_{r_i}, Delta)
                + sum_{j=0}^{t} min(P_{r_i}, M_j) ],

    with T_0 = 0 and T_{-1} = T_{N+1} = +inf.
    """
    return _tau_min(params, k, t, n, barred=False)


def tau_olT(params: TauParams, k: int, t: int, n: int) -> XInt:
    """Companion potential: P coefficient 2(n-1-i) and carrier sum up to
    t-1; same boundaries."""
    return _tau_min(params, k, t, n, barred=True)


@dataclass(frozen=True)
class TauState:
    """All six variable families at one time, finite entries only
    (boundary gaps are +inf by convention)."""

    time: int
    Q: Tuple[int, ...]
    E: Tuple[int, ...]
    Qbar: Tuple[int, ...]
    Ebar: Tuple[int, ...]
    Cbar: Tuple[int, ...]
    Dbar: Tuple[int, ...]


def tau_toda_state(params: TauParams, t: int) -> TauState:
    """Evaluate the derived variables at time t via potential differences:

        Q_n    = olT^{0,t+1}_{n+1} - olT^{0,t+1}_n + T^{1,t}_n - T^{1,t}_{n+1}
        Qbar_n = olT^{0,t+1}_{n+1} - olT^{0,t+1}_n + olT^{1,t}_n - olT^{1,t}_{n+1}
        E_n    = T^{0,t}_{n+1} - T^{0,t}_n + olT^{1,t+1}_{n-1} - olT^{1,t+1}_n + 2D
        Ebar_n = olT^{0,t}_{n+1} - olT^{0,t}_n + olT^{1,t+1}_{n-1} - olT^{1,t+1}_n + 2D
        Cbar_n = olT^{0,t}_n - olT^{0,t+1}_n + T^{1,t}_n - T^{1,t-1}_n + D
        Dbar_n = T^{0,t}_{n+1} - olT^{0,t+1}_n + olT^{1,t}_n - T^{1,t-1}_{n+1}

    Raises IndeterminateForm if a difference hits inf - inf, which signals
    evaluation outside the valid index range.
    """
    big_n = params.N
    dd = params.Delta

    def T(k, tt, n):
        return tau_T(params, k, tt, n)

    def oT(k, tt, n):
        return tau_olT(params, k, tt, n)

    q = tuple(
        (oT(0, t + 1, n + 1) - oT(0, t + 1, n) + T(1, t, n) - T(1, t, n + 1)).finite
        for n in range(big_n)
    )
    qbar = tuple(
        (oT(0, t + 1, n + 1) - oT(0, t + 1, n) + oT(1, t, n) - oT(1, t, n + 1)).finite
        for n in range(big_n)
    )
    e = tuple(
        (
            T(0, t, n + 1) - T(0, t, n) + oT(1, t + 1, n - 1) - oT(1, t + 1, n)
        ).finite
        + 2 * dd
        for n in range(1, big_n)
    )
    ebar = tuple(
        (
            oT(0, t, n + 1) - oT(0, t, n) + oT(1, t + 1, n - 1) - oT(1, t + 1, n)
        ).finite
        + 2 * dd
        for n in range(1, big_n)
    )
    cbar = tuple(
        (oT(0, t, n) - oT(0, t + 1, n) + T(1, t, n) - T(1, t - 1, n)).finite + dd
        for n in range(big_n + 1)
    )
    dbar = tuple(
        (T(0, t, n + 1) - oT(0, t + 1, n) + oT(1, t, n) - T(1, t - 1, n + 1)).finite
        for n in range(big_n)
    )
    return TauState(time=t, Q=q, E=e, Qbar=qbar, Ebar=ebar, Cbar=cbar, Dbar=dbar)


def tau_boundary_gaps(params: TauParams, t: int) -> Tuple[XInt, XInt, XInt, XInt]:
    """(E_0, E_N, Ebar_0, Ebar_N) straight from the difference formulas;
    all four must come out +inf."""
    big_n = params.N
    dd = XInt(2 * params.Delta)

    def e_at(n):
        return (
            tau_T(params, 0, t, n + 1)
            - tau_T(params, 0, t, n)
            + tau_olT(params, 1, t + 1, n - 1)
            - tau_olT(params, 1, t + 1, n)
            + dd
        )

    def ebar_at(n):
        return (
            tau_olT(params, 0, t, n + 1)
            - tau_olT(params, 0, t, n)
            + tau_olT(params, 1, t + 1, n - 1)
            - tau_olT(params, 1, t + 1, n)
            + dd
        )

    return e_at(0), e_at(big_n), ebar_at(0), ebar_at(big_n)


@dataclass(frozen=True)
class TauVerifyReport:
    """Per-equation max residuals (exact, expected all zero)."""

    residuals: Dict[str, int]
    boundary_failures: int
    min_q: int
    min_interior_e: Optional[int]
    t_lo: int
    t_hi: int

    @property
    def max_residual(self) -> int:
        return max(self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.max_residual == 0 and self.boundary_failures == 0


def verify_tau_solution(params: TauParams, t_lo: int, t_hi: int) -> TauVerifyReport:
    """Check every equation of the capacity-Delta system (K = Lam = Delta)
    between consecutive evaluated slices, transitions t -> t+1 for
    t in [t_lo, t_hi), plus the +inf boundary gaps and Cbar_0 = Delta.

    Requires Delta <= M_{t+1} on the range (the system's validity
    condition).
    """
    big_n = params.N
    dd = params.Delta
    res = {
        "qbar": 0,
        "ebar": 0,
        "cbar": 0,
        "dbar": 0,
        "cbar0_boundary": 0,
        "q_recovery": 0,
        "e_recovery": 0,
    }
    boundary_failures = 0
    min_q = None
    min_e = None

    def bump(key, lhs, rhs):
        res[key] = max(res[key], abs(lhs - rhs))

    cur = tau_toda_state(params, t_lo)
    for t in range(t_lo, t_hi):
        m = params.schedule.at(t + 1)
        if m < dd:
            raise ValueError(f"carrier capacity {m} below Delta at t={t + 1}")

        def cap(x: int) -> int:
            return x if m.is_pos_inf else min(x, m.finite)

        nxt = tau_toda_state(params, t + 1)
        q, e = cur.Q, cur.E
        qb, eb, cb, db = nxt.Qbar, nxt.Ebar, nxt.Cbar, nxt.Dbar

        min_q = min(q) if min_q is None else min(min_q, *q)
        if e:
            min_e = min(e) if min_e is None else min(min_e, *e)

        bump("cbar0_boundary", cb[0], dd)
        for n in range(big_n):
            bump("dbar", db[n], cap(cb[n] + q[n] - dd))
            if n == big_n - 1:
                bump("qbar", qb[n], db[n])  # E_N = +inf
            else:
                bump("qbar", qb[n], min(e[n] - max(0, dd - db[n]), db[n]))
            bump("cbar", cb[n + 1], cap(db[n] - qb[n] + dd))
            bump("q_recovery", nxt.Q[n], q[n] + cb[n] - cb[n + 1])
        for i in range(big_n - 1):
            bump(
                "ebar",
                eb[i],
                e[i]
                - qb[i]
                + q[i + 1]
                - max(0, dd - db[i])
                + max(0, dd - db[i + 1]),
            )
            bump(
                "e_recovery",
                nxt.E[i],
                eb[i] + qb[i] - q[i + 1] - db[i] + db[i + 1],
            )
        for v in tau_boundary_gaps(params, t):
            if not v.is_pos_inf:
                boundary_failures += 1
        cur = nxt

    return TauVerifyReport(
        residuals=res,
        boundary_failures=boundary_failures,
        min_q=min_q if min_q is not None else 0,
        min_interior_e=min_e,
        t_lo=t_lo,
        t_hi=t_hi,
    )
