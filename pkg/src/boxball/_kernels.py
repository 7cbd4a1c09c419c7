"""Hot inner loops: carrier sweeps and segment scans over int64 arrays.

Every kernel is a plain sequential scan (each box depends on the carrier
state left of it), so the fast path is numba @njit and the fallback is the
same function body interpreted over numpy arrays.  Set BBS_NUMBA=0 to force
the fallback; `benchmarks/bench_kernels.py` compares the two.

Carrier capacity enters as (m_val, m_capped); +inf is m_capped=False, never
a sentinel integer.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("BBS_NUMBA", "1") != "0"

if NUMBA_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _carrier_sweep(counts, caps, m_val, m_capped):
    """One left-to-right sweep: drop into free space, pick up, trim to capacity.

    Returns (new_counts, limited, loads, removed):
      limited[n]  -- balls left in box n by the sweep itself
      loads[n]    -- balls held on arrival at box n (loads has length w+1;
                     loads[w] is the load just past the window and must be 0)
      removed[n]  -- balls trimmed away at box n, restored into new_counts
    """
    w = counts.shape[0]
    new_counts = np.zeros(w, np.int64)
    limited = np.zeros(w, np.int64)
    loads = np.zeros(w + 1, np.int64)
    removed = np.zeros(w, np.int64)
    load = 0
    for n in range(w):
        loads[n] = load
        put = caps[n] - counts[n]
        if put > load:
            put = load
        held = load + counts[n]
        if m_capped and held > m_val:
            removed[n] = held - m_val
            held = m_val
        load = held - put
        limited[n] = put
        new_counts[n] = put + removed[n]
    loads[w] = load
    return new_counts, limited, loads, removed


def _ball_queue_sweep(counts, caps, m_val, m_capped, total):
    """Literal ball-by-ball walk of the carrier rule, tracking each ball's
    origin box in a FIFO ring buffer.

    Balls are deposited oldest-first into the space not occupied by the
    box's own departing balls; excess over capacity is trimmed newest-first
    and returned to its origin box afterwards.
    """
    w = counts.shape[0]
    out = np.zeros(w, np.int64)
    removed = np.zeros(w, np.int64)
    cap = total if total > 0 else 1
    origin = np.zeros(cap, np.int64)
    head = 0
    size = 0
    for n in range(w):
        arriving = size
        for _ in range(counts[n]):
            origin[(head + size) % cap] = n
            size += 1
        if m_capped:
            while size > m_val:
                size -= 1
                removed[origin[(head + size) % cap]] += 1
        put = caps[n] - counts[n]
        if put > arriving:
            put = arriving
        head = (head + put) % cap
        size -= put
        out[n] = put
    for n in range(w):
        out[n] += removed[n]
    return out, size


def _free_flow_sweep(counts, caps):
    """Carrier sweep without a capacity bound (no trimming, no recovery)."""
    w = counts.shape[0]
    new_counts = np.zeros(w, np.int64)
    load = 0
    for n in range(w):
        put = caps[n] - counts[n]
        if put > load:
            put = load
        new_counts[n] = put
        load += counts[n] - put
    return new_counts, load


def _expand_sweep(counts, caps, total):
    """Rewrite box counts as a 0/1 segment sequence.

    Within box n the ones are left-justified when the segment just before
    the box is a 1, right-justified otherwise; the segment left of the
    window counts as 0.
    """
    bits = np.zeros(total, np.int64)
    s = 0
    prev = 0
    for n in range(counts.shape[0]):
        d = caps[n]
        u = counts[n]
        if prev == 1:
            for j in range(u):
                bits[s + j] = 1
        else:
            for j in range(d - u, d):
                bits[s + j] = 1
        s += d
        prev = bits[s - 1]
    return bits


def _run_scan(bits):
    """Maximal runs of ones: (starts, lengths), left to right."""
    n = bits.shape[0]
    cap = n // 2 + 1
    starts = np.zeros(cap, np.int64)
    lengths = np.zeros(cap, np.int64)
    k = 0
    i = 0
    while i < n:
        if bits[i] == 1:
            j = i + 1
            while j < n and bits[j] == 1:
                j += 1
            starts[k] = i
            lengths[k] = j - i
            k += 1
            i = j
        else:
            i += 1
    return starts[:k].copy(), lengths[:k].copy()


def _counts_from_runs(starts, lengths, bounds):
    """Per-box bit sums of runs laid on the segment line.

    bounds are cumulative boundaries s_0..s_w covering every run.
    """
    w = bounds.shape[0] - 1
    counts = np.zeros(w, np.int64)
    for r in range(starts.shape[0]):
        a = starts[r]
        b = a + lengths[r]
        n = np.searchsorted(bounds, a, side="right") - 1
        while a < b:
            end = bounds[n + 1]
            if end > b:
                end = b
            counts[n] += end - a
            a = end
            n += 1
    return counts


carrier_sweep_py = _carrier_sweep
ball_queue_sweep_py = _ball_queue_sweep
free_flow_sweep_py = _free_flow_sweep
expand_sweep_py = _expand_sweep
run_scan_py = _run_scan
counts_from_runs_py = _counts_from_runs

if NUMBA_ENABLED:
    carrier_sweep = _njit(cache=True)(_carrier_sweep)
    ball_queue_sweep = _njit(cache=True)(_ball_queue_sweep)
    free_flow_sweep = _njit(cache=True)(_free_flow_sweep)
    expand_sweep = _njit(cache=True)(_expand_sweep)
    run_scan = _njit(cache=True)(_run_scan)
    counts_from_runs = _njit(cache=True)(_counts_from_runs)
else:
    carrier_sweep = carrier_sweep_py
    ball_queue_sweep = ball_queue_sweep_py
    free_flow_sweep = free_flow_sweep_py
    expand_sweep = expand_sweep_py
    run_scan = run_scan_py
    counts_from_runs = counts_from_runs_py


def warmup() -> None:
    """Trigger jit compilation on tiny inputs (no-op on the fallback path)."""
    c = np.array([1, 0], np.int64)
    d = np.ones(2, np.int64)
    carrier_sweep(c, d, 1, True)
    ball_queue_sweep(c, d, 1, True, 1)
    free_flow_sweep(c, d)
    bits = expand_sweep(c, d, 2)
    s, l = run_scan(bits)
    counts_from_runs(s, l, np.array([0, 1, 2], np.int64))
