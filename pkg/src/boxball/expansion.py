"""Expansion map: box counts -> 0/1 segment sequence, and block extraction.

During interactions the per-box counts do not show where one soliton ends
and the next begins; on the expanded segment line solitons are plain
maximal runs of ones, so sizes, gaps and positions are well defined at
every time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _kernels
from .euler import EulerState
from .geometry import CapacityProfile, SegmentGeometry, geometry


class EmptySequence(ValueError):
    """No ones anywhere: there is no block decomposition."""


@dataclass(frozen=True, eq=False)
class BinarySeq:
    """Segment values over a window starting at segment_start; zero outside."""

    bits: np.ndarray
    segment_start: int
    profile: CapacityProfile

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=np.int64).copy()
        if b.ndim != 1 or np.any((b != 0) & (b != 1)):
            raise ValueError("bits must be a one-dimensional 0/1 sequence")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @property
    def geometry(self) -> SegmentGeometry:
        return geometry(self.profile)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinarySeq):
            return NotImplemented
        return (
            self.segment_start == other.segment_start
            and self.profile == other.profile
            and np.array_equal(self.bits, other.bits)
        )

    def __repr__(self) -> str:
        return f"BinarySeq(start={self.segment_start}, bits={self.bits.tolist()})"


@dataclass(frozen=True)
class BlockDecomposition:
    """Runs of ones read left to right.

    Q[n] is the size of the nth run, E[n-1] the gap before it (interior
    gaps only), X0 the segment index where run 0 starts.  K[n] is the
    capacity of the box holding the first segment of run n; Lam[n-1] the
    capacity of the box holding the first segment of the nth empty block
    (the final entry covers the trailing empty region).
    """

    Q: Tuple[int, ...]
    E: Tuple[int, ...]
    X0: int
    K: Tuple[int, ...]
    Lam: Tuple[int, ...]

    def __post_init__(self):
        if len(self.Q) < 1:
            raise ValueError("a decomposition has at least one run")
        if len(self.E) != len(self.Q) - 1:
            raise ValueError("E must list the interior gaps only")
        if len(self.K) != len(self.Q) or len(self.Lam) != len(self.Q):
            raise ValueError("K and Lam must have one entry per run / gap")
        if any(q < 1 for q in self.Q) or any(e < 1 for e in self.E):
            raise ValueError("run and gap sizes must be >= 1")

    @property
    def N(self) -> int:
        return len(self.Q)

    def run_starts(self) -> Tuple[int, ...]:
        starts = [self.X0]
        for i in range(1, self.N):
            starts.append(starts[-1] + self.Q[i - 1] + self.E[i - 1])
        return tuple(starts)


def expand(state: EulerState) -> BinarySeq:
    """Rewrite a state as segments: box n gets U_n ones, left-justified when
    the segment just before the box is a 1, right-justified otherwise.

    Per-box bit sums always equal the counts; with all capacities 1 the map
    is the identity.
    """
    geom = geometry(state.profile)
    caps = geom.caps_view(state.window_start, len(state.counts))
    bits = _kernels.expand_sweep(state.counts, caps, int(caps.sum()))
    return BinarySeq(
        bits=bits,
        segment_start=geom.boundary(state.window_start),
        profile=state.profile,
    )


def extract_blocks(seq: BinarySeq) -> BlockDecomposition:
    """Read runs, gaps, the anchor position, and the box capacities at each
    run start and gap start."""
    starts, lengths = _kernels.run_scan(seq.bits)
    if len(starts) == 0:
        raise EmptySequence("all segments are 0")
    geom = seq.geometry
    starts = starts + seq.segment_start
    q = tuple(int(v) for v in lengths)
    e = tuple(
        int(starts[i + 1] - (starts[i] + lengths[i])) for i in range(len(starts) - 1)
    )
    k = tuple(geom.profile.capacity(geom.segment_to_box(int(s))) for s in starts)
    gap_starts = [int(starts[i] + lengths[i]) for i in range(len(starts))]
    lam = tuple(geom.profile.capacity(geom.segment_to_box(s)) for s in gap_starts)
    return BlockDecomposition(Q=q, E=e, X0=int(starts[0]), K=k, Lam=lam)


def segment_to_box(geom: SegmentGeometry, segment: int) -> int:
    """Box n with s_n <= segment < s_{n+1}."""
    return geom.segment_to_box(segment)


def _run_layout(q, e, x0) -> Tuple[np.ndarray, np.ndarray]:
    starts = np.empty(len(q), dtype=np.int64)
    pos = x0
    for i, qi in enumerate(q):
        starts[i] = pos
        if i < len(q) - 1:
            pos += qi + e[i]
    return starts, np.asarray(q, dtype=np.int64)


def counts_from_positions(
    q, e, x0: int, profile: CapacityProfile, time: int = 0, window_start: int = 0
) -> EulerState:
    """Per-box bit sums of runs of sizes q, interior gaps e, first run at
    segment x0."""
    geom = geometry(profile)
    starts, lengths = _run_layout(q, e, x0)
    if int(starts[0]) < geom.boundary(window_start):
        raise ValueError("runs start left of the requested window")
    last_seg = int(starts[-1] + lengths[-1] - 1)
    last_box = geom.segment_to_box(last_seg)
    bounds = geom.bounds_view(window_start, last_box + 1 - window_start)
    counts = _kernels.counts_from_runs(starts, lengths, bounds)
    return EulerState._trusted(counts, profile, time, window_start)


def positions_to_state(
    blocks: BlockDecomposition,
    profile: CapacityProfile,
    time: int = 0,
    window_start: int = 0,
) -> EulerState:
    """Lay the runs back on the segment line and sum bits per box.

    Right inverse of expand + extract_blocks on counts: the per-box sums
    always reproduce the original state, even when the in-box justification
    of a raw placement differs.
    """
    return counts_from_positions(
        blocks.Q, blocks.E, blocks.X0, profile, time=time, window_start=window_start
    )


def bits_from_positions(q, e, x0: int, segment_start: int, length: int) -> np.ndarray:
    """Raw 0/1 placement of the runs on segments
    [segment_start, segment_start+length); raises if a run falls outside."""
    starts, lengths = _run_layout(q, e, x0)
    bits = np.zeros(length, dtype=np.int64)
    for s, l in zip(starts, lengths):
        a = int(s) - segment_start
        if a < 0 or a + int(l) > length:
            raise ValueError("run outside the segment window")
        bits[a : a + int(l)] = 1
    return bits
