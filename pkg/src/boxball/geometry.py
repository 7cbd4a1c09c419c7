"""Box capacities, carrier-capacity schedules, and segment geometry.

Boxes are indexed 0, 1, 2, ...; box n holds at most a fixed number of balls
(its capacity).  Expanding every box into unit segments gives the segment
line: box n owns segments s_n .. s_{n+1}-1 where s_0 = 0 and s_{n+1} - s_n
is the capacity of box n.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Tuple

import numpy as np

from .xint import POS_INF, XInt, XIntLike, as_xint


@dataclass(frozen=True)
class CapacityProfile:
    """Per-box capacities over an explicit window, a default elsewhere."""

    capacities: Tuple[int, ...] = ()
    window_start: int = 0
    default_capacity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))
        if self.window_start < 0:
            raise ValueError("window_start must be >= 0")
        if self.default_capacity < 1:
            raise ValueError("default_capacity must be >= 1")
        if any(c < 1 for c in self.capacities):
            raise ValueError("every box capacity must be >= 1")

    def capacity(self, n: int) -> int:
        i = n - self.window_start
        if 0 <= i < len(self.capacities):
            return self.capacities[i]
        return self.default_capacity

    def caps_array(self, start: int, count: int) -> np.ndarray:
        """Capacities of boxes start .. start+count-1 as int64."""
        out = np.full(count, self.default_capacity, dtype=np.int64)
        lo = max(start, self.window_start)
        hi = min(start + count, self.window_start + len(self.capacities))
        if lo < hi:
            out[lo - start : hi - start] = self.capacities[
                lo - self.window_start : hi - self.window_start
            ]
        return out

    @property
    def max_capacity(self) -> int:
        return max(self.default_capacity, max(self.capacities, default=1))


def unit_profile() -> CapacityProfile:
    """The classical case: every box holds one ball."""
    return CapacityProfile()


@dataclass(frozen=True)
class CarrierSchedule:
    """Carrier capacity per time step: the sweep from t to t+1 uses value at(t+1).

    Values are nonnegative integers or +inf; unspecified times fall back to
    the default (+inf unless overridden).
    """

    entries: Tuple[Tuple[int, XInt], ...] = ()
    default: XInt = POS_INF

    def __post_init__(self):
        raw = self.entries
        if isinstance(raw, Mapping):
            raw = raw.items()
        norm = tuple(sorted((int(t), as_xint(m)) for t, m in raw))
        object.__setattr__(self, "entries", norm)
        object.__setattr__(self, "default", as_xint(self.default))
        for _, m in norm:
            _require_capacity(m)
        _require_capacity(self.default)
        object.__setattr__(self, "_map", dict(norm))

    def at(self, t: int) -> XInt:
        return self._map.get(t, self.default)


def _require_capacity(m: XInt) -> None:
    if m.is_neg_inf or (m.is_finite and m.finite < 0):
        raise ValueError(f"carrier capacity must be >= 0 or +inf, got {m}")


def unbounded_schedule() -> CarrierSchedule:
    return CarrierSchedule()


def constant_schedule(m: XIntLike) -> CarrierSchedule:
    return CarrierSchedule(default=as_xint(m))


class SegmentGeometry:
    """Cumulative segment boundaries s_0=0, s_{n+1} = s_n + capacity(n).

    Grows on demand, so any segment index >= 0 resolves to a box.  Caches
    int64 capacity and boundary arrays and hands out read-only views, since
    the hot loops hit the same profile thousands of times.
    """

    def __init__(self, profile: CapacityProfile):
        self.profile = profile
        self._bounds = [0]
        self._caps_np = np.zeros(0, dtype=np.int64)
        self._bounds_np = np.zeros(1, dtype=np.int64)

    def _grow_boxes(self, nboxes: int) -> None:
        b = self._bounds
        if len(b) > nboxes:
            return
        grow_to = max(nboxes, 2 * len(b))
        while len(b) <= grow_to:
            b.append(b[-1] + self.profile.capacity(len(b) - 1))
        self._bounds_np = np.asarray(b, dtype=np.int64)
        self._caps_np = np.diff(self._bounds_np)

    def boundary(self, n: int) -> int:
        """s_n, the first segment of box n."""
        if n < 0:
            raise ValueError("segment geometry covers boxes n >= 0 only")
        self._grow_boxes(n)
        return self._bounds[n]

    def segment_to_box(self, segment: int) -> int:
        """The box n with s_n <= segment < s_{n+1}."""
        if segment < 0:
            raise ValueError("segments are indexed from 0")
        b = self._bounds
        while b[-1] <= segment:
            self._grow_boxes(2 * len(b))
        return bisect.bisect_right(b, segment) - 1

    def caps_view(self, start: int, count: int) -> np.ndarray:
        """Read-only int64 view of capacities for boxes start .. start+count-1."""
        if start < 0:
            raise ValueError("segment geometry covers boxes n >= 0 only")
        self._grow_boxes(start + count)
        v = self._caps_np[start : start + count]
        v.setflags(write=False)
        return v

    def bounds_view(self, start: int, nboxes: int) -> np.ndarray:
        """Read-only view of s_start .. s_{start+nboxes} (length nboxes+1)."""
        self._grow_boxes(start + nboxes)
        v = self._bounds_np[start : start + nboxes + 1]
        v.setflags(write=False)
        return v

    def bounds_array(self, nboxes: int) -> np.ndarray:
        """s_0 .. s_nboxes as int64 (length nboxes+1)."""
        return self.bounds_view(0, nboxes)


@lru_cache(maxsize=512)
def geometry(profile: CapacityProfile) -> SegmentGeometry:
    """Shared geometry per profile; the cache only ever appends boundaries."""
    return SegmentGeometry(profile)


def segment_to_box(geom: SegmentGeometry, segment: int) -> int:
    return geom.segment_to_box(segment)
