"""Projections onto geodesics leaving the diagonal, and sweep events.

Each geodesic ``G_t`` leaves the diagonal orthogonally at ``(t, t)`` and is
isometric to the half-line with the diagonal at 0, so projected measures are
represented by their distance to the diagonal alone (a value on the open
half-line).  Two projections are supported:

* ``orth`` sends a point to its gap value while ``birth <= t <= death``
  (closed window) and to the diagonal otherwise; piecewise constant in t.
* ``cont`` is the Lipschitz tent ``sqrt(2) * max(0, min(t - birth, death - t))``,
  vanishing at the window endpoints and peaking at the gap value at the
  midpoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fg1d import Projected1DMeasure
from .measures import SQRT2, PersistenceMeasure, PlanePoint

VARIANTS = ("orth", "cont")


def project_orth(z: PlanePoint, t: float) -> float:
    """Distance-to-diagonal of the orthogonal projection of ``z`` onto G_t."""
    if z.birth <= t <= z.death:
        return z.gap
    return 0.0


def project_cont(z: PlanePoint, t: float) -> float:
    """Distance-to-diagonal of the continuous (tent) projection of ``z`` onto G_t."""
    return SQRT2 * max(0.0, min(t - z.birth, z.death - t))


def project_measure(m: PersistenceMeasure, t: float, variant: str = "orth") -> Projected1DMeasure:
    """Push a measure onto G_t; points projected to the diagonal are dropped."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    values, masses = [], []
    if variant == "orth":
        for b, d, w in zip(m.births, m.deaths, m.masses):
            if b <= t <= d:
                values.append((d - b) / SQRT2)
                masses.append(w)
    else:
        for b, d, w in zip(m.births, m.deaths, m.masses):
            v = SQRT2 * min(t - b, d - t)
            if v > 0.0:
                values.append(v)
                masses.append(w)
    return Projected1DMeasure(values, masses)


@dataclass(frozen=True)
class Event:
    """One sweep event: everything that changes at a single time.

    Points are identified by (side, index) with side 0 for the first measure
    and side 1 for the second.  ``peaks`` lists tents changing slope at their
    midpoint and ``crossings`` lists pairs of tents whose values coincide at
    this time; both are empty for the orthogonal variant.
    """

    time: float
    enters: tuple = ()
    exits: tuple = ()
    peaks: tuple = ()
    crossings: tuple = ()


@dataclass
class EventList:
    """Sorted, deduplicated sweep events for a pair of measures."""

    events: list[Event] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return [e.time for e in self.events]

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def _dedup_tolerance(coords) -> float:
    scale = max((abs(c) for c in coords), default=1.0)
    return 1e-12 * max(scale, 1.0)


def tent_crossings(a: PlanePoint, b: PlanePoint) -> list[float]:
    """Times where the two tent projections take the same nonzero value.

    At most two: a rising edge can meet the other tent's falling edge once in
    each direction.  Parallel edges (shared birth or shared death) coincide on
    a whole interval and contribute no isolated crossing.
    """
    out = []
    ma, mb = a.midpoint, b.midpoint
    # rising edge of a against falling edge of b, then the mirror case
    t = 0.5 * (a.birth + b.death)
    if max(a.birth, mb) <= t <= min(ma, b.death):
        out.append(t)
    t = 0.5 * (b.birth + a.death)
    if max(b.birth, ma) <= t <= min(mb, a.death):
        out.append(t)
    return out


def events(a: PersistenceMeasure, b: PersistenceMeasure, variant: str = "orth") -> EventList:
    """All sweep events for a pair of measures.

    Orthogonal variant: every birth and death coordinate of both measures.
    Continuous variant: additionally every midpoint and every pairwise
    tent-crossing time between points of the two measures (same side or
    across sides).  Between two consecutive events the 1D transport problem
    of the sliced distance keeps a fixed structure.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    tagged: list[tuple[float, str, object]] = []
    points: list[tuple[int, int, PlanePoint]] = []
    for side, m in enumerate((a, b)):
        for idx, (pt, _) in enumerate(m.points()):
            points.append((side, idx, pt))
            tagged.append((pt.birth, "enter", (side, idx)))
            tagged.append((pt.death, "exit", (side, idx)))
            if variant == "cont":
                tagged.append((pt.midpoint, "peak", (side, idx)))
    if variant == "cont":
        for i in range(len(points)):
            si, ii, pi = points[i]
            for j in range(i + 1, len(points)):
                sj, ij, pj = points[j]
                for t in tent_crossings(pi, pj):
                    tagged.append((t, "cross", ((si, ii), (sj, ij))))
    if not tagged:
        return EventList()
    tagged.sort(key=lambda item: item[0])
    tol = _dedup_tolerance([t for t, _, _ in tagged])
    grouped: list[Event] = []
    start = 0
    while start < len(tagged):
        stop = start + 1
        while stop < len(tagged) and tagged[stop][0] - tagged[start][0] <= tol:
            stop += 1
        time = tagged[start][0]
        buckets = {"enter": [], "exit": [], "peak": [], "cross": []}
        for _, kind, payload in tagged[start:stop]:
            buckets[kind].append(payload)
        grouped.append(
            Event(
                time=time,
                enters=tuple(buckets["enter"]),
                exits=tuple(buckets["exit"]),
                peaks=tuple(buckets["peak"]),
                crossings=tuple(buckets["cross"]),
            )
        )
        start = stop
    return EventList(grouped)


def event_times(a: PersistenceMeasure, b: PersistenceMeasure, variant: str = "orth") -> list[float]:
    """Deduplicated sorted event times only (cheap form of :func:`events`).

    For the continuous variant this restricts pairwise crossings to pairs of
    the same measure, and skips them entirely when the other measure is
    empty: crossings across measures never change the quantile pairing (the
    pairing depends only on per-side cumulative masses and per-side value
    order), and the closed-form integrator handles the sign change of a
    matched difference exactly.
    """
    times: list[float] = []
    for m in (a, b):
        times.extend(m.births)
        times.extend(m.deaths)
        if variant == "cont":
            times.extend(m.midpoints)
    if variant == "cont" and not a.is_empty and not b.is_empty:
        for m in (a, b):
            pts = [PlanePoint(float(bb), float(dd)) for bb, dd in zip(m.births, m.deaths)]
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    times.extend(tent_crossings(pts[i], pts[j]))
    if not times:
        return []
    times.sort()
    tol = _dedup_tolerance(times)
    out = [times[0]]
    for t in times[1:]:
        if t - out[-1] > tol:
            out.append(t)
    return out
