"""Exact partial-matching transport distance between plane measures.

The diagonal acts as an infinite-capacity reservoir: every point may be
matched to another point (Euclidean cost) or sent to its diagonal projection
(gap cost).  On finite inputs this is a dense assignment problem on the
(n+m) x (n+m) augmented cost matrix; the solver is
``scipy.optimize.linear_sum_assignment`` (a Jonker-Volgenant variant, cubic
and deterministic).  An exhaustive enumeration over all augmented bijections
serves as the independent oracle on tiny instances.

This module is a validation oracle for the sliced distance, not the hot
path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import SizeLimitError, ValidationError
from .measures import PersistenceMeasure

_MAX_EXPANSION = 4096
_MAX_BRUTE_POINTS = 4


@dataclass(frozen=True)
class Matching:
    """A transport plan between two measures and the diagonal.

    ``pairs`` holds ``(source, target, mass)`` triples where ``source`` and
    ``target`` are point indices or ``None`` for the diagonal;
    ``total_cost_p`` is the summed ``mass * cost**p``.
    """

    pairs: tuple[tuple[int | None, int | None, float], ...]
    total_cost_p: float

    def offdiagonal_transport_cost(self, a: PersistenceMeasure, b: PersistenceMeasure) -> float:
        """Sum of mass * Euclidean distance over point-to-point pairs only.

        This is the order-1 cost term appearing on the right-hand side of the
        general-p stability bound.
        """
        total = 0.0
        for src, dst, mass in self.pairs:
            if src is not None and dst is not None:
                dx = a.births[src] - b.births[dst]
                dy = a.deaths[src] - b.deaths[dst]
                total += mass * math.hypot(dx, dy)
        return total

    def validate(self, a: PersistenceMeasure, b: PersistenceMeasure, p: float) -> None:
        """Check mass conservation and the recorded cost (1e-12 relative)."""
        out = np.zeros(len(a))
        into = np.zeros(len(b))
        cost = 0.0
        for src, dst, mass in self.pairs:
            if mass <= 0:
                raise ValidationError("pair masses must be positive")
            if src is not None:
                out[src] += mass
            if dst is not None:
                into[dst] += mass
            cost += mass * _pair_cost(a, b, src, dst) ** p
        if not np.allclose(out, a.masses, rtol=1e-9, atol=1e-12):
            raise ValidationError("source masses are not conserved")
        if not np.allclose(into, b.masses, rtol=1e-9, atol=1e-12):
            raise ValidationError("target masses are not conserved")
        if abs(cost - self.total_cost_p) > 1e-12 * max(1.0, abs(cost)):
            raise ValidationError("recorded cost does not match the pairs")


def _pair_cost(a, b, src, dst) -> float:
    if src is not None and dst is not None:
        return math.hypot(a.births[src] - b.births[dst], a.deaths[src] - b.deaths[dst])
    if src is not None:
        return float(a.gaps[src])
    if dst is not None:
        return float(b.gaps[dst])
    return 0.0


def _common_unit(a: PersistenceMeasure, b: PersistenceMeasure) -> tuple[list[int], list[int], float]:
    """Expand both measures into atoms of one shared unit mass.

    Masses must be rational multiples of a common unit; the expansion size is
    guarded.  Returns per-side lists of original indices (one entry per unit
    atom) and the unit.
    """
    masses = list(a.masses) + list(b.masses)
    if not masses:
        return [], [], 1.0
    fracs = []
    for m in masses:
        f = Fraction(m).limit_denominator(_MAX_EXPANSION)
        if abs(float(f) - m) > 1e-12 * max(1.0, m):
            raise ValidationError(
                "masses must be rational multiples of a common unit "
                f"(cannot expand mass {m!r})"
            )
        fracs.append(f)
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // math.gcd(denom, f.denominator)
    counts = [int(f * denom) for f in fracs]
    total = sum(counts)
    if total > _MAX_EXPANSION:
        raise SizeLimitError(
            f"unit expansion needs {total} atoms, above the {_MAX_EXPANSION} guard"
        )
    unit = 1.0 / denom
    idx_a = [i for i in range(len(a)) for _ in range(counts[i])]
    idx_b = [j for j in range(len(b)) for _ in range(counts[len(a) + j])]
    return idx_a, idx_b, unit


def fg2d(a: PersistenceMeasure, b: PersistenceMeasure, p: float) -> tuple[float, Matching]:
    """Exact transport distance and an optimal matching.

    Returns the rooted distance (cost ** (1/p)) and the plan realizing it.
    Non-unit masses are expanded into common-unit atoms first (guarded).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    idx_a, idx_b, unit = _common_unit(a, b)
    n, m = len(idx_a), len(idx_b)
    if n == 0 and m == 0:
        return 0.0, Matching(pairs=(), total_cost_p=0.0)
    ab = np.column_stack([a.births[idx_a], a.deaths[idx_a]]) if n else np.empty((0, 2))
    bb = np.column_stack([b.births[idx_b], b.deaths[idx_b]]) if m else np.empty((0, 2))
    size = n + m
    cost = np.zeros((size, size))
    if n and m:
        diff = ab[:, None, :] - bb[None, :, :]
        cost[:n, :m] = np.sqrt((diff**2).sum(axis=-1)) ** p
    if n:
        cost[:n, m:] = (a.gaps[idx_a] ** p)[:, None]
    if m:
        cost[n:, :m] = (b.gaps[idx_b] ** p)[None, :]
    rows, cols = linear_sum_assignment(cost)

    agg: dict[tuple[int | None, int | None], float] = {}
    total = 0.0
    for r, c in zip(rows, cols):
        src = idx_a[r] if r < n else None
        dst = idx_b[c] if c < m else None
        if src is None and dst is None:
            continue
        agg[(src, dst)] = agg.get((src, dst), 0.0) + unit
        total += unit * cost[r, c]
    pairs = tuple(
        (src, dst, mass) for (src, dst), mass in sorted(agg.items(), key=_pair_key)
    )
    matching = Matching(pairs=pairs, total_cost_p=total)
    return total ** (1.0 / p) if total > 0 else 0.0, matching


def _pair_key(item):
    (src, dst), _ = item
    return (src is None, src if src is not None else -1, dst is None, dst if dst is not None else -1)


def fg2d_bruteforce(a: PersistenceMeasure, b: PersistenceMeasure, p: float) -> float:
    """Exhaustive minimum over all diagonal-augmented bijections (tiny inputs).

    Requires unit masses and at most four points per side.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    for m in (a, b):
        if len(m) and not np.allclose(m.masses, 1.0, rtol=1e-9, atol=0):
            raise ValidationError("brute force requires unit masses")
    if len(a) > _MAX_BRUTE_POINTS or len(b) > _MAX_BRUTE_POINTS:
        raise SizeLimitError(
            f"brute force limited to {_MAX_BRUTE_POINTS} points per side "
            f"(got {len(a)} and {len(b)})"
        )
    ga = a.gaps
    gb = b.gaps
    base = float((ga**p).sum() + (gb**p).sum())
    best = base
    na, nb = len(a), len(b)
    for k in range(1, min(na, nb) + 1):
        for sub_a in combinations(range(na), k):
            for sub_b in permutations(range(nb), k):
                cost = base
                for i, j in zip(sub_a, sub_b):
                    d = math.hypot(a.births[i] - b.births[j], a.deaths[i] - b.deaths[j])
                    cost += d**p - ga[i] ** p - gb[j] ** p
                if cost < best:
                    best = cost
    return best ** (1.0 / p) if best > 0 else 0.0
