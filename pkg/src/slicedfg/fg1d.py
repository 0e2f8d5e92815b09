"""Closed-form transport distance on the open half-line, with the origin as
an infinite-capacity reservoir.

For measures supported on (0, inf) where mass may be created or destroyed at
0 for the cost of moving it there, the optimal plan is monotone and the
p-th-power cost is the L^p distance between the pseudo-inverses of the
right-tail survival functions:

    cost_p(a, b) = integral_0^inf |Fa^{-1}(s) - Fb^{-1}(s)|^p ds,

with F(x) = mass([x, inf)) and F^{-1}(s) = sup{x : F(x) >= s} (0 when the
set is empty).  Right tails are used instead of the usual left tails because
the total mass near 0 may be unbounded in the theory; for the finite inputs
handled here both conventions integrate identically.

:func:`fg1d` returns the p-th power, not the rooted distance: callers
integrate powers across geodesics and take a single root at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .errors import SizeLimitError, ValidationError


class Projected1DMeasure:
    """Finite weighted atoms on the open half-line (all values > 0).

    Atoms with value 0 (points projected onto the diagonal) are never stored;
    the reservoir at 0 absorbs mass for free.
    """

    __slots__ = ("values", "masses")

    def __init__(self, values=(), masses=None):
        v = np.asarray(values, dtype=np.float64).reshape(-1)
        if masses is None:
            w = np.ones(len(v), dtype=np.float64)
        else:
            w = np.asarray(masses, dtype=np.float64).reshape(-1)
        if w.shape != v.shape:
            raise ValidationError("values and masses must have the same length")
        if not (np.all(np.isfinite(v)) and np.all(v > 0)):
            raise ValidationError("atom values must be positive and finite")
        if not (np.all(np.isfinite(w)) and np.all(w > 0)):
            raise ValidationError("atom masses must be positive and finite")
        v.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "masses", w)

    def __setattr__(self, name, value):
        raise AttributeError("Projected1DMeasure is immutable")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def __repr__(self) -> str:
        return f"Projected1DMeasure({len(self)} atoms)"


@dataclass(frozen=True)
class SurvivalFunction:
    """Step form of F and its pseudo-inverse for a finite atomic measure.

    ``values`` are the distinct atom values sorted descending and
    ``cum_masses`` the strictly increasing cumulative masses, so that
    ``inverse(s) = values[k]`` on the half-open interval
    ``(cum_masses[k-1], cum_masses[k]]`` and 0 beyond the total mass.
    """

    values: np.ndarray
    cum_masses: np.ndarray

    @property
    def total_mass(self) -> float:
        return float(self.cum_masses[-1]) if len(self.cum_masses) else 0.0

    def __call__(self, x: float) -> float:
        """F(x): total mass at values >= x."""
        # values sorted descending: count entries >= x
        idx = np.searchsorted(-self.values, -x, side="right")
        return float(self.cum_masses[idx - 1]) if idx > 0 else 0.0

    def inverse(self, s: float) -> float:
        """F^{-1}(s) with the convention F^{-1}(s) = 0 past the total mass."""
        if s <= 0:
            return float(self.values[0]) if len(self.values) else 0.0
        idx = np.searchsorted(self.cum_masses, s, side="left")
        if idx >= len(self.values):
            return 0.0
        return float(self.values[idx])


def survival(m: Projected1DMeasure) -> SurvivalFunction:
    """Survival step function of a 1D measure; equal-valued atoms are merged."""
    if m.is_empty:
        return SurvivalFunction(np.empty(0), np.empty(0))
    order = np.argsort(-m.values, kind="stable")
    v = m.values[order]
    w = m.masses[order]
    keep_values, keep_masses = [v[0]], [w[0]]
    for value, mass in zip(v[1:], w[1:]):
        if value == keep_values[-1]:
            keep_masses[-1] += mass
        else:
            keep_values.append(value)
            keep_masses.append(mass)
    return SurvivalFunction(np.asarray(keep_values), np.cumsum(keep_masses))


def _pow_sorted(av, am, bv, bm, p):
    """Core integral over merged quantile segments.

    ``av``/``bv`` are value sequences sorted descending with matching mass
    sequences.  Pure-Python two-pointer merge; exact (no quadrature).
    """
    na, nb = len(av), len(bv)
    i = j = 0
    ra = am[0] if na else 0.0
    rb = bm[0] if nb else 0.0
    total = 0.0
    while i < na or j < nb:
        va = av[i] if i < na else 0.0
        vb = bv[j] if j < nb else 0.0
        if i < na and j < nb:
            step = ra if ra <= rb else rb
        elif i < na:
            step = ra
        else:
            step = rb
        diff = va - vb
        if diff < 0.0:
            diff = -diff
        if diff != 0.0:
            total += step * diff**p
        if i < na:
            ra -= step
            if ra <= 0.0:
                i += 1
                ra = am[i] if i < na else 0.0
        if j < nb:
            rb -= step
            if rb <= 0.0:
                j += 1
                rb = bm[j] if j < nb else 0.0
    return total


def fg1d(a: Projected1DMeasure, b: Projected1DMeasure, p: float) -> float:
    """p-th power of the half-line transport distance between ``a`` and ``b``.

    Exact: the integrand is piecewise constant between merged cumulative-mass
    breakpoints, so the integral is a finite sum.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    oa = np.argsort(-a.values, kind="stable")
    ob = np.argsort(-b.values, kind="stable")
    return _pow_sorted(
        a.values[oa].tolist(),
        a.masses[oa].tolist(),
        b.values[ob].tolist(),
        b.masses[ob].tolist(),
        p,
    )


_MAX_BRUTE_ATOMS = 8


def _unit_atoms(m: Projected1DMeasure, unit: float) -> list[float]:
    """Split into atoms of mass ``unit``; refuse non-commensurable input."""
    if m.is_empty:
        return []
    counts = m.masses / unit
    rounded = np.rint(counts)
    if not np.all(np.abs(counts - rounded) <= 1e-9):
        raise ValidationError("masses must be integer multiples of a common unit")
    atoms: list[float] = []
    for value, count in zip(m.values, rounded.astype(int)):
        atoms.extend([float(value)] * count)
    return atoms


def fg1d_bruteforce(a: Projected1DMeasure, b: Projected1DMeasure, p: float) -> float:
    """Exhaustive oracle for :func:`fg1d` on small common-unit instances.

    Enumerates every partial matching between unit atoms (unmatched atoms pay
    their own value to the reservoir) and returns the minimal p-th-power cost.
    Also asserts the classical structure result: among the optima there is
    one whose matched pairs are monotone.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    all_masses = [float(w) for w in a.masses] + [float(w) for w in b.masses]
    if not all_masses:
        return 0.0
    unit = min(all_masses)
    xs = _unit_atoms(a, unit)
    ys = _unit_atoms(b, unit)
    if len(xs) > _MAX_BRUTE_ATOMS or len(ys) > _MAX_BRUTE_ATOMS:
        raise SizeLimitError(
            f"brute force limited to {_MAX_BRUTE_ATOMS} unit atoms per side "
            f"(got {len(xs)} and {len(ys)})"
        )
    base = sum(x**p for x in xs) + sum(y**p for y in ys)
    best = base
    best_is_monotone = not xs or not ys  # all-to-reservoir is trivially monotone
    nx, ny = len(xs), len(ys)
    for k in range(1, min(nx, ny) + 1):
        for sub_x in combinations(range(nx), k):
            for sub_y in permutations(range(ny), k):
                cost = base
                for ix, iy in zip(sub_x, sub_y):
                    cost += abs(xs[ix] - ys[iy]) ** p - xs[ix] ** p - ys[iy] ** p
                if cost < best - 1e-15 * max(1.0, abs(best)):
                    best = cost
                    best_is_monotone = _is_monotone(xs, ys, sub_x, sub_y)
                elif abs(cost - best) <= 1e-12 * max(1.0, abs(best)):
                    best_is_monotone = best_is_monotone or _is_monotone(
                        xs, ys, sub_x, sub_y
                    )
    assert best_is_monotone, "no monotone optimum found (should be impossible)"
    return best * unit


def _is_monotone(xs, ys, sub_x, sub_y) -> bool:
    pairs = sorted((xs[ix], ys[iy]) for ix, iy in zip(sub_x, sub_y))
    for (x1, y1), (x2, y2) in zip(pairs, pairs[1:]):
        if x1 < x2 and y1 > y2:
            return False
    return True
