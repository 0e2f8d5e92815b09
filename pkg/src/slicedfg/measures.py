"""Persistence measures on the open half-plane and their basic functionals.

A persistence measure is a finite list of weighted points ``(birth, death)``
with ``birth < death``; a persistence diagram is the special case where every
mass is a positive integer (the type does not distinguish the two).  The
distance from a point to the diagonal ``{birth = death}`` is
``(death - birth) / sqrt(2)`` and is called the *gap* throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ValidationError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PlanePoint:
    """A point of the open half-plane, birth strictly below death."""

    birth: float
    death: float

    def __post_init__(self):
        if not (math.isfinite(self.birth) and math.isfinite(self.death)):
            raise ValidationError("coordinates must be finite")
        if not self.birth < self.death:
            raise ValidationError("birth must be strictly less than death")

    @property
    def gap(self) -> float:
        """Euclidean distance to the diagonal, (death - birth)/sqrt(2)."""
        return (self.death - self.birth) / SQRT2

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.birth + self.death)


class PersistenceMeasure:
    """Finite weighted point measure supported on {birth < death}.

    Parameters
    ----------
    points : array-like, shape (n, 2)
        Birth/death coordinates.
    masses : array-like, shape (n,), optional
        Positive weights; defaults to 1 for every point.

    Duplicate points are kept as separate entries (masses effectively add).
    Instances are immutable; the coordinate arrays are read-only views.
    """

    __slots__ = ("births", "deaths", "masses")

    def __init__(self, points=(), masses=None):
        pts = np.asarray(points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValidationError("points must have shape (n, 2)")
        if masses is None:
            w = np.ones(len(pts), dtype=np.float64)
        else:
            w = np.asarray(masses, dtype=np.float64)
        if w.shape != (len(pts),):
            raise ValidationError("masses must have shape (n,)")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("coordinates must be finite")
        if not np.all(pts[:, 0] < pts[:, 1]):
            raise ValidationError("birth must be strictly less than death")
        if not (np.all(np.isfinite(w)) and np.all(w > 0)):
            raise ValidationError("masses must be positive and finite")
        births = np.ascontiguousarray(pts[:, 0])
        deaths = np.ascontiguousarray(pts[:, 1])
        w = np.ascontiguousarray(w)
        for arr in (births, deaths, w):
            arr.setflags(write=False)
        PersistenceMeasure._set(self, "births", births)
        PersistenceMeasure._set(self, "deaths", deaths)
        PersistenceMeasure._set(self, "masses", w)

    @staticmethod
    def _set(obj, name, value):
        object.__setattr__(obj, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("PersistenceMeasure is immutable")

    @classmethod
    def from_pairs(cls, entries: Iterable[Sequence[float]]) -> "PersistenceMeasure":
        """Build from (birth, death) or (birth, death, mass) tuples."""
        pts, ws = [], []
        for entry in entries:
            if len(entry) == 2:
                b, d = entry
                m = 1.0
            elif len(entry) == 3:
                b, d, m = entry
            else:
                raise ValidationError("entries must have 2 or 3 fields")
            pts.append((float(b), float(d)))
            ws.append(float(m))
        return cls(pts, ws)

    def __len__(self) -> int:
        return len(self.births)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceMeasure):
            return NotImplemented
        return (
            np.array_equal(self.births, other.births)
            and np.array_equal(self.deaths, other.deaths)
            and np.array_equal(self.masses, other.masses)
        )

    def __hash__(self):
        return hash((self.births.tobytes(), self.deaths.tobytes(), self.masses.tobytes()))

    def __repr__(self) -> str:
        return f"PersistenceMeasure({len(self)} points, total mass {self.total_mass():g})"

    def __getstate__(self):
        return (self.births, self.deaths, self.masses)

    def __setstate__(self, state):
        births, deaths, masses = state
        PersistenceMeasure._set(self, "births", births)
        PersistenceMeasure._set(self, "deaths", deaths)
        PersistenceMeasure._set(self, "masses", masses)

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    @property
    def gaps(self) -> np.ndarray:
        """Distances to the diagonal, (death - birth)/sqrt(2), one per point."""
        return (self.deaths - self.births) / SQRT2

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.births + self.deaths)

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def points(self) -> Iterator[tuple[PlanePoint, float]]:
        """Iterate (PlanePoint, mass) pairs in storage order."""
        for b, d, m in zip(self.births, self.deaths, self.masses):
            yield PlanePoint(float(b), float(d)), float(m)

    def scaled(self, factor: float) -> "PersistenceMeasure":
        """Same points with all masses multiplied by ``factor`` (> 0)."""
        return PersistenceMeasure(
            np.column_stack([self.births, self.deaths]), self.masses * factor
        )


EMPTY = PersistenceMeasure()


def pers(m: PersistenceMeasure, p: float) -> float:
    """p-persistence: the weighted p-norm of the distances to the diagonal.

    Returns ``(sum_i mass_i * gap_i**p) ** (1/p)``, which is also the
    transport distance from ``m`` to the empty measure.  Zero for the empty
    measure.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if m.is_empty:
        return 0.0
    return float(np.sum(m.masses * m.gaps**p) ** (1.0 / p))


def pers_pow(m: PersistenceMeasure, p: float) -> float:
    """p-th power of :func:`pers`, computed without the final root."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if m.is_empty:
        return 0.0
    return float(np.sum(m.masses * m.gaps**p))


def pers_infty(m: PersistenceMeasure) -> float:
    """Largest distance to the diagonal over the support; 0 when empty."""
    if m.is_empty:
        return 0.0
    return float(m.gaps.max())


def normalize(m: PersistenceMeasure) -> PersistenceMeasure:
    """Reweight each point by the inverse of its distance to the diagonal.

    The normalized measure satisfies
    ``sum_i mass'_i * gap_i**(p+1) == sum_i mass_i * gap_i**p`` for every p,
    which is what makes the sliced integral converge at order p instead of
    p+1.
    """
    if m.is_empty:
        return m
    return PersistenceMeasure(
        np.column_stack([m.births, m.deaths]), m.masses / m.gaps
    )


def load_measure(path, format: str = "csv") -> PersistenceMeasure:
    """Read a diagram file: one ``birth,death[,mass]`` line per point.

    Lines starting with ``#`` and blank lines are ignored.  Mass defaults
    to 1.  Raises :class:`ValidationError` with the offending line number on
    malformed or invalid input.
    """
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    pts, ws = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if len(fields) not in (2, 3):
                raise ValidationError(
                    f"{path}:{lineno}: expected 'birth,death[,mass]', got {line!r}"
                )
            try:
                birth = float(fields[0])
                death = float(fields[1])
                mass = float(fields[2]) if len(fields) == 3 else 1.0
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            if not (math.isfinite(birth) and math.isfinite(death)):
                raise ValidationError(
                    f"{path}:{lineno}: coordinates must be finite"
                )
            if not birth < death:
                raise ValidationError(
                    f"{path}:{lineno}: birth must be strictly less than death"
                )
            if not (math.isfinite(mass) and mass > 0):
                raise ValidationError(
                    f"{path}:{lineno}: mass must be positive and finite"
                )
            pts.append((birth, death))
            ws.append(mass)
    return PersistenceMeasure(pts, ws)


def save_measure(m: PersistenceMeasure, path, format: str = "csv") -> None:
    """Write a diagram file that :func:`load_measure` reads back identically.

    Coordinates use shortest round-trip decimal notation, so load(save(m))
    reproduces m bit for bit.
    """
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# birth,death,mass\n")
        for b, d, w in zip(m.births, m.deaths, m.masses):
            fh.write(f"{float(b)!r},{float(d)!r},{float(w)!r}\n")
