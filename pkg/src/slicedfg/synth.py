"""Synthetic inputs: random diagrams, adversarial families, chaotic orbits.

Everything is deterministic per seed through the package's portable
generator (:mod:`slicedfg.rng`), so corpora regenerate bit-identically
across platforms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .measures import SQRT2, PersistenceMeasure
from .rng import Xoshiro256StarStar


def gen_uniform(n: int, seed: int, box: tuple[float, float] = (0.0, 1.0)) -> PersistenceMeasure:
    """n unit-mass points with birth and death uniform on ``box``, conditioned
    on birth < death by rejection (both coordinates are redrawn on violation).
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    lo, hi = box
    if not lo < hi:
        raise ValidationError("box must be ordered")
    rng = Xoshiro256StarStar(seed)
    pts = []
    while len(pts) < n:
        birth = rng.uniform(lo, hi)
        death = rng.uniform(lo, hi)
        if birth < death:
            pts.append((birth, death))
    return PersistenceMeasure(pts)


def gen_dirac_family(n: int) -> tuple[PersistenceMeasure, PersistenceMeasure]:
    """The pair of single-point measures whose sliced and unsliced distances
    diverge from each other as n grows: {(-n, n)} against the copy pushed
    outward by 1/ln(n) in both coordinates.
    """
    if n < 2:
        raise ValidationError("n must be >= 2 (needs ln(n) > 0)")
    eps = 1.0 / math.log(n)
    mu = PersistenceMeasure([(-float(n), float(n))])
    nu = PersistenceMeasure([(-float(n) - eps, float(n) + eps)])
    return mu, nu


def gen_grid_family(n: int, p: float) -> tuple[PersistenceMeasure, PersistenceMeasure]:
    """Staggered grids of ceil(n**p)+1 points at step sqrt(2)/n, the second
    offset by half a step; the sliced p-th-power distance between them is
    exactly 1/n**p while the unsliced distance stays >= 1.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if p < 1:
        raise ValueError("p must be >= 1")
    step = SQRT2 / n
    count = math.ceil(n**p) + 1
    mu = PersistenceMeasure([(k * step, (k + 1) * step) for k in range(count)])
    nu = PersistenceMeasure([((k + 0.5) * step, (k + 1.5) * step) for k in range(count)])
    return mu, nu


@dataclass(frozen=True)
class OrbitParams:
    """Parameters of the linked-twist-map orbit generator.

    r = 0 is allowed and yields the constant orbit at the random initial
    position (the recurrence fixes every point).
    """

    r: float
    n_points: int
    seed: int

    def __post_init__(self):
        if self.r < 0:
            raise ValidationError("r must be >= 0")
        if self.n_points < 1:
            raise ValidationError("n_points must be >= 1")


def gen_orbit(params: OrbitParams) -> np.ndarray:
    """Orbit of the linked twist map on the unit torus.

    Starting from a seeded uniform position, iterates

        x' = x + r * y * (1 - y)   mod 1
        y' = y + r * x' * (1 - x') mod 1

    (the y-update uses the already-updated x).  Returns n_points rows, the
    first being the initial position.
    """
    rng = Xoshiro256StarStar(params.seed)
    x = rng.random()
    y = rng.random()
    out = np.empty((params.n_points, 2))
    out[0] = (x, y)
    r = params.r
    for i in range(1, params.n_points):
        x = (x + r * y * (1.0 - y)) % 1.0
        y = (y + r * x * (1.0 - x)) % 1.0
        out[i] = (x, y)
    return out


def save_orbit(points: np.ndarray, path) -> None:
    """Write an orbit as ``x,y`` CSV lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# x,y\n")
        for x, y in points:
            fh.write(f"{float(x)!r},{float(y)!r}\n")
