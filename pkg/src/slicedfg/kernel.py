"""Kernels induced by the sliced distance, Gram matrices, and PSD checks.

For 1 <= p <= 2 the p-th power of the sliced distance is conditionally
negative definite, so ``exp(-dist**p / sigma**2)`` is a positive
semi-definite kernel (Laplace-like at p = 1, Gaussian-like at p = 2).  In
approximate mode the property survives only when every pairwise evaluation
shares one quadrature grid, which :func:`slicedfg.sliced.sfg_power_matrix`
guarantees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .measures import PersistenceMeasure
from .sliced import SfgConfig, sfg, sfg_power_matrix

SIGMA_FACTORS = (0.01, 0.1, 1.0, 10.0, 100.0)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix of pairwise kernel or distance-power values.

    ``kind`` is ``"kernel"`` (unit diagonal) or ``"distance-power"`` (zero
    diagonal).  ``grid`` records the shared sample grid when the entries were
    produced in approximate mode.
    """

    values: np.ndarray
    kind: str
    p: float
    variant: str
    mode: str
    grid: np.ndarray | None = None
    sigma: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValidationError("Gram matrix must be square")
        if np.max(np.abs(v - v.T), initial=0.0) > 1e-12:
            raise ValidationError("Gram matrix must be symmetric within 1e-12")
        diag = np.diag(v)
        target = 1.0 if self.kind == "kernel" else 0.0
        if len(diag) and np.max(np.abs(diag - target)) > 1e-12:
            raise ValidationError(f"diagonal must equal {target} for kind={self.kind!r}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _resolve_cfg(p: float, cfg: SfgConfig | None) -> SfgConfig:
    if cfg is None:
        return SfgConfig(p=p)
    return replace(cfg, p=p)


def sfg_kernel(
    a: PersistenceMeasure,
    b: PersistenceMeasure,
    p: float,
    sigma: float,
    cfg: SfgConfig | None = None,
) -> float:
    """exp(-dist(a,b)**p / sigma**2); equals 1 iff the distance is 0.

    The kernel is only valid for 1 <= p <= 2 (the distance itself is fine for
    larger p, the induced kernel is not).
    """
    if not 1 <= p <= 2:
        raise ValueError("kernel requires 1 <= p <= 2")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    cfg = _resolve_cfg(p, cfg)
    d = sfg(a, b, cfg)
    return math.exp(-(d**p) / sigma**2)


def distance_power_matrix(ms, p: float, cfg: SfgConfig | None = None) -> GramMatrix:
    """Pairwise p-th-power distances as a GramMatrix (zero diagonal)."""
    cfg = _resolve_cfg(p, cfg)
    power, grid = sfg_power_matrix(ms, cfg)
    return GramMatrix(
        values=power,
        kind="distance-power",
        p=p,
        variant=cfg.variant,
        mode=cfg.mode,
        grid=grid,
    )


def gram(ms, p: float, sigma: float, cfg: SfgConfig | None = None) -> GramMatrix:
    """Kernel Gram matrix of a list of measures (shared grid in approx mode)."""
    if not 1 <= p <= 2:
        raise ValueError("kernel requires 1 <= p <= 2")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    cfg = _resolve_cfg(p, cfg)
    power, grid = sfg_power_matrix(ms, cfg)
    return GramMatrix(
        values=np.exp(-power / sigma**2),
        kind="kernel",
        p=p,
        variant=cfg.variant,
        mode=cfg.mode,
        grid=grid,
        sigma=sigma,
    )


def kernel_matrix_from_powers(g: GramMatrix, sigma: float) -> GramMatrix:
    """Kernelize an existing distance-power matrix with bandwidth ``sigma``."""
    if g.kind != "distance-power":
        raise ValidationError("expected a distance-power matrix")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return GramMatrix(
        values=np.exp(-g.values / sigma**2),
        kind="kernel",
        p=g.p,
        variant=g.variant,
        mode=g.mode,
        grid=g.grid,
        sigma=sigma,
    )


def eigcheck(g) -> tuple[float, float]:
    """Extreme eigenvalues of a symmetric matrix via cyclic Jacobi rotations.

    Iterates full sweeps until the off-diagonal Frobenius norm drops below
    1e-12 times the matrix Frobenius norm.  Deterministic; refuses inputs
    that are asymmetric beyond 1e-9.
    """
    A = np.array(g.values if isinstance(g, GramMatrix) else g, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("matrix must be square")
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-9:
        raise ValidationError("matrix is asymmetric beyond 1e-9")
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    if n == 0:
        raise ValidationError("matrix must be nonempty")
    if n == 1:
        return float(A[0, 0]), float(A[0, 0])
    norm = float(np.linalg.norm(A))
    if norm == 0.0:
        return 0.0, 0.0
    tol = 1e-12 * norm
    for _ in range(100):
        off = math.sqrt(max(0.0, float(np.sum(A**2) - np.sum(np.diag(A) ** 2))))
        if off <= tol:
            break
        for r in range(n - 1):
            for c in range(r + 1, n):
                arc = A[r, c]
                if abs(arc) <= tol / (n * n):
                    continue
                theta = (A[c, c] - A[r, r]) / (2.0 * arc)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                cth = 1.0 / math.sqrt(t * t + 1.0)
                sth = t * cth
                row_r = A[r, :].copy()
                row_c = A[c, :].copy()
                A[r, :] = cth * row_r - sth * row_c
                A[c, :] = sth * row_r + cth * row_c
                col_r = A[:, r].copy()
                col_c = A[:, c].copy()
                A[:, r] = cth * col_r - sth * col_c
                A[:, c] = sth * col_r + cth * col_c
                A[r, c] = A[c, r] = 0.0
    diag = np.diag(A)
    return float(diag.min()), float(diag.max())


def suggest_sigmas(g: GramMatrix) -> list[float]:
    """Bandwidth candidates from the quantiles of a distance-power matrix.

    Takes the first decile, median and last decile of the strict upper
    triangle, scales each by {0.01, 0.1, 1, 10, 100}, and returns the square
    roots (so that dist**p / sigma**2 is order one at the unscaled quantile),
    sorted ascending and deduplicated.  Up to 15 candidates.
    """
    if g.kind != "distance-power":
        raise ValidationError("expected a distance-power matrix")
    if g.n < 2:
        raise ValidationError("need at least two measures to suggest bandwidths")
    iu = np.triu_indices(g.n, k=1)
    vals = g.values[iu]
    quantiles = np.quantile(vals, [0.1, 0.5, 0.9])
    candidates = sorted(
        {
            math.sqrt(q * f)
            for q in quantiles
            for f in SIGMA_FACTORS
            if q * f > 0
        }
    )
    if not candidates:
        raise ValidationError("all pairwise distances are zero")
    return candidates
