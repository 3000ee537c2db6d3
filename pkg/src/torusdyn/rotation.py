"""Rotation set estimation from Birkhoff averages of displacement.

Estimates are inner approximations: convex hulls of finite-horizon means
over a seed grid.  The limit structure is reported through a two-horizon
Hausdorff gap diagnostic, never as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import convex_hull, hausdorff_gap, interior_margin
from .maps import DEFAULT_ESCAPE_BOUND, LiftedTorusMap, OrbitEscapeError

DEFAULT_HORIZONS = (1000, 10000)
DEFAULT_GRID = (64, 64)


class WrongHomotopyClassError(ValueError):
    pass


@dataclass(frozen=True)
class RotationPolygon:
    """Convex estimate of the rotation set of an identity-class lift."""

    hull: np.ndarray              # vertices at the larger horizon, CCW
    hull_coarse: np.ndarray       # vertices at the smaller horizon
    sample_means: list            # (seed, mean at n2, n2) per seed
    horizons: tuple
    hausdorff_gap: float

    def margin(self, p=(0.0, 0.0)) -> float:
        """Signed distance of p to the hull boundary (heuristic)."""
        return interior_margin(p, self.hull)


@dataclass(frozen=True)
class RotationInterval:
    """Vertical rotation interval estimate for a Dehn-class lift."""

    lo: float
    hi: float
    lo_coarse: float
    hi_coarse: float
    sample_means: list
    horizons: tuple
    hausdorff_gap: float

    def margin(self, x: float = 0.0) -> float:
        return min(x - self.lo, self.hi - x)


def seed_grid(nx: int, ny: int) -> np.ndarray:
    """Uniform (nx*ny, 2) grid of seeds on [0,1)^2."""
    xs = np.arange(nx) / nx
    ys = np.arange(ny) / ny
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([X.ravel(), Y.ravel()], axis=-1)


def _advance(m: LiftedTorusMap, Z: np.ndarray, n: int) -> np.ndarray:
    """f^n applied to a batch of points, with a coarse escape check."""
    Z = np.asarray(Z, dtype=float)
    for i in range(n):
        Z = m.forward(Z)
        if i % 256 == 0 and not np.all(np.abs(Z) <= DEFAULT_ESCAPE_BOUND):
            raise OrbitEscapeError(Z)
    return Z


def birkhoff_mean(m: LiftedTorusMap, z, n: int) -> np.ndarray:
    """(f^n(z) - z)/n; z may be a single point or a batch."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = np.asarray(z, dtype=float)
    return (_advance(m, z, n) - z) / n


def estimate_rotation_set(
    m: LiftedTorusMap,
    seeds: np.ndarray,
    horizons: tuple = DEFAULT_HORIZONS,
) -> RotationPolygon:
    """Hull of Birkhoff means over seeds, with a two-horizon gap diagnostic."""
    if m.homotopy_class != "identity":
        raise WrongHomotopyClassError("rotation set needs an identity-class lift")
    n1, n2 = horizons
    if not (0 < n1 < n2):
        raise ValueError("horizons must satisfy 0 < n1 < n2")
    seeds = np.asarray(seeds, dtype=float).reshape(-1, 2)
    if len(seeds) == 0:
        raise ValueError("empty seed grid")
    Z = _advance(m, seeds, n1)
    means1 = (Z - seeds) / n1
    Z = _advance(m, Z, n2 - n1)
    means2 = (Z - seeds) / n2
    hull1 = convex_hull(means1)
    hull2 = convex_hull(means2)
    return RotationPolygon(
        hull=hull2,
        hull_coarse=hull1,
        sample_means=[(seeds[i], means2[i], n2) for i in range(len(seeds))],
        horizons=(n1, n2),
        hausdorff_gap=hausdorff_gap(hull1, hull2),
    )


def estimate_vertical_rotation_set(
    m: LiftedTorusMap,
    seeds: np.ndarray,
    horizons: tuple = DEFAULT_HORIZONS,
) -> RotationInterval:
    """[min, max] of vertical Birkhoff means at the larger horizon."""
    if m.homotopy_class != "dehn":
        raise WrongHomotopyClassError("vertical rotation set needs a Dehn-class lift")
    n1, n2 = horizons
    if not (0 < n1 < n2):
        raise ValueError("horizons must satisfy 0 < n1 < n2")
    seeds = np.asarray(seeds, dtype=float).reshape(-1, 2)
    if len(seeds) == 0:
        raise ValueError("empty seed grid")
    Z = _advance(m, seeds, n1)
    v1 = (Z[:, 1] - seeds[:, 1]) / n1
    Z = _advance(m, Z, n2 - n1)
    v2 = (Z[:, 1] - seeds[:, 1]) / n2
    lo1, hi1 = float(v1.min()), float(v1.max())
    lo2, hi2 = float(v2.min()), float(v2.max())
    gap = max(abs(lo1 - lo2), abs(hi1 - hi2))
    return RotationInterval(
        lo=lo2,
        hi=hi2,
        lo_coarse=lo1,
        hi_coarse=hi1,
        sample_means=[(seeds[i], v2[i], n2) for i in range(len(seeds))],
        horizons=(n1, n2),
        hausdorff_gap=gap,
    )


def rotation_vector_of_point(
    m: LiftedTorusMap,
    z,
    horizons: tuple = DEFAULT_HORIZONS,
    tol: float = 1e-4,
):
    """Pointwise rotation vector, or None when the two horizons disagree.

    Identity class returns a plane vector; Dehn class a vertical number.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n1, n2 = horizons
    z = np.asarray(z, dtype=float)
    Z = _advance(m, z, n1)
    mean1 = (Z - z) / n1
    Z = _advance(m, Z, n2 - n1)
    mean2 = (Z - z) / n2
    if m.homotopy_class == "dehn":
        if abs(mean1[..., 1] - mean2[..., 1]) < tol:
            return float(mean2[..., 1])
        return None
    if np.linalg.norm(mean1 - mean2) < tol:
        return mean2
    return None


def measure_rotation_vector(m: LiftedTorusMap, samples) -> np.ndarray:
    """Mean one-step displacement f(z) - z over a sample cloud."""
    samples = np.asarray(samples, dtype=float).reshape(-1, 2)
    if len(samples) == 0:
        raise ValueError("samples must be nonempty")
    return np.mean(m.forward(samples) - samples, axis=0)
