"""Half-plane confinement clouds and complement-disk statistics.

A confinement cloud collects the grid points of a window whose first
``horizon`` forward iterates all satisfy a half-plane inequality: in theta
mode <f^n(z), (cos t, sin t)> >= 0, in south (north) mode the vertical
coordinate of f^n(z) stays <= 0 (>= 0).  Components touching the window
boundary are the finite proxy for unbounded components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .maps import LiftedTorusMap

DEFAULT_WINDOW = ((-4.0, 4.0), (-4.0, 4.0))
DEFAULT_GRID_STEP = 1.0 / 128.0
DEFAULT_HORIZON = 1000
DEFAULT_EXTRA_ITERATIONS = 10000
DRIFT_THRESHOLD = 1e-3
ESCAPING_FRACTION = 0.99


@dataclass(frozen=True)
class ConfinementCloud:
    mode: str              # "theta" | "south" | "north"
    theta: float | None
    horizon: int
    window: tuple
    grid_step: float
    points: np.ndarray     # surviving grid points, (n, 2)
    labels: np.ndarray     # component id per point, same length
    unbounded_flags: dict  # component id -> touches window boundary
    grid_shape: tuple
    index: np.ndarray      # (row, col) per surviving point

    @property
    def n_components(self) -> int:
        return len(self.unbounded_flags)

    def component_points(self, cid: int) -> np.ndarray:
        return self.points[self.labels == cid]

    def candidate_unbounded_points(self) -> np.ndarray:
        keep = np.array([self.unbounded_flags[c] for c in self.labels])
        return self.points[keep] if len(self.points) else self.points


@dataclass(frozen=True)
class DiskReport:
    region: tuple
    grid_step: float
    disks: list          # (component id, diameter, boundary_touching)
    max_diameter: float  # max over non-boundary-touching components


def _direction(mode: str, theta: float | None) -> np.ndarray:
    if mode == "theta":
        return np.array([np.cos(theta), np.sin(theta)])
    if mode == "south":
        return np.array([0.0, -1.0])
    if mode == "north":
        return np.array([0.0, 1.0])
    raise ValueError("mode must be 'theta', 'south' or 'north'")


def compute_confinement(
    m: LiftedTorusMap,
    mode: str,
    window: tuple = DEFAULT_WINDOW,
    grid_step: float = DEFAULT_GRID_STEP,
    horizon: int = DEFAULT_HORIZON,
    theta: float | None = None,
) -> ConfinementCloud:
    """Grid points whose first `horizon` iterates obey the inequality.

    In theta mode the inequality is on the inner product of the iterate with
    the direction vector; in south/north mode it is on the sign of the
    vertical coordinate.  Requires the matching homotopy class.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if mode == "theta" and theta is None:
        raise ValueError("theta mode needs an angle")
    d = _direction(mode, theta)

    (x0, x1), (y0, y1) = window
    xs = np.arange(x0, x1 + grid_step / 2, grid_step)
    ys = np.arange(y0, y1 + grid_step / 2, grid_step)
    if len(xs) == 0 or len(ys) == 0:
        raise ValueError("empty grid")
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    idx = np.stack(np.meshgrid(np.arange(len(xs)), np.arange(len(ys)), indexing="ij"), axis=-1).reshape(-1, 2)

    if mode == "theta":
        def ok(Z):
            return Z @ d >= 0.0
    elif mode == "south":
        def ok(Z):
            return Z[:, 1] <= 0.0
    else:
        def ok(Z):
            return Z[:, 1] >= 0.0

    alive = ok(pts)
    pts, idx = pts[alive], idx[alive]
    Z = pts.copy()
    for _ in range(horizon):
        if len(Z) == 0:
            break
        Z = m.forward(Z)
        alive = ok(Z)
        pts, idx, Z = pts[alive], idx[alive], Z[alive]

    mask = np.zeros((len(xs), len(ys)), dtype=bool)
    mask[idx[:, 0], idx[:, 1]] = True
    lab, _ = ndimage.label(mask)
    labels = lab[idx[:, 0], idx[:, 1]]
    flags = {}
    for cid in np.unique(labels):
        rows = idx[labels == cid]
        flags[int(cid)] = bool(
            np.any(rows[:, 0] == 0)
            or np.any(rows[:, 0] == len(xs) - 1)
            or np.any(rows[:, 1] == 0)
            or np.any(rows[:, 1] == len(ys) - 1)
        )
    return ConfinementCloud(
        mode=mode,
        theta=theta,
        horizon=horizon,
        window=window,
        grid_step=grid_step,
        points=pts,
        labels=labels,
        unbounded_flags=flags,
        grid_shape=(len(xs), len(ys)),
        index=idx,
    )


def omega_probe(
    cloud: ConfinementCloud,
    m: LiftedTorusMap,
    extra_iterations: int = DEFAULT_EXTRA_ITERATIONS,
    max_samples: int = 2000,
):
    """Drift verdict for the candidate-unbounded part of a cloud.

    "escaping" when at least 99% of sampled points drift past the 1e-3
    threshold with the sign an empty omega-limit would force (consistency
    check only, not a proof); otherwise "persistent".  Returns
    (verdict, drifts) with the per-point projected Birkhoff means.
    """
    pts = cloud.candidate_unbounded_points()
    if len(pts) == 0:
        raise ValueError("cloud has no candidate-unbounded points")
    if len(pts) > max_samples:
        stride = int(np.ceil(len(pts) / max_samples))
        pts = pts[::stride]
    d = _direction(cloud.mode, cloud.theta)
    if cloud.mode == "theta":
        def ok(Z):
            return Z @ d >= 0.0
    elif cloud.mode == "south":
        def ok(Z):
            return Z[:, 1] <= 0.0
    else:
        def ok(Z):
            return Z[:, 1] >= 0.0
    (x0, x1), (y0, y1) = cloud.window

    # points whose later iterates break the inequality were finite-horizon
    # artifacts, not members of the confinement set; drop them from the stats
    alive = np.ones(len(pts), dtype=bool)
    inside = np.ones(len(pts), dtype=bool)
    Z = pts.copy()
    for _ in range(extra_iterations):
        Z = m.forward(Z)
        alive &= ok(Z)
        inside &= (
            (Z[:, 0] >= x0) & (Z[:, 0] <= x1) & (Z[:, 1] >= y0) & (Z[:, 1] <= y1)
        )
    drifts = (Z[alive] - pts[alive]) @ d / extra_iterations
    if np.any(alive & inside):
        verdict = "persistent"  # some orbit never left the window
    elif len(drifts) == 0 or np.mean(drifts > DRIFT_THRESHOLD) >= ESCAPING_FRACTION:
        verdict = "escaping"
    else:
        verdict = "persistent"
    return verdict, drifts


def complement_disk_stats(
    obstacle: np.ndarray,
    region: tuple,
    grid_step: float,
) -> DiskReport:
    """Diameters of grid components of the region minus an obstacle cloud.

    Cells within grid_step of an obstacle point are removed; remaining
    cells are grouped by 4-adjacency.  max_diameter is taken over the
    components that do not touch the region boundary (the finite proxy
    for a genuine complement disk).
    """
    obstacle = np.asarray(obstacle, dtype=float).reshape(-1, 2)
    if len(obstacle) == 0:
        raise ValueError("obstacle must be nonempty")
    (x0, x1), (y0, y1) = region
    xs = np.arange(x0 + grid_step / 2, x1, grid_step)
    ys = np.arange(y0 + grid_step / 2, y1, grid_step)
    if len(xs) == 0 or len(ys) == 0:
        raise ValueError("region smaller than one cell")
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    centers = np.stack([X.ravel(), Y.ravel()], axis=-1)
    tree = cKDTree(obstacle)
    dist, _ = tree.query(centers)
    free = (dist > grid_step).reshape(len(xs), len(ys))
    lab, n = ndimage.label(free)
    disks = []
    max_d = 0.0
    for cid in range(1, n + 1):
        rows, cols = np.nonzero(lab == cid)
        pts = np.stack([xs[rows], ys[cols]], axis=-1)
        touches = bool(
            np.any(rows == 0)
            or np.any(rows == len(xs) - 1)
            or np.any(cols == 0)
            or np.any(cols == len(ys) - 1)
        )
        diam = _diameter(pts)
        disks.append((cid, diam, touches))
        if not touches:
            max_d = max(max_d, diam)
    return DiskReport(region=region, grid_step=grid_step, disks=disks, max_diameter=max_d)


def _diameter(pts: np.ndarray) -> float:
    """Max pairwise distance via the convex hull of the point set."""
    if len(pts) == 1:
        return 0.0
    from .geometry import convex_hull

    hull = convex_hull(pts)
    best = 0.0
    for i in range(len(hull)):
        d = np.linalg.norm(hull[i + 1 :] - hull[i], axis=1)
        if len(d):
            best = max(best, float(d.max()))
    return best
