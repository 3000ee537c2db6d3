"""Invariant manifold growth and topologically transverse crossings.

Unstable/stable branches of a hyperbolic periodic point are grown as
polylines by iterating a short seed segment along the eigendirection with
adaptive preimage refinement.  Crossings between curves are validated by a
discretized rectangle test: a witness requires a strict side change across
the local manifold piece and an exit through a rectangle side in both
complementary components, so tangential touches never count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .maps import LiftedTorusMap
from .periodic import PeriodicPoint

DEFAULT_H_MAX = 1e-3
DEFAULT_DELTA_SEED = 1e-6
DEFAULT_BUDGET = 200.0
VERTEX_CAP = 2_000_000


class NonHyperbolicError(ValueError):
    pass


class GrowthError(RuntimeError):
    pass


@dataclass(frozen=True)
class ManifoldCurve:
    """Polyline approximation of one branch of W^u or W^s."""

    owner: PeriodicPoint
    kind: str            # "unstable" | "stable"
    branch: str          # "+" | "-"
    vertices: np.ndarray
    arclength: float
    growth_log: tuple    # (iteration levels, refinement insertions)
    h_max: float

    def translated(self, v) -> "ManifoldCurve":
        v = np.asarray(v, dtype=float)
        return ManifoldCurve(
            owner=self.owner,
            kind=self.kind,
            branch=self.branch,
            vertices=self.vertices + v,
            arclength=self.arclength,
            growth_log=self.growth_log,
            h_max=self.h_max,
        )


def polyline_curve(vertices, h_max: float = DEFAULT_H_MAX, kind: str = "unstable") -> ManifoldCurve:
    """Wrap a raw polyline as a curve (for tests and synthetic scans)."""
    vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
    seg = np.diff(vertices, axis=0)
    arclength = float(np.sum(np.linalg.norm(seg, axis=1)))
    owner = PeriodicPoint(
        point=vertices[0],
        period=1,
        translation=(0, 0),
        jacobian=np.eye(2),
        eigenvalues=np.array([1.0 + 0j, 1.0 + 0j]),
        classification="parabolic",
        residual=0.0,
    )
    return ManifoldCurve(
        owner=owner,
        kind=kind,
        branch="+",
        vertices=vertices,
        arclength=arclength,
        growth_log=(0, 0),
        h_max=h_max,
    )


def eigen_frame(pp: PeriodicPoint):
    """Unit eigenvectors (unstable, stable) and eigenvalues of Df^q(Q).

    The returned directions are normalized to point into the upper half
    plane when possible, else toward positive x.
    """
    if pp.classification != "hyperbolic_positive":
        raise NonHyperbolicError(
            "eigen frame requires a hyperbolic point with positive eigenvalues, got %s"
            % pp.classification
        )
    ev, V = np.linalg.eig(pp.jacobian)
    ev = ev.real
    V = V.real
    iu = int(np.argmax(ev))
    is_ = 1 - iu

    def orient(v):
        v = v / np.linalg.norm(v)
        if abs(v[1]) > 1e-14:
            return v if v[1] > 0 else -v
        return v if v[0] > 0 else -v

    return orient(V[:, iu]), orient(V[:, is_]), (float(ev[iu]), float(ev[is_]))


def _growth_maps(m: LiftedTorusMap, pp: PeriodicPoint):
    """g(z) = f^q(z) - (p, r) and its inverse."""
    q = pp.period
    pr = np.asarray(pp.translation, dtype=float)

    def g(z):
        z = np.asarray(z, dtype=float)
        for _ in range(q):
            z = m.forward(z)
        return z - pr

    def g_inv(w):
        w = np.asarray(w, dtype=float) + pr
        for _ in range(q):
            w = m.inverse(w)
        return w

    return g, g_inv


def grow_manifold(
    m: LiftedTorusMap,
    pp: PeriodicPoint,
    kind: str = "unstable",
    branch: str = "+",
    arclength_budget: float = DEFAULT_BUDGET,
    h_max: float = DEFAULT_H_MAX,
    delta_seed: float = DEFAULT_DELTA_SEED,
    vertex_cap: int = VERTEX_CAP,
) -> ManifoldCurve:
    """Grow one manifold branch to a target arclength.

    A seed segment [z0, g(z0)] along the eigendirection is iterated; every
    vertex is the exact image g^m of a seed-segment point, and midpoint
    preimages are inserted until adjacent image spacing is at most h_max.
    """
    if kind not in ("unstable", "stable"):
        raise ValueError("kind must be 'unstable' or 'stable'")
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    if min(arclength_budget, h_max, delta_seed) <= 0:
        raise ValueError("budget, h_max and delta_seed must be positive")
    u_dir, s_dir, (lam_u, lam_s) = eigen_frame(pp)
    g, g_inv = _growth_maps(m, pp)
    step = g if kind == "unstable" else g_inv
    direction = u_dir if kind == "unstable" else s_dir
    if branch == "-":
        direction = -direction

    Q = pp.point
    z0 = Q + delta_seed * direction
    z1 = step(z0)
    if arclength_budget < np.linalg.norm(z1 - z0):
        raise GrowthError("budget exhausted before the first fundamental-domain pass")

    def seed_point(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return z0[None, :] + t[:, None] * (z1 - z0)[None, :]

    def advance(P, times):
        for _ in range(times):
            P = step(P)
        return P

    vertices = [z0]
    arclength = 0.0
    insertions = 0
    level = 0
    # level m spans g^m([z0, z1]); ends match up exactly between levels
    t = np.array([0.0, 1.0])
    pts = seed_point(t)
    while True:
        # refine until image spacing <= h_max
        while True:
            gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
            bad = np.nonzero(gaps > h_max)[0]
            if len(bad) == 0:
                break
            t_new = 0.5 * (t[bad] + t[bad + 1])
            resolvable = (t[bad + 1] - t[bad]) > 1e-14
            t_new = t_new[resolvable]
            if len(t_new) == 0:
                break
            p_new = advance(seed_point(t_new), level)
            insertions += len(t_new)
            t = np.concatenate([t, t_new])
            order = np.argsort(t)
            t = t[order]
            pts = np.concatenate([pts, p_new])[order]
            if len(vertices) + len(t) > vertex_cap:
                raise GrowthError("refinement exceeded the vertex cap")
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        cum = arclength + np.cumsum(seg)
        if cum[-1] >= arclength_budget:
            cut = int(np.searchsorted(cum, arclength_budget))
            vertices.extend(pts[1 : cut + 2])
            arclength = float(cum[min(cut, len(cum) - 1)])
            break
        vertices.extend(pts[1:])
        arclength = float(cum[-1])
        level += 1
        pts = advance(pts, 1)
    V = np.asarray(vertices)
    return ManifoldCurve(
        owner=pp,
        kind=kind,
        branch=branch,
        vertices=V,
        arclength=arclength,
        growth_log=(level, insertions),
        h_max=h_max,
    )


def pullback_rate_fit(m: LiftedTorusMap, curve: ManifoldCurve, max_steps: int = 400):
    """Fit the geometric convergence rate of curve vertices pulled back to Q.

    Returns (slope, expected) where expected = -log(expanding eigenvalue);
    the fit uses log distance per backward (resp. forward, for stable
    curves) iteration inside a clean linear window.
    """
    g, g_inv = _growth_maps(m, curve.owner)
    back = g_inv if curve.kind == "unstable" else g
    u_dir, s_dir, (lam_u, lam_s) = eigen_frame(curve.owner)
    lam = lam_u if curve.kind == "unstable" else 1.0 / lam_s
    Q = curve.owner.point
    z = curve.vertices[3 * len(curve.vertices) // 4]
    dists = []
    for _ in range(max_steps):
        d = float(np.linalg.norm(z - Q))
        dists.append(d)
        # stop once rounding error starts re-expanding the pullback
        if len(dists) > 2 and d > 2.0 * dists[-2] and dists[-2] < 1e-4:
            break
        z = back(z)
    dists = np.asarray(dists)
    imin = int(np.argmin(dists))
    idx = np.array([i for i in range(imin + 1) if dists[i] < 0.5])
    if len(idx) < 3:
        raise GrowthError("not enough points in the linear convergence window")
    slope = np.polyfit(idx, np.log(dists[idx]), 1)[0]
    return float(slope), float(-np.log(lam))


@dataclass(frozen=True)
class CrossingWitness:
    """Rectangle evidence for a topologically transverse intersection."""

    location: np.ndarray
    translate: tuple
    rectangle: np.ndarray   # 4 corners, CCW in the local frame
    sides_hit: dict         # {"left": exit side, "right": exit side}
    piece_segment: int
    target_segment: int


def _segment_pairs(P: np.ndarray, T: np.ndarray):
    """Candidate (i, j) segment index pairs by midpoint proximity."""
    mp = 0.5 * (P[:-1] + P[1:])
    mt = 0.5 * (T[:-1] + T[1:])
    lp = np.linalg.norm(np.diff(P, axis=0), axis=1)
    lt = np.linalg.norm(np.diff(T, axis=0), axis=1)
    r = 0.5 * (lp.max() + lt.max()) + 1e-12
    tree = cKDTree(mt)
    groups = tree.query_ball_point(mp, r)
    pairs = [(i, j) for i, js in enumerate(groups) for j in js]
    pairs.sort()
    return pairs


def _proper_intersection(a, b, c, d):
    """Intersection point of segments ab and cd when they cross strictly."""
    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    s1 = cross(a, b, c)
    s2 = cross(a, b, d)
    s3 = cross(c, d, a)
    s4 = cross(c, d, b)
    if s1 * s2 < 0 and s3 * s4 < 0:
        t = s1 / (s1 - s2)
        return np.asarray(c, dtype=float) + t * (np.asarray(d, dtype=float) - np.asarray(c, dtype=float))
    return None


def _local_piece(P: np.ndarray, i: int, x0: np.ndarray, half_len: float) -> np.ndarray:
    """Portion of polyline P around x0 on segment i, half_len arc each way."""
    fwd = [x0]
    acc = 0.0
    j = i + 1
    prev = x0
    while j < len(P) and acc < half_len:
        fwd.append(P[j])
        acc += float(np.linalg.norm(P[j] - prev))
        prev = P[j]
        j += 1
    bwd = []
    acc = 0.0
    j = i
    prev = x0
    while j >= 0 and acc < half_len:
        bwd.append(P[j])
        acc += float(np.linalg.norm(P[j] - prev))
        prev = P[j]
        j -= 1
    return np.asarray(bwd[::-1] + fwd)


def _side_of(x, piece: np.ndarray):
    """Signed offset of x from the local polyline (sign by orientation)."""
    best = None
    for a, b in zip(piece[:-1], piece[1:]):
        d = b - a
        L2 = float(d @ d)
        if L2 == 0.0:
            continue
        t = float(np.clip((x - a) @ d / L2, 0.0, 1.0))
        proj = a + t * d
        dist = float(np.linalg.norm(x - proj))
        if best is None or dist < best[0]:
            s = (d[0] * (x[1] - a[1]) - d[1] * (x[0] - a[0])) / np.sqrt(L2)
            best = (dist, s)
    return best[1]


def _walk_side(T, j_from, direction, x0, c, tang, piece, ell, w):
    """Walk target polyline one way from a crossing until it exits the
    rectangle; return (side sign, exit side label) or None on tangency,
    recrossing, or a dead end inside the rectangle."""
    sgn = 0.0
    j = j_from
    while 0 <= j < len(T):
        x = T[j]
        u = float(tang @ (x - c))
        s = _side_of(x, piece)
        inside = abs(u) <= ell / 2 and abs(s) <= w / 2
        if s != 0.0:
            if sgn == 0.0:
                sgn = np.sign(s)
            elif np.sign(s) != sgn and inside:
                return None  # recrossed the piece inside the rectangle
        if not inside:
            if sgn == 0.0:
                if s == 0.0:
                    return None
                sgn = np.sign(s)
            label = "end" if abs(u) > ell / 2 else "far"
            return sgn, label
        j += direction
    return None  # polyline ends inside the rectangle


def detect_crossings(
    piece: ManifoldCurve,
    target: ManifoldCurve,
    translate=(0, 0),
    max_witnesses: int | None = None,
) -> list:
    """Topologically transverse intersections of piece with target + translate.

    Each geometric crossing is validated by a rectangle of length 10*h_max
    along the local piece and width 2*h_max across it; the target must
    change side strictly and reach a rectangle side in both components.
    An empty list means "not found at this resolution", never "absent".
    """
    P = piece.vertices
    T = target.vertices + np.asarray(translate, dtype=float)
    if len(P) < 2 or len(T) < 2:
        raise ValueError("both curves need at least two vertices")
    h = piece.h_max
    ell = 10.0 * h
    w = 2.0 * h
    witnesses = []
    for i, j in _segment_pairs(P, T):
        x0 = _proper_intersection(P[i], P[i + 1], T[j], T[j + 1])
        if x0 is None:
            continue
        local = _local_piece(P, i, x0, ell / 2)
        tang = P[i + 1] - P[i]
        tang = tang / np.linalg.norm(tang)
        fwd = _walk_side(T, j + 1, +1, x0, x0, tang, local, ell, w)
        if fwd is None:
            continue
        bwd = _walk_side(T, j, -1, x0, x0, tang, local, ell, w)
        if bwd is None:
            continue
        if fwd[0] * bwd[0] >= 0:
            continue  # tangential touch: both components on one side
        nrm = np.array([-tang[1], tang[0]])
        corners = np.array(
            [
                x0 - (ell / 2) * tang - (w / 2) * nrm,
                x0 + (ell / 2) * tang - (w / 2) * nrm,
                x0 + (ell / 2) * tang + (w / 2) * nrm,
                x0 - (ell / 2) * tang + (w / 2) * nrm,
            ]
        )
        left, right = (fwd, bwd) if fwd[0] > 0 else (bwd, fwd)
        witnesses.append(
            CrossingWitness(
                location=x0,
                translate=(int(translate[0]), int(translate[1])),
                rectangle=corners,
                sides_hit={"left": left[1], "right": right[1]},
                piece_segment=i,
                target_segment=j,
            )
        )
        if max_witnesses is not None and len(witnesses) >= max_witnesses:
            break
    return witnesses


def translate_scan(
    unstable: ManifoldCurve,
    stable: ManifoldCurve,
    half_range: int = 1,
    max_witnesses: int = 1,
) -> dict:
    """Crossing search of W^u against W^s + (a, b) over an integer box.

    Maps (a, b) to a witness list; an empty list means "not found at the
    current budget", which is distinct from absence.
    """
    table = {}
    for a in range(-half_range, half_range + 1):
        for b in range(-half_range, half_range + 1):
            table[(a, b)] = detect_crossings(
                unstable, stable, translate=(a, b), max_witnesses=max_witnesses
            )
    return table


def closure_invariance_score(curve: ManifoldCurve, v, region, eps: float = 0.0) -> float:
    """One-sided discrete Hausdorff distance from (curve + v) to curve,
    restricted to a region box ((xmin, xmax), (ymin, ymax)).

    With eps > 0, translated vertices are snapped to an eps grid first, so
    the score is meaningful at that sampling resolution.  A small score is
    evidence (not proof) that the closure is invariant under v.
    """
    V = curve.vertices
    (x0, x1), (y0, y1) = region
    A = V + np.asarray(v, dtype=float)
    mask = (A[:, 0] >= x0) & (A[:, 0] <= x1) & (A[:, 1] >= y0) & (A[:, 1] <= y1)
    A = A[mask]
    if len(A) == 0:
        return 0.0
    if eps > 0:
        A = np.unique(np.round(A / eps), axis=0) * eps
    tree = cKDTree(V)
    d, _ = tree.query(A)
    return float(np.max(d))


def mixing_probe(
    m: LiftedTorusMap,
    ball_u: tuple,
    ball_v: tuple,
    n_max: int = 200,
    samples_per_radius: int = 8,
):
    """Probe topological mixing: does f^n(B_u) meet B_v for every large n?

    Samples ball_u on a disk grid, iterates, and records per-n hits on
    ball_v.  Returns (hits, n0) where n0 is the first index with an
    unbroken hit tail up to n_max, or None when the tail is broken.
    """
    (cu, ru), (cv, rv) = (np.asarray(ball_u[0], float), float(ball_u[1])), (
        np.asarray(ball_v[0], float),
        float(ball_v[1]),
    )
    if ru <= 0 or rv <= 0:
        raise ValueError("ball radii must be positive")
    step = ru / samples_per_radius
    g = np.arange(-samples_per_radius, samples_per_radius + 1) * step
    X, Y = np.meshgrid(g, g, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    pts = pts[np.linalg.norm(pts, axis=1) <= ru] + cu
    hits = np.zeros(n_max + 1, dtype=bool)
    Z = pts
    for n in range(1, n_max + 1):
        Z = m.forward(Z)
        hits[n] = bool(np.any(np.linalg.norm(Z - cv, axis=1) <= rv))
    n0 = None
    if hits[n_max]:
        n = n_max
        while n >= 1 and hits[n]:
            n -= 1
        n0 = n + 1
    return hits, n0
