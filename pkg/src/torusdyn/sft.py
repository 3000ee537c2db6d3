"""Subshifts of finite type with vector edge weights, in exact rationals.

The rotation set of a weighted subshift is the convex hull of simple-cycle
mean weights; any rational vector strictly inside it is realized by a
periodic word whose partial weight sums stay within an explicit constant of
n * rho for every n.  All arithmetic here uses Fraction, so the deviation
bound is exact combinatorics, not floating point.

Edges are stored as a list and may be parallel (several edges between the
same vertex pair, e.g. two self-loops on one vertex); cycles and words are
sequences of edge indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations

DEFAULT_CYCLE_CAP = 10000

Vec = tuple  # (Fraction, Fraction)


class CycleCapExceeded(RuntimeError):
    def __init__(self, cycles):
        super().__init__("simple-cycle cap exceeded; hull is partial")
        self.cycles = cycles


@dataclass(frozen=True)
class WeightedSft:
    """Directed multigraph on vertices 0..n-1 with a weight per edge."""

    n: int
    edges: tuple  # ((i, j, (Fraction, Fraction)), ...)

    def __post_init__(self):
        for i, j, w in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError("edge (%d, %d) out of range" % (i, j))
            if len(w) != 2:
                raise ValueError("weights must be 2-vectors")
        try:
            has_cycle = bool(simple_cycles(self, cap=1))
        except CycleCapExceeded:
            has_cycle = True
        if not has_cycle:
            raise ValueError("graph must contain at least one cycle")

    @property
    def adjacency(self):
        A = [[0] * self.n for _ in range(self.n)]
        for i, j, _ in self.edges:
            A[i][j] = 1
        return A

    def out_edges(self, v: int):
        return [e for e, (i, _, _) in enumerate(self.edges) if i == v]


def make_sft(n: int, edges) -> WeightedSft:
    """Build a WeightedSft from (i, j, wx, wy) rows, coercing to Fractions."""
    ed = tuple(
        (int(i), int(j), (Fraction(wx), Fraction(wy))) for i, j, wx, wy in edges
    )
    return WeightedSft(n=int(n), edges=ed)


def parse_sft(text: str) -> WeightedSft:
    """Parse the plain edge-list format::

        vertices N
        i j wx wy

    with rational weights like ``1/2`` or integers; repeated (i, j) lines
    define parallel edges."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("vertices"):
        raise ValueError("first line must be 'vertices N'")
    n = int(lines[0].split()[1])
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError("edge lines must be 'i j wx wy': %r" % ln)
        rows.append((int(parts[0]), int(parts[1]), Fraction(parts[2]), Fraction(parts[3])))
    return make_sft(n, rows)


def cycle_vertices(sft: WeightedSft, cycle: tuple) -> tuple:
    return tuple(sft.edges[e][0] for e in cycle)


def simple_cycles(sft: WeightedSft, cap: int = DEFAULT_CYCLE_CAP) -> list:
    """Simple cycles as edge-index tuples, rooted at each cycle's least
    vertex, in deterministic lexicographic order."""
    cycles = []
    out = {v: sft.out_edges(v) for v in range(sft.n)}
    for root in range(sft.n):
        stack = [(root, (), (root,))]
        while stack:
            v, path, seen = stack.pop()
            for e in reversed(out[v]):
                w = sft.edges[e][1]
                if w == root:
                    cycles.append(path + (e,))
                    if len(cycles) > cap:
                        raise CycleCapExceeded(cycles)
                elif w > root and w not in seen:
                    stack.append((w, path + (e,), seen + (w,)))
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def cycle_weight(sft: WeightedSft, cycle: tuple) -> Vec:
    wx = Fraction(0)
    wy = Fraction(0)
    for e in cycle:
        w = sft.edges[e][2]
        wx += w[0]
        wy += w[1]
    return (wx, wy)


def cycle_mean(sft: WeightedSft, cycle: tuple) -> Vec:
    wx, wy = cycle_weight(sft, cycle)
    return (wx / len(cycle), wy / len(cycle))


def _cross(o: Vec, a: Vec, b: Vec) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def rational_hull(points: list) -> list:
    """Monotone-chain hull over exact rational points, CCW, no collinear."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all collinear after pruning
        return [min(pts), max(pts)]
    return hull


def cycle_rotation_hull(sft: WeightedSft, cycle_cap: int = DEFAULT_CYCLE_CAP) -> list:
    """Convex hull of simple-cycle mean weights, exact."""
    if cycle_cap < sft.n:
        raise ValueError("cycle_cap must be at least the vertex count")
    cycles = simple_cycles(sft, cap=cycle_cap)
    return rational_hull([cycle_mean(sft, c) for c in cycles])


def point_in_hull_interior(rho, hull: list) -> bool:
    """Strict relative-interior membership, exact.

    A 2D hull needs all edge cross products strictly positive; a segment
    hull needs rho strictly between the endpoints; a single-point hull
    needs equality."""
    rho = (Fraction(rho[0]), Fraction(rho[1]))
    if len(hull) == 1:
        return rho == hull[0]
    if len(hull) == 2:
        a, b = hull
        if _cross(a, b, rho) != 0:
            return False
        d = (b[0] - a[0], b[1] - a[1])
        num = (rho[0] - a[0]) * d[0] + (rho[1] - a[1]) * d[1]
        den = d[0] * d[0] + d[1] * d[1]
        t = num / den
        return 0 < t < 1
    for i in range(len(hull)):
        if _cross(hull[i], hull[(i + 1) % len(hull)], rho) <= 0:
            return False
    return True


@dataclass(frozen=True)
class BoundedDeviationOrbit:
    sft: WeightedSft
    word: tuple                 # closed walk as edge indices (period = len)
    target: Vec                 # rational rho, the exact mean of the word
    deviation_bound: float      # Const = period * max edge |psi| (float view)
    deviation_bound_sq: Fraction  # exact Const^2
    verified_horizon: int
    max_deviation_sq: Fraction

    @property
    def period(self) -> int:
        return len(self.word)


def _max_weight_norm_sq(sft: WeightedSft) -> Fraction:
    return max(w[0] * w[0] + w[1] * w[1] for _, _, w in sft.edges)


def _solve_combination(means: list, rho: Vec):
    """Exact nonnegative coefficients summing to 1 with sum a_i m_i = rho,
    for 1, 2 or 3 means; None when infeasible."""
    if len(means) == 1:
        return [Fraction(1)] if means[0] == rho else None
    if len(means) == 2:
        a, b = means
        if _cross(a, b, rho) != 0:
            return None
        d = (b[0] - a[0], b[1] - a[1])
        den = d[0] * d[0] + d[1] * d[1]
        if den == 0:
            return None
        t = ((rho[0] - a[0]) * d[0] + (rho[1] - a[1]) * d[1]) / den
        if not (0 <= t <= 1):
            return None
        return [1 - t, t]
    a, b, c = means
    det = _cross(a, b, c)
    if det == 0:
        return None
    wa = _cross(rho, b, c) / det
    wb = _cross(a, rho, c) / det
    wc = _cross(a, b, rho) / det
    if wa < 0 or wb < 0 or wc < 0:
        return None
    return [wa, wb, wc]


def _cycles_vertex_connected(vertex_sets: list) -> bool:
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(len(vertex_sets)):
            if j not in seen and vertex_sets[i] & vertex_sets[j]:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(vertex_sets)


def _splice(sft: WeightedSft, cycles_rep: list) -> tuple:
    """Concatenate repeated cycles sharing vertices into one closed walk of
    edge indices."""
    walk = list(cycles_rep[0][0]) * cycles_rep[0][1]
    pending = list(cycles_rep[1:])
    while pending:
        for idx, (cyc, reps) in enumerate(pending):
            cyc_verts = [sft.edges[e][0] for e in cyc]
            hit = None
            for pos, e in enumerate(walk):
                v = sft.edges[e][0]
                if v in cyc_verts:
                    hit = (pos, cyc_verts.index(v))
                    break
            if hit is not None:
                pos, rot = hit
                rotated = cyc[rot:] + cyc[:rot]
                walk[pos:pos] = list(rotated) * reps
                pending.pop(idx)
                break
        else:
            raise ValueError("graph not strongly connected between chosen cycles")
    return tuple(walk)


def bounded_deviation_orbit(
    sft: WeightedSft,
    rho,
    horizon: int = 10000,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
) -> BoundedDeviationOrbit:
    """Periodic word with mean exactly rho and bounded partial-sum deviation.

    rho is written as an exact convex combination of at most 3 simple-cycle
    means (Caratheodory in the plane, searched in lexicographic order), the
    repetition counts are cleared of denominators, and the cycles are
    spliced at shared vertices into a single closed walk.  The bound
    Const = period * max edge |psi| is verified by an exact partial-sum
    scan up to ``horizon``.
    """
    rho = (Fraction(rho[0]), Fraction(rho[1]))
    cycles = simple_cycles(sft, cap=cycle_cap)
    means = [cycle_mean(sft, c) for c in cycles]
    hull = rational_hull(means)
    if not point_in_hull_interior(rho, hull):
        raise ValueError("rho must lie strictly inside the cycle-mean hull")

    chosen = None
    for r in (1, 2, 3):
        for combo in combinations(range(len(cycles)), r):
            coeffs = _solve_combination([means[i] for i in combo], rho)
            if coeffs is None:
                continue
            active = [
                (cycles[i], coeffs[k]) for k, i in enumerate(combo) if coeffs[k] > 0
            ]
            if not _cycles_vertex_connected(
                [set(cycle_vertices(sft, c)) for c, _ in active]
            ):
                continue
            chosen = active
            break
        if chosen:
            break
    if chosen is None:
        raise ValueError("no vertex-connected cycle combination realizes rho")

    # integer repetitions proportional to a_i / L_i make the mean exact
    fracs = [a / len(c) for c, a in chosen]
    denom = reduce(math.lcm, [f.denominator for f in fracs])
    reps = [(c, int(f * denom)) for (c, _), f in zip(chosen, fracs)]
    reps = [(c, k) for c, k in reps if k > 0]
    word = _splice(sft, reps)

    max_norm_sq = _max_weight_norm_sq(sft)
    L = len(word)
    bound_sq = Fraction(L * L) * max_norm_sq
    orbit = BoundedDeviationOrbit(
        sft=sft,
        word=word,
        target=rho,
        deviation_bound=L * math.sqrt(float(max_norm_sq)),
        deviation_bound_sq=bound_sq,
        verified_horizon=0,
        max_deviation_sq=Fraction(0),
    )
    max_sq = verify_deviation(orbit, horizon)
    if max_sq > bound_sq:
        raise AssertionError("deviation bound violated: construction bug")
    return BoundedDeviationOrbit(
        sft=sft,
        word=word,
        target=rho,
        deviation_bound=orbit.deviation_bound,
        deviation_bound_sq=bound_sq,
        verified_horizon=horizon,
        max_deviation_sq=max_sq,
    )


def verify_deviation(orbit: BoundedDeviationOrbit, n_max: int) -> Fraction:
    """Exact max over n <= n_max of || sum_{j<n} psi - n rho ||^2.

    Because the word's full-period sum equals period * rho exactly, the
    deviation sequence is periodic; the scan stops after two full periods,
    where the running max has provably plateaued.
    """
    sft = orbit.sft
    word = orbit.word
    rho = orbit.target
    L = len(word)
    sx = Fraction(0)
    sy = Fraction(0)
    max_sq = Fraction(0)
    for n in range(1, n_max + 1):
        w = sft.edges[word[(n - 1) % L]][2]
        sx += w[0]
        sy += w[1]
        dx = sx - n * rho[0]
        dy = sy - n * rho[1]
        sq = dx * dx + dy * dy
        if sq > max_sq:
            max_sq = sq
        if n % L == 0 and n >= 2 * L:
            break
    return max_sq


def max_deviation(orbit: BoundedDeviationOrbit, n_max: int) -> float:
    """Float Euclidean norm of the exact max deviation up to n_max."""
    return math.sqrt(float(verify_deviation(orbit, n_max)))


def two_loop_example() -> WeightedSft:
    """One vertex with two self-loops of weights (1,0) and (0,1)."""
    return make_sft(1, [(0, 0, 1, 0), (0, 0, 0, 1)])
