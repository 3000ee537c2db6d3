import numpy as np
import pytest

import torusdyn as td
from torusdyn.geometry import point_segment_distance
from torusdyn.manifolds import (
    GrowthError,
    NonHyperbolicError,
    pullback_rate_fit,
)
from torusdyn.maps import make_linear_saddle
from torusdyn.periodic import PeriodicPoint


def _saddle_fixed_point():
    m = make_linear_saddle(2.0)
    return m, td.newton_periodic(m, 1, (0, 0), (0.01, 0.01))


def test_eigen_frame_diagonal():
    pp = PeriodicPoint(
        point=np.zeros(2),
        period=1,
        translation=(0, 0),
        jacobian=np.array([[2.0, 0.0], [0.0, 0.5]]),
        eigenvalues=np.array([2.0 + 0j, 0.5 + 0j]),
        classification="hyperbolic_positive",
        residual=0.0,
    )
    u, s, (lu, ls) = td.eigen_frame(pp)
    assert np.allclose(u, [1, 0]) and np.allclose(s, [0, 1])
    assert (lu, ls) == (2.0, 0.5)


def test_eigen_frame_rejects_non_hyperbolic(std_k2):
    pp = td.newton_periodic(std_k2, 1, (0, 0), (0.45, 0.05))
    assert pp.classification == "hyperbolic_negative"
    with pytest.raises(NonHyperbolicError):
        td.eigen_frame(pp)


def test_eigen_frame_residual(fp_origin, std_k2):
    u, s, (lu, ls) = td.eigen_frame(fp_origin)
    J = fp_origin.jacobian
    assert np.linalg.norm(J @ u - lu * u) < 1e-10
    assert np.linalg.norm(J @ s - ls * s) < 1e-10
    assert lu * ls == pytest.approx(1.0, abs=1e-9)


def test_linear_saddle_axis_manifolds_exact():
    m, pp = _saddle_fixed_point()
    wu = td.grow_manifold(m, pp, "unstable", "+", arclength_budget=5.0)
    ws = td.grow_manifold(m, pp, "stable", "+", arclength_budget=5.0)
    assert np.max(np.abs(wu.vertices[:, 1])) < 1e-12
    assert np.all(wu.vertices[:, 0] > 0)
    assert np.max(np.abs(ws.vertices[:, 0])) < 1e-12
    assert np.all(ws.vertices[:, 1] > 0)
    wm = td.grow_manifold(m, pp, "unstable", "-", arclength_budget=5.0)
    assert np.all(wm.vertices[:, 0] < 0)


def test_grow_respects_spacing_and_budget(std_k2, fp_origin):
    wu = td.grow_manifold(std_k2, fp_origin, "unstable", "+", arclength_budget=2.0)
    gaps = np.linalg.norm(np.diff(wu.vertices, axis=0), axis=1)
    assert np.max(gaps) <= wu.h_max * (1 + 1e-9)
    assert wu.arclength >= 2.0
    assert wu.arclength == pytest.approx(np.sum(gaps), rel=1e-12)


def test_grow_budget_too_small_errors():
    m, pp = _saddle_fixed_point()
    with pytest.raises(GrowthError):
        td.grow_manifold(m, pp, "unstable", "+", arclength_budget=1e-8)


def test_grow_input_validation(std_k2, fp_origin):
    with pytest.raises(ValueError):
        td.grow_manifold(std_k2, fp_origin, "sideways", "+")
    with pytest.raises(ValueError):
        td.grow_manifold(std_k2, fp_origin, "unstable", "x")
    with pytest.raises(ValueError):
        td.grow_manifold(std_k2, fp_origin, "unstable", "+", arclength_budget=-1.0)


def test_pullback_rate_within_ten_percent(std_k2, fp_origin):
    wu = td.grow_manifold(std_k2, fp_origin, "unstable", "+", arclength_budget=50.0)
    slope, expected = pullback_rate_fit(std_k2, wu)
    assert abs(slope - expected) < 0.1 * abs(expected)


def test_stable_curve_matches_inverse_map_unstable(std_k2, fp_origin):
    ws = td.grow_manifold(std_k2, fp_origin, "stable", "+", arclength_budget=10.0)
    inv = std_k2.inverted()
    pp_inv = td.newton_periodic(inv, 1, (0, 0), (0.01, 0.01))
    wu_inv = td.grow_manifold(inv, pp_inv, "unstable", "+", arclength_budget=10.0)
    n = min(len(ws.vertices), len(wu_inv.vertices))
    assert np.max(np.abs(ws.vertices[:n] - wu_inv.vertices[:n])) < 1e-8


def test_growth_equivariance_under_integer_translation(std_k2, fp_origin):
    # (1, 0) is fixed by the Dehn matrix, so Q + (1, 0) solves the same family
    shifted = td.newton_periodic(std_k2, 1, (0, 0), (1.01, 0.01))
    assert np.linalg.norm(shifted.point - [1.0, 0.0]) < 1e-10
    w0 = td.grow_manifold(std_k2, fp_origin, "unstable", "+", arclength_budget=3.0)
    w1 = td.grow_manifold(std_k2, shifted, "unstable", "+", arclength_budget=3.0)
    n = min(len(w0.vertices), len(w1.vertices))
    assert np.max(np.abs(w1.vertices[:n] - (1.0, 0.0) - w0.vertices[:n])) < 1e-8


# default to an even vertex count so test crossings never land exactly on
# a polyline vertex (the detector is strict about proper crossings)
def _segment(p, q, n=20, h_max=1e-3):
    t = np.linspace(0, 1, n)[:, None]
    return td.polyline_curve(np.asarray(p) + t * (np.asarray(q) - np.asarray(p)), h_max)


def test_detect_crossings_simple_cross():
    lam = _segment((-1, 0), (1, 0))
    K = _segment((0, -1), (0, 1))
    wits = td.detect_crossings(lam, K)
    assert len(wits) == 1
    assert np.linalg.norm(wits[0].location) < 1e-12
    assert set(wits[0].sides_hit) == {"left", "right"}


def test_detect_crossings_rejects_tangency():
    lam = _segment((-1, 0), (1, 0))
    xs = np.linspace(-0.6, 0.6, 25)
    K = td.polyline_curve(np.stack([xs, xs**2], axis=-1))
    assert td.detect_crossings(lam, K) == []


def test_detect_crossings_double_cross():
    lam = _segment((-1, 0), (1, 0))
    K = td.polyline_curve([[-0.45, -0.5], [-0.45, 0.5], [0.45, 0.5], [0.45, -0.5]])
    wits = td.detect_crossings(lam, K)
    assert len(wits) == 2
    xs = sorted(w.location[0] for w in wits)
    assert xs == pytest.approx([-0.45, 0.45])


def test_witness_location_on_both_polylines():
    lam = _segment((-1, 0), (1, 0))
    K = _segment((-0.3, -1), (0.4, 1))
    wits = td.detect_crossings(lam, K)
    assert len(wits) == 1
    x = wits[0].location
    dl = min(point_segment_distance(x, a, b) for a, b in zip(lam.vertices, lam.vertices[1:]))
    dk = min(point_segment_distance(x, a, b) for a, b in zip(K.vertices, K.vertices[1:]))
    assert dl < 1e-9 and dk < 1e-9


def test_translate_scan_straight_lines():
    u = _segment((-0.5, 0), (0.5, 0))
    s = _segment((0, -0.5), (0, 0.5))
    table = td.translate_scan(u, s, half_range=1)
    for (a, b), wits in table.items():
        if (a, b) == (0, 0):
            assert len(wits) == 1
        else:
            assert wits == []


def test_scan_symmetry_between_translates():
    u = _segment((-0.5, 0), (1.5, 0))
    s = _segment((1, -0.5), (1, 0.5))
    direct = td.detect_crossings(u, s, translate=(-1, 0))
    swapped = td.detect_crossings(u.translated((1, 0)), s, translate=(0, 0))
    assert len(direct) == len(swapped) == 1


def test_closure_invariance_score_cases():
    line = td.polyline_curve([[float(i), 0.0] for i in range(11)])
    assert td.closure_invariance_score(line, (1, 0), ((0, 9), (-1, 1))) == 0.0
    seg = td.polyline_curve([[0.0, 0.0], [0.0, 1.0]])
    score = td.closure_invariance_score(seg, (1, 0), ((-2, 2), (-2, 2)))
    assert score == pytest.approx(1.0)


def test_mixing_probe_identity_and_translation():
    ident = td.make_identity_map()
    hits, n0 = td.mixing_probe(ident, ((0, 0), 1.0), ((0, 0), 1.0), n_max=20)
    assert n0 == 1 and np.all(hits[1:])
    shift = td.make_translation_map(1.0, 0.0)
    hits, n0 = td.mixing_probe(shift, ((0, 0), 1.0), ((0, 0), 1.0), n_max=20)
    assert n0 is None
    assert hits[1:].sum() <= 3  # only finitely many early hits
