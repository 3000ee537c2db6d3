import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusdyn.sft import (
    CycleCapExceeded,
    bounded_deviation_orbit,
    cycle_mean,
    cycle_rotation_hull,
    cycle_weight,
    make_sft,
    max_deviation,
    parse_sft,
    point_in_hull_interior,
    simple_cycles,
    two_loop_example,
    verify_deviation,
)


def triangle_sft():
    # two self-loops plus a 2-cycle of zero weight: hull is a triangle
    return make_sft(
        2,
        [(0, 0, 1, 0), (1, 1, 0, 1), (0, 1, 0, 0), (1, 0, 0, 0)],
    )


def test_two_loop_hull_is_segment():
    hull = cycle_rotation_hull(two_loop_example())
    assert hull == [(F(0), F(1)), (F(1), F(0))]


def test_single_zero_loop_hull():
    s = make_sft(1, [(0, 0, 0, 0)])
    assert cycle_rotation_hull(s) == [(F(0), F(0))]


def test_triangle_hull():
    hull = cycle_rotation_hull(triangle_sft())
    assert set(hull) == {(F(0), F(0)), (F(1), F(0)), (F(0), F(1))}
    assert len(hull) == 3


def test_simple_cycles_multigraph():
    s = two_loop_example()
    assert simple_cycles(s) == [(0,), (1,)]
    t = triangle_sft()
    cycles = simple_cycles(t)
    assert (0,) in cycles and (1,) in cycles
    assert (2, 3) in cycles  # the zero-weight 2-cycle
    with pytest.raises(CycleCapExceeded):
        simple_cycles(t, cap=1)


def test_graph_without_cycle_rejected():
    with pytest.raises(ValueError):
        make_sft(2, [(0, 1, 1, 0)])


def test_edge_out_of_range_rejected():
    with pytest.raises(ValueError):
        make_sft(1, [(0, 2, 1, 0)])


def test_parse_sft_roundtrip():
    s = parse_sft(
        """
        # one vertex, two self-loops
        vertices 1
        0 0 1 0
        0 0 0 1
        """
    )
    assert s == two_loop_example()
    assert parse_sft("vertices 1\n0 0 1/2 -2/3\n").edges[0][2] == (F(1, 2), F(-2, 3))
    with pytest.raises(ValueError):
        parse_sft("0 0 1 0\n")
    with pytest.raises(ValueError):
        parse_sft("vertices 1\n0 0 1\n")


def test_half_half_orbit_exact():
    orbit = bounded_deviation_orbit(two_loop_example(), (F(1, 2), F(1, 2)), 10000)
    assert orbit.period == 2
    assert sorted(orbit.word) == [0, 1]  # alternating loops
    assert orbit.max_deviation_sq == F(1, 2)
    assert math.isclose(max_deviation(orbit, 10000), math.sqrt(0.5))
    assert orbit.max_deviation_sq <= orbit.deviation_bound_sq


def test_third_two_thirds_orbit():
    orbit = bounded_deviation_orbit(two_loop_example(), (F(1, 3), F(2, 3)), 10000)
    assert orbit.period == 3
    assert sorted(orbit.word) == [0, 1, 1]
    # max edge weight norm is 1, so deviation stays within 2 * max||psi||
    assert max_deviation(orbit, 10000) <= 2.0


def test_word_mean_is_exact():
    for rho in [(F(1, 2), F(1, 2)), (F(1, 3), F(2, 3)), (F(2, 5), F(3, 5))]:
        orbit = bounded_deviation_orbit(two_loop_example(), rho, 1000)
        total = cycle_weight(orbit.sft, orbit.word)
        assert total == (orbit.period * rho[0], orbit.period * rho[1])


def test_triangle_interior_point_realized():
    orbit = bounded_deviation_orbit(triangle_sft(), (F(1, 4), F(1, 4)), 10000)
    assert cycle_weight(orbit.sft, orbit.word) == (
        orbit.period * F(1, 4),
        orbit.period * F(1, 4),
    )
    assert orbit.max_deviation_sq <= orbit.deviation_bound_sq


def test_single_cycle_mean_target():
    s = make_sft(1, [(0, 0, 0, 0)])
    orbit = bounded_deviation_orbit(s, (F(0), F(0)), 100)
    assert orbit.word == (0,)
    assert orbit.max_deviation_sq == 0


def test_boundary_rho_rejected():
    s = two_loop_example()
    for rho in [(F(1), F(0)), (F(0), F(1)), (F(1, 2), F(1, 3)), (F(2), F(-1))]:
        with pytest.raises(ValueError):
            bounded_deviation_orbit(s, rho, 100)


def test_verify_deviation_plateaus_after_two_periods():
    orbit = bounded_deviation_orbit(two_loop_example(), (F(1, 3), F(2, 3)), 10000)
    L = orbit.period
    vals = [verify_deviation(orbit, n) for n in (L, 2 * L, 4 * L, 10000)]
    assert vals[1] == vals[2] == vals[3]
    assert vals[0] <= vals[1]


def test_hull_invariant_under_relabeling():
    t = triangle_sft()
    relabeled = make_sft(
        2,
        [(1, 1, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0)],
    )
    assert set(cycle_rotation_hull(t)) == set(cycle_rotation_hull(relabeled))


@given(num=st.integers(-6, 6), den=st.integers(1, 6))
@settings(max_examples=25, deadline=None)
def test_hull_and_deviation_scale_exactly(num, den):
    s = F(num, den)
    if s == 0:
        return
    base = two_loop_example()
    scaled = make_sft(1, [(0, 0, s * 1, s * 0), (0, 0, s * 0, s * 1)])
    hb = cycle_rotation_hull(base)
    hs = cycle_rotation_hull(scaled)
    assert set(hs) == {(s * x, s * y) for x, y in hb}
    rho = (F(1, 2), F(1, 2))
    ob = bounded_deviation_orbit(base, rho, 200)
    os_ = bounded_deviation_orbit(scaled, (s * rho[0], s * rho[1]), 200)
    assert os_.max_deviation_sq == s * s * ob.max_deviation_sq


def test_point_in_hull_interior_cases():
    seg = [(F(0), F(1)), (F(1), F(0))]
    assert point_in_hull_interior((F(1, 2), F(1, 2)), seg)
    assert not point_in_hull_interior((F(0), F(1)), seg)
    assert not point_in_hull_interior((F(1, 2), F(1, 4)), seg)
    tri = cycle_rotation_hull(triangle_sft())
    assert point_in_hull_interior((F(1, 4), F(1, 4)), tri)
    assert not point_in_hull_interior((F(1, 2), F(1, 2)), tri)  # on the edge
    point = [(F(3), F(4))]
    assert point_in_hull_interior((F(3), F(4)), point)
    assert not point_in_hull_interior((F(3), F(5)), point)


def test_cycle_mean_values():
    t = triangle_sft()
    assert cycle_mean(t, (0,)) == (F(1), F(0))
    assert cycle_mean(t, (2, 3)) == (F(0), F(0))
