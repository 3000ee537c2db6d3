import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import torusdyn as td
from torusdyn.maps import (
    OrbitEscapeError,
    area_residual,
    make_linear_saddle,
    reflect_vertical,
    validate_homotopy,
)

TWO_PI = 2.0 * np.pi


def test_standard_map_forward_value():
    m = td.make_standard_map(2.0)
    # sin(pi/2) = 1, so (0.25, 0) -> (0.25 + 0 + 2, 0 + 2)
    w = m.forward(np.array([0.25, 0.0]))
    assert np.allclose(w, [2.25, 2.0], atol=1e-14)


def test_standard_map_epsilon_shifts_vertical():
    m0 = td.make_standard_map(0.5, 0.0)
    m1 = td.make_standard_map(0.5, 0.01)
    z = np.array([0.3, 0.7])
    d = m1.forward(z) - m0.forward(z)
    assert np.allclose(d, [0.0, 0.01], atol=1e-15)


@pytest.mark.parametrize("k,eps", [(0.0, 0.0), (0.5, 0.0), (2.0, 0.01)])
def test_standard_map_inverse_roundtrip(k, eps):
    m = td.make_standard_map(k, eps)
    rng = np.random.default_rng(1)
    z = rng.uniform(-2, 2, size=(100, 2))
    assert np.max(np.abs(m.inverse(m.forward(z)) - z)) < 1e-12
    assert np.max(np.abs(m.forward(m.inverse(z)) - z)) < 1e-12


def test_translation_deck_residual_zero():
    m = td.make_translation_map(0.3, 0.4)
    assert td.deck_residual(m, (0.17, 0.52), (5, -7)) == 0.0


def test_validate_homotopy_accepts_dehn_and_identity():
    validate_homotopy([[1, 0], [0, 1]])
    validate_homotopy([[1, 3], [0, 1]])
    validate_homotopy([[1, -1], [0, 1]])


@pytest.mark.parametrize(
    "A",
    [
        [[2, 0], [0, 1]],          # det 2
        [[1, 0], [1, 1]],          # lower triangular twist, not admitted
        [[0, -1], [1, 0]],         # rotation
        [[1, 0, 0], [0, 1, 0]],    # wrong shape
    ],
)
def test_validate_homotopy_rejects(A):
    with pytest.raises(ValueError):
        validate_homotopy(A)


def test_homotopy_class_labels():
    assert td.make_standard_map(1.0).homotopy_class == "dehn"
    assert td.make_translation_map(0.1, 0.2).homotopy_class == "identity"


@pytest.mark.parametrize(
    "m",
    [
        td.make_standard_map(0.0),
        td.make_standard_map(0.5),
        td.make_standard_map(2.0, 0.01),
        td.make_translation_map(0.3, 0.4),
        td.make_identity_map(),
        td.make_drift_shear(0.5),
        make_linear_saddle(2.0),
    ],
    ids=lambda m: m.name + str(m.params),
)
def test_area_preserved_everywhere(m):
    rng = np.random.default_rng(2)
    z = rng.uniform(-3, 3, size=(10000, 2))
    assert area_residual(m, z) < 1e-12


@pytest.mark.parametrize("k", [0.0, 0.5, 2.0])
def test_deck_equivariance_lattice(k):
    m = td.make_standard_map(k, 0.01)
    rng = np.random.default_rng(3)
    pts = rng.uniform(0, 1, size=(200, 2))
    for a in range(-2, 3):
        for b in range(-2, 3):
            r = m.forward(pts + (a, b)) - m.forward(pts) - m.homotopy @ np.array([a, b], float)
            assert np.max(np.linalg.norm(r, axis=1)) < 1e-12


def test_jacobian_matches_finite_differences(std_k2):
    z = np.array([0.37, 0.81])
    h = 1e-7
    J = std_k2.jacobian(z)
    for col, e in enumerate(np.eye(2)):
        fd = (std_k2.forward(z + h * e) - std_k2.forward(z - h * e)) / (2 * h)
        assert np.allclose(J[:, col], fd, atol=1e-6)


@given(
    k=st.floats(0.0, 3.0),
    x=st.floats(-2.0, 2.0),
    y=st.floats(-2.0, 2.0),
    n=st.integers(1, 5),
)
@settings(max_examples=30, deadline=None)
def test_iterate_roundtrip(k, x, y, n):
    m = td.make_standard_map(k)
    orbit = td.iterate(m, (x, y), n)
    back = td.iterate(m, orbit[-1], -n)
    assert np.linalg.norm(back[-1] - np.array([x, y])) < 1e-9 * n


def test_iterate_shape_and_escape():
    m = td.make_translation_map(1.0, 0.0)
    orbit = td.iterate(m, (0.0, 0.0), 4)
    assert orbit.shape == (5, 2)
    assert np.allclose(orbit[:, 0], [0, 1, 2, 3, 4])
    with pytest.raises(OrbitEscapeError) as exc:
        td.iterate(m, (0.0, 0.0), 10, escape_bound=2.5)
    assert len(exc.value.partial) == 3  # z, f(z), f^2(z) kept


def test_eval_lift_rejects_nonfinite():
    m = td.make_translation_map(float("inf"), 0.0)
    with pytest.raises(FloatingPointError):
        td.eval_lift(m, (0.0, 0.0))


def test_inverted_map_swaps_rules(std_k2):
    inv = std_k2.inverted()
    z = np.array([0.2, 0.6])
    assert np.allclose(inv.forward(z), std_k2.inverse(z))
    assert np.allclose(inv.inverse(z), std_k2.forward(z))
    assert np.array_equal(inv.homotopy, [[1, -1], [0, 1]])
    # Jacobian of the inverse at f(z) is the inverse Jacobian at z
    w = std_k2.forward(z)
    assert np.allclose(inv.jacobian(w), np.linalg.inv(std_k2.jacobian(z)), atol=1e-10)


def test_reflect_vertical_is_involution_and_conjugate(std_k2):
    r = reflect_vertical(std_k2)
    rr = reflect_vertical(r)
    rng = np.random.default_rng(4)
    z = rng.uniform(-1, 1, size=(50, 2))
    assert np.allclose(rr.forward(z), std_k2.forward(z), atol=1e-14)
    # conjugacy: r.forward = R o f o R with R = diag(1, -1)
    R = np.array([1.0, -1.0])
    assert np.allclose(r.forward(z), std_k2.forward(z * R) * R, atol=1e-14)
    assert np.array_equal(r.homotopy, [[1, -1], [0, 1]])
    assert area_residual(r, z) < 1e-12
