"""Lifted torus maps as explicit plane maps with homotopy data.

A lift satisfies f(z + v) = f(z) + A @ v for every integer vector v, where A
is either the identity or a Dehn-twist matrix [[1, k], [0, 1]].  All shipped
maps come with closed-form forward, inverse and Jacobian rules that accept
numpy arrays of shape (..., 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi

DEFAULT_ESCAPE_BOUND = 1e9


class OrbitEscapeError(RuntimeError):
    """Raised when an orbit leaves the configured coordinate bound.

    Carries the partial orbit computed so far in ``partial``.
    """

    def __init__(self, partial: np.ndarray):
        super().__init__(
            "orbit escaped the coordinate bound after %d steps" % (len(partial) - 1)
        )
        self.partial = partial


def validate_homotopy(entries) -> np.ndarray:
    """Check that a 2x2 integer matrix is an admitted homotopy matrix.

    Admitted forms: the identity, or [[1, k], [0, 1]] with k a nonzero
    integer (Dehn-twist exponent).  Returns the matrix as an int array.
    """
    A = np.asarray(entries, dtype=int)
    if A.shape != (2, 2):
        raise ValueError("homotopy matrix must be 2x2")
    if round(np.linalg.det(A)) != 1:
        raise ValueError("homotopy matrix must have determinant 1")
    if np.array_equal(A, np.eye(2, dtype=int)):
        return A
    if A[0, 0] == 1 and A[1, 1] == 1 and A[1, 0] == 0 and A[0, 1] != 0:
        return A
    raise ValueError("homotopy matrix must be the identity or [[1,k],[0,1]], k != 0")


def homotopy_class(A: np.ndarray) -> str:
    """'identity' or 'dehn' for an admitted homotopy matrix."""
    return "identity" if A[0, 1] == 0 else "dehn"


@dataclass(frozen=True)
class LiftedTorusMap:
    """A plane map covering a torus map, with closed-form rules.

    ``forward``, ``inverse`` map arrays of shape (..., 2) to the same shape;
    ``jacobian`` maps them to shape (..., 2, 2).  ``is_lift`` is False for
    test maps (e.g. the linear saddle) that do not satisfy the deck
    equivariance contract; such maps are excluded from lift validation.
    """

    name: str
    params: dict = field(default_factory=dict)
    homotopy: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=int))
    forward: Callable[[np.ndarray], np.ndarray] = None
    inverse: Callable[[np.ndarray], np.ndarray] = None
    jacobian: Callable[[np.ndarray], np.ndarray] = None
    is_lift: bool = True

    def __post_init__(self):
        object.__setattr__(self, "homotopy", validate_homotopy(self.homotopy))

    @property
    def homotopy_class(self) -> str:
        return homotopy_class(self.homotopy)

    def inverted(self) -> "LiftedTorusMap":
        """The inverse map as a LiftedTorusMap (rules swapped)."""
        fwd, inv, jac = self.forward, self.inverse, self.jacobian

        def jac_inv(z):
            J = jac(inv(np.asarray(z, dtype=float)))
            return np.linalg.inv(J)

        A = np.rint(np.linalg.inv(self.homotopy)).astype(int)
        return LiftedTorusMap(
            name=self.name + "^-1",
            params=dict(self.params),
            homotopy=A,
            forward=inv,
            inverse=fwd,
            jacobian=jac_inv,
            is_lift=self.is_lift,
        )


def make_standard_map(k: float, epsilon: float = 0.0) -> LiftedTorusMap:
    """Lift of the Chirikov standard map family, with vertical perturbation.

    S(x, y) = (x + y + k sin(2 pi x), y + k sin(2 pi x) + epsilon),
    homotopy matrix [[1, 1], [0, 1]].  epsilon = 0 gives the unperturbed map.
    """
    k = float(k)
    epsilon = float(epsilon)

    def fwd(z):
        z = np.asarray(z, dtype=float)
        x, y = z[..., 0], z[..., 1]
        s = k * np.sin(TWO_PI * x)
        return np.stack([x + y + s, y + s + epsilon], axis=-1)

    def inv(w):
        w = np.asarray(w, dtype=float)
        X, Y = w[..., 0], w[..., 1]
        x = X - Y + epsilon
        y = Y - k * np.sin(TWO_PI * x) - epsilon
        return np.stack([x, y], axis=-1)

    def jac(z):
        z = np.asarray(z, dtype=float)
        x = z[..., 0]
        c = TWO_PI * k * np.cos(TWO_PI * x)
        J = np.empty(z.shape[:-1] + (2, 2))
        J[..., 0, 0] = 1.0 + c
        J[..., 0, 1] = 1.0
        J[..., 1, 0] = c
        J[..., 1, 1] = 1.0
        return J

    return LiftedTorusMap(
        name="standard",
        params={"k": k, "epsilon": epsilon},
        homotopy=np.array([[1, 1], [0, 1]]),
        forward=fwd,
        inverse=inv,
        jacobian=jac,
    )


def make_translation_map(a: float, b: float) -> LiftedTorusMap:
    """z -> z + (a, b), identity homotopy."""
    t = np.array([float(a), float(b)])

    def fwd(z):
        return np.asarray(z, dtype=float) + t

    def inv(w):
        return np.asarray(w, dtype=float) - t

    def jac(z):
        z = np.asarray(z, dtype=float)
        J = np.zeros(z.shape[:-1] + (2, 2))
        J[..., 0, 0] = 1.0
        J[..., 1, 1] = 1.0
        return J

    return LiftedTorusMap(
        name="translation",
        params={"a": float(a), "b": float(b)},
        forward=fwd,
        inverse=inv,
        jacobian=jac,
    )


def make_identity_map() -> LiftedTorusMap:
    return make_translation_map(0.0, 0.0)


def make_drift_shear(d: float) -> LiftedTorusMap:
    """(x, y) -> (x + d sin^2(pi y), y); identity homotopy.

    Every orbit keeps y fixed and drifts horizontally by c(y) = d sin^2(pi y)
    per step, so the Birkhoff mean at (x, y) is exactly (c(y), 0).  The
    extreme means over [0, 1) are (0, 0) at y = 0 and (d, 0) at y = 1/2,
    which makes the true rotation set known by construction.
    """
    d = float(d)

    def c(y):
        return d * np.sin(np.pi * y) ** 2

    def fwd(z):
        z = np.asarray(z, dtype=float)
        x, y = z[..., 0], z[..., 1]
        return np.stack([x + c(y), y], axis=-1)

    def inv(w):
        w = np.asarray(w, dtype=float)
        X, Y = w[..., 0], w[..., 1]
        return np.stack([X - c(Y), Y], axis=-1)

    def jac(z):
        z = np.asarray(z, dtype=float)
        y = z[..., 1]
        J = np.zeros(z.shape[:-1] + (2, 2))
        J[..., 0, 0] = 1.0
        J[..., 0, 1] = d * np.pi * np.sin(TWO_PI * y)
        J[..., 1, 1] = 1.0
        return J

    return LiftedTorusMap(
        name="drift_shear",
        params={"d": d},
        forward=fwd,
        inverse=inv,
        jacobian=jac,
    )


def make_linear_saddle(lam: float = 2.0) -> LiftedTorusMap:
    """(x, y) -> (lam x, y/lam).  Plane test map, not a torus lift."""
    lam = float(lam)

    def fwd(z):
        z = np.asarray(z, dtype=float)
        return np.stack([lam * z[..., 0], z[..., 1] / lam], axis=-1)

    def inv(w):
        w = np.asarray(w, dtype=float)
        return np.stack([w[..., 0] / lam, lam * w[..., 1]], axis=-1)

    def jac(z):
        z = np.asarray(z, dtype=float)
        J = np.zeros(z.shape[:-1] + (2, 2))
        J[..., 0, 0] = lam
        J[..., 1, 1] = 1.0 / lam
        return J

    return LiftedTorusMap(
        name="linear_saddle",
        params={"lam": lam},
        forward=fwd,
        inverse=inv,
        jacobian=jac,
        is_lift=False,
    )


BUILTIN_MAPS = {
    "standard": make_standard_map,
    "translation": make_translation_map,
    "identity": make_identity_map,
    "drift_shear": make_drift_shear,
    "linear_saddle": make_linear_saddle,
}


def eval_lift(m: LiftedTorusMap, z) -> np.ndarray:
    """Forward image under the lift; raises on non-finite result."""
    w = m.forward(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(w)):
        raise FloatingPointError("non-finite image (parameter overflow?)")
    return w


def iterate(
    m: LiftedTorusMap,
    z,
    n: int,
    escape_bound: float = DEFAULT_ESCAPE_BOUND,
) -> np.ndarray:
    """Orbit segment [z, f(z), ..., f^n(z)] as an array of shape (|n|+1, 2).

    Uses the inverse rule when n < 0.  Aborts with OrbitEscapeError (carrying
    the partial orbit) if a coordinate exceeds escape_bound.
    """
    z = np.asarray(z, dtype=float)
    step = m.forward if n >= 0 else m.inverse
    out = [z]
    for _ in range(abs(n)):
        z = step(z)
        if not np.all(np.abs(z) <= escape_bound):
            raise OrbitEscapeError(np.asarray(out))
        out.append(z)
    return np.asarray(out)


def deck_residual(m: LiftedTorusMap, z, v) -> float:
    """|| f(z + v) - f(z) - A v || for an integer vector v."""
    z = np.asarray(z, dtype=float)
    v = np.asarray(v, dtype=float)
    r = m.forward(z + v) - m.forward(z) - m.homotopy @ v
    return float(np.linalg.norm(r))


def area_residual(m: LiftedTorusMap, z) -> float:
    """| |det Df(z)| - 1 |, pointwise or max over a batch of points."""
    J = m.jacobian(np.asarray(z, dtype=float))
    return float(np.max(np.abs(np.abs(np.linalg.det(J)) - 1.0)))


def reflect_vertical(m: LiftedTorusMap) -> LiftedTorusMap:
    """Conjugate by (x, y) -> (x, -y); swaps the south/north half planes."""
    T = np.array([1.0, -1.0])

    def fwd(z):
        return m.forward(np.asarray(z, dtype=float) * T) * T

    def inv(w):
        return m.inverse(np.asarray(w, dtype=float) * T) * T

    def jac(z):
        J = m.jacobian(np.asarray(z, dtype=float) * T).copy()
        J[..., 0, 1] *= -1.0
        J[..., 1, 0] *= -1.0
        return J

    A = m.homotopy.copy()
    A[0, 1] *= -1
    A[1, 0] *= -1
    return LiftedTorusMap(
        name=m.name + "_vreflect",
        params=dict(m.params),
        homotopy=A,
        forward=fwd,
        inverse=inv,
        jacobian=jac,
        is_lift=m.is_lift,
    )
