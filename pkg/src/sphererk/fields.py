"""Velocity fields and model problems used by the benchmark harness.

All fields map a sphere point (and time) to a tangent vector.  Raw evaluations
work on plain tuples for speed; ``field(p, t)`` wraps the result in a
:class:`~sphererk.geometry.TangentVector` after scrubbing the O(1e-16) normal
drift that embedded-space formulas accumulate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

from . import vec
from .errors import NearPoleError
from .geometry import TangentVector, UnitVector3, project
from .vec import Vec3

Matrix3 = Tuple[Vec3, Vec3, Vec3]


@dataclass(frozen=True)
class VelocityField:
    """A tangent velocity field f(p, t) on the unit sphere.

    ``raw`` evaluates at an on-sphere point and returns the tangent 3-vector
    (already projected onto the tangent plane); calling the field wraps the
    result as a TangentVector.
    """

    raw: Callable[[Vec3, float], Vec3]
    autonomous: bool = True
    name: str = ""

    def __call__(self, p: UnitVector3, t: float = 0.0) -> TangentVector:
        return TangentVector(p, self.raw(p, t))


def _project_tangent(p: Vec3, v: Vec3) -> Vec3:
    return vec.axpy(-vec.dot(p, v), p, v)


VORTEX4_CENTERS: Tuple[UnitVector3, ...] = (
    project((1.0, -1.0, 1.0)),
    project((1.0, -1.0, -1.0)),
    project((-2.0, 1.0, 0.0)),
    project((-1.0, -1.0, 0.0)),
)

POLE_GUARD = 1e-12


@dataclass(frozen=True)
class VortexConfig:
    """Four-vortex benchmark setup: centers, start point, horizon."""

    centers: Tuple[UnitVector3, ...] = VORTEX4_CENTERS
    p0: UnitVector3 = UnitVector3(1.0, 0.0, 0.0)
    t_final: float = 2.0


def vortex4_field(centers: Tuple[UnitVector3, ...] = VORTEX4_CENTERS) -> VelocityField:
    """Point-vortex interaction field sum_i (x_i x p) / (2 (1 - x_i . p)).

    Raises NearPoleError when evaluated within 1e-12 of a vortex center,
    where the denominator degenerates.
    """

    def raw(p: Vec3, t: float) -> Vec3:
        out = vec.ZERO
        for c in centers:
            d = 1.0 - vec.dot(c, p)
            if d < POLE_GUARD:
                raise NearPoleError(f"field evaluated at distance {d!r} from a vortex center")
            out = vec.axpy(0.5 / d, vec.cross(c, p), out)
        return _project_tangent(p, out)

    return VelocityField(raw, autonomous=True, name="vortex4")


def rigid_rotation_field(omega: Vec3) -> VelocityField:
    """Rigid rotation f(p) = omega x p about a fixed axis."""

    def raw(p: Vec3, t: float) -> Vec3:
        return vec.cross(omega, p)

    return VelocityField(raw, autonomous=True, name="rotation")


def rotate_about(omega: Vec3, p: Vec3, t: float) -> UnitVector3:
    """Exact flow of the rigid rotation field: rotate p by angle |omega| t."""
    w = vec.norm(omega)
    if w == 0.0:
        return UnitVector3(*p)
    axis = vec.scale(omega, 1.0 / w)
    angle = w * t
    c, s = math.cos(angle), math.sin(angle)
    # Rodrigues rotation
    term1 = vec.scale(p, c)
    term2 = vec.scale(vec.cross(axis, p), s)
    term3 = vec.scale(axis, vec.dot(axis, p) * (1.0 - c))
    return UnitVector3(*vec.add(vec.add(term1, term2), term3))


def matvec(m: Matrix3, v: Vec3) -> Vec3:
    return (vec.dot(m[0], v), vec.dot(m[1], v), vec.dot(m[2], v))


def projected_linear_field(m: Matrix3) -> VelocityField:
    """Sphere-projected linear flow g(q) = (I - q q^T) M q.

    Every eigenvector of M (and its antipode) is an equilibrium of g.
    """

    def raw(q: Vec3, t: float) -> Vec3:
        mq = matvec(m, q)
        return vec.axpy(-vec.dot(q, mq), q, mq)

    return VelocityField(raw, autonomous=True, name="projected-linear")


def diag(d1: float, d2: float, d3: float) -> Matrix3:
    return ((d1, 0.0, 0.0), (0.0, d2, 0.0), (0.0, 0.0, d3))


STABILITY_MATRIX: Matrix3 = diag(0.5, -0.5, -0.5)


@dataclass(frozen=True)
class StabilitySigma:
    """Eigenvalue gaps of the projected linear model at the axis equilibria."""

    table: Dict[Tuple[int, int], float]
    sigma: float


def stability_sigma(diagonal: Vec3) -> StabilitySigma:
    """Gaps sigma_ij = lambda_j - lambda_i (i != j) for a diagonal M, and their minimum.

    At the equilibrium e_i the linearized flow on the tangent plane acts with
    eigenvalues sigma_ij in the e_j directions, so min sigma_ij < 0 governs a
    stable attractor.
    """
    table = {
        (i, j): diagonal[j] - diagonal[i]
        for i in range(3)
        for j in range(3)
        if i != j
    }
    return StabilitySigma(table, min(table.values()))


def stability_interval(order: int) -> float:
    """Lower bound mu* of the absolute-stability interval mu* <= sigma*h <= 0.

    Orders 1 and 2 share the classical bound -2.  For order 3 the bound is the
    unique real root of mu^3/6 + mu^2/2 + mu + 2 = 0, located by bisection to
    1e-12.
    """
    if order in (1, 2):
        return -2.0
    if order != 3:
        raise ValueError(f"no stability interval tabulated for order {order!r}")

    def poly(mu: float) -> float:
        return mu * mu * mu / 6.0 + mu * mu / 2.0 + mu + 2.0

    lo, hi = -3.0, -2.0
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if poly(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
