"""Exact spherical primitives on the unit 2-sphere.

Points live on S^2 as ``UnitVector3`` named tuples, velocities are
``TangentVector`` pairs (base point, tangent 3-vector).  Everything here is a
pure function over immutable values; the geodesic building blocks are

* ``exp_raw`` / ``exp_map``: exponential map cos(|s|) p + sin(|s|) s/|s|
* ``slerp``: constant-speed interpolation along the minor great-circle arc
* ``geodesic_distance``: arc length between two points.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from . import vec
from .errors import AntipodalPointsError, ZeroVectorError
from .vec import Vec3

# Below this angle sin(x)/x and the slerp denominator switch to series forms.
SMALL_ANGLE = 1e-8

UNIT_NORM_TOL = 1e-12
TANGENCY_TOL = 1e-10


class UnitVector3(NamedTuple):
    """A point on S^2; constructors are expected to deliver unit norm."""

    x: float
    y: float
    z: float


class TangentVector(NamedTuple):
    """A velocity in the tangent plane of S^2 at ``base``."""

    base: UnitVector3
    v: Vec3


class HemisphereCheck(NamedTuple):
    same: bool
    collinear: bool

    def __bool__(self) -> bool:
        return self.same


E1 = UnitVector3(1.0, 0.0, 0.0)
E2 = UnitVector3(0.0, 1.0, 0.0)
E3 = UnitVector3(0.0, 0.0, 1.0)


def project(v: Vec3) -> UnitVector3:
    """Closest-point projection v/|v| onto the sphere.

    Raises
    ------
    ZeroVectorError
        If |v| is numerically zero (below 1e-300).
    """
    n = vec.norm(v)
    if n < 1e-300:
        raise ZeroVectorError("cannot project a zero vector onto the sphere")
    return UnitVector3(v[0] / n, v[1] / n, v[2] / n)


def unit_vector(x: float, y: float, z: float, tol: float = UNIT_NORM_TOL) -> UnitVector3:
    """Construct a UnitVector3, rejecting inputs whose norm is off unity by more than tol."""
    n = math.sqrt(x * x + y * y + z * z)
    if abs(n - 1.0) > tol:
        raise ValueError(f"norm {n!r} deviates from 1 by more than {tol}")
    return UnitVector3(x, y, z)


def tangent_vector(base: UnitVector3, v: Vec3, mode: str = "project") -> TangentVector:
    """Attach ``v`` to the tangent plane at ``base``.

    ``mode='project'`` (default) removes the normal component, since velocity
    fields written in embedded coordinates accumulate O(1e-16) normal drift;
    ``mode='reject'`` raises if the normal component exceeds the tangency
    tolerance.
    """
    radial = vec.dot(base, v)
    if mode == "project":
        v = vec.axpy(-radial, base, v)
    elif mode == "reject":
        if abs(radial) > TANGENCY_TOL:
            raise ValueError(f"vector has normal component {radial!r} at its base point")
    else:
        raise ValueError(f"unknown tangency mode {mode!r}")
    return TangentVector(base, (v[0], v[1], v[2]))


def geodesic_distance(p: Vec3, q: Vec3) -> float:
    """Arc length between two unit vectors, in [0, pi].

    Evaluated as atan2(|p x q|, p . q), which equals arccos(clamp(p . q, -1, 1))
    but stays well conditioned near 0 and pi.
    """
    return math.atan2(vec.norm(vec.cross(p, q)), vec.dot(p, q))


def exp_raw(p: Vec3, s: Vec3) -> UnitVector3:
    """Exponential map at ``p`` applied to a tangent 3-vector, no tangency check."""
    n = vec.norm(s)
    if n < SMALL_ANGLE:
        sinc = 1.0 - n * n / 6.0
    else:
        sinc = math.sin(n) / n
    c = math.cos(n)
    return UnitVector3(
        c * p[0] + sinc * s[0],
        c * p[1] + sinc * s[1],
        c * p[2] + sinc * s[2],
    )


def exp_map(p: UnitVector3, s: TangentVector) -> UnitVector3:
    """Follow the geodesic leaving ``p`` with initial velocity ``s`` for unit time."""
    if s.base != p:
        raise ValueError("tangent vector is based at a different point")
    return exp_raw(p, s.v)


def slerp(p: Vec3, q: Vec3, t: float) -> UnitVector3:
    """Point at parameter ``t`` of the minor great-circle arc from p to q.

    Returns [sin((1-t)w) p + sin(t w) q] / sin(w) with w the geodesic distance.
    Below the small-angle threshold this degrades gracefully to normalized
    linear interpolation (identical to O(w^2) there).

    Raises
    ------
    AntipodalPointsError
        If the points are antipodal within 1e-8 radians, where the connecting
        geodesic is not unique.
    """
    omega = geodesic_distance(p, q)
    if omega > math.pi - 1e-8:
        raise AntipodalPointsError(f"slerp endpoints are antipodal (separation {omega!r})")
    if omega < SMALL_ANGLE:
        return project(vec.add(vec.scale(p, 1.0 - t), vec.scale(q, t)))
    s = math.sin(omega)
    a = math.sin((1.0 - t) * omega) / s
    b = math.sin(t * omega) / s
    return UnitVector3(
        a * p[0] + b * q[0],
        a * p[1] + b * q[1],
        a * p[2] + b * q[2],
    )


def same_hemisphere(a: Vec3, b: Vec3, c: Vec3, tol: float = 1e-12) -> HemisphereCheck:
    """Do three sphere points lie strictly inside one open hemisphere?

    The signed volume (b x c) . a is the common value of n . p for all three
    points, with n normal to their plane; it is nonzero exactly when the
    points are non-collinear, in which case all three sit on one side of the
    plane through the origin.  Collinear triples (a shared great circle)
    return ``same=False`` with the ``collinear`` flag set.
    """
    det = vec.triple(a, b, c)
    if abs(det) <= tol:
        return HemisphereCheck(False, True)
    return HemisphereCheck(True, False)
