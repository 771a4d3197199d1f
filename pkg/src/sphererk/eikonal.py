"""Ray tracing for the surface eikonal equation |grad_S2 u| = 1/v on the sphere.

The characteristics of the Hamiltonian
H(x, k) = (v(x)^2 [|k|^2 - (k . x/|x|)^2] - 1) / 2 form the coupled system

    x' = v^2 [k - (x . k) x/|x|],
    k' = v^2 (x . k)/|x| [k - (x . k)/|x| x] - grad(v)/v,
    u' = 1,

with x on the sphere, k the ray direction grad(u) in R^3, and u the travel
time (phase).  Positions are stepped with the sphere-intrinsic schemes of the
matching order while k is stepped with the corresponding Cartesian TVDRK
stages in lock step; projected and unprojected Cartesian variants of the
x-update are provided for comparison runs.

All rays march together as (n, 3) arrays; rays are independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .batch import exp_rows, normalize_rows, slerp_rows
from .errors import DegenerateFrontError, StepTooLargeError
from .geometry import TangentVector, UnitVector3
from .vec import Vec3

HALF_PI = 0.5 * math.pi

Y31_AMPLITUDE = -0.125 * math.sqrt(21.0 / math.pi)


def y31(theta: float, phi: float):
    """Spherical harmonic -(1/8) sqrt(21/pi) cos(phi) sin(theta) (5 cos^2(theta) - 1).

    theta is the polar angle in [0, pi], phi the azimuth.  The magnitude stays
    below 1, so 1 + y31 is a valid (positive) wave velocity.
    """
    ct = np.cos(theta)
    return Y31_AMPLITUDE * np.cos(phi) * np.sin(theta) * (5.0 * ct * ct - 1.0)


def spherical_to_cartesian(theta: float, phi: float) -> Tuple[float, float, float]:
    st = math.sin(theta)
    return (st * math.cos(phi), st * math.sin(phi), math.cos(theta))


@dataclass(frozen=True)
class VelocityModel:
    """Wave velocity v(x) > 0 with its analytic ambient gradient."""

    name: str
    v: Callable[[np.ndarray], np.ndarray]
    grad_v: Callable[[np.ndarray], np.ndarray]


def constant_model() -> VelocityModel:
    return VelocityModel(
        "const",
        v=lambda x: np.ones(x.shape[:-1]),
        grad_v=lambda x: np.zeros_like(x),
    )


def gaussian_z_model() -> VelocityModel:
    """v = exp(-z^2) as a function of the ambient z coordinate."""

    def v(x: np.ndarray) -> np.ndarray:
        return np.exp(-x[..., 2] ** 2)

    def grad_v(x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        out[..., 2] = -2.0 * x[..., 2] * np.exp(-x[..., 2] ** 2)
        return out

    return VelocityModel("expz2", v, grad_v)


def y31_model() -> VelocityModel:
    """v = 1 + Y_3^1 extended off the sphere as a function of direction only.

    On the unit sphere Y_3^1 = c * x (5 z^2 - 1) with c the harmonic's
    amplitude; the degree-0 extension c * x (5 z^2 - r^2) / r^3 keeps the
    spherical-angle definition valid for |x| != 1 and has a closed-form
    gradient (validated against finite differences in the tests).
    """

    def v(x: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(x, axis=-1)
        return 1.0 + Y31_AMPLITUDE * x[..., 0] * (
            5.0 * x[..., 2] ** 2 - r * r
        ) / r**3

    def grad_v(x: np.ndarray) -> np.ndarray:
        xx, yy, zz = x[..., 0], x[..., 1], x[..., 2]
        r2 = np.sum(x * x, axis=-1)
        r = np.sqrt(r2)
        r3, r5 = r2 * r, r2 * r2 * r
        out = np.empty_like(x)
        out[..., 0] = (
            5.0 * zz**2 / r3
            - 15.0 * xx**2 * zz**2 / r5
            - 1.0 / r
            + xx**2 / r3
        )
        out[..., 1] = xx * yy / r3 - 15.0 * xx * yy * zz**2 / r5
        out[..., 2] = 11.0 * xx * zz / r3 - 15.0 * xx * zz**3 / r5
        return Y31_AMPLITUDE * out

    return VelocityModel("y31", v, grad_v)


MODELS = {
    "const": constant_model,
    "expz2": gaussian_z_model,
    "y31": y31_model,
}


class RayState(NamedTuple):
    x: UnitVector3
    k: Vec3
    u: float


@dataclass(frozen=True)
class Wavefront:
    """Snapshot of all rays at a common phase value."""

    t: float
    xs: UnitVector3
    x: np.ndarray  # (n, 3) ray positions
    k: np.ndarray  # (n, 3) ray directions
    u: np.ndarray  # (n,) phases, all equal to t


def _rhs(model: VelocityModel, x: np.ndarray, k: np.ndarray):
    """Ray right-hand sides f1 = v^2 [k - (x.k) x/|x|] and
    f2 = v^2 (x.k)/|x| [k - (x.k)/|x| x] - grad(v)/v."""
    v = model.v(x)[..., None]
    nx = np.linalg.norm(x, axis=-1, keepdims=True)
    xk = np.sum(x * k, axis=-1, keepdims=True)
    bracket = k - (xk / nx) * x
    f1 = v * v * bracket
    f2 = (v * v * xk / nx) * bracket - model.grad_v(x) / v
    return f1, f2


def hamiltonian(model: VelocityModel, x: np.ndarray, k: np.ndarray) -> np.ndarray:
    v = model.v(x)
    n = normalize_rows(x)
    kn = np.sum(k * n, axis=-1)
    return 0.5 * (v * v * (np.sum(k * k, axis=-1) - kn * kn) - 1.0)


def ray_rhs(model: VelocityModel, state: RayState):
    """Scalar form of the ray system: (dx as a TangentVector, dk, du = 1)."""
    x = np.asarray(state.x, dtype=float)[None, :]
    k = np.asarray(state.k, dtype=float)[None, :]
    f1, f2 = _rhs(model, x, k)
    dx = TangentVector(state.x, tuple(f1[0]))
    return dx, tuple(f2[0]), 1.0


def _guard_arc(h: float, f1: np.ndarray, limit: float) -> None:
    arc = abs(h) * float(np.max(np.linalg.norm(f1, axis=-1)))
    if arc >= limit:
        raise StepTooLargeError(f"ray stage arc {arc!r} exceeds {limit!r}")


def _step_rows(scheme: str, model: VelocityModel, x: np.ndarray, k: np.ndarray, h: float):
    """Advance all rays by one step of the requested coupled scheme."""
    if scheme == "sfe":
        f1, f2 = _rhs(model, x, k)
        _guard_arc(h, f1, math.pi)
        return exp_rows(x, h * f1), k + h * f2
    if scheme == "pfe":
        f1, f2 = _rhs(model, x, k)
        return normalize_rows(x + h * f1), k + h * f2

    f1, f2 = _rhs(model, x, k)
    if scheme in ("stvdrk2", "stvdrk3"):
        _guard_arc(h, f1, HALF_PI)
        q1 = exp_rows(x, h * f1)
    else:
        q1 = x + h * f1
    s1 = k + h * f2

    g1, g2 = _rhs(model, q1, s1)
    if scheme in ("stvdrk2", "stvdrk3"):
        _guard_arc(h, g1, HALF_PI)
        q2 = exp_rows(q1, h * g1)
    else:
        q2 = q1 + h * g1
    s2 = s1 + h * g2

    if scheme == "stvdrk2":
        return slerp_rows(x, q2, 0.5), 0.5 * (k + s2)
    if scheme == "tvdrk2":
        return 0.5 * (x + q2), 0.5 * (k + s2)
    if scheme == "ptvdrk2":
        return normalize_rows(0.5 * (x + q2)), 0.5 * (k + s2)

    if scheme == "stvdrk3":
        q3 = slerp_rows(x, q2, 0.25)
    else:
        q3 = 0.25 * (3.0 * x + q2)
    s3 = 0.75 * k + 0.25 * s2

    h1, h2 = _rhs(model, q3, s3)
    if scheme == "stvdrk3":
        _guard_arc(h, h1, HALF_PI)
        q4 = exp_rows(q3, h * h1)
    else:
        q4 = q3 + h * h1
    s4 = s3 + h * h2

    knext = (k + 2.0 * s4) / 3.0
    if scheme == "stvdrk3":
        return slerp_rows(x, q4, 2.0 / 3.0), knext
    if scheme == "tvdrk3":
        return (x + 2.0 * q4) / 3.0, knext
    if scheme == "ptvdrk3":
        return normalize_rows((x + 2.0 * q4) / 3.0), knext
    raise ValueError(f"unknown coupled scheme {scheme!r}")


COUPLED_SCHEMES = (
    "sfe",
    "pfe",
    "stvdrk2",
    "tvdrk2",
    "ptvdrk2",
    "stvdrk3",
    "tvdrk3",
    "ptvdrk3",
)

_ORDER_TO_SCHEME = {1: "sfe", 2: "stvdrk2", 3: "stvdrk3"}


def scheme_for_order(order: int) -> str:
    """Sphere-intrinsic coupled scheme of the given order."""
    return _ORDER_TO_SCHEME[order]


def coupled_step(order: int, model: VelocityModel, state: RayState, h: float) -> RayState:
    """One sphere-intrinsic coupled step of the requested order for one ray."""
    scheme = _ORDER_TO_SCHEME[order]
    x = np.asarray(state.x, dtype=float)[None, :]
    k = np.asarray(state.k, dtype=float)[None, :]
    xn, kn = _step_rows(scheme, model, x, k, h)
    return RayState(UnitVector3(*xn[0]), tuple(kn[0]), state.u + h)


def initial_rays(model: VelocityModel, xs: UnitVector3, n_rays: int):
    """Launch directions fanned uniformly in the tangent frame (e2, e3) at xs.

    |k| = 1/v(xs) makes the initial data satisfy H = 0 exactly.
    """
    if n_rays < 3:
        raise ValueError("need at least 3 rays to form a wavefront")
    xs_arr = np.asarray(xs, dtype=float)
    # orthonormal tangent frame at xs
    helper = np.array([0.0, 1.0, 0.0])
    if abs(np.dot(helper, xs_arr)) > 0.9:
        helper = np.array([0.0, 0.0, 1.0])
    t1 = helper - np.dot(helper, xs_arr) * xs_arr
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(xs_arr, t1)
    ang = 2.0 * math.pi * np.arange(n_rays) / n_rays
    dirs = np.cos(ang)[:, None] * t1 + np.sin(ang)[:, None] * t2
    v0 = float(model.v(xs_arr[None, :])[0])
    x0 = np.tile(xs_arr, (n_rays, 1))
    return x0, dirs / v0


def trace_wavefront(
    model: VelocityModel,
    xs: UnitVector3,
    n_rays: int,
    h: float,
    t_final: float,
    scheme: str = "stvdrk3",
    order: Optional[int] = None,
    snapshot_times: Optional[Sequence[float]] = None,
) -> List[Wavefront]:
    """March a fan of rays from a point source and snapshot the wavefront.

    ``snapshot_times`` must lie on the step grid (multiples of h); by default
    only the final time is recorded.  ``order`` is shorthand for the
    sphere-intrinsic scheme of that order.
    """
    if order is not None:
        scheme = scheme_for_order(order)
    if scheme not in COUPLED_SCHEMES:
        raise ValueError(f"unknown coupled scheme {scheme!r}")
    n_steps = round(t_final / h)
    if abs(n_steps * h - t_final) > 1e-9 * max(1.0, t_final):
        raise ValueError("t_final must be an integer number of steps")
    if snapshot_times is None:
        snapshot_times = [t_final]
    want: dict[int, float] = {}
    for t in snapshot_times:
        i = round(t / h)
        if abs(i * h - t) > 1e-6:
            raise ValueError(f"snapshot time {t!r} is not on the step grid")
        want[i] = t
    x, k = initial_rays(model, xs, n_rays)
    fronts: List[Wavefront] = []

    def emit(i: int) -> None:
        u_val = i * h
        fronts.append(
            Wavefront(
                t=u_val,
                xs=xs,
                x=x.copy(),
                k=k.copy(),
                u=np.full(n_rays, u_val),
            )
        )

    if 0 in want:
        emit(0)
    for i in range(1, n_steps + 1):
        x, k = _step_rows(scheme, model, x, k, h)
        if i in want:
            emit(i)
    return fronts


def wavefront_E2(front: Wavefront, xs: UnitVector3, t: Optional[float] = None) -> float:
    """Arc-length weighted L2 deviation of the front from the exact circle.

    For unit velocity the exact wavefront at time t is the circle of geodesic
    radius t about the source; the error integrand (t - d(x, xs))^2 is
    integrated over the closed ray polyline by the trapezoidal rule with
    geodesic segment lengths.
    """
    if t is None:
        t = front.t
    x = front.x
    xs_arr = np.asarray(xs, dtype=float)
    d = np.arctan2(
        np.linalg.norm(np.cross(x, xs_arr), axis=-1), x @ xs_arr
    )
    g = (t - d) ** 2
    nxt = np.roll(x, -1, axis=0)
    seg = np.arctan2(
        np.linalg.norm(np.cross(x, nxt), axis=-1), np.sum(x * nxt, axis=-1)
    )
    total = float(np.sum(seg))
    if total < 1e-12:
        raise DegenerateFrontError("wavefront polyline has zero length")
    integral = float(np.sum(seg * 0.5 * (g + np.roll(g, -1))))
    return math.sqrt(integral)


def write_wavefronts_csv(path: Union[str, Path], fronts: Sequence[Wavefront]) -> None:
    lines = ["t,ray_index,x,y,z,kx,ky,kz,u"]
    for front in fronts:
        for j in range(front.x.shape[0]):
            px, py, pz = front.x[j]
            kx, ky, kz = front.k[j]
            lines.append(
                f"{front.t!r},{j},{px!r},{py!r},{pz!r},{kx!r},{ky!r},{kz!r},{front.u[j]!r}"
            )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
