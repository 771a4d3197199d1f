"""Embedded-space Runge-Kutta baselines and their projected variants.

These are the comparison schemes: Cartesian steppers that either ignore the
sphere constraint (FE, RK2-4, TVDRK2-3), radially project the final stage
(PFE, PRK2-4, PTVDRK2, PTVDRK3), or project every intermediate stage (the
primed internal-projection variants PTVDRK2', PTVDRK3').

The velocity field is always evaluated through the closest-point extension
f(x, t) = f(x/|x|, t), so stage values slightly off the sphere remain legal
field arguments.  States are free 3-vectors; projected variants return unit
vectors, unprojected ones generally do not.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Callable, Dict

from . import vec
from .fields import VelocityField
from .geometry import project
from .vec import Vec3

BaselineStepper = Callable[[VelocityField, Vec3, float, float], Vec3]


class BaselineId(str, Enum):
    FE = "fe"
    RK2 = "rk2"
    RK3 = "rk3"
    RK4 = "rk4"
    TVDRK2 = "tvdrk2"
    TVDRK3 = "tvdrk3"
    PFE = "pfe"
    PRK2 = "prk2"
    PRK3 = "prk3"
    PRK4 = "prk4"
    PTVDRK2 = "ptvdrk2"
    PTVDRK2P = "ptvdrk2p"
    PTVDRK3 = "ptvdrk3"
    PTVDRK3P = "ptvdrk3p"


def _ext(f: VelocityField, x: Vec3, t: float) -> Vec3:
    """Closest-point velocity extension: evaluate the field at x/|x|."""
    return f.raw(project(x), t)


def _fe(f, x, t, h):
    return vec.axpy(h, _ext(f, x, t), x)


def _rk2(f, x, t, h):
    s1 = _ext(f, x, t)
    q1 = vec.axpy(h, s1, x)
    s2 = _ext(f, q1, t + h)
    return vec.axpy(0.5 * h, vec.add(s1, s2), x)


def _rk3(f, x, t, h):
    s1 = _ext(f, x, t)
    q1 = vec.axpy(0.5 * h, s1, x)
    s2 = _ext(f, q1, t + 0.5 * h)
    q2 = vec.axpy(2.0 * h, s2, vec.axpy(-h, s1, x))
    s3 = _ext(f, q2, t + h)
    acc = vec.add(vec.axpy(4.0, s2, s1), s3)
    return vec.axpy(h / 6.0, acc, x)


def _rk4(f, x, t, h):
    s1 = _ext(f, x, t)
    q1 = vec.axpy(0.5 * h, s1, x)
    s2 = _ext(f, q1, t + 0.5 * h)
    q2 = vec.axpy(0.5 * h, s2, x)
    s3 = _ext(f, q2, t + 0.5 * h)
    q3 = vec.axpy(h, s3, x)
    s4 = _ext(f, q3, t + h)
    acc = vec.add(vec.add(s1, vec.scale(vec.add(s2, s3), 2.0)), s4)
    return vec.axpy(h / 6.0, acc, x)


def _tvdrk2(f, x, t, h):
    q1 = vec.axpy(h, _ext(f, x, t), x)
    q2 = vec.axpy(h, _ext(f, q1, t + h), q1)
    return vec.scale(vec.add(x, q2), 0.5)


def _tvdrk3(f, x, t, h):
    q1 = vec.axpy(h, _ext(f, x, t), x)
    q2 = vec.axpy(h, _ext(f, q1, t + h), q1)
    q3 = vec.scale(vec.axpy(3.0, x, q2), 0.25)
    q4 = vec.axpy(h, _ext(f, q3, t + 0.5 * h), q3)
    return vec.scale(vec.axpy(2.0, q4, x), 1.0 / 3.0)


def _pfe(f, x, t, h):
    return project(_fe(f, x, t, h))


def _prk2(f, x, t, h):
    return project(_rk2(f, x, t, h))


def _prk3(f, x, t, h):
    return project(_rk3(f, x, t, h))


def _prk4(f, x, t, h):
    return project(_rk4(f, x, t, h))


def _ptvdrk2(f, x, t, h):
    return project(_tvdrk2(f, x, t, h))


def _ptvdrk2p(f, x, t, h):
    q1 = project(vec.axpy(h, _ext(f, x, t), x))
    q2 = project(vec.axpy(h, _ext(f, q1, t + h), q1))
    return project(vec.scale(vec.add(x, q2), 0.5))


def _ptvdrk3(f, x, t, h):
    return project(_tvdrk3(f, x, t, h))


def _ptvdrk3p(f, x, t, h):
    q1 = project(vec.axpy(h, _ext(f, x, t), x))
    q2 = project(vec.axpy(h, _ext(f, q1, t + h), q1))
    q3 = project(vec.scale(vec.axpy(3.0, x, q2), 0.25))
    q4 = project(vec.axpy(h, _ext(f, q3, t + 0.5 * h), q3))
    return project(vec.scale(vec.axpy(2.0, q4, x), 1.0 / 3.0))


BASELINE_STEPPERS: Dict[BaselineId, BaselineStepper] = {
    BaselineId.FE: _fe,
    BaselineId.RK2: _rk2,
    BaselineId.RK3: _rk3,
    BaselineId.RK4: _rk4,
    BaselineId.TVDRK2: _tvdrk2,
    BaselineId.TVDRK3: _tvdrk3,
    BaselineId.PFE: _pfe,
    BaselineId.PRK2: _prk2,
    BaselineId.PRK3: _prk3,
    BaselineId.PRK4: _prk4,
    BaselineId.PTVDRK2: _ptvdrk2,
    BaselineId.PTVDRK2P: _ptvdrk2p,
    BaselineId.PTVDRK3: _ptvdrk3,
    BaselineId.PTVDRK3P: _ptvdrk3p,
}

# Projected variants end every step on the sphere; the rest drift off it.
ON_SPHERE = frozenset(
    {
        BaselineId.PFE,
        BaselineId.PRK2,
        BaselineId.PRK3,
        BaselineId.PRK4,
        BaselineId.PTVDRK2,
        BaselineId.PTVDRK2P,
        BaselineId.PTVDRK3,
        BaselineId.PTVDRK3P,
    }
)


def baseline_stepper(scheme: BaselineId) -> BaselineStepper:
    return BASELINE_STEPPERS[BaselineId(scheme)]


def baseline_step(
    scheme: BaselineId, f: VelocityField, x: Vec3, t: float, h: float
) -> Vec3:
    """One step of the requested Table-of-baselines scheme."""
    return baseline_stepper(scheme)(f, x, t, h)


def angle_recurrence(scheme: BaselineId, theta: float, h: float) -> float:
    """Great-circle angle recurrences of the internal-projection schemes.

    For motion on a great circle with angular velocity theta' = theta, a
    projected forward-Euler step multiplies the angle by g = 1 + arctan(h);
    the primed TVDRK variants compose g through their stage structure:

    * PFE:       theta -> g theta
    * PTVDRK2':  theta -> (1 + g^2)/2 theta
    * PTVDRK3':  theta -> (2 + 3 g + g^3)/6 theta

    Expanding g shows PFE is first order and both primed schemes are second
    order (the PTVDRK3' h^3 coefficient is -1/6 against the exact +1/6).
    """
    g = 1.0 + math.atan(h)
    scheme = BaselineId(scheme)
    if scheme == BaselineId.PFE:
        factor = g
    elif scheme == BaselineId.PTVDRK2P:
        factor = 0.5 * (1.0 + g * g)
    elif scheme == BaselineId.PTVDRK3P:
        factor = (2.0 + 3.0 * g + g * g * g) / 6.0
    else:
        raise ValueError(f"no angle recurrence for scheme {scheme!r}")
    return factor * theta
