"""Sphere-constrained explicit Runge-Kutta integrators and benchmark harness."""

from .baselines import BaselineId, angle_recurrence, baseline_step, baseline_stepper
from .errors import (
    AntipodalPointsError,
    DegenerateFrontError,
    HemisphereViolationError,
    LogBranchUndefinedError,
    NearPoleError,
    NoConvergenceError,
    NonPositiveError,
    ReferenceUnavailableError,
    SphereRKError,
    StepTooLargeError,
    ZeroQuaternionError,
    ZeroVectorError,
)
from .fields import (
    StabilitySigma,
    VelocityField,
    VortexConfig,
    projected_linear_field,
    rigid_rotation_field,
    rotate_about,
    stability_interval,
    stability_sigma,
    vortex4_field,
)
from .geometry import (
    TangentVector,
    UnitVector3,
    exp_map,
    exp_raw,
    geodesic_distance,
    project,
    same_hemisphere,
    slerp,
    tangent_vector,
    unit_vector,
)
from .integrators import (
    SchemeId,
    SspTableau,
    frechet_mean,
    integrate,
    integrate_steps,
    progressive_slerp_combine,
    sfe_step,
    ssp_step,
    ssprk54_step,
    ssprk104_step,
    stvdrk2_step,
    stvdrk3_step,
    stvdrk4_step,
)
from .quaternion import (
    Quaternion,
    hamilton_product,
    inverse,
    q_exp,
    q_log,
    q_pow,
    quat_slerp,
)

__version__ = "0.1.0"
