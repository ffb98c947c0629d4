"""curvbound: numerical verification of sharp mean-curvature bounds.

Toolkit for hypersurfaces immersed in constant-curvature model spaces, in
both Riemannian and Lorentzian signature: curvature algebra (elementary
symmetric functions, Newton tensor recursions, trace operators), scalar
comparison functions, distance restriction operators, and a scenario-driven
verification harness.
"""

from .comparison import (
    AdmissibilityFlags,
    ComparisonProfile,
    CurvatureBoundG,
    LambdaResult,
    OdeSolution,
    c_b,
    c_hat_b,
    lambda_sup,
    make_bound,
    phi_b,
    phi_b_d1,
    phi_b_d2,
    phi_gamma,
    phi_ode_residual,
    psi,
    solve_cauchy_g,
    sturm_margin,
    sturm_profile,
)
from .curvature import (
    TAU_ELL,
    CurvatureProfile,
    NewtonFamily,
    elementary_symmetric,
    elliptic_point_scan,
    garding_chain,
    gauss_identities,
    higher_mean_curvatures,
    newton_family,
    trace_coefficients,
    trace_identity_residuals,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    EmptySampleError,
    GeometryError,
    HypothesisViolationError,
    ImmersionDegeneracyError,
    NumericalError,
    SignatureError,
    UndefinedGradientError,
)
from .harness import (
    CheckRecord,
    ScenarioConfig,
    VerificationReport,
    bundled_scenarios,
    emit_report,
    emit_samples_csv,
    load_scenario,
    run_scenario,
)
from .immersion import (
    GridSamples,
    HypersurfacePatch,
    PointFrame,
    build_patch,
    frame_at,
    principal_curvatures,
    sample_grid,
)
from .operators import (
    ComposedField,
    DistanceField,
    FieldSample,
    LinearCoordinateField,
    OmoriYauCandidate,
    OmoriYauReport,
    intrinsic_hessian_fd,
    key_inequality_residual,
    l_k_apply,
    omori_yau_search,
    phi_of_distance_field,
    restrict_field,
    restriction_hessian,
)
from .spaceform import (
    AmbientModel,
    ReferenceBall,
    ambient_distance,
    distance_gradient,
    distance_hessian_bilinear,
    distance_hessian_quadform,
    fd_distance_hessian_quadform,
    geodesic_point,
    geodesic_velocity,
    hessian_comparison_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityFlags",
    "AmbientModel",
    "CheckRecord",
    "ComparisonProfile",
    "ComposedField",
    "ConfigError",
    "ConsistencyError",
    "CurvatureBoundG",
    "CurvatureProfile",
    "DistanceField",
    "DomainError",
    "EmptySampleError",
    "FieldSample",
    "GeometryError",
    "GridSamples",
    "HypersurfacePatch",
    "HypothesisViolationError",
    "ImmersionDegeneracyError",
    "LambdaResult",
    "LinearCoordinateField",
    "NewtonFamily",
    "NumericalError",
    "OdeSolution",
    "OmoriYauCandidate",
    "OmoriYauReport",
    "PointFrame",
    "ReferenceBall",
    "ScenarioConfig",
    "SignatureError",
    "TAU_ELL",
    "UndefinedGradientError",
    "VerificationReport",
    "ambient_distance",
    "build_patch",
    "bundled_scenarios",
    "c_b",
    "c_hat_b",
    "distance_gradient",
    "distance_hessian_bilinear",
    "distance_hessian_quadform",
    "elementary_symmetric",
    "elliptic_point_scan",
    "emit_report",
    "emit_samples_csv",
    "fd_distance_hessian_quadform",
    "frame_at",
    "garding_chain",
    "gauss_identities",
    "geodesic_point",
    "geodesic_velocity",
    "higher_mean_curvatures",
    "hessian_comparison_residual",
    "intrinsic_hessian_fd",
    "key_inequality_residual",
    "l_k_apply",
    "lambda_sup",
    "load_scenario",
    "make_bound",
    "newton_family",
    "omori_yau_search",
    "phi_b",
    "phi_b_d1",
    "phi_b_d2",
    "phi_gamma",
    "phi_of_distance_field",
    "phi_ode_residual",
    "principal_curvatures",
    "psi",
    "restrict_field",
    "restriction_hessian",
    "run_scenario",
    "sample_grid",
    "solve_cauchy_g",
    "sturm_margin",
    "sturm_profile",
    "trace_coefficients",
    "trace_identity_residuals",
]
