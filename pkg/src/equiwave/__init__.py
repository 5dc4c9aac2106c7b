"""equiwave: numerical toolkit for equivariant wave maps on
rotationally symmetric manifolds.

The pipeline runs in five stages: verify that a metric profile is
admissible, reduce the geometric equation to a radial semilinear wave
equation on a higher dimensional flat space, build the discrete radial
operator and its functional calculus, monitor the dispersive estimates
(Hardy, smoothing, Strichartz, dimension shift), and finally integrate
the nonlinear flow and cross-check the two formulations.
"""

from .admissibility import (
    AdmissibilityReport,
    check_admissibility,
    check_perturbation,
    compute_H,
    compute_P,
    estimate_h_infinity,
)
from .errors import (
    BetaDiverges,
    BlowUp,
    CFLViolation,
    ClosedFormMismatch,
    DimensionError,
    DomainError,
    EquiwaveError,
    HypothesisFail,
    InconsistentFormulas,
    ModeMismatch,
    NegativeEigenvalue,
    NoLimit,
    NotAdmissible,
    ScenarioError,
    TruncationTooSmall,
)
from .estimates import (
    dimshift_check,
    gaussian_family,
    hardy2_check,
    hardy_check,
    hardy_probe_family,
    smoothing_check,
    strichartz_monitor,
    validate_wave_pair,
)
from .jets import Jet
from .profiles import (
    MetricProfile,
    TargetProfile,
    check_normalization,
    gamma_decompose,
    jet_eval,
    metric_profile,
    parse_expr,
    target_profile,
)
from .reduction import (
    ReducedProblem,
    compute_V,
    gamma_weights,
    indices,
    reduce_problem,
    transform_field,
    weight_w,
)
from .scenario import Scenario, load_scenario
from .solver import (
    Trajectory,
    WaveState,
    consistency_check,
    energy,
    integrate,
    strichartz_trace,
)
from .spectral import (
    DiscreteRadialOperator,
    RadialGrid,
    SpectralFunction,
    build_operator,
    evolve_linear,
    frac_norm,
    resolve,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "BetaDiverges",
    "BlowUp",
    "CFLViolation",
    "ClosedFormMismatch",
    "DimensionError",
    "DomainError",
    "DiscreteRadialOperator",
    "EquiwaveError",
    "HypothesisFail",
    "InconsistentFormulas",
    "Jet",
    "MetricProfile",
    "ModeMismatch",
    "NegativeEigenvalue",
    "NoLimit",
    "NotAdmissible",
    "RadialGrid",
    "ReducedProblem",
    "Scenario",
    "ScenarioError",
    "SpectralFunction",
    "TargetProfile",
    "Trajectory",
    "TruncationTooSmall",
    "WaveState",
    "build_operator",
    "check_admissibility",
    "check_normalization",
    "check_perturbation",
    "compute_H",
    "compute_P",
    "compute_V",
    "consistency_check",
    "dimshift_check",
    "energy",
    "estimate_h_infinity",
    "evolve_linear",
    "frac_norm",
    "gamma_decompose",
    "gamma_weights",
    "gaussian_family",
    "hardy2_check",
    "hardy_check",
    "hardy_probe_family",
    "indices",
    "integrate",
    "jet_eval",
    "load_scenario",
    "metric_profile",
    "parse_expr",
    "reduce_problem",
    "resolve",
    "smoothing_check",
    "strichartz_monitor",
    "strichartz_trace",
    "target_profile",
    "transform_field",
    "validate_wave_pair",
    "weight_w",
]
