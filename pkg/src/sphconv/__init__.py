"""Certificates and a numerical falsifier for convexity of quadratic
functions along the geodesics of cone-constrained spherical caps."""

__version__ = "0.1.0"

from .core import (
    CertificateOutcome,
    Cone,
    InstanceFormatError,
    ORTHANT,
    GENERATED,
    QuadraticInstance,
    SamplingError,
    Verdict,
    WitnessPair,
    foc_slack,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    make_positive_definite,
    sample_orthogonal_partner,
    sample_unit_in_cone,
    save_instance,
    shift,
    soc_slack,
)
from .linalg import (
    CopositivityResult,
    CopositivityStatus,
    NotApplicableError,
    copositivity_check,
    perron_check,
    projection_formula_lambda_min,
    restricted_lambda_min,
    smallest_eigenvalue,
)
from .certificates import (
    BatteryConfig,
    BatteryResult,
    CERTIFICATE_NAMES,
    CertificateContradiction,
    run_battery,
)
from .oracle import (
    OracleConfig,
    OracleStatus,
    OracleVerdict,
    bx_slack,
    falsify,
    geodesic_scan,
    geodesic_second_derivative,
    liminf_estimate,
    minimize_f_demo,
    minimize_h,
    pointwise_h,
    run_oracle,
)
from .generators import gen_bipos, gen_cd, gen_diag_iff, gen_gap, gen_random

__all__ = [name for name in dir() if not name.startswith("_")]
