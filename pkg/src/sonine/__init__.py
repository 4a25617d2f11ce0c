"""Sonine kernel pairs: construction, evaluation and verification.

The package evaluates closed-form Sonine pairs, solves for associates of
fractional power series, checks (g * f)(t) = 1 by singularity-aware
quadrature and p·g̃(p)·f̃(p) = 1 in the Laplace domain, and runs
admissibility diagnostics (complete monotonicity, limits at 0, regular
variation).
"""

from .conv import (
    FunctionKernel,
    ResidualReport,
    convolve_singular,
    gfd_apply,
    gfi_apply,
    operator_identity_check,
    sonine_residual,
)
from .diagnostics import (
    CMReport,
    DiagnosisReport,
    SingularityReport,
    cm_finite_difference_test,
    diagnose,
    log_asymptotics_check,
    rv_index_estimate,
    singularity_limit_test,
)
from .errors import (
    ConvergenceError,
    DomainError,
    ParseError,
    SingularKernelError,
    SonineError,
    UnsupportedKernelError,
)
from .kernels import (
    CosCounterexample,
    CoshCounterexample,
    DistributedOrderV,
    DistributedOrderW,
    ExpDamped,
    FracSeries,
    Kernel,
    MLAssociate,
    MLKernel,
    PowerLaw,
    Series,
    Shifted,
    ShiftedAssociate,
    SoninePair,
    catalog_pair,
    default_catalog,
    evaluate,
    theta,
    to_frac_series,
)
from .kernelspec import format_kernel, parse_kernel, parse_pair
from .laplace import (
    NsDecomposition,
    TransformGrid,
    laplace_sonine_residual,
    laplace_transform,
    ns_decompose,
    talbot_invert,
)
from .quadrature import QuadratureRule, gauss_rule
from .series import AssociateResult, associate_series, eval_series, exp_beta_series
from .specfun import MLParams, beta, exp_integral_e1, gamma, log_gamma, mittag_leffler

__version__ = "0.1.0"
