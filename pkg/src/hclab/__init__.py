"""hclab: sharp constants for Hausdorff-type operators on power-weighted spaces.

The package evaluates operator norms of ``U f(x) = int_0^1 f(s(t) x) psi(t) dt``
and its relatives in closed form where possible, checks them numerically
against extremal families, and writes CSV/JSON/SVG reports.
"""

from .errors import HCLabError
from .experiments import (
    ExperimentReport,
    SweepPlan,
    adjoint_spec,
    adjointness_check,
    bmo_bound_experiment,
    commutator_bound_check,
    commutator_necessity_sweep,
    hardy_demo_sweep,
    hardy_inequality_demo,
    sharpness_sweep,
)
from .functions import build_function
from .kernels import (
    CurveSpec,
    KernelSpec,
    SharpConstant,
    bmo_constant,
    cesaro_constant,
    commutator_constant,
    effective_kernel,
    infinite_lp_constant,
    lp_constant,
    signed_bmo_factor,
)
from .operators import OperatorSpec, apply, apply_H_radial, apply_U, apply_U_infinite, apply_V, apply_commutator
from .quadrature import QuadratureConfig
from .spaces import BallFamily, ball_average, bmo_estimate, lp_norm, maximal_estimate
from .weights import Ball, HomogeneousWeight, build_weight

__version__ = "0.1.0"
