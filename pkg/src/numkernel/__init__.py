from .arith import bernoulli, divisor_power_sum, eisenstein_coefficient, is_int
from .context import certified_sign, get_context, with_escalation
from .errors import (
    CertificationError,
    ContinuationError,
    ContradictionError,
    DomainError,
    EiscritError,
    InconsistencyError,
    RefinementLimitError,
    ZeroOnCurveError,
)
from .lattice import eval_Gk_lattice, eval_hk_lattice
from .qseries import (
    as_point,
    eisenstein_jet,
    eval_delta,
    eval_Ek,
    eval_Ek_deriv,
    eval_hk,
    hk_to_derivative_factor,
)
from .types import EvalBudget, EvalResult, HalfPlanePoint, RationalNumber
from .unitcircle import eval_fk_gk
