import math
from typing import Callable, List, Optional, Sequence

from conf import (
    CONTOUR_TOP_MARGIN,
    DEFAULT_TOL,
    DETOUR_EPS_CAP,
    ETA_HALVINGS,
    ETA_START,
    SQRT3_OVER_2,
)
from critzeros import locate_line_zeros
from critzeros.signs import check_weight
from numkernel import (
    EvalBudget,
    RefinementLimitError,
    ZeroOnCurveError,
    eval_Ek_deriv,
    eval_fk_gk,
    get_context,
)
from utils.log import get_logger

from .curves import Contour, ParameterInterval, build_critical_contour, default_detour_radius
from .trace import ArgTrace, arg_variation, contour_variation, total_variation

logger = get_logger(__name__)


def expected_A(k: int) -> float:
    return -(k + 2) * math.pi / 3 if k % 6 == 4 else -k * math.pi / 3


def expected_B(k: int) -> float:
    return -(k + 2) * math.pi / 6 if k % 6 == 4 else -(k - 2) * math.pi / 6


def expected_I(k: int) -> int:
    return (k - 4) // 6


def _derivative(k: int) -> Callable:
    def evaluate(z, budget: EvalBudget):
        return eval_Ek_deriv(k, z, 1, budget)

    return evaluate


def _derivative_on_arc(k: int) -> Callable:
    def evaluate(theta, budget: EvalBudget):
        ctx = get_context(budget.working_precision_bits)
        return eval_Ek_deriv(k, ctx.expj(theta), 1, budget)

    return evaluate


def _g_on_arc(k: int) -> Callable:
    def evaluate(theta, budget: EvalBudget):
        return eval_fk_gk(k, theta, budget)[1]

    return evaluate


def _arc_variation(k: int, evaluate: Callable, tol: float, budget: EvalBudget) -> float:
    """Variation over [pi/3, 2pi/3].

    When k = 2 mod 6 it is the limit of the variation over [pi/3 + eta, 2pi/3 - eta].
    """
    ctx = get_context(budget.working_precision_bits)
    left, right = ctx.pi / 3, 2 * ctx.pi / 3
    if k % 6 != 2:
        interval = ParameterInterval(left, right, "arc")
        return arg_variation(evaluate, interval, budget).total_variation

    eta0 = ctx.mpf(ETA_START)
    middle = arg_variation(
        evaluate, ParameterInterval(left + eta0, right - eta0, "arc"), budget
    ).total_variation
    previous = None
    for j in range(1, ETA_HALVINGS + 1):
        eta = eta0 / 2**j
        ends = (
            arg_variation(evaluate, ParameterInterval(left + eta, left + eta0, "left end"), budget)
            .total_variation
            + arg_variation(
                evaluate, ParameterInterval(right - eta0, right - eta, "right end"), budget
            ).total_variation
        )
        value = middle + ends
        if previous is not None and abs(value - previous) < tol / 2:
            logger.debug(f"k={k}: eta limit reached at eta = {float(eta):.3e}")
            return value
        previous = value
    raise RefinementLimitError(
        f"k={k}: arc variation did not settle within {ETA_HALVINGS} halvings of eta"
    )


def compute_A(k: int, tol: float = DEFAULT_TOL, budget: Optional[EvalBudget] = None) -> float:
    """Change of arg E_k'(e^{i theta}) as theta runs from pi/3 to 2pi/3."""
    check_weight(k)
    return _arc_variation(k, _derivative_on_arc(k), tol, budget or EvalBudget.for_signs())


def compute_B(k: int, tol: float = DEFAULT_TOL, budget: Optional[EvalBudget] = None) -> float:
    """Change of arg g_k(theta) as theta runs from pi/3 to 2pi/3."""
    check_weight(k)
    return _arc_variation(k, _g_on_arc(k), tol, budget or EvalBudget.for_signs())


def gk_curve(k: int, budget: Optional[EvalBudget] = None) -> ArgTrace:
    """Samples of g_k along the arc, stopping ETA_START short of zero endpoints."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    eta = ctx.mpf(ETA_START) if k % 6 == 2 else 0
    interval = ParameterInterval(ctx.pi / 3 + eta, 2 * ctx.pi / 3 - eta, "gk")
    return arg_variation(_g_on_arc(k), interval, budget)


def arg_at_endpoint(k: int, budget: Optional[EvalBudget] = None) -> float:
    """arg g_k(2pi/3) in ]-pi, pi]."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    g = eval_fk_gk(k, 2 * ctx.pi / 3, budget)[1]
    if not g.is_certified_nonzero():
        raise ZeroOnCurveError(f"g_{k} vanishes at 2pi/3", parameter=2 * math.pi / 3)
    return float(ctx.arg(g.value))


def _line_zero_heights(k: int, budget: EvalBudget) -> List[float]:
    return [float(record.location.im) for record in locate_line_zeros(k, budget)]


def default_contour(
    k: int,
    T: Optional[float] = None,
    eps: Optional[float] = None,
    line_zeros: Optional[Sequence[float]] = None,
    budget: Optional[EvalBudget] = None,
) -> Contour:
    """The detoured boundary of D_T, locating the line zeros when they are not given."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    if line_zeros is None:
        line_zeros = _line_zero_heights(k, budget)
    line_zeros = list(line_zeros)
    if T is None:
        T = max(line_zeros + [SQRT3_OVER_2]) + CONTOUR_TOP_MARGIN
    if eps is None:
        eps = default_detour_radius(line_zeros + [SQRT3_OVER_2, T], DETOUR_EPS_CAP)
    return build_critical_contour(k, T, eps, line_zeros, bits=budget.working_precision_bits)


def contour_count_I(
    k: int,
    T: Optional[float] = None,
    eps: Optional[float] = None,
    line_zeros: Optional[Sequence[float]] = None,
    budget: Optional[EvalBudget] = None,
) -> float:
    """Number of zeros of E_k' enclosed by the detoured contour, as (change of arg)/(2 pi)."""
    budget = budget or EvalBudget.for_signs()
    contour = default_contour(k, T, eps, line_zeros, budget)
    traces = contour_variation(_derivative(k), contour, budget)
    count = total_variation(traces) / (2 * math.pi)
    logger.info(f"k={k}: contour count {count:.12f} over {len(contour)} segments")
    return count


def edge_cancellation(
    k: int,
    T: Optional[float] = None,
    eps: Optional[float] = None,
    line_zeros: Optional[Sequence[float]] = None,
    budget: Optional[EvalBudget] = None,
) -> float:
    """|variation along the right edge + variation along the left edge|, detours included."""
    budget = budget or EvalBudget.for_signs()
    contour = default_contour(k, T, eps, line_zeros, budget)
    edges = Contour(tuple(contour.labelled("right"))), Contour(tuple(contour.labelled("left")))
    return abs(
        sum(total_variation(contour_variation(_derivative(k), edge, budget)) for edge in edges)
    )
