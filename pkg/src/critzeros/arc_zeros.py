import math
from typing import List, Optional

from conf import ARC_GRID_FACTOR, ENDPOINT_FIT_STEP, NEWTON_STEPS
from numkernel import ContradictionError, EvalBudget, certified_sign, eval_fk_gk, get_context
from utils.log import get_logger

from .records import ArcZeroRecord
from .refine import bisect_sign
from .signs import check_weight

logger = get_logger(__name__)


def _f_on_arc(k: int, theta, budget: EvalBudget):
    return eval_fk_gk(k, theta, budget)[0]


def _g_on_arc(k: int, theta, budget: EvalBudget):
    return eval_fk_gk(k, theta, budget)[1]


def arc_sign(k: int, theta, budget: Optional[EvalBudget] = None) -> int:
    """Certified sign of the real function f_k(theta) = e^(i k theta/2) E_k(e^(i theta))."""
    sign, _ = certified_sign(_f_on_arc, k, theta, budget=budget or EvalBudget.for_signs())
    return sign


def interior_arc_count(k: int) -> int:
    """Number N of zeros of f_k on ]pi/3, 2pi/3[."""
    return {4: (k - 4) // 6, 0: k // 6, 2: (k - 8) // 6}[k % 6]


def expected_g_signs(k: int) -> List[int]:
    n = interior_arc_count(k)
    if k % 6 == 4:
        return [(-1) ** (n + 1 - j) for j in range(n + 2)]
    interior = [(-1) ** (n - j) for j in range(1, n + 1)]
    if k % 6 == 2:
        return [0] + interior + [0]
    return interior


def endpoint_order(k: int, theta, inward: int, budget: EvalBudget) -> int:
    """Order of vanishing of f_k at an arc endpoint from a one-sided fit |f(2h)/f(h)| = 2^order."""
    near = _f_on_arc(k, theta + inward * ENDPOINT_FIT_STEP, budget)
    far = _f_on_arc(k, theta + 2 * inward * ENDPOINT_FIT_STEP, budget)
    ratio = abs(far.value) / abs(near.value)
    return int(round(math.log2(float(ratio))))


def _polish(k: int, ctx, a: float, b: float, budget: EvalBudget):
    theta = ctx.mpf(a + b) / 2
    lo, hi = ctx.mpf(a), ctx.mpf(b)
    for _ in range(NEWTON_STEPS):
        f, g = eval_fk_gk(k, theta, budget)
        # f is real, so f' = Re g
        if f.value == 0 or g.value.real == 0:
            break
        theta_next = min(max(theta - f.value / g.value.real, lo), hi)
        if theta_next == theta:
            break
        theta = theta_next
    return theta


def _g_sign(k: int, theta, budget: EvalBudget) -> int:
    sign, _ = certified_sign(_g_on_arc, k, theta, budget=budget)
    return sign


def _endpoint_record(k: int, index: int, theta, inward: int, budget: EvalBudget) -> ArcZeroRecord:
    f, g = eval_fk_gk(k, theta, budget)
    if f.is_certified_nonzero():
        raise ContradictionError(f"f_{k} vanishes at theta = {float(theta):.6f}", 0, f.real)
    order = endpoint_order(k, theta, inward, budget)
    expected_order = 2 if k % 6 == 2 else 1
    if order != expected_order:
        raise ContradictionError(
            f"order of f_{k} at theta = {float(theta):.6f}", expected_order, order
        )
    return ArcZeroRecord(
        k=k,
        index=index,
        theta=float(theta),
        f_residual=float(abs(f.value)),
        g_sign=_g_sign(k, theta, budget) if order == 1 else 0,
        order=order,
        kind="endpoint",
        bracket=(float(theta), float(theta)),
    )


def locate_arc_zeros(k: int, budget: Optional[EvalBudget] = None) -> List[ArcZeroRecord]:
    """All zeros of f_k on [pi/3, 2pi/3], in increasing theta, endpoints included when zeros."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    left, right = ctx.pi / 3, 2 * ctx.pi / 3
    points = ARC_GRID_FACTOR * k
    width = math.pi / 3

    def sign_at(theta):
        return arc_sign(k, theta, budget)

    grid = [math.pi / 3 + width * j / points for j in range(1, points)]
    signs = [sign_at(theta) for theta in grid]
    interior = []
    for j in range(len(grid) - 1):
        if signs[j] == signs[j + 1]:
            continue
        a, b = bisect_sign(sign_at, grid[j], grid[j + 1], sign_lo=signs[j])
        theta = _polish(k, ctx, a, b, budget)
        f, _ = eval_fk_gk(k, theta, budget)
        interior.append(
            ArcZeroRecord(
                k=k,
                index=len(interior) + 1,
                theta=float(theta),
                f_residual=float(abs(f.value)),
                g_sign=_g_sign(k, theta, budget),
                bracket=(grid[j], grid[j + 1]),
            )
        )

    n = interior_arc_count(k)
    if len(interior) != n:
        raise ContradictionError(f"number of zeros of f_{k} on ]pi/3, 2pi/3[", n, len(interior))

    if k % 6 == 0:
        for theta in (left, right):
            if not _f_on_arc(k, theta, budget).is_certified_nonzero():
                raise ContradictionError(
                    f"f_{k} does not vanish at theta = {float(theta):.6f}", "non-zero", 0
                )
        records = interior
    else:
        records = (
            [_endpoint_record(k, 0, left, 1, budget)]
            + interior
            + [_endpoint_record(k, n + 1, right, -1, budget)]
        )

    observed = [record.g_sign for record in records]
    expected = expected_g_signs(k)
    if observed != expected:
        raise ContradictionError(f"signs of g_{k} at the zeros of f_{k}", expected, observed)
    logger.info(f"k={k}: {n} interior arc zeros, g signs {observed}")
    return records
