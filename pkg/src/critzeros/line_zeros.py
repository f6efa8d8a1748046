from dataclasses import replace
from typing import List, Optional, Sequence

from conf import ARC_GRID_FACTOR, BRACKET_SCAN_POINTS, SIMPLICITY_FACTOR, SQRT3_OVER_2
from numkernel import (
    ContradictionError,
    EvalBudget,
    HalfPlanePoint,
    certified_sign,
    eisenstein_jet,
    eval_Ek_deriv,
    get_context,
)
from utils.log import get_logger

from .records import CriticalPointRecord
from .refine import bisect_sign, newton_on_line, scan_sign_changes
from .signs import bracket_table, check_weight, line_point, line_sign, t_value

logger = get_logger(__name__)


def _jet_on_line(k: int, t, order: int, budget: EvalBudget):
    ctx = get_context(budget.working_precision_bits)
    return eisenstein_jet(k, line_point(ctx, t), order=order, budget=budget)


def _refine_on_line(
    k: int, derivative: int, sign_at, lo: float, hi: float, budget: EvalBudget, law: str
):
    """Locate the single zero of E_k^(derivative) on 1/2 + i ]lo, hi[.

    Returns the zero's t, |E_k^(derivative)| there, and |E_k^(derivative+1)| as margin.
    """
    changes, _ = scan_sign_changes(sign_at, lo, hi, BRACKET_SCAN_POINTS)
    if not changes:
        raise ContradictionError(f"{law}: sign change on ]{lo:.9f}, {hi:.9f}[", 1, 0)
    if len(changes) > 1:
        raise ContradictionError(f"{law}: unique zero on ]{lo:.9f}, {hi:.9f}[", 1, len(changes))
    a, b = bisect_sign(sign_at, *changes[0])
    ctx = get_context(budget.working_precision_bits)

    def jet_at(t):
        return _jet_on_line(k, t, derivative + 1, budget)[derivative:]

    t = newton_on_line(jet_at, ctx, (a + b) / 2, a, b)
    value, slope = jet_at(t)
    residual = float(abs(value.value))
    margin = float(abs(slope.value))
    if not (margin > slope.tail_bound and margin > SIMPLICITY_FACTOR * residual / (hi - lo)):
        raise ContradictionError(f"{law}: simple zero", f"> {residual / (hi - lo):.3e}", margin)
    logger.debug(f"k={k}: zero of E^({derivative}) at t = {float(t):.15f}")
    return t, residual, margin


def locate_line_zeros(
    k: int, budget: Optional[EvalBudget] = None, include_endpoint: bool = False
) -> List[CriticalPointRecord]:
    """Zeros of E_k' on 1/2 + i ]sqrt(3)/2, oo[, one per interval of the bracket table.

    With `include_endpoint` the trivial zero at e^(pi i/3) is appended when k = 2 mod 6.
    """
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    table = bracket_table(k)

    def sign_at(t):
        return line_sign(k, t, budget)

    records = []
    for lo, hi in table.intervals():
        t, residual, margin = _refine_on_line(k, 1, sign_at, lo, hi, budget, f"zeros of E_{k}'")
        records.append(
            CriticalPointRecord(
                k=k,
                location=line_point(ctx, t),
                bracket=(lo, hi),
                residual=residual,
                simplicity_margin=margin,
            )
        )
    expected = (k - 4) // 6
    if len(records) != expected:
        raise ContradictionError(f"number of zeros of E_{k}' on the line", expected, len(records))
    records.sort(key=lambda record: record.location.im)
    if include_endpoint:
        endpoint = line_endpoint_zero(k, budget)
        if endpoint is not None:
            records.insert(0, endpoint)
    logger.info(f"k={k}: {len(records)} zeros of E_k' on Re z = 1/2")
    return records


def line_endpoint_zero(
    k: int, budget: Optional[EvalBudget] = None
) -> Optional[CriticalPointRecord]:
    """The zero of E_k' at e^(pi i/3), present exactly when k = 2 mod 6."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    corner = HalfPlanePoint(ctx.mpf(1) / 2, ctx.sqrt(3) / 2)
    _, first, second = eisenstein_jet(k, corner, order=2, budget=budget)
    vanishes = not first.is_certified_nonzero()
    expected = k % 6 == 2
    if vanishes != expected:
        raise ContradictionError(f"E_{k}'(e^(pi i/3)) = 0 iff k = 2 mod 6", expected, vanishes)
    if not vanishes:
        return None
    if not second.is_certified_nonzero():
        raise ContradictionError(
            f"simple zero of E_{k}' at e^(pi i/3)", "E'' != 0", float(abs(second.value))
        )
    return CriticalPointRecord(
        k=k,
        location=corner,
        bracket=(SQRT3_OVER_2, SQRT3_OVER_2),
        residual=float(abs(first.value)),
        simplicity_margin=float(abs(second.value)),
        classification="trivial",
        kind="endpoint",
    )


def translated_line_zeros(
    records: Sequence[CriticalPointRecord], budget: Optional[EvalBudget] = None
) -> List[CriticalPointRecord]:
    """The zeros on Re z = -1/2, i.e. the records shifted by -1, with residuals re-evaluated."""
    budget = budget or EvalBudget.for_signs()
    shifted = []
    for record in records:
        location = record.location.shift(-1)
        _, first = eisenstein_jet(record.k, location, order=1, budget=budget)
        shifted.append(replace(record, location=location, residual=float(abs(first.value))))
    return shifted


def _second_derivative(k: int, t, budget: EvalBudget):
    ctx = get_context(budget.working_precision_bits)
    return eval_Ek_deriv(k, line_point(ctx, t), 2, budget)


def second_derivative_spot_check(
    k: int, budget: Optional[EvalBudget] = None
) -> List[CriticalPointRecord]:
    """Zeros of E_k'' on 1/2 + i ]sqrt(3)/2, t_1 + 1[ found by a sign scan, each checked simple."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    top = float(t_value(ctx, k, 1)) + 1

    def sign_at(t):
        sign, _ = certified_sign(_second_derivative, k, t, budget=budget)
        return sign

    records = []
    cells, _ = scan_sign_changes(sign_at, SQRT3_OVER_2, top, max(ARC_GRID_FACTOR * k, 24))
    for lo, hi in cells:
        t, residual, margin = _refine_on_line(k, 2, sign_at, lo, hi, budget, f"zeros of E_{k}''")
        records.append(
            CriticalPointRecord(
                k=k,
                location=line_point(ctx, t),
                bracket=(lo, hi),
                residual=residual,
                simplicity_margin=margin,
                kind="d2",
            )
        )
    return records
