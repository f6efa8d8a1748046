from typing import Optional

from conf import BRACKET_SCAN_POINTS
from numkernel import (
    ContradictionError,
    DomainError,
    EvalBudget,
    HalfPlanePoint,
    certified_sign,
    eisenstein_jet,
    eval_Ek,
    get_context,
)

from .records import CriticalPointRecord
from .refine import bisect_sign, newton_on_line, scan_sign_changes


def _e2_on_axis(t, budget: EvalBudget):
    ctx = get_context(budget.working_precision_bits)
    return eval_Ek(2, HalfPlanePoint(ctx.mpf(0), ctx.mpf(t)), budget)


def e2_line_zero(
    lo: float = 0.4, hi: float = 0.7, budget: Optional[EvalBudget] = None
) -> CriticalPointRecord:
    """The zero of the real function t -> E_2(i t) inside [lo, hi]."""
    if not 0 < lo < hi:
        raise DomainError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)

    def sign_at(t):
        sign, _ = certified_sign(_e2_on_axis, t, budget=budget)
        return sign

    changes, _ = scan_sign_changes(sign_at, lo, hi, BRACKET_SCAN_POINTS)
    if not changes:
        raise DomainError(f"E_2(it) has no sign change on [{lo}, {hi}]")
    if len(changes) > 1:
        raise ContradictionError(f"single zero of E_2(it) on [{lo}, {hi}]", 1, len(changes))
    a, b = bisect_sign(sign_at, *changes[0])

    def jet_at(t):
        return eisenstein_jet(2, HalfPlanePoint(ctx.mpf(0), ctx.mpf(t)), order=1, budget=budget)

    t = newton_on_line(jet_at, ctx, (a + b) / 2, a, b)
    value, slope = jet_at(t)
    if not slope.is_certified_nonzero():
        raise ContradictionError("simple zero of E_2", "E_2' != 0", float(abs(slope.value)))
    return CriticalPointRecord(
        k=2,
        location=HalfPlanePoint(ctx.mpf(0), t),
        bracket=(lo, hi),
        residual=float(abs(value.value)),
        simplicity_margin=float(abs(slope.value)),
        kind="e2",
    )
