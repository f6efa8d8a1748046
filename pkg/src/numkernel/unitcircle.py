import math
from typing import Optional, Tuple

from .context import get_context
from .errors import DomainError, InconsistencyError
from .qseries import _check_even_weight, eisenstein_jet
from .types import EvalBudget, EvalResult


def eval_fk_gk(
    k: int, theta, budget: Optional[EvalBudget] = None
) -> Tuple[EvalResult, EvalResult]:
    """f_k(theta) = e^{k i theta/2} E_k(e^{i theta}) (real) and g_k = f_k' - (k i/2) f_k.

    g_k is obtained as i e^{(k+2) i theta/2} E_k'(e^{i theta}).
    """
    _check_even_weight(k, minimum=4)
    if not 0 < float(theta) < math.pi:
        raise DomainError(f"theta must lie in ]0, pi[, got {theta!r}")
    budget = budget or EvalBudget()
    ctx = get_context(budget.working_precision_bits)
    theta = ctx.mpf(theta)
    e_val, d_val = eisenstein_jet(k, ctx.expj(theta), order=1, budget=budget)
    ctx = get_context(e_val.precision_bits)

    f = ctx.expj(k * theta / 2) * e_val.value
    slack = 4 * ctx.eps * (abs(e_val.value) + 1)
    if abs(f.imag) > e_val.tail_bound + slack:
        raise InconsistencyError(
            f"Im f_{k}({float(theta):.6f}) = {float(f.imag):.3e} exceeds its bound "
            f"{e_val.tail_bound:.3e}"
        )
    g = ctx.j * ctx.expj((k + 2) * theta / 2) * d_val.value
    return (
        EvalResult(f.real, e_val.tail_bound, e_val.terms_used, e_val.precision_bits),
        EvalResult(g, d_val.tail_bound, d_val.terms_used, d_val.precision_bits),
    )
