"""Lattice-sum oracles for h_k and G_k.

For each row c >= 1 the full column sum over d is a Hurwitz zeta evaluation,

    sum_d (w + d)^(-s) = zeta(s, w0) + (-1)^s zeta(s, 1 - w0),   w0 = w - floor(Re w),

and the rows c > C are bounded through the divisor-sum majorant of the same
expansion, so the truncation rule matches the q-series one.
"""
import math
from typing import Optional

from .arith import is_int
from .context import get_context, with_escalation
from .errors import CertificationError, DomainError
from .qseries import as_point, log_majorant, truncation_reached
from .types import EvalBudget, EvalResult


def column_sum(ctx, s: int, w):
    """sum over all integers d of (w + d)^(-s) for Im w > 0 and s >= 2.

    Returns the sum and |zeta(s, w0)| + |zeta(s, 1 - w0)|, the scale of its rounding error.
    """
    w0 = w - ctx.floor(w.real)
    right = ctx.zeta(s, w0)
    left = ctx.zeta(s, 1 - w0)
    return right + (-1) ** s * left, abs(right) + abs(left)


def _lattice_rows(
    ctx,
    s: int,
    z,
    row_weight: int,
    row_scale,
    e: int,
    r: int,
    majorant_scale,
    budget: EvalBudget,
):
    """row_scale * sum_{c>=1} c^row_weight * column_sum(s, c z) with a certified tail.

    Rows c > C contribute at most majorant_scale * sum_{N>C} N^r sigma_e(N) |q|^N.
    """
    log_q = -2 * math.pi * float(z.imag)
    majorant_scale = float(majorant_scale)
    target = budget.target_abs_error / majorant_scale
    total = ctx.mpc(0)
    abs_sum = ctx.mpf(0)
    size = ctx.mpf(0)
    c = 0
    while True:
        c += 1
        if c > budget.max_terms:
            raise CertificationError(
                f"lattice rows exceeded {budget.max_terms}",
                best_bound=majorant_scale * 2 * math.exp(min(log_majorant(e, r, c, log_q), 700.0)),
            )
        row, row_size = column_sum(ctx, s, c * z)
        if row_weight:
            row *= c**row_weight
            row_size *= c**row_weight
        size += row_size
        total += row
        abs_sum += abs(row)
        scaled_abs = abs_sum * abs(row_scale) / majorant_scale
        if truncation_reached(ctx, e, r, c, log_q, target, budget.target_rel_error, scaled_abs):
            break

    result_abs = abs_sum * abs(row_scale)
    tail = majorant_scale * 2 * math.exp(log_majorant(e, r, c + 1, log_q))
    tail += float(ctx.eps * (c + 2) * size * abs(row_scale))
    allowed = budget.target_abs_error
    if budget.target_rel_error is not None:
        allowed = max(allowed, budget.target_rel_error * float(result_abs))
    if tail > allowed:
        raise CertificationError(
            f"lattice rounding exceeds the target at {ctx.prec} bits", best_bound=tail
        )
    return row_scale * total, tail, c


def _hk_lattice(k: int, z, budget: EvalBudget) -> EvalResult:
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    s = k + 1
    # h_k = (2 pi)^(-s) k! i^s sum_c c * column_sum(s, c z); the row tail in h_k
    # units is sum_{N>C} N sigma_{k-1}(N) |q|^N
    prefactor = ctx.factorial(k) * ctx.j**s / (2 * ctx.pi) ** s
    value, tail, rows = _lattice_rows(ctx, s, zc, 1, prefactor, k - 1, 1, 1, budget)
    return EvalResult(
        value=value, tail_bound=tail, terms_used=rows, precision_bits=budget.working_precision_bits
    )


def eval_hk_lattice(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """Independent lattice evaluation of h_k for any integer k >= 2."""
    if not is_int(k) or k < 2:
        raise DomainError(f"h_k needs an integer k >= 2, got {k!r}")
    return with_escalation(_hk_lattice, int(k), z, budget=budget or EvalBudget())


def _gk_lattice(k: int, z, budget: EvalBudget) -> EvalResult:
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    # G_k = 2 zeta(k) + 2 sum_{c>=1} column_sum(k, c z); rows beyond C add at most
    # 2 (2 pi)^k / (k-1)! * sum_{N>C} sigma_{k-1}(N) |q|^N
    majorant_scale = 2 * (2 * ctx.pi) ** k / ctx.factorial(k - 1)
    rows_value, tail, rows = _lattice_rows(ctx, k, zc, 0, 2, k - 1, 0, majorant_scale, budget)
    return EvalResult(
        value=2 * ctx.zeta(k) + rows_value,
        tail_bound=tail,
        terms_used=rows,
        precision_bits=budget.working_precision_bits,
    )


def eval_Gk_lattice(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """G_k(z) = sum over (c, d) != (0, 0) of (c z + d)^(-k), for even k >= 4."""
    if not is_int(k) or k < 4 or k % 2:
        raise DomainError(f"G_k needs an even integer k >= 4, got {k!r}")
    return with_escalation(_gk_lattice, int(k), z, budget=budget or EvalBudget())
