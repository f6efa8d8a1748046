"""The map phi_k(z) = z + k E_k(z) / E_k'(z) with certified error bounds.

phi_k commutes with SL_2(Z): phi_k(gamma z) = gamma phi_k(z). Its poles are the zeros
of E_k' that are not zeros of E_k, and phi_k' = F_k / E_k'^2 with the cusp form
F_k = (k + 1) E_k'^2 - k E_k E_k''.
"""
import math
from typing import Optional, Sequence, Tuple

from numkernel import (
    DomainError,
    EvalBudget,
    EvalResult,
    HalfPlanePoint,
    InconsistencyError,
    as_point,
    eisenstein_jet,
    get_context,
)

from .types import UnimodularMatrix


def _grown(values: Sequence, errors: Sequence):
    """Bound on |prod(v + dv) - prod(v)| given |dv_i| <= errors[i], kept in mpf."""
    exact = math.prod(abs(v) for v in values)
    grown = math.prod(abs(v) + e for v, e in zip(values, errors))
    return grown - exact


def is_pole(result: EvalResult) -> bool:
    return math.isinf(result.tail_bound)


def _jet(k: int, z, order: int, budget: EvalBudget):
    if k < 4 or k % 2:
        raise DomainError(f"phi_k needs an even k >= 4, got {k!r}")
    return eisenstein_jet(k, z, order=order, budget=budget)


def _phi_from_jet(k: int, ctx, zc, e, d) -> EvalResult:
    if not d.is_certified_nonzero():
        if not e.is_certified_nonzero():
            raise InconsistencyError(
                f"E_{k} and E_{k}' both vanish to working precision at {complex(zc):.12g}"
            )
        return EvalResult(ctx.inf, math.inf, d.terms_used, d.precision_bits)
    ratio = e.value / d.value
    size = abs(d.value)
    # |E/E' - (E+dE)/(E'+dE')| <= (dE + |E/E'| dE') / (|E'| - dE')
    error = (e.tail_bound + abs(ratio) * d.tail_bound) / (size - d.tail_bound)
    rounding = 4 * ctx.eps * (abs(zc) + k * abs(ratio))
    return EvalResult(
        zc + k * ratio,
        float(k * error + rounding),
        max(e.terms_used, d.terms_used),
        d.precision_bits,
    )


def phi(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """phi_k(z); a pole gives value inf with an infinite tail bound (see `is_pole`)."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    e, d = _jet(k, zc, 1, budget)
    return _phi_from_jet(k, get_context(d.precision_bits), zc, e, d)


def _Fk_from_jet(k: int, ctx, e, d, d2) -> EvalResult:
    value = (k + 1) * d.value**2 - k * e.value * d2.value
    error = (k + 1) * _grown([d.value, d.value], [d.tail_bound] * 2) + k * _grown(
        [e.value, d2.value], [e.tail_bound, d2.tail_bound]
    )
    scale = (k + 1) * abs(d.value) ** 2 + k * abs(e.value * d2.value)
    return EvalResult(value, float(error + 4 * ctx.eps * scale), d2.terms_used, d2.precision_bits)


def eval_Fk(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """F_k(z) = (k + 1) E_k'(z)^2 - k E_k(z) E_k''(z), a cusp form of weight 2k + 4."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    e, d, d2 = _jet(k, as_point(z).to_mpc(ctx), 2, budget)
    return _Fk_from_jet(k, get_context(d2.precision_bits), e, d, d2)


def Fk_scale(k: int, z, budget: Optional[EvalBudget] = None):
    """(k + 1)|E_k'|^2 + k|E_k E_k''|, the size of the two terms that cancel in F_k."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    e, d, d2 = _jet(k, as_point(z).to_mpc(ctx), 2, budget)
    return (k + 1) * abs(d.value) ** 2 + k * abs(e.value * d2.value)


def Fk_jet(k: int, z, budget: Optional[EvalBudget] = None) -> Tuple[EvalResult, EvalResult]:
    """F_k and F_k' = (k + 2) E_k' E_k'' - k E_k E_k''' at z."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    e, d, d2, d3 = _jet(k, as_point(z).to_mpc(ctx), 3, budget)
    ctx = get_context(d3.precision_bits)
    value = (k + 2) * d.value * d2.value - k * e.value * d3.value
    error = (k + 2) * _grown([d.value, d2.value], [d.tail_bound, d2.tail_bound]) + k * _grown(
        [e.value, d3.value], [e.tail_bound, d3.tail_bound]
    )
    rounding = 4 * ctx.eps * abs(value)
    slope = EvalResult(value, float(error + rounding), d3.terms_used, d3.precision_bits)
    return _Fk_from_jet(k, ctx, e, d, d2), slope


def phi_jet(k: int, z, budget: Optional[EvalBudget] = None) -> Tuple[EvalResult, EvalResult]:
    """phi_k(z) and phi_k'(z) = F_k(z) / E_k'(z)^2 from one pass over the q-series."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    e, d, d2 = _jet(k, zc, 2, budget)
    ctx = get_context(d2.precision_bits)
    value = _phi_from_jet(k, ctx, zc, e, d)
    if is_pole(value):
        return value, value
    f = _Fk_from_jet(k, ctx, e, d, d2)
    size = abs(d.value)
    derivative = f.value / d.value**2
    grown = _grown([d.value, d.value], [d.tail_bound] * 2)
    error = (f.tail_bound + abs(derivative) * grown) / (size - d.tail_bound) ** 2
    return value, EvalResult(derivative, float(error), f.terms_used, f.precision_bits)


def phi_derivative(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    return phi_jet(k, z, budget)[1]


def v(k: int, t, budget: Optional[EvalBudget] = None) -> float:
    """v_k(t) = Im phi_k(1/2 + i t); Re phi_k is 1/2 on that line."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    value = phi(k, HalfPlanePoint(ctx.mpf(1) / 2, ctx.mpf(t)), budget)
    if is_pole(value):
        raise DomainError(f"1/2 + {float(t)}i is a pole of phi_{k}")
    return float(value.value.imag)


def equivariance_residual(
    k: int, z, gamma: UnimodularMatrix, budget: Optional[EvalBudget] = None
) -> float:
    """|phi_k(gamma z) (c phi_k(z) + d) - (a phi_k(z) + b)|, relative to the size of the terms."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    inner = phi(k, zc, budget).value
    outer = phi(k, gamma.act(zc), budget).value
    lhs = outer * (gamma.c * inner + gamma.d)
    rhs = gamma.a * inner + gamma.b
    return float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1))


def conjugation_residual(k: int, z, budget: Optional[EvalBudget] = None) -> float:
    """|phi_k(-conj z) + conj(phi_k(z))|."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    mirrored = phi(k, -ctx.conj(zc), budget).value
    return float(abs(mirrored + ctx.conj(phi(k, zc, budget).value)))


def inversion_product(k: int, z, budget: Optional[EvalBudget] = None):
    """phi_k(-1/z) phi_k(z), which is -1 wherever both factors are finite."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    return complex(phi(k, -1 / zc, budget).value * phi(k, zc, budget).value)


def imaginary_axis_check(
    k: int, samples: Sequence[float], budget: Optional[EvalBudget] = None
) -> float:
    """max |Re phi_k(i t)| / |phi_k(i t)| over the sampled t; phi_k maps iR_+ into iR."""
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    worst = 0.0
    for t in samples:
        value = phi(k, HalfPlanePoint(ctx.mpf(0), ctx.mpf(t)), budget).value
        worst = max(worst, float(abs(value.real) / abs(value)))
    return worst
