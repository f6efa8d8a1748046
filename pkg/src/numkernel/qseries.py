"""Certified q-expansion evaluators.

All series here have the shape sum_{n>=1} n^r sigma_e(n) q^n with q = exp(2 pi i z).
A term's magnitude is dominated by the majorant M_n = C n^p |q|^n, where
sigma_e(n) <= 2 n^e for e >= 2, sigma_1(n) <= n (1 + ln n) and
sigma_0(n) <= 2 sqrt(n). Summation stops after term N once
M_{N+1} < target / 4 and the majorant ratio ((N+2)/(N+1))^p |q| < 1/2; the
remaining tail is then below 2 M_{N+1}. Floating-point rounding is bounded by
eps * (N + 2) * sum |terms| and added to the tail.
"""
import math
from typing import Optional, Sequence

from .arith import bernoulli, eisenstein_coefficient, is_int, sigma_table
from .context import get_context, with_escalation
from .errors import CertificationError, DomainError
from .types import EvalBudget, EvalResult, HalfPlanePoint

_LOG2 = math.log(2.0)


def as_point(z) -> HalfPlanePoint:
    return HalfPlanePoint.from_complex(z)


def _check_even_weight(k: int, minimum: int = 2):
    if not is_int(k) or k < minimum or k % 2:
        raise DomainError(f"weight must be an even integer >= {minimum}, got {k!r}")


def log_majorant(e: int, r: int, n: int, log_q: float) -> float:
    log_n = math.log(n)
    if e >= 2:
        log_sigma = _LOG2 + e * log_n
    elif e == 1:
        log_sigma = log_n + math.log1p(log_n)
    else:
        log_sigma = _LOG2 + 0.5 * log_n
    return log_sigma + r * log_n + n * log_q


def _ratio_exponent(e: int, r: int) -> float:
    if e >= 2:
        return e + r
    if e == 1:
        return r + 2
    return r + 0.5


def _log_target(ctx, target_abs: float, rel: Optional[float], abs_sum) -> float:
    log_target = math.log(target_abs)
    if rel is not None and abs_sum:
        log_target = max(log_target, math.log(rel) + float(ctx.log(abs_sum)))
    return log_target


def sigma_series(
    ctx,
    e: int,
    orders: Sequence[int],
    z,
    targets: Sequence[float],
    target_rel_error: Optional[float],
    max_terms: int,
):
    """Sum n^r sigma_e(n) q^n for every r in `orders` at the mpc point `z`.

    Returns (sums, tails, terms_used); tails are certified truncation plus
    rounding bounds, each compared against its own target.
    """
    q = ctx.expjpi(2 * z)
    log_q = -2 * math.pi * float(z.imag)
    sums = [ctx.mpc(0) for _ in orders]
    abs_sums = [ctx.mpf(0) for _ in orders]

    table = sigma_table(e, 64)
    qn = ctx.mpc(1)
    n = 0
    while True:
        n += 1
        if n > max_terms:
            best = max(
                2 * math.exp(min(log_majorant(e, r, n, log_q), 700.0)) for r in orders
            )
            raise CertificationError(
                f"q-series did not reach its target within {max_terms} terms", best_bound=best
            )
        if n >= len(table):
            table = sigma_table(e, 2 * n)
        qn *= q
        base = qn * table[n]
        for i, r in enumerate(orders):
            term = base * n**r if r else base
            sums[i] += term
            abs_sums[i] += abs(term)

        if all(
            truncation_reached(ctx, e, r, n, log_q, targets[i], target_rel_error, abs_sums[i])
            for i, r in enumerate(orders)
        ):
            break

    tails = [
        certified_tail(ctx, e, r, n, log_q, targets[i], target_rel_error, abs_sums[i])
        for i, r in enumerate(orders)
    ]
    return sums, tails, n


def truncation_reached(ctx, e, r, n, log_q, target, target_rel_error, abs_sum) -> bool:
    """Whether the majorant tail after term n is certified below target / 2."""
    log_ratio = _ratio_exponent(e, r) * math.log1p(1.0 / (n + 1)) + log_q
    if log_ratio >= -_LOG2:
        return False
    log_next = log_majorant(e, r, n + 1, log_q)
    return log_next < _log_target(ctx, target, target_rel_error, abs_sum) - 2 * _LOG2


def certified_tail(ctx, e, r, n, log_q, target, target_rel_error, abs_sum) -> float:
    truncation = 2 * math.exp(log_majorant(e, r, n + 1, log_q))
    rounding = float(ctx.eps * (n + 2) * abs_sum)
    tail = truncation + rounding
    log_target = _log_target(ctx, target, target_rel_error, abs_sum)
    if tail > math.exp(min(log_target, 700.0)):
        raise CertificationError(
            f"rounding error {rounding:.3e} exceeds the target at {ctx.prec} bits",
            best_bound=tail,
        )
    return tail


def _eisenstein_orders(k: int, z, orders: Sequence[int], budget: EvalBudget) -> list[EvalResult]:
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    coeff = eisenstein_coefficient(k)
    c = ctx.mpf(coeff.numerator) / coeff.denominator
    two_pi_i = 2 * ctx.pi * ctx.j
    factors = [c * two_pi_i**r for r in orders]
    targets = [budget.target_abs_error / float(abs(f)) for f in factors]
    sums, tails, terms = sigma_series(
        ctx, k - 1, orders, zc, targets, budget.target_rel_error, budget.max_terms
    )
    results = []
    for r, factor, s, tail in zip(orders, factors, sums, tails):
        value = factor * s
        if r == 0:
            value += 1
        results.append(
            EvalResult(
                value=value,
                tail_bound=float(tail * abs(factor)),
                terms_used=terms,
                precision_bits=budget.working_precision_bits,
            )
        )
    return results


def eisenstein_jet(
    k: int, z, order: int = 1, budget: Optional[EvalBudget] = None
) -> list[EvalResult]:
    """E_k, E_k', ..., E_k^(order) at z from one pass over the q-series."""
    _check_even_weight(k)
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    return with_escalation(
        _eisenstein_orders, k, z, list(range(order + 1)), budget=budget or EvalBudget()
    )


def eval_Ek(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    _check_even_weight(k)
    return with_escalation(_eisenstein_orders, k, z, [0], budget=budget or EvalBudget())[0]


def eval_Ek_deriv(k: int, z, r: int = 1, budget: Optional[EvalBudget] = None) -> EvalResult:
    """r-th derivative of E_k with respect to z."""
    _check_even_weight(k)
    if not is_int(r) or r < 1:
        raise DomainError(f"derivative order must be >= 1, got {r!r}")
    return with_escalation(_eisenstein_orders, k, z, [r], budget=budget or EvalBudget())[0]


def _hk(k: int, z, budget: EvalBudget) -> EvalResult:
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    sums, tails, terms = sigma_series(
        ctx, k - 1, [1], zc, [budget.target_abs_error], budget.target_rel_error, budget.max_terms
    )
    return EvalResult(
        value=sums[0],
        tail_bound=tails[0],
        terms_used=terms,
        precision_bits=budget.working_precision_bits,
    )


def eval_hk(k: int, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """h_k(z) = sum n sigma_{k-1}(n) q^n, for any integer k >= 2."""
    if not is_int(k) or k < 2:
        raise DomainError(f"h_k needs an integer k >= 2, got {k!r}")
    return with_escalation(_hk, k, z, budget=budget or EvalBudget())


def hk_to_derivative_factor(k: int, ctx):
    """The constant c with E_k' = c h_k, namely -4 pi k i / B_k."""
    b = bernoulli(k)
    return -4 * ctx.pi * k * ctx.j * b.denominator / ctx.mpf(b.numerator)


def _delta(z, budget: EvalBudget) -> EvalResult:
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    q = ctx.expjpi(2 * zc)
    abs_q = math.exp(-2 * math.pi * float(zc.imag))
    if abs_q >= 0.5:
        raise CertificationError(f"|q| = {abs_q:.3f} too large for the product", best_bound=None)
    envelope = abs_q * math.exp(24 * abs_q / (1 - abs_q) ** 2)

    def log_bound(n):
        return 24 * abs_q ** (n + 1) / (1 - abs_q) ** 2

    n = 1
    while envelope * math.expm1(log_bound(n)) > budget.target_abs_error / 2:
        n += 1
        if n > budget.max_terms:
            raise CertificationError(
                "product for Delta did not converge within budget",
                best_bound=envelope * math.expm1(log_bound(n)),
            )
    value = q
    qn = ctx.mpc(1)
    for _ in range(n):
        qn *= q
        value *= (1 - qn) ** 24
    size = float(abs(value))
    tail = size * math.expm1(log_bound(n)) + float(ctx.eps) * size * 24 * (n + 2)
    target = budget.target_abs_error
    if budget.target_rel_error is not None:
        target = max(target, budget.target_rel_error * size)
    if tail > target:
        raise CertificationError("Delta rounding exceeds target", best_bound=tail)
    return EvalResult(
        value=value, tail_bound=tail, terms_used=n, precision_bits=budget.working_precision_bits
    )


def eval_delta(z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """Delta(z) = q prod (1 - q^n)^24, normalised so that Delta = q - 24 q^2 + ..."""
    return with_escalation(_delta, z, budget=budget or EvalBudget())
