import math
from typing import Optional

from conf import DEFAULT_PRECISION_BITS
from numkernel import (
    ContradictionError,
    DomainError,
    EvalBudget,
    HalfPlanePoint,
    bernoulli,
    certified_sign,
    eval_hk,
    eval_hk_lattice,
    get_context,
    is_int,
)
from utils.log import get_logger

from .records import BracketTable, SignCertificate, SignMachineryReport, SignRoute

logger = get_logger(__name__)

SIGN_ROUTES = {
    "qseries": eval_hk,
    "lattice": eval_hk_lattice,
}

# number of terms past u_m whose ratios are checked in the series regime
RATIO_WINDOW = 20


def check_weight(k: int, minimum: int = 4):
    if not is_int(k) or k < minimum or k % 2:
        raise DomainError(f"k must be an even integer >= {minimum}, got {k!r}")


def t_value(ctx, k: int, m: int):
    return ctx.cot(m * ctx.pi / (k + 1)) / 2


def bracket_table(k: int) -> BracketTable:
    check_weight(k)
    ctx = get_context(DEFAULT_PRECISION_BITS)
    M = k // 6
    t_values = tuple(float(t_value(ctx, k, m)) for m in range(1, M + 1))
    table = BracketTable(
        k=k, M=M, t_values=t_values, includes_base_interval=(k % 6 == 4 and k != 4)
    )
    if any(a <= b for a, b in zip(t_values, t_values[1:])) or (
        t_values and t_values[-1] <= table.base
    ):
        raise ContradictionError("t_1 > ... > t_M > sqrt(3)/2", "decreasing", t_values)
    return table


def line_point(ctx, t) -> HalfPlanePoint:
    return HalfPlanePoint(ctx.mpf(1) / 2, ctx.mpf(t))


def _hk_on_line(k: int, t, budget: EvalBudget, route: SignRoute = "qseries"):
    ctx = get_context(budget.working_precision_bits)
    return SIGN_ROUTES[route](k, line_point(ctx, t), budget)


def line_sign(k: int, t, budget: Optional[EvalBudget] = None, route: SignRoute = "qseries") -> int:
    """Certified sign of i E_k'(1/2 + i t), which is sign(B_k) * sign(h_k(1/2 + i t))."""
    budget = budget or EvalBudget.for_signs()
    sign, _ = certified_sign(_hk_on_line, k, t, route=route, budget=budget)
    return sign if bernoulli(k) > 0 else -sign


def bracket_sign(
    k: int, m: int, route: SignRoute = "qseries", budget: Optional[EvalBudget] = None
) -> SignCertificate:
    """Certify that h_k(1/2 + i t_m) is real, non-zero and of sign (-1)^m."""
    if not is_int(k) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    if not is_int(m) or not 1 <= m <= (k + 1) // 6:
        raise DomainError(f"m must lie in [1, {(k + 1) // 6}] for k = {k}, got {m!r}")
    if route not in SIGN_ROUTES:
        raise DomainError(f"unknown evaluation route {route!r}")
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    t = t_value(ctx, k, m)
    sign, result = certified_sign(_hk_on_line, k, t, route=route, budget=budget)
    certificate = SignCertificate(
        k=k,
        m=m,
        t=float(t),
        sign=sign,
        value=float(result.value.real),
        bound=result.tail_bound,
        route=route,
        precision_bits=result.precision_bits,
    )
    if sign != certificate.expected:
        raise ContradictionError(
            f"sign of h_{k}(1/2 + i t_{m}) [{route}]", certificate.expected, sign
        )
    logger.debug(f"h_{k}(1/2 + i t_{m}) = {certificate.value:.6e} +- {certificate.bound:.1e}")
    return certificate


def _u_term(ctx, k: int, n: int, q):
    """u_n = n^k q^n / (1 - q^n)^2, so that h_k = sum of u_n."""
    qn = q**n
    return ctx.mpf(n) ** k * qn / (1 - qn) ** 2


def sign_machinery(
    k: int, m: int, budget: Optional[EvalBudget] = None
) -> SignMachineryReport:
    """Check the mechanism behind the sign of h_k(1/2 + i t_m).

    When 3 m^2 <= k the terms u_n of h_k = sum n^k q^n / (1 - q^n)^2 must alternate
    in sign and decay by a factor 2 on both sides of n = m. Otherwise the two lattice terms
    (c, d) = (1, 0), (1, -1) must dominate the remaining lattice sum.
    """
    if not is_int(k) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    if not is_int(m) or not 1 <= m <= (k + 1) // 6:
        raise DomainError(f"m must lie in [1, {(k + 1) // 6}] for k = {k}, got {m!r}")
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    t = t_value(ctx, k, m)
    log_half = -ctx.log(2)

    if 3 * m * m <= k:
        q = -ctx.exp(-2 * ctx.pi * t)
        terms = {n: _u_term(ctx, k, n, q) for n in range(1, m + RATIO_WINDOW + 2)}
        logs = {n: ctx.log(abs(u)) for n, u in terms.items()}
        checks = {
            "decay after m": all(
                logs[n + 1] - logs[n] < log_half for n in range(m, m + RATIO_WINDOW + 1)
            ),
            "decay before m": all(logs[n - 1] - logs[n] < log_half for n in range(2, m + 1)),
            "alternating signs": all(
                (1 if u > 0 else -1) == (-1) ** n for n, u in terms.items()
            ),
            "q_m bound": float(abs(q)) <= ratio_bound(k, m) * (1 + 1e-12),
        }
        return SignMachineryReport(k=k, m=m, regime="series", checks=checks)

    z = ctx.mpc(ctx.mpf(1) / 2, t)
    scale = ctx.factorial(k) / (2 * ctx.pi) ** (k + 1)
    pair = (z / ctx.j) ** (-k - 1) + ((z - 1) / ctx.j) ** (-k - 1)
    closed_form = 2 * (-1) ** m * abs(z) ** (-k - 1)
    dominant = scale * pair
    h = eval_hk_lattice(k, line_point(ctx, t), budget)
    remainder = h.value - dominant
    checks = {
        "pair is real": abs(pair.imag) <= 1e3 * ctx.eps * abs(pair),
        "pair closed form": abs(pair.real - closed_form) <= 1e3 * ctx.eps * abs(closed_form),
        "pair sign": (1 if pair.real > 0 else -1) == (-1) ** m,
        "pair dominates": abs(remainder) + h.tail_bound < abs(dominant),
    }
    return SignMachineryReport(
        k=k,
        m=m,
        regime="lattice",
        checks=checks,
        dominant=float(dominant.real),
        remainder=float(abs(remainder)),
    )


def ratio_bound(k: int, m: int) -> float:
    """Upper bound e^(-(k+1)/m + 4m/(k+1)) for |q| at 1/2 + i t_m."""
    return math.exp(-(k + 1) / m + 4 * m / (k + 1))
