from typing import Iterable, List, Optional, Tuple

from conf import DEFAULT_TOL
from numkernel import (
    DomainError,
    EvalBudget,
    EvalResult,
    HalfPlanePoint,
    as_point,
    eval_Ek,
    get_context,
)
from utils.log import get_logger

from .derivations import apply_D
from .poly import IsobaricPoly, require_weight

logger = get_logger(__name__)

NEWTON_RADIUS = 0.15
NEWTON_ITERATIONS = 100
DUPLICATE_DISTANCE = 1e-6


def psi_eval(poly: IsobaricPoly, z, budget: Optional[EvalBudget] = None) -> EvalResult:
    """P(E_2(z), E_4(z), E_6(z)) with the generator errors carried through."""
    budget = budget or EvalBudget()
    point = as_point(z)
    used = [any(m[i] for m in poly.terms) for i in range(3)]
    generators = [eval_Ek(k, point, budget) if used[i] else None for i, k in enumerate((2, 4, 6))]
    bits = max(
        [budget.working_precision_bits] + [g.precision_bits for g in generators if g is not None]
    )
    terms_used = max([0] + [g.terms_used for g in generators if g is not None])
    ctx = get_context(bits)

    values = [ctx.mpc(g.value) if g else ctx.mpc(1) for g in generators]
    sizes = [abs(v) for v in values]
    errors = [ctx.mpf(g.tail_bound) if g else ctx.mpf(0) for g in generators]

    total = ctx.mpc(0)
    propagated = ctx.mpf(0)
    magnitude = ctx.mpf(0)
    degree = 0
    for monomial, coef in poly.monomials():
        c = ctx.mpf(coef.numerator) / coef.denominator
        exact = ctx.mpf(1)
        inflated = ctx.mpf(1)
        term = ctx.mpc(c)
        for value, size, err, e in zip(values, sizes, errors, monomial):
            if e:
                term *= value**e
                exact *= size**e
                inflated *= (size + err) ** e
        total += term
        propagated += abs(c) * (inflated - exact)
        magnitude += abs(c) * inflated
        degree = max(degree, sum(monomial))
    rounding = ctx.eps * (degree + len(poly.terms) + 2) * magnitude
    return EvalResult(
        value=total,
        tail_bound=float(propagated + rounding),
        terms_used=terms_used,
        precision_bits=bits,
    )


def modular_defect(
    poly: IsobaricPoly, z, gamma: Tuple[int, int, int, int], budget: Optional[EvalBudget] = None
) -> Tuple[float, float]:
    """|psi(gamma z) - (c z + d)^w psi(z)| together with the certified bound of that difference."""
    weight = require_weight(poly)
    if not poly.is_x_free():
        raise DomainError("the transformation law holds for X-free polynomials only")
    a, b, c, d = gamma
    if a * d - b * c != 1:
        raise DomainError(f"{gamma} is not in SL(2, Z)")
    budget = budget or EvalBudget()
    ctx = get_context(budget.working_precision_bits)
    zc = as_point(z).to_mpc(ctx)
    image = (a * zc + b) / (c * zc + d)
    left = psi_eval(poly, image, budget)
    right = psi_eval(poly, zc, budget)
    factor = (c * zc + d) ** (weight or 0)
    defect = abs(left.value - factor * right.value)
    bound = left.tail_bound + float(abs(factor)) * right.tail_bound
    return float(defect), bound


def _newton_polish(poly, dpoly, start, ctx, budget, tol):
    two_pi_i = 2 * ctx.pi * ctx.j
    z = start
    psi = dpsi = None
    for _ in range(NEWTON_ITERATIONS):
        psi = psi_eval(poly, z, budget)
        dpsi = psi_eval(dpoly, z, budget)
        if abs(psi.value) <= psi.tail_bound or abs(dpsi.value) == 0:
            break
        step = psi.value / (two_pi_i * dpsi.value)
        z = z - step
        if not z.imag > 0 or abs(z - start) > 2 * NEWTON_RADIUS:
            return None
        if abs(step) < tol * 1e-12:
            psi = psi_eval(poly, z, budget)
            dpsi = psi_eval(dpoly, z, budget)
            break
    return z, psi, dpsi


def multiple_zero_scan(
    poly: IsobaricPoly,
    points: Iterable,
    tol: float = DEFAULT_TOL,
    budget: Optional[EvalBudget] = None,
) -> List[HalfPlanePoint]:
    """Points where psi_P and psi_{DP} vanish together up to `tol`.

    Newton's method for psi_P is started from each sample point whose first step is
    shorter than NEWTON_RADIUS; a limit where |psi_{DP}| is also below `tol` is flagged.
    """
    budget = budget or EvalBudget()
    ctx = get_context(budget.working_precision_bits)
    dpoly = apply_D(poly)
    two_pi_i = 2 * ctx.pi * ctx.j
    flagged: List[HalfPlanePoint] = []
    for point in points:
        start = as_point(point).to_mpc(ctx)
        psi = psi_eval(poly, start, budget)
        dpsi = psi_eval(dpoly, start, budget)
        if abs(psi.value) <= psi.tail_bound:
            polished = (start, psi, dpsi)
        elif abs(dpsi.value) == 0 or abs(psi.value / (two_pi_i * dpsi.value)) > NEWTON_RADIUS:
            continue
        else:
            polished = _newton_polish(poly, dpoly, start, ctx, budget, tol)
            if polished is None:
                continue
        z, psi, dpsi = polished
        if abs(psi.value) > tol or abs(dpsi.value) > tol:
            continue
        candidate = complex(z)
        if any(abs(candidate - complex(p)) < DUPLICATE_DISTANCE for p in flagged):
            continue
        logger.info(f"near-multiple zero of {poly.to_text()} at {candidate:.12g}")
        flagged.append(HalfPlanePoint(float(z.real), float(z.imag)))
    return flagged
