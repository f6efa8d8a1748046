"""Solving phi_k(z) = lambda in D and transporting the solutions to zeros of E_k' in gamma D.

For real lambda with |lambda| >= 1 every solution lies on a component of the real locus
or on its mirror image, where phi_k is monotone; the count is checked independently by
the winding number of phi_k - lambda along the detoured boundary of D_T.
"""
import math
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from conf import (
    CONTOUR_TOP_MARGIN,
    DEFAULT_TOL,
    DETOUR_EPS_CAP,
    FLOAT_DECIMALS,
    GAMMA_SAMPLE_MAX,
    NEWTON_STEPS,
    PHI_TOP_MIN,
    SQRT3_OVER_2,
    SQRT3_OVER_6,
    TRIVIAL_ZERO_EXCLUSION,
    WINDING_TOL,
)
from critzeros import locate_line_zeros
from critzeros.signs import check_weight
from numkernel import (
    ContradictionError,
    DomainError,
    EvalBudget,
    EvalResult,
    HalfPlanePoint,
    eval_Ek_deriv,
    get_context,
)
from utils.log import get_logger
from winding import (
    Contour,
    build_phi_contour,
    contour_variation,
    default_detour_radius,
    total_variation,
)

from .boundary import arc_seeds, pole_table
from .locus import trace_locus
from .phi import is_pole, phi, phi_jet
from .types import GammaZero, LocusCurve, PoleTable, UnimodularMatrix

logger = get_logger(__name__)

Lambda = Union[Fraction, int, float]

SAMPLE_CASES = ("d<c", "d=c", "d>c")
# how far a solution may sit outside D before it is rejected
INSIDE_SLACK = 1e-12


def parse_lambda(value) -> Lambda:
    """Accept a Fraction, an int, a float or a 'p/q' string."""
    if isinstance(value, (Fraction, int, float)):
        return value
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"expected a rational p/q, got {value!r}")


def _as_mpf(ctx, lam: Lambda):
    if isinstance(lam, Fraction):
        return ctx.mpf(lam.numerator) / lam.denominator
    return ctx.mpf(lam)


def _phi_minus(k: int, lam: Lambda):
    def evaluate(z, budget: EvalBudget) -> EvalResult:
        value = phi(k, z, budget)
        if is_pole(value):
            return value
        ctx = get_context(value.precision_bits)
        return EvalResult(
            value.value - _as_mpf(ctx, lam),
            value.tail_bound,
            value.terms_used,
            value.precision_bits,
        )

    return evaluate


def _top_height(table: PoleTable, heights: Sequence[float] = ()) -> float:
    tops = [b + CONTOUR_TOP_MARGIN for b in table.b_values]
    return max([PHI_TOP_MIN] + tops + [h + CONTOUR_TOP_MARGIN for h in heights])


def phi_contour(
    k: int,
    table: PoleTable,
    T: float,
    eps: Optional[float] = None,
    arc_points: Sequence[float] = (),
    budget: Optional[EvalBudget] = None,
) -> Contour:
    """Boundary of D_T avoiding the poles of phi_k, enclosing the arc points `arc_points`."""
    budget = budget or EvalBudget.for_signs()
    corner_eps = TRIVIAL_ZERO_EXCLUSION if k % 6 == 2 else None
    if eps is None:
        cut = 2 * math.asin(corner_eps / 2) if corner_eps else 0.0
        heights = [SQRT3_OVER_2 + (corner_eps or 0.0), *table.b_values, T]
        angles = [math.pi / 3 + cut, *arc_points, 2 * math.pi / 3 - cut]
        eps = min(
            default_detour_radius(heights, DETOUR_EPS_CAP),
            default_detour_radius(angles, DETOUR_EPS_CAP),
        )
    return build_phi_contour(
        k, T, eps, table.b_values, arc_points, corner_eps, bits=budget.working_precision_bits
    )


def winding_count(
    k: int,
    lam: Lambda,
    T: Optional[float] = None,
    eps: Optional[float] = None,
    arc_points: Sequence[float] = (),
    table: Optional[PoleTable] = None,
    budget: Optional[EvalBudget] = None,
) -> float:
    """(change of arg (phi_k - lambda)) / 2pi along the boundary of D_T.

    The poles +-1/2 + i b_m are kept outside; solutions on the unit arc must be listed
    in `arc_points` (as angles) so that they are enclosed.
    """
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    lam = parse_lambda(lam)
    table = table or pole_table(k, budget=budget)
    T = T or _top_height(table)
    contour = phi_contour(k, table, T, eps, arc_points, budget)
    count = total_variation(contour_variation(_phi_minus(k, lam), contour, budget)) / (2 * math.pi)
    logger.info(f"k={k}, lambda={lam}: winding count {count:.12f} (T = {T:.3f})")
    return count


def _inside_D(z) -> bool:
    return abs(z.real) <= 0.5 + INSIDE_SLACK and abs(z) >= 1 - INSIDE_SLACK


def _solve_on_curve(
    k: int, curve: LocusCurve, target: Lambda, tol: float, budget: EvalBudget
) -> HalfPlanePoint:
    """The point of the curve where phi_k = target, polished by complex Newton."""
    ctx = get_context(budget.working_precision_bits)
    sign = 1 if curve.phi_values[0] > 0 else -1
    levels = sign * curve.phi_values
    level = sign * float(target)
    i = max(int(np.searchsorted(levels, level)), 1)
    if i >= len(levels):
        raise ContradictionError(
            f"phi_{k} = {target} on Gamma_{curve.index} below the cutoff", "reached", "not"
        )
    points = curve.points
    if math.isinf(levels[i]):
        start = points[i - 1]
    else:
        weight = (level - levels[i - 1]) / (levels[i] - levels[i - 1])
        start = points[i - 1] + weight * (points[i] - points[i - 1])

    z = ctx.mpc(complex(start))
    goal = _as_mpf(ctx, target)
    for _ in range(2 * NEWTON_STEPS):
        value, slope = phi_jet(k, z, budget)
        step = (value.value - goal) / slope.value
        z -= step
        if abs(step) < tol**2:
            break
    residual = float(abs(phi(k, z, budget).value - goal))
    if residual > tol * max(1.0, abs(float(target))):
        raise ContradictionError(f"phi_{k}(z) = {target} on Gamma_{curve.index}", 0, residual)
    if not _inside_D(z):
        raise ContradictionError(f"solution of phi_{k} = {target} lies in D", "inside", complex(z))
    return HalfPlanePoint(z.real, z.imag)


def _mirror(point: HalfPlanePoint) -> HalfPlanePoint:
    return HalfPlanePoint(-point.re, point.im)


def solve_phi_eq(
    k: int,
    lam,
    budget: Optional[EvalBudget] = None,
    curves: Optional[List[LocusCurve]] = None,
    table: Optional[PoleTable] = None,
    tol: float = DEFAULT_TOL,
    verify: bool = True,
) -> List[HalfPlanePoint]:
    """All z in D with phi_k(z) = lambda, one per component of the real locus when |lambda| >= 1.

    Solutions of |lambda| = 1 are the unit-circle ends of the components or their mirror
    images. With `verify` the count is compared against the winding number.

    @raise ContradictionError: the two counts disagree, or a solution fails its residual
    """
    check_weight(k)
    lam = parse_lambda(lam)
    budget = budget or EvalBudget.for_signs()
    table = table or pole_table(k, budget=budget)
    solutions: List[HalfPlanePoint] = []
    if abs(lam) >= 1:
        curves = curves or trace_locus(k, budget, table)
        for curve in curves:
            own = (curve.phi_values[0] > 0) == (lam > 0)
            target = lam if own else -lam
            if abs(lam) == 1:
                point = curve.start
            else:
                point = _solve_on_curve(k, curve, target, tol, budget)
            solutions.append(point if own else _mirror(point))

    if verify:
        arc_points = (
            [math.atan2(float(p.im), float(p.re)) for p in solutions] if abs(lam) == 1 else []
        )
        T = _top_height(table, [float(p.im) for p in solutions])
        count = winding_count(k, lam, T=T, arc_points=arc_points, table=table, budget=budget)
        if abs(count - round(count)) > WINDING_TOL or round(count) != len(solutions):
            raise ContradictionError(
                f"solutions of phi_{k} = {lam} in D counted by winding", len(solutions), count
            )
    logger.info(f"k={k}: {len(solutions)} solutions of phi_{k} = {lam} in D")
    return solutions


def zeros_in_gamma_D(
    k: int,
    gamma: UnimodularMatrix,
    budget: Optional[EvalBudget] = None,
    curves: Optional[List[LocusCurve]] = None,
    table: Optional[PoleTable] = None,
    tol: float = DEFAULT_TOL,
) -> List[GammaZero]:
    """Zeros of E_k' in gamma D, as images gamma(tau) of the solutions of phi_k(tau) = -d/c.

    E_k'(gamma tau) = c (c tau + d)^(k+1) E_k'(tau) (phi_k(tau) + d/c), so the residual
    |c phi_k(tau) + d| measures E_k'(gamma tau) relative to that factor; each zero also
    carries |E_k'(gamma tau)| itself, read off the same identity.
    """
    if gamma.c == 0:
        raise DomainError(f"{gamma} fixes the cusp; it needs c != 0")
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    lam = Fraction(-gamma.d, gamma.c)
    taus = solve_phi_eq(k, lam, budget, curves=curves, table=table, tol=tol)

    zeros = []
    for tau in taus:
        zc = tau.to_mpc(ctx)
        offset = abs(gamma.c * phi(k, zc, budget).value + gamma.d)
        residual = float(offset)
        if residual > tol * max(1, abs(gamma.d)):
            raise ContradictionError(
                f"E_{k}' vanishes at {gamma} applied to {complex(zc):.12g}", 0, residual
            )
        image = gamma.act(zc)
        slope = eval_Ek_deriv(k, zc, 1, budget).value
        derivative = float(abs(gamma.c * zc + gamma.d) ** (k + 1) * abs(slope) * offset)
        zeros.append(
            GammaZero(tau, HalfPlanePoint(image.real, image.imag), residual, derivative)
        )

    expected = (k + 2) // 6 if abs(gamma.d) >= abs(gamma.c) else 0
    if len(zeros) != expected:
        raise ContradictionError(f"zeros of E_{k}' in {gamma} D", expected, len(zeros))
    if abs(gamma.d) == abs(gamma.c):
        for zero in zeros:
            offset = float(zero.image.re) - 0.5
            height = float(zero.image.im)
            if abs(offset - round(offset)) > tol or not SQRT3_OVER_6 < height < SQRT3_OVER_2:
                raise ContradictionError(
                    f"zero of E_{k}' in {gamma} D on a segment r + 1/2 + i]sqrt(3)/6, sqrt(3)/2[",
                    "on the segment",
                    complex(zero.image),
                )
    return zeros


def total_line_count(k: int, budget: Optional[EvalBudget] = None) -> int:
    """Zeros of E_k' on Re z = 1/2: above sqrt(3)/2, in gamma D for gamma = (1 0; 1 1),
    and at the two trivial zeros when k = 2 mod 6."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    upper = len(locate_line_zeros(k, budget))
    middle = len(zeros_in_gamma_D(k, UnimodularMatrix(1, 0, 1, 1), budget=budget))
    endpoints = 2 if k % 6 == 2 else 0
    total = upper + middle + endpoints
    expected = 1 + 2 * ((k - 2) // 6)
    if total != expected:
        raise ContradictionError(f"zeros of E_{k}' on Re z = 1/2", expected, total)
    logger.info(f"k={k}: {upper} + {middle} + {endpoints} = {total} zeros on Re z = 1/2")
    return total


def sample_matrix(case: str, rng: Optional[random.Random] = None) -> UnimodularMatrix:
    """A random gamma with |d| < |c|, |d| = |c| or |d| > |c| > 0, completed to det 1."""
    rng = rng or random.Random()
    if case == "d=c":
        c, d = rng.choice((1, -1)), rng.choice((1, -1))
    elif case == "d<c":
        c, d = 2, 0
        while math.gcd(c, d) != 1:
            c = rng.randint(2, GAMMA_SAMPLE_MAX)
            d = rng.randint(1 - c, c - 1)
        c *= rng.choice((1, -1))
    elif case == "d>c":
        c, d = 2, 2
        while math.gcd(c, d) != 1:
            c = rng.randint(1, GAMMA_SAMPLE_MAX - 1)
            d = rng.choice((1, -1)) * rng.randint(c + 1, GAMMA_SAMPLE_MAX)
        c *= rng.choice((1, -1))
    else:
        raise DomainError(f"case must be one of {SAMPLE_CASES}, got {case!r}")
    a = pow(d, -1, abs(c))
    return UnimodularMatrix(a, (a * d - 1) // c, c, d)


def trajectory(
    k: int,
    eps: Optional[float] = None,
    T: Optional[float] = None,
    budget: Optional[EvalBudget] = None,
) -> List[Dict]:
    """phi_k sampled along the boundary of D_T with the poles avoided, plus the points of
    the arc where phi_k = +-1."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    table = pole_table(k, budget=budget)
    contour = phi_contour(k, table, T or _top_height(table), eps, (), budget)
    traces = contour_variation(_phi_minus(k, 0), contour, budget)

    rows = []
    for segment, trace in zip(contour, traces):
        for s, value in zip(trace.parameter_samples, trace.values):
            z = segment.point(ctx, s)
            rows.append(
                {
                    "segment": segment.label or segment.kind,
                    "parameter": round(float(s), FLOAT_DECIMALS),
                    "z_re": float(z.real),
                    "z_im": float(z.imag),
                    "phi_re": float(value.real),
                    "phi_im": float(value.imag),
                }
            )
    seeds = arc_seeds(k, budget=budget)
    for u in seeds + [-ctx.conj(u) for u in seeds]:
        value = phi(k, u, budget).value
        rows.append(
            {
                "segment": "crossing",
                "parameter": round(float(ctx.arg(u)), FLOAT_DECIMALS),
                "z_re": float(u.real),
                "z_im": float(u.imag),
                "phi_re": float(value.real),
                "phi_im": float(value.imag),
            }
        )
    logger.info(f"k={k}: trajectory of phi_{k} with {len(rows)} samples")
    return rows
