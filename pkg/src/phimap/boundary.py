import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from conf import (
    ARC_GRID_FACTOR,
    DEFAULT_TOL,
    FLOAT_DECIMALS,
    NEWTON_STEPS,
    POLE_SCAN_POINTS,
    SQRT3_OVER_2,
    TRIVIAL_ZERO_EXCLUSION,
    VK_SAMPLES,
)
from critzeros import locate_line_zeros
from critzeros.refine import bisect_sign, newton_on_line, scan_sign_changes
from critzeros.signs import check_weight
from numkernel import (
    CertificationError,
    ContradictionError,
    EvalBudget,
    EvalResult,
    HalfPlanePoint,
    certified_sign,
    get_context,
    with_escalation,
)
from utils.log import get_logger
from winding import ParameterInterval, arg_variation

from .phi import Fk_jet, Fk_scale, eval_Fk, phi, phi_jet, v
from .types import PoleTable, WTable

logger = get_logger(__name__)

# t-distance from a pole at which the one-sided limits of v_k are read
POLE_OFFSET = 1e-4
BAND_SAMPLES = 10
UPPER_SEARCH_DOUBLINGS = 10


def _line(ctx, t) -> HalfPlanePoint:
    return HalfPlanePoint(ctx.mpf(1) / 2, ctx.mpf(t))


def _Fk_on_line(k: int, t, budget: EvalBudget) -> EvalResult:
    ctx = get_context(budget.working_precision_bits)
    return eval_Fk(k, _line(ctx, t), budget)


def _polish_stationary(k: int, a: float, b: float, tol: float, budget: EvalBudget) -> float:
    """Newton inside the certified bracket [a, b], then a residual check on F_k.

    |F_k| must be small next to the size (k + 1)|E_k'|^2 + k|E_k E_k''| of its two terms,
    up to the slope of F_k across the bracket.
    """
    ctx = get_context(budget.working_precision_bits)
    t = newton_on_line(lambda s: Fk_jet(k, _line(ctx, s), budget), ctx, (a + b) / 2, a, b)
    f, slope = Fk_jet(k, _line(ctx, t), budget)
    size = Fk_scale(k, _line(ctx, t), budget)
    if f.tail_bound > tol * size:
        raise CertificationError(
            f"F_{k} at 1/2 + {float(t):.12f}i is not resolved at {ctx.prec} bits",
            best_bound=f.tail_bound,
        )
    limit = tol * size + (abs(slope.value) + slope.tail_bound) * (b - a) + f.tail_bound
    if abs(f.value) > limit:
        raise ContradictionError(
            f"F_{k} vanishes at 1/2 + {float(t):.12f}i",
            f"<= {float(limit):.3e}",
            float(abs(f.value)),
        )
    return float(t)


def _stationary_point(k: int, lo: float, hi: float, tol: float, budget: EvalBudget) -> float:
    """The single zero of the real function t -> F_k(1/2 + i t) on ]lo, hi[."""

    def sign_at(t):
        sign, _ = certified_sign(_Fk_on_line, k, t, budget=budget)
        return sign

    changes, _ = scan_sign_changes(sign_at, lo, hi, POLE_SCAN_POINTS)
    if len(changes) != 1:
        raise ContradictionError(
            f"stationary points of v_{k} on ]{lo:.9f}, {hi:.9f}[", 1, len(changes)
        )
    a, b = bisect_sign(sign_at, *changes[0])
    return with_escalation(_polish_stationary, k, a, b, tol, budget=budget)



def pole_table(
    k: int, tol: float = DEFAULT_TOL, budget: Optional[EvalBudget] = None
) -> PoleTable:
    """Poles b_m of phi_k on the line Re z = 1/2 and the stationary points c_m of v_k."""
    check_weight(k)
    budget = (budget or EvalBudget.for_signs()).for_weight(k)
    b_values = sorted(
        (float(record.location.im) for record in locate_line_zeros(k, budget)), reverse=True
    )
    c_values = []
    for m, b in enumerate(b_values):
        if m:
            hi = b_values[m - 1]
        else:
            # phi_k' = F_k / E_k'^2 has the sign of B_k far up the line
            sign_at_pole, _ = certified_sign(_Fk_on_line, k, b, budget=budget)
            hi = b + 1
            for _ in range(UPPER_SEARCH_DOUBLINGS):
                sign_at_hi, _ = certified_sign(_Fk_on_line, k, hi, budget=budget)
                if sign_at_hi != sign_at_pole:
                    break
                hi = b + 2 * (hi - b)
            else:
                raise ContradictionError(f"stationary point of v_{k} above b_1 = {b:.9f}", 1, 0)
        c_values.append(_stationary_point(k, b, hi, tol, budget))
    table = PoleTable(k=k, b_values=tuple(b_values), c_values=tuple(c_values))
    logger.info(f"k={k}: poles {table.b_values}, stationary points {table.c_values}")
    return table


def _phi_on_arc(k: int):
    def evaluate(theta, budget: EvalBudget) -> EvalResult:
        ctx = get_context(budget.working_precision_bits)
        z = ctx.expj(theta)
        corner_distance = min(abs(theta - ctx.pi / 3), abs(theta - 2 * ctx.pi / 3))
        if k % 6 == 2 and corner_distance < TRIVIAL_ZERO_EXCLUSION:
            # phi_k extends to the trivial zeros by phi_k(z) = z
            return EvalResult(z, 0.0, 0, budget.working_precision_bits)
        return phi(k, z, budget)

    return evaluate


def w_anchor(k: int) -> float:
    return -math.pi / 3 if k % 6 == 0 else math.pi / 3


def expected_w_endpoint(k: int) -> float:
    """w_k(2pi/3)."""
    return {0: (k - 2), 2: k, 4: (k + 4)}[k % 6] * math.pi / 3


def expected_w_midpoint(k: int) -> float:
    """w_k(pi/2); w_k(theta) + w_k(pi - theta) is twice this."""
    return {0: (k - 3), 2: (k + 1), 4: (k + 5)}[k % 6] * math.pi / 6


def w_table(
    k: int, budget: Optional[EvalBudget] = None, grid_size: Optional[int] = None
) -> WTable:
    """w_k on [pi/3, 2pi/3] by continuous argument of phi_k(e^(i theta)), anchored at pi/3."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    grid_size = grid_size or ARC_GRID_FACTOR * k
    ctx = get_context(budget.working_precision_bits)
    trace = arg_variation(
        _phi_on_arc(k),
        ParameterInterval(ctx.pi / 3, 2 * ctx.pi / 3, "w"),
        budget,
        initial_samples=grid_size,
    )
    anchor = w_anchor(k)
    shift = 2 * math.pi * round((anchor - trace.unwrapped_args[0]) / (2 * math.pi))
    return WTable(
        k=k,
        thetas=math.pi / 3 + trace.parameter_samples * (math.pi / 3),
        values=trace.unwrapped_args + shift,
        grid_size=grid_size,
    )


def w_midpoint(k: int, table: Optional[WTable] = None) -> Tuple[float, float]:
    """(w_k(pi/2), w_k(pi/3) + w_k(2pi/3))."""
    table = table or w_table(k)
    return table.at(math.pi / 2), float(table.values[0] + table.values[-1])


def expected_limit_signs(k: int, m: int) -> Tuple[int, int]:
    """Signs of v_k just below and just above the pole b_m."""
    return (-1) ** (k // 2 + m), (-1) ** (k // 2 + m - 1)


def pole_limit_signs(
    k: int, table: PoleTable, budget: Optional[EvalBudget] = None
) -> List[Tuple[int, int]]:
    """Observed signs of v_k(b_m - POLE_OFFSET) and v_k(b_m + POLE_OFFSET), m = 1..n."""
    return [
        (int(np.sign(v(k, b - POLE_OFFSET, budget))), int(np.sign(v(k, b + POLE_OFFSET, budget))))
        for b in table.b_values
    ]


def band_signs(k: int, table: PoleTable, budget: Optional[EvalBudget] = None) -> List[set]:
    """Signs of v_k sampled inside each band ]b_m, b_(m-1)[, m = 1..n+1, with b_(n+1) = sqrt(3)/2.

    The top band is sampled over ]b_1, b_1 + 1[ (over ]sqrt(3)/2, sqrt(3)/2 + 1[ when n = 0).
    """
    observed = []
    for lo, hi in table.bands(SQRT3_OVER_2):
        if math.isinf(hi):
            hi = lo + 1
        samples = [lo + (hi - lo) * (i + 0.5) / BAND_SAMPLES for i in range(BAND_SAMPLES)]
        observed.append({int(np.sign(v(k, t, budget))) for t in samples})
    return observed


def expected_band_sign(k: int, m: int) -> int:
    return (-1) ** (k // 2 + m - 1)


def arc_seeds(
    k: int, table: Optional[WTable] = None, budget: Optional[EvalBudget] = None
) -> List:
    """Points u_j of the arc ]pi/3, pi/2] where phi_k is real, ordered by decreasing theta.

    There are floor((k + 2) / 6) of them and phi_k(u_j) = (-1)^(k/2 + j + 1).
    """
    budget = budget or EvalBudget.for_signs()
    table = table or w_table(k, budget)
    ctx = get_context(budget.working_precision_bits)
    evaluate = _phi_on_arc(k)

    def imag_phi(theta, budget: EvalBudget) -> EvalResult:
        value = evaluate(theta, budget)
        return EvalResult(value.value.imag, value.tail_bound, value.terms_used)

    def sign_at(theta):
        sign, _ = certified_sign(imag_phi, ctx.mpf(theta), budget=budget)
        return sign

    w_half = table.at(math.pi / 2)
    first = math.floor(table.values[0] / math.pi) + 1
    multiples = list(range(first, math.floor(w_half / math.pi) + 1))
    seeds = []
    for j in multiples:
        level = j * math.pi
        i = int(np.searchsorted(table.values, level))
        a, b = bisect_sign(sign_at, float(table.thetas[i - 1]), float(table.thetas[i]))
        z = ctx.expj(ctx.mpf(a + b) / 2)
        target = (-1) ** j
        for _ in range(NEWTON_STEPS):
            value, slope = phi_jet(k, z, budget)
            z = z - (value.value - target) / slope.value
        seeds.append(z)
    seeds.sort(key=lambda z: -float(ctx.arg(z)))
    expected = (k + 2) // 6
    if len(seeds) != expected:
        raise ContradictionError(
            f"points of ]pi/3, pi/2] where phi_{k} is real", expected, len(seeds)
        )
    logger.debug(f"k={k}: arc seeds at theta = {[float(ctx.arg(z)) for z in seeds]}")
    return seeds


def v_table(
    k: int,
    table: Optional[PoleTable] = None,
    samples: int = VK_SAMPLES,
    budget: Optional[EvalBudget] = None,
) -> List[Dict]:
    """v_k on an even grid of ]sqrt(3)/2, b_1 + 1], skipping points within POLE_OFFSET of a pole."""
    budget = budget or EvalBudget.for_signs()
    table = table or pole_table(k, budget=budget)
    top = max([SQRT3_OVER_2] + list(table.b_values)) + 1
    rows = []
    for j in range(1, samples + 1):
        t = SQRT3_OVER_2 + (top - SQRT3_OVER_2) * j / samples
        if any(abs(t - b) < POLE_OFFSET for b in table.b_values):
            continue
        rows.append({"t": round(t, FLOAT_DECIMALS), "v": v(k, t, budget)})
    return rows
