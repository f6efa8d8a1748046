"""Tracing the real locus R_k = phi_k^(-1)(R) inside D by predictor-corrector continuation."""
import math
from typing import List, Optional, Sequence

import numpy as np

from conf import (
    ASYMPTOTE_CUTOFF,
    ASYMPTOTE_TOL,
    LOCUS_CORRECTOR_STEPS,
    LOCUS_END_RADIUS,
    LOCUS_SNAP_RADIUS,
    LOCUS_STEP,
    LOCUS_STEP_FLOOR,
    ORTHOGONALITY_DEG,
)
from critzeros.signs import check_weight
from numkernel import (
    ContinuationError,
    ContradictionError,
    EvalBudget,
    HalfPlanePoint,
    get_context,
)
from utils import run_in_parallel
from utils.log import get_logger

from .boundary import arc_seeds, pole_table
from .phi import phi_jet
from .types import ASYMPTOTE, LocusCurve, PoleTable

logger = get_logger(__name__)

# relative size of Im phi_k accepted by the corrector
CORRECTOR_TOL = 1e-24
# how far a traced point may stray outside the right half of D
REGION_SLACK = 1e-9


def _tangent(ctx, slope, previous=None):
    """Unit direction along which phi_k' dz is real, continuing `previous` when given."""
    direction = ctx.conj(slope) / abs(slope)
    if previous is not None and (direction * ctx.conj(previous)).real < 0:
        direction = -direction
    return direction


def _correct(k: int, ctx, z, normal, budget: EvalBudget):
    """Newton on s -> Im phi_k(z + s normal); None when it does not settle."""
    s = ctx.mpf(0)
    for _ in range(LOCUS_CORRECTOR_STEPS):
        value, slope = phi_jet(k, z + s * normal, budget)
        residual = value.value.imag
        if abs(residual) <= CORRECTOR_TOL * max(1, abs(value.value)):
            return z + s * normal, value, slope
        rate = (slope.value * normal).imag
        if rate == 0:
            return None
        s -= residual / rate
    return None


def _angle_deg(ctx, direction, axis) -> float:
    """Angle between the lines spanned by two unit complex numbers, in degrees."""
    cosine = min(1.0, float(abs((direction * ctx.conj(axis)).real)))
    return math.degrees(math.acos(cosine))


def _arrival_angle(ctx, target, last_points) -> float:
    """Angle in degrees at which the curve reaches `target`, against the horizontal.

    The chord angle from a point at distance r vanishes linearly in r for a curve
    arriving horizontally, so the last two chords are extrapolated to r = 0.
    """
    chords = [target - p for p in last_points]
    angles = [math.degrees(float(ctx.arg(c))) for c in chords]
    if len(chords) < 2:
        return angles[-1]
    r1, r2 = float(abs(chords[0])), float(abs(chords[1]))
    if r1 <= r2:
        return angles[-1]
    return angles[1] - r2 * (angles[0] - angles[1]) / (r1 - r2)


def _inside(z) -> bool:
    return -REGION_SLACK <= z.real <= 0.5 + REGION_SLACK and abs(z) >= 1 - REGION_SLACK


def trace_curve(
    k: int,
    index: int,
    seed,
    poles: Sequence[float],
    budget: Optional[EvalBudget] = None,
) -> LocusCurve:
    """Follow Im phi_k = 0 from the unit-circle point `seed` into D.

    Curve j >= 1 ends at the pole 1/2 + i poles[j - 1]; curve 0 is followed up to
    Im z = ASYMPTOTE_CUTOFF.
    """
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)
    half = ctx.mpf(1) / 2
    pole_points = [ctx.mpc(half, b) for b in poles]
    target = pole_points[index - 1] if index else None

    z = ctx.mpc(seed)
    value, slope = phi_jet(k, z, budget)
    direction = _tangent(ctx, slope.value, z / abs(z))
    if _angle_deg(ctx, direction, z / abs(z)) > ORTHOGONALITY_DEG:
        raise ContradictionError(
            f"Gamma_{index} of phi_{k} meets the unit circle orthogonally",
            f"<= {ORTHOGONALITY_DEG} deg",
            _angle_deg(ctx, direction, z / abs(z)),
        )
    points, values = [z], [float(value.value.real)]
    step = ctx.mpf(LOCUS_STEP)
    end = ASYMPTOTE

    while True:
        distances = [abs(z - p) for p in pole_points]
        if target is not None and abs(z - target) < LOCUS_END_RADIUS:
            deviation = abs(_arrival_angle(ctx, target, points[-2:]))
            if deviation > ORTHOGONALITY_DEG:
                raise ContradictionError(
                    f"Gamma_{index} of phi_{k} meets Re z = 1/2 orthogonally",
                    f"<= {ORTHOGONALITY_DEG} deg",
                    deviation,
                )
            points.append(target)
            values.append(math.copysign(math.inf, values[-1]))
            end = HalfPlanePoint(target.real, target.imag)
            break
        if target is None and z.imag >= ASYMPTOTE_CUTOFF:
            break
        if any(d < LOCUS_SNAP_RADIUS for j, d in enumerate(distances) if j != index - 1):
            raise ContinuationError(f"Gamma_{index} of phi_{k} ran into a pole other than its own")

        nearest = min(distances, default=ctx.inf)
        h = min(step, max(nearest / 2, LOCUS_STEP_FLOOR))
        corrected = _correct(k, ctx, z + h * direction, ctx.j * direction, budget)
        if corrected is None or abs(corrected[0] - z) > 2 * h:
            step /= 2
            logger.debug(f"k={k}, Gamma_{index}: step halved to {float(step):.2e}")
            if step < LOCUS_STEP_FLOOR:
                raise ContinuationError(
                    f"Gamma_{index} of phi_{k}: step below {LOCUS_STEP_FLOOR} at {complex(z):.9g}"
                )
            continue
        z, value, slope = corrected
        if not _inside(z):
            raise ContinuationError(f"Gamma_{index} of phi_{k} left D at {complex(z):.9g}")
        direction = _tangent(ctx, slope.value, direction)
        points.append(z)
        values.append(float(value.value.real))
        step = min(2 * step, ctx.mpf(LOCUS_STEP))

    if end == ASYMPTOTE and abs(float(z.real) - 0.25) >= ASYMPTOTE_TOL:
        raise ContradictionError(
            f"Gamma_0 of phi_{k} approaches Re z = 1/4",
            f"< {ASYMPTOTE_TOL}",
            abs(float(z.real) - 0.25),
        )
    logger.debug(f"k={k}, Gamma_{index}: {len(points)} points")
    return LocusCurve(
        index=index,
        polyline=[HalfPlanePoint(p.real, p.imag) for p in points],
        start=HalfPlanePoint(points[0].real, points[0].imag),
        end=end,
        phi_values=np.array(values),
    )


def check_curve(k: int, curve: LocusCurve):
    """phi_k is monotone along the curve and stays in [1, oo) or (-oo, -1]."""
    expected_start = (-1) ** (k // 2 + curve.index + 1)
    if abs(curve.phi_values[0] - expected_start) > 1e-9:
        raise ContradictionError(
            f"phi_{k}(u_{curve.index})", expected_start, float(curve.phi_values[0])
        )
    steps = np.diff(curve.phi_values) * expected_start
    if not np.all(steps > 0):
        raise ContradictionError(f"phi_{k} monotone along Gamma_{curve.index}", "monotone", "not")
    if not np.all(np.abs(curve.phi_values) >= 1 - 1e-9):
        raise ContradictionError(f"|phi_{k}| >= 1 on Gamma_{curve.index}", ">= 1", "< 1")


def check_disjoint(curves: Sequence[LocusCurve]):
    for i, first in enumerate(curves):
        for second in curves[i + 1 :]:
            gaps = np.abs(first.points[:, None] - second.points[None, :])
            if gaps.min() < LOCUS_STEP_FLOOR:
                raise ContradictionError(
                    f"Gamma_{first.index} and Gamma_{second.index} of phi are disjoint",
                    f">= {LOCUS_STEP_FLOOR}",
                    float(gaps.min()),
                )


def trace_locus(
    k: int,
    budget: Optional[EvalBudget] = None,
    table: Optional[PoleTable] = None,
    jobs: int = 1,
) -> List[LocusCurve]:
    """The floor((k + 2) / 6) components Gamma_0, ..., Gamma_n of R_k in the right half of D."""
    check_weight(k)
    budget = budget or EvalBudget.for_signs()
    table = table or pole_table(k, budget=budget)
    seeds = arc_seeds(k, budget=budget)
    if len(seeds) != table.n + 1:
        raise ContradictionError(f"components of R_{k}", table.n + 1, len(seeds))

    def trace(index: int) -> LocusCurve:
        return trace_curve(k, index, seeds[index], table.b_values, budget)

    curves = run_in_parallel(
        trace, list(range(len(seeds))), max_workers=jobs, desc=f"R_{k}", verbose=False
    )
    for curve in curves:
        check_curve(k, curve)
    check_disjoint(curves)
    logger.info(f"k={k}: traced {len(curves)} components of the real locus")
    return curves

