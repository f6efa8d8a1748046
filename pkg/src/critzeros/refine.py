"""Sign scanning, bisection and Newton polishing along a straight line or an arc.

A real-valued parametrised quantity is handed over as `sign_at(t) -> int`, which must
return a certified sign (never 0).
"""
from typing import Callable, List, Tuple

from conf import BISECTION_WIDTH, NEWTON_STEPS
from utils.log import get_logger

logger = get_logger(__name__)

SignOracle = Callable[[float], int]


def scan_sign_changes(
    sign_at: SignOracle, lo: float, hi: float, points: int
) -> Tuple[List[Tuple[float, float]], List[int]]:
    """Split [lo, hi] into `points` cells and return the cells whose end signs differ."""
    grid = [lo + (hi - lo) * j / points for j in range(points + 1)]
    signs = [sign_at(t) for t in grid]
    changes = [(grid[j], grid[j + 1]) for j in range(points) if signs[j] != signs[j + 1]]
    return changes, signs


def bisect_sign(
    sign_at: SignOracle,
    lo: float,
    hi: float,
    width: float = BISECTION_WIDTH,
    sign_lo: int = 0,
) -> Tuple[float, float]:
    """Shrink [lo, hi] around a sign change until it is narrower than `width`."""
    sign_lo = sign_lo or sign_at(lo)
    steps = 0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if sign_at(mid) == sign_lo:
            lo = mid
        else:
            hi = mid
        steps += 1
    logger.debug(f"bisection: {steps} halvings to [{lo:.15g}, {hi:.15g}]")
    return lo, hi


def newton_on_line(jet_at, ctx, t0, lo, hi, steps: int = NEWTON_STEPS):
    """Newton for an analytic F along z = x0 + i t, where F / F' is purely imaginary.

    `jet_at(t)` returns (F, F') as EvalResults; iterates are clamped to [lo, hi].
    """
    t = ctx.mpf(t0)
    lo, hi = ctx.mpf(lo), ctx.mpf(hi)
    for _ in range(steps):
        value, derivative = jet_at(t)
        if value.value == 0 or derivative.value == 0:
            break
        step = (value.value / derivative.value).imag
        t_next = min(max(t - step, lo), hi)
        if t_next == t:
            break
        t = t_next
    return t
