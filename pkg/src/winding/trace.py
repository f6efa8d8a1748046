import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional

import numpy as np

from conf import FLOAT_DECIMALS, INITIAL_TRACE_SAMPLES, MAX_TRACE_SAMPLES
from numkernel import (
    EvalBudget,
    EvalResult,
    RefinementLimitError,
    ZeroOnCurveError,
    get_context,
)
from utils.log import get_logger

from .curves import Contour, Segment

logger = get_logger(__name__)

# consecutive samples may differ in argument by less than this
MAX_ARG_STEP = math.pi / 2

TracedFunction = Callable[..., EvalResult]


@dataclass
class ArgTrace:
    """Samples of a non-vanishing function along one path, with a continuous argument.

    @param parameter_samples: path parameters in [0, 1], increasing
    @param values: the sampled function values as complex floats
    @param unwrapped_args: continuous branch of the argument at each sample
    @param total_variation: unwrapped_args[-1] - unwrapped_args[0]
    """

    parameter_samples: np.ndarray
    values: np.ndarray
    unwrapped_args: np.ndarray
    total_variation: float
    label: str = ""

    def __len__(self) -> int:
        return len(self.parameter_samples)

    def to_rows(self) -> List[dict]:
        return [
            {
                "parameter": round(float(s), FLOAT_DECIMALS),
                "re": float(v.real),
                "im": float(v.imag),
                "unwrapped_arg": round(float(a), FLOAT_DECIMALS),
            }
            for s, v, a in zip(self.parameter_samples, self.values, self.unwrapped_args)
        ]


def arg_variation(
    f: TracedFunction,
    curve: Segment,
    budget: Optional[EvalBudget] = None,
    initial_samples: int = INITIAL_TRACE_SAMPLES,
    max_samples: int = MAX_TRACE_SAMPLES,
) -> ArgTrace:
    """Continuous change of arg f along `curve`.

    `f(point, budget)` is sampled at `curve.point(ctx, s)`; the sampling is refined
    until consecutive arguments differ by less than pi/2.

    @raise ZeroOnCurveError: a sample cannot be certified non-zero
    @raise RefinementLimitError: more than `max_samples` samples would be needed
    """
    budget = budget or EvalBudget.for_signs()
    ctx = get_context(budget.working_precision_bits)

    def sample(s: float):
        result = f(curve.point(ctx, s), budget)
        if not result.is_certified_nonzero():
            raise ZeroOnCurveError(
                f"traced function vanishes near s = {s:.6g} on {curve.label or curve.kind} "
                f"(|f| = {float(abs(result.value)):.3e}, bound {result.tail_bound:.3e})",
                parameter=s,
            )
        return complex(result.value), float(ctx.arg(result.value))

    params = list(np.linspace(0.0, 1.0, initial_samples + 1))
    samples = [sample(s) for s in params]
    while True:
        args = np.array([arg for _, arg in samples])
        steps = np.angle(np.exp(1j * np.diff(args)))
        coarse = set(np.nonzero(np.abs(steps) >= MAX_ARG_STEP)[0].tolist())
        if not coarse:
            break
        if len(params) + len(coarse) > max_samples:
            raise RefinementLimitError(
                f"argument of the traced function on {curve.label or curve.kind} needs more "
                f"than {max_samples} samples"
            )
        refined_params, refined_samples = [], []
        for i, (s, value) in enumerate(zip(params, samples)):
            refined_params.append(s)
            refined_samples.append(value)
            if i in coarse:
                mid = (s + params[i + 1]) / 2
                refined_params.append(mid)
                refined_samples.append(sample(mid))
        params, samples = refined_params, refined_samples

    unwrapped = np.unwrap(args)
    logger.debug(
        f"{curve.label or curve.kind}: {len(params)} samples, "
        f"variation {unwrapped[-1] - unwrapped[0]:.6f}"
    )
    return ArgTrace(
        parameter_samples=np.array(params),
        values=np.array([value for value, _ in samples]),
        unwrapped_args=unwrapped,
        total_variation=float(unwrapped[-1] - unwrapped[0]),
        label=curve.label,
    )


def contour_variation(
    f: TracedFunction, contour: Contour, budget: Optional[EvalBudget] = None
) -> List[ArgTrace]:
    """One ArgTrace per segment; the sum of their variations is the total change of arg f."""
    return [arg_variation(f, segment, budget) for segment in contour]


def total_variation(traces: Iterable[ArgTrace]) -> float:
    return math.fsum(trace.total_variation for trace in traces)
