import threading
from typing import Callable, TypeVar

from mpmath.ctx_mp import MPContext
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from conf import PRECISION_ESCALATION_STEPS
from utils.log import get_logger

from .errors import CertificationError
from .types import EvalBudget, EvalResult

T = TypeVar("T")

logger = get_logger(__name__)

_local = threading.local()


def get_context(bits: int) -> MPContext:
    """Return this thread's mpmath context running at `bits` of precision."""
    contexts = getattr(_local, "contexts", None)
    if contexts is None:
        contexts = _local.contexts = {}
    ctx = contexts.get(bits)
    if ctx is None:
        ctx = MPContext()
        ctx.prec = bits
        contexts[bits] = ctx
    return ctx


def with_escalation(evaluate: Callable[..., T], *args, budget: EvalBudget, **kwargs) -> T:
    """Call `evaluate(*args, budget=...)`, doubling the precision on CertificationError."""
    for attempt in Retrying(
        stop=stop_after_attempt(PRECISION_ESCALATION_STEPS),
        retry=retry_if_exception_type(CertificationError),
        reraise=True,
    ):
        with attempt:
            steps = attempt.retry_state.attempt_number - 1
            current = budget.escalated(steps) if steps else budget
            if steps:
                logger.debug(
                    f"{getattr(evaluate, '__name__', 'evaluate')}: escalating to "
                    f"{current.working_precision_bits} bits"
                )
            result = evaluate(*args, budget=current, **kwargs)
    return result


def certified_sign(evaluate: Callable[..., EvalResult], *args, budget: EvalBudget, **kwargs):
    """Evaluate a real-valued quantity until its sign is separated from the error bound."""

    def _attempt(*inner_args, budget: EvalBudget, **inner_kwargs):
        result = evaluate(*inner_args, budget=budget, **inner_kwargs)
        if result.real_sign() == 0:
            raise CertificationError(
                f"|value| = {float(abs(result.value.real)):.3e} does not exceed its bound",
                best_bound=result.tail_bound,
            )
        return result

    _attempt.__name__ = getattr(evaluate, "__name__", "certified_sign")
    result = with_escalation(_attempt, *args, budget=budget, **kwargs)
    return result.real_sign(), result
