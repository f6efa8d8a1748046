from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Optional, Union

from conf import (
    DEFAULT_MAX_TERMS,
    DEFAULT_PRECISION_BITS,
    DEFAULT_TARGET_ABS_ERROR,
    PRECISION_BITS_PER_WEIGHT,
    SIGN_TARGET_ABS_ERROR,
    SIGN_TARGET_REL_ERROR,
)

from .errors import DomainError

RationalNumber = Fraction
Real = Union[int, float, Fraction, Any]


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point of the upper half-plane.

    @param re: real part, any real number (float or mpmath mpf)
    @param im: imaginary part, strictly positive
    """

    re: Real
    im: Real

    def __post_init__(self):
        if not self.im > 0:
            raise DomainError(f"Point {self.re} + {self.im}i is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z) -> "HalfPlanePoint":
        if isinstance(z, HalfPlanePoint):
            return z
        if hasattr(z, "real") and hasattr(z, "imag"):
            return cls(z.real, z.imag)
        return cls(z, 0)

    def to_mpc(self, ctx):
        return ctx.mpc(self.re, self.im)

    def shift(self, dx: Real) -> "HalfPlanePoint":
        return HalfPlanePoint(self.re + dx, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


@dataclass(frozen=True)
class EvalBudget:
    working_precision_bits: int = DEFAULT_PRECISION_BITS
    target_abs_error: float = DEFAULT_TARGET_ABS_ERROR
    max_terms: int = DEFAULT_MAX_TERMS
    # when set, a tail below target_rel_error * sum|terms| also certifies
    target_rel_error: Optional[float] = None

    def __post_init__(self):
        if self.working_precision_bits < 16:
            raise DomainError(f"working_precision_bits too small: {self.working_precision_bits}")
        if not self.target_abs_error > 0:
            raise DomainError(f"target_abs_error must be positive, got {self.target_abs_error}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if self.target_rel_error is not None and not self.target_rel_error > 0:
            raise DomainError(f"target_rel_error must be positive, got {self.target_rel_error}")

    def escalated(self, steps: int = 1) -> "EvalBudget":
        return replace(
            self,
            working_precision_bits=self.working_precision_bits * 2**steps,
            max_terms=self.max_terms * 2**steps,
            target_rel_error=(
                None if self.target_rel_error is None else self.target_rel_error ** (2**steps)
            ),
        )

    def for_weight(self, k: int) -> "EvalBudget":
        """Raise the precision to DEFAULT / 2 + PRECISION_BITS_PER_WEIGHT * k bits."""
        bits = DEFAULT_PRECISION_BITS // 2 + PRECISION_BITS_PER_WEIGHT * k
        if bits <= self.working_precision_bits:
            return self
        return replace(self, working_precision_bits=bits)

    @classmethod
    def for_signs(cls, working_precision_bits: int = DEFAULT_PRECISION_BITS) -> "EvalBudget":
        return cls(
            working_precision_bits=working_precision_bits,
            target_abs_error=SIGN_TARGET_ABS_ERROR,
            target_rel_error=SIGN_TARGET_REL_ERROR,
        )


@dataclass(frozen=True)
class EvalResult:
    value: Any
    tail_bound: float
    terms_used: int
    precision_bits: int = DEFAULT_PRECISION_BITS

    @property
    def complex(self) -> complex:
        return complex(self.value)

    @property
    def real(self) -> float:
        return float(self.value.real)

    def is_certified_nonzero(self) -> bool:
        return abs(self.value) > self.tail_bound

    def real_sign(self) -> int:
        """Sign of the real part, 0 when the bound does not separate it from zero."""
        re = self.value.real
        if abs(re) <= self.tail_bound:
            return 0
        return 1 if re > 0 else -1
