from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from numkernel import DomainError, InconsistencyError, eisenstein_coefficient, is_int
from numkernel.arith import sigma_table

from .poly import IsobaricPoly, Y, Z, require_weight


@dataclass(frozen=True)
class QExpansion:
    """Exact q-expansion a_0 + a_1 q + ... + a_N q^N."""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise DomainError("a q-expansion needs at least the constant term")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def constant(cls, value, order: int) -> "QExpansion":
        return cls((Fraction(value),) + (Fraction(0),) * order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def _common(self, other: "QExpansion") -> int:
        return min(self.truncation_order, other.truncation_order)

    def __add__(self, other) -> "QExpansion":
        if not isinstance(other, QExpansion):
            other = QExpansion.constant(other, self.truncation_order)
        n = self._common(other)
        return QExpansion(tuple(a + b for a, b in zip(self[: n + 1], other[: n + 1])))

    __radd__ = __add__

    def __neg__(self) -> "QExpansion":
        return QExpansion(tuple(-c for c in self.coefficients))

    def __sub__(self, other) -> "QExpansion":
        return self + (-other)

    def __mul__(self, other) -> "QExpansion":
        if not isinstance(other, QExpansion):
            scalar = Fraction(other)
            return QExpansion(tuple(scalar * c for c in self.coefficients))
        n = self._common(other)
        a, b = self.coefficients, other.coefficients
        product = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if a[i]:
                for j in range(n + 1 - i):
                    product[i + j] += a[i] * b[j]
        return QExpansion(tuple(product))

    __rmul__ = __mul__

    def derivative(self) -> "QExpansion":
        """q d/dq, i.e. the operator D = (2 pi i)^-1 d/dz on the series."""
        return QExpansion(tuple(n * c for n, c in enumerate(self.coefficients)))

    def to_json(self) -> List[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coefficients]

    @classmethod
    def from_json(cls, values: Sequence[str]) -> "QExpansion":
        return cls(tuple(Fraction(v) for v in values))


def eisenstein_expansion(k: int, order: int) -> QExpansion:
    """1 - (2k/B_k) sum_{n<=order} sigma_{k-1}(n) q^n."""
    coeff = eisenstein_coefficient(k)
    table = sigma_table(k - 1, max(order, 1))
    return QExpansion((Fraction(1),) + tuple(coeff * table[n] for n in range(1, order + 1)))


def q_expand(poly: IsobaricPoly, order: int) -> QExpansion:
    """Exact expansion of P(E_2, E_4, E_6) up to q^order."""
    if not is_int(order) or order < 0:
        raise DomainError(f"truncation order must be >= 0, got {order!r}")
    generators = [eisenstein_expansion(k, order) for k in (2, 4, 6)]
    return poly.evaluate(
        *generators, zero=QExpansion.constant(0, order), one=QExpansion.constant(1, order)
    )


def _solve_exact(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    n = len(rhs)
    rows = [list(row) + [value] for row, value in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise InconsistencyError("singular system for the Eisenstein polynomial")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        for r in range(n):
            if r != col and rows[r][col]:
                factor = rows[r][col] / rows[col][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] / rows[i][i] for i in range(n)]


def eisenstein_poly(k: int) -> IsobaricPoly:
    """The X-free polynomial in Y, Z with the q-expansion of E_k, for even k >= 4."""
    if not is_int(k) or k < 4 or k % 2:
        raise DomainError(f"eisenstein_poly needs an even k >= 4, got {k!r}")
    basis = [
        Y**b * Z**c for c in range(k // 6 + 1) for b in [(k - 6 * c) // 4] if 4 * b + 6 * c == k
    ]
    dim = len(basis)
    order = dim + 2
    expansions = [q_expand(m, order) for m in basis]
    target = eisenstein_expansion(k, order)
    coefficients = _solve_exact(
        [[e[n] for e in expansions] for n in range(dim)], [target[n] for n in range(dim)]
    )
    poly = IsobaricPoly({})
    for coef, monomial in zip(coefficients, basis):
        poly = poly + coef * monomial
    # the extra coefficients are determined by modularity, so they must agree
    check = q_expand(poly, order)
    if check.coefficients != target.coefficients:
        raise InconsistencyError(f"E_{k} is not reproduced by {poly.to_text()}")
    require_weight(poly)
    return poly
