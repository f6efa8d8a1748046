from fractions import Fraction

from numkernel import ContradictionError, DomainError, is_int

from .poly import MIXED, ZERO, IsobaricPoly, X, Y, Z, require_weight

# Ramanujan's system, with D = q d/dq
DX = (X * X - Y) / 12
DY = (X * Y - Z) / 3
DZ = (X * Z - Y * Y) / 2


def _partial(monomial, index: int) -> IsobaricPoly:
    exponent = monomial[index]
    if not exponent:
        return ZERO
    lowered = list(monomial)
    lowered[index] -= 1
    return IsobaricPoly({tuple(lowered): exponent})


def apply_D(poly: IsobaricPoly) -> IsobaricPoly:
    """The derivation D extended from D X, D Y, D Z by the Leibniz rule."""

    def term(monomial, coef):
        return coef * (
            _partial(monomial, 0) * DX + _partial(monomial, 1) * DY + _partial(monomial, 2) * DZ
        )

    return poly.map_terms(term)


def apply_dE2(poly: IsobaricPoly) -> IsobaricPoly:
    return poly.map_terms(lambda monomial, coef: coef * _partial(monomial, 0))


def D_power(poly: IsobaricPoly, r: int) -> IsobaricPoly:
    for _ in range(r):
        poly = apply_D(poly)
    return poly


def d_dX_power(poly: IsobaricPoly, j: int) -> IsobaricPoly:
    for _ in range(j):
        poly = apply_dE2(poly)
    return poly


def check_bracket(poly: IsobaricPoly) -> bool:
    """[d/dX, D] P == (w/12) P for P isobaric of weight w."""
    weight = require_weight(poly)
    if weight is None:
        return True
    lhs = apply_dE2(apply_D(poly)) - apply_D(apply_dE2(poly))
    return lhs == poly * Fraction(weight, 12)


def check_derivative_powers(poly: IsobaricPoly, r: int, j: int) -> bool:
    """(d/dX)^j D^r P == prod_{i=1..j} (w+r-i)(r-i+1)/12 * D^(r-j) P.

    P must be free of X (a modular form) or be X itself.
    """
    if not is_int(r) or r < 0:
        raise DomainError(f"r must be a non-negative integer, got {r!r}")
    if not is_int(j) or not 0 <= j <= r:
        raise DomainError(f"j must satisfy 0 <= j <= r, got j={j!r} r={r}")
    if not (poly.is_x_free() or poly == X):
        raise DomainError(f"expected an X-free polynomial or X, got {poly.to_text()}")
    weight = require_weight(poly) or 0
    factor = Fraction(1)
    for i in range(1, j + 1):
        factor *= Fraction((weight + r - i) * (r - i + 1), 12)
    return d_dX_power(D_power(poly, r), j) == factor * D_power(poly, r - j)


def build_Ff(f: IsobaricPoly) -> IsobaricPoly:
    """(w+1) (D f)^2 - w f D^2 f, the cusp form attached to f.

    The analytic F_f is (2 pi i)^2 times this.
    """
    weight = f.weight
    if weight is None or weight == MIXED:
        raise DomainError(f"build_Ff needs a non-zero isobaric polynomial, got {f.to_text()}")
    if not f.is_x_free():
        raise DomainError(f"build_Ff needs an X-free polynomial, got {f.to_text()}")
    df = apply_D(f)
    result = (weight + 1) * df * df - weight * f * apply_D(df)
    if not result.is_x_free():
        raise ContradictionError("F_f is free of X", "X-free", result.to_text())
    if not result.is_zero() and result.weight != 2 * weight + 4:
        raise ContradictionError("weight of F_f", 2 * weight + 4, result.weight)
    return result
