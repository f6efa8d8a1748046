import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Dict, Iterator, Mapping, Optional, Tuple, Union

from numkernel import DomainError

Monomial = Tuple[int, int, int]
Scalar = Union[int, Fraction]

MIXED = "mixed"
GENERATOR_WEIGHTS = (2, 4, 6)
GENERATOR_NAMES = ("X", "Y", "Z")

_TERM_PATTERN = re.compile(
    r"^(?P<sign>[+-])?\s*(?P<coef>\d+(?:\s*/\s*\d+)?)?\s*\*?\s*(?P<factors>.*)$"
)
_FACTOR_PATTERN = re.compile(r"([XYZ])(?:\^(\d+))?")


def monomial_weight(monomial: Monomial) -> int:
    return sum(w * e for w, e in zip(GENERATOR_WEIGHTS, monomial))


def _canonical_key(monomial: Monomial):
    # graded lexicographic, highest total degree first
    return (-sum(monomial), tuple(-e for e in monomial))


@dataclass(frozen=True, eq=False)
class IsobaricPoly:
    """Polynomial in X, Y, Z (standing for E_2, E_4, E_6) with rational coefficients.

    @param terms: map from exponent triples (a, b, c) of X^a Y^b Z^c to coefficients;
        zero coefficients are dropped on construction
    """

    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned: Dict[Monomial, Fraction] = {}
        for monomial, coef in dict(self.terms).items():
            monomial = tuple(int(e) for e in monomial)
            if len(monomial) != 3 or any(e < 0 for e in monomial):
                raise DomainError(f"Invalid monomial exponents {monomial}")
            coef = Fraction(coef)
            if coef:
                cleaned[monomial] = cleaned.get(monomial, Fraction(0)) + coef
                if not cleaned[monomial]:
                    del cleaned[monomial]
        object.__setattr__(self, "terms", MappingProxyType(cleaned))

    @classmethod
    def constant(cls, value: Scalar) -> "IsobaricPoly":
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coef: Scalar = 1) -> "IsobaricPoly":
        return cls({(a, b, c): coef})

    @property
    def weight(self) -> Union[int, str, None]:
        """Common weight of all monomials, MIXED if they differ, None for the zero polynomial."""
        weights = {monomial_weight(m) for m in self.terms}
        if not weights:
            return None
        if len(weights) > 1:
            return MIXED
        return weights.pop()

    def is_zero(self) -> bool:
        return not self.terms

    def is_x_free(self) -> bool:
        return all(m[0] == 0 for m in self.terms)

    def monomials(self) -> Iterator[Tuple[Monomial, Fraction]]:
        for monomial in sorted(self.terms, key=_canonical_key):
            yield monomial, self.terms[monomial]

    def map_terms(self, func: Callable[[Monomial, Fraction], "IsobaricPoly"]) -> "IsobaricPoly":
        total = ZERO
        for monomial, coef in self.terms.items():
            total = total + func(monomial, coef)
        return total

    def evaluate(self, x, y, z, zero=0, one=1, convert=None):
        """Substitute values (numbers or expansions) for X, Y, Z."""
        powers = [[one], [one], [one]]
        values = (x, y, z)
        total = zero
        for (a, b, c), coef in self.monomials():
            term = one
            for i, e in enumerate((a, b, c)):
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(cache[-1] * values[i])
                if e:
                    term = term * cache[e]
            total = total + (convert(coef) if convert else coef) * term
        return total

    def __add__(self, other) -> "IsobaricPoly":
        other = _coerce(other)
        merged = dict(self.terms)
        for monomial, coef in other.terms.items():
            merged[monomial] = merged.get(monomial, Fraction(0)) + coef
        return IsobaricPoly(merged)

    __radd__ = __add__

    def __neg__(self) -> "IsobaricPoly":
        return IsobaricPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "IsobaricPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "IsobaricPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "IsobaricPoly":
        other = _coerce(other)
        product: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                product[m] = product.get(m, Fraction(0)) + c1 * c2
        return IsobaricPoly(product)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "IsobaricPoly":
        scalar = Fraction(scalar)
        return IsobaricPoly({m: c / scalar for m, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "IsobaricPoly":
        if exponent < 0:
            raise DomainError("negative powers are not polynomials")
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = IsobaricPoly.constant(other)
        if not isinstance(other, IsobaricPoly):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def to_text(self) -> str:
        """Terms `p/q * X^a Y^b Z^c` joined by " + ", every coefficient written as p/q."""
        if not self.terms:
            return "0"
        parts = []
        for monomial, coef in self.monomials():
            factors = " ".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(GENERATOR_NAMES, monomial)
                if e
            )
            coef_text = f"{coef.numerator}/{coef.denominator}"
            parts.append(f"{coef_text} * {factors}" if factors else coef_text)
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "IsobaricPoly":
        text = text.strip()
        if text == "0":
            return ZERO
        terms: Dict[Monomial, Fraction] = {}
        for raw in re.split(r"\s\+\s", text):
            raw = raw.strip()
            match = _TERM_PATTERN.match(raw)
            if not raw or match is None:
                raise DomainError(f"Cannot parse term {raw!r}")
            coef = Fraction((match.group("coef") or "1").replace(" ", ""))
            if match.group("sign") == "-":
                coef = -coef
            factors = match.group("factors").strip()
            if not factors and match.group("coef") is None:
                raise DomainError(f"Cannot parse term {raw!r}")
            exponents = [0, 0, 0]
            consumed = _FACTOR_PATTERN.sub("", factors).strip()
            if consumed:
                raise DomainError(f"Cannot parse factors {factors!r}")
            for name, exp in _FACTOR_PATTERN.findall(factors):
                exponents[GENERATOR_NAMES.index(name)] += int(exp) if exp else 1
            monomial = tuple(exponents)
            terms[monomial] = terms.get(monomial, Fraction(0)) + coef
        return cls(terms)

    def __repr__(self) -> str:
        return f"IsobaricPoly({self.to_text()})"


def _coerce(value) -> IsobaricPoly:
    if isinstance(value, IsobaricPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return IsobaricPoly.constant(value)
    raise TypeError(f"Cannot combine IsobaricPoly with {type(value).__name__}")


def require_weight(poly: IsobaricPoly, what: str = "polynomial") -> Optional[int]:
    weight = poly.weight
    if weight == MIXED:
        raise DomainError(f"{what} has mixed weight: {poly.to_text()}")
    return weight


ZERO = IsobaricPoly()
ONE = IsobaricPoly.constant(1)
X = IsobaricPoly.monomial(1, 0, 0)
Y = IsobaricPoly.monomial(0, 1, 0)
Z = IsobaricPoly.monomial(0, 0, 1)
