from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Tuple

from numkernel import HalfPlanePoint

Classification = Literal["trivial", "nontrivial"]
PointKind = Literal["line", "endpoint", "e2", "d2"]
ArcKind = Literal["arc", "endpoint"]
SignRoute = Literal["qseries", "lattice"]


@dataclass(frozen=True)
class BracketTable:
    """Imaginary parts t_m = cot(m pi / (k+1)) / 2, m = 1..M with M = floor(k/6).

    @param includes_base_interval: true iff k = 4 mod 6 and k != 4, in which case
        ]sqrt(3)/2, t_M[ also holds a zero of E_k'
    """

    k: int
    M: int
    t_values: Tuple[float, ...]
    includes_base_interval: bool
    base: float = 3**0.5 / 2

    def intervals(self) -> List[Tuple[float, float]]:
        """Open t-intervals, from the top of the line downwards, each holding one zero."""
        pairs = [(self.t_values[m + 1], self.t_values[m]) for m in range(self.M - 1)]
        if self.includes_base_interval:
            pairs.append((self.base, self.t_values[-1]))
        return pairs


@dataclass(frozen=True)
class CriticalPointRecord:
    k: int
    location: HalfPlanePoint
    bracket: Tuple[float, float]
    residual: float
    simplicity_margin: float
    classification: Classification = "nontrivial"
    kind: PointKind = "line"

    def to_row(self) -> Dict:
        return {
            "k": self.k,
            "kind": self.kind,
            "re": float(self.location.re),
            "im": float(self.location.im),
            "residual": self.residual,
            "margin": self.simplicity_margin,
            "bracket": [float(self.bracket[0]), float(self.bracket[1])],
        }


@dataclass(frozen=True)
class ArcZeroRecord:
    """A zero theta_j of f_k on [pi/3, 2pi/3]; g_sign is 0 at the order-2 endpoints."""

    k: int
    index: int
    theta: float
    f_residual: float
    g_sign: int
    order: int = 1
    kind: ArcKind = "arc"
    bracket: Tuple[float, float] = (0.0, 0.0)

    def to_row(self) -> Dict:
        return {
            "k": self.k,
            "kind": self.kind,
            "index": self.index,
            "theta": self.theta,
            "residual": self.f_residual,
            "g_sign": self.g_sign,
            "order": self.order,
            "bracket": [float(self.bracket[0]), float(self.bracket[1])],
        }


@dataclass(frozen=True)
class SignCertificate:
    """h_k(1/2 + i t_m) together with the bound that separates it from zero."""

    k: int
    m: int
    t: float
    sign: int
    value: float
    bound: float
    route: SignRoute = "qseries"
    precision_bits: int = 0

    @property
    def expected(self) -> int:
        return (-1) ** self.m


@dataclass(frozen=True)
class SignMachineryReport:
    k: int
    m: int
    regime: Literal["series", "lattice"]
    checks: Dict[str, bool] = field(default_factory=dict)
    dominant: Optional[float] = None
    remainder: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())
