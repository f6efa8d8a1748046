from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from conf import FLOAT_DECIMALS
from numkernel import DomainError, HalfPlanePoint, is_int

# LocusCurve.end of the curve that escapes to infinity
ASYMPTOTE = "asymptote"


@dataclass(frozen=True)
class UnimodularMatrix:
    """gamma = (a b; c d) in SL_2(Z), acting by z -> (a z + b) / (c z + d)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if not all(is_int(entry) for entry in (self.a, self.b, self.c, self.d)):
            raise DomainError(f"matrix entries must be integers: {self}")
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"determinant of {self} is {self.a * self.d - self.b * self.c}")

    @classmethod
    def from_text(cls, text: str) -> "UnimodularMatrix":
        try:
            a, b, c, d = (int(part) for part in text.split(","))
        except ValueError:
            raise DomainError(f"expected 'a,b,c,d', got {text!r}")
        return cls(a, b, c, d)

    def act(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def __str__(self) -> str:
        return f"({self.a} {self.b}; {self.c} {self.d})"


@dataclass(frozen=True)
class PoleTable:
    """Poles 1/2 + i b_m of phi_k and the stationary points 1/2 + i c_m of v_k.

    Both lists are decreasing and interleave as c_1 > b_1 > c_2 > ... > c_n > b_n.
    """

    k: int
    b_values: Tuple[float, ...]
    c_values: Tuple[float, ...]

    def __post_init__(self):
        merged = [x for pair in zip(self.c_values, self.b_values) for x in pair]
        if len(self.b_values) != len(self.c_values) or any(
            upper <= lower for upper, lower in zip(merged, merged[1:])
        ):
            raise DomainError(
                f"poles {self.b_values} and stationary points {self.c_values} do not interleave"
            )

    @property
    def n(self) -> int:
        return len(self.b_values)

    def bands(self, base: float) -> List[Tuple[float, float]]:
        """The t-intervals between consecutive poles, from the top (b_0 = oo) down to `base`."""
        edges = [float("inf")] + list(self.b_values) + [base]
        return [(edges[m + 1], edges[m]) for m in range(len(edges) - 1)]


@dataclass
class LocusCurve:
    """One component Gamma_j of the real locus of phi_k in the right half of D.

    @param start: the unit-circle point u_j the curve leaves from
    @param end: the pole 1/2 + i b_j it runs into, or ASYMPTOTE for j = 0
    @param phi_values: the real values of phi_k at the polyline points
    """

    index: int
    polyline: List[HalfPlanePoint]
    start: HalfPlanePoint
    end: Union[HalfPlanePoint, str]
    phi_values: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.array([complex(point) for point in self.polyline])

    def mirrored(self) -> "LocusCurve":
        """Image under z -> -conj(z), on which phi_k takes the opposite values."""

        def reflect(p: HalfPlanePoint) -> HalfPlanePoint:
            return HalfPlanePoint(-p.re, p.im)

        return LocusCurve(
            index=self.index,
            polyline=[reflect(p) for p in self.polyline],
            start=reflect(self.start),
            end=self.end if self.end == ASYMPTOTE else reflect(self.end),
            phi_values=-self.phi_values,
        )

    def to_json(self) -> Dict:
        return {
            "index": self.index,
            "end": self.end if self.end == ASYMPTOTE else [float(self.end.re), float(self.end.im)],
            "points": [
                [round(float(p.re), FLOAT_DECIMALS), round(float(p.im), FLOAT_DECIMALS)]
                for p in self.polyline
            ],
        }


@dataclass(frozen=True)
class WTable:
    """Continuous w_k with phi_k(e^(i theta)) = e^(i w_k(theta)), sampled on [pi/3, 2pi/3].

    @param grid_size: the uniform grid theta_j = pi/3 + j pi / (3 grid_size) is part of the samples
    """

    k: int
    thetas: np.ndarray
    values: np.ndarray
    grid_size: int

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        steps = (self.thetas - self.thetas[0]) / (self.thetas[-1] - self.thetas[0]) * self.grid_size
        mask = np.isclose(steps, np.round(steps), rtol=0, atol=1e-9)
        return self.thetas[mask], self.values[mask]

    def at(self, theta: float) -> Optional[float]:
        hits = np.nonzero(np.isclose(self.thetas, theta, rtol=0, atol=1e-12))[0]
        return float(self.values[hits[0]]) if hits.size else None

    def to_rows(self) -> List[Dict]:
        return [
            {"theta": round(float(t), FLOAT_DECIMALS), "w": round(float(w), FLOAT_DECIMALS)}
            for t, w in zip(self.thetas, self.values)
        ]


@dataclass(frozen=True)
class GammaZero:
    """A zero gamma(tau) of E_k' found from a solution tau of phi_k = -d/c in D."""

    tau: HalfPlanePoint
    image: HalfPlanePoint
    residual: float
    # |E_k'(gamma tau)| = |c tau + d|^(k+1) |E_k'(tau)| residual
    derivative: float

    def to_row(self) -> Dict:
        return {
            "tau_re": float(self.tau.re),
            "tau_im": float(self.tau.im),
            "re": float(self.image.re),
            "im": float(self.image.im),
            "residual": self.residual,
            "derivative": self.derivative,
        }
