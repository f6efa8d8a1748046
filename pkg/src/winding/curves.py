from dataclasses import dataclass
from typing import Any, Iterator, List, Sequence, Tuple, Union

from numkernel import DomainError, get_context

# chained segment endpoints must agree to this distance
CHAIN_TOLERANCE = 1e-20


@dataclass(frozen=True)
class LineSegment:
    """Straight path start -> end; vertical and horizontal edges of the contours."""

    start: Any
    end: Any
    label: str = ""

    @property
    def kind(self) -> str:
        if complex(self.start).real == complex(self.end).real:
            return "vertical"
        if complex(self.start).imag == complex(self.end).imag:
            return "horizontal"
        return "line"

    def point(self, ctx, s):
        a = ctx.mpc(self.start)
        return a + (ctx.mpc(self.end) - a) * s

    def reversed(self) -> "LineSegment":
        return LineSegment(self.end, self.start, self.label)


@dataclass(frozen=True)
class UnitArc:
    """e^{i theta} for theta running from theta_start to theta_end."""

    theta_start: Any
    theta_end: Any
    label: str = "arc"
    kind: str = "unit_arc"

    def point(self, ctx, s):
        a = ctx.mpf(self.theta_start)
        return ctx.expj(a + (ctx.mpf(self.theta_end) - a) * s)

    def reversed(self) -> "UnitArc":
        return UnitArc(self.theta_end, self.theta_start, self.label)


@dataclass(frozen=True)
class CircleArc:
    """Detour center + radius e^{i a} for a from angle_start to angle_end.

    @param inside: whether the detour runs inside the region bounded by the contour,
        which leaves `center` outside of it
    """

    center: Any
    radius: Any
    angle_start: Any
    angle_end: Any
    inside: bool = False
    label: str = "detour"
    kind: str = "detour"

    def point(self, ctx, s):
        a = ctx.mpf(self.angle_start)
        angle = a + (ctx.mpf(self.angle_end) - a) * s
        return ctx.mpc(self.center) + ctx.mpf(self.radius) * ctx.expj(angle)

    @property
    def clockwise(self) -> bool:
        return complex(self.angle_end).real < complex(self.angle_start).real

    def reversed(self) -> "CircleArc":
        return CircleArc(
            self.center, self.radius, self.angle_end, self.angle_start, self.inside, self.label
        )


@dataclass(frozen=True)
class ParameterInterval:
    """A real interval [lo, hi], for functions of a real parameter such as theta."""

    lo: Any
    hi: Any
    label: str = ""
    kind: str = "interval"

    def point(self, ctx, s):
        a = ctx.mpf(self.lo)
        return a + (ctx.mpf(self.hi) - a) * s

    def reversed(self) -> "ParameterInterval":
        return ParameterInterval(self.hi, self.lo, self.label)


Segment = Union[LineSegment, UnitArc, CircleArc, ParameterInterval]


@dataclass(frozen=True)
class Contour:
    segments: Tuple[Segment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise DomainError("a contour needs at least one segment")
        ctx = get_context(128)
        for previous, current in zip(self.segments, self.segments[1:]):
            gap = abs(previous.point(ctx, 1) - current.point(ctx, 0))
            if gap > CHAIN_TOLERANCE:
                raise DomainError(
                    f"segments {previous.label or previous.kind} and "
                    f"{current.label or current.kind} do not chain (gap {float(gap):.3e})"
                )

    @property
    def closed(self) -> bool:
        ctx = get_context(128)
        return abs(self.segments[-1].point(ctx, 1) - self.segments[0].point(ctx, 0)) <= (
            CHAIN_TOLERANCE
        )

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def labelled(self, *labels: str) -> List[Segment]:
        return [segment for segment in self.segments if segment.label in labels]

    def reversed(self) -> "Contour":
        return Contour(tuple(segment.reversed() for segment in reversed(self.segments)))


def _vertical_edge(ctx, x, bottom, top, holes: Sequence, eps, upward: bool, inside: bool, label):
    """Edge on Re z = x between bottom and top with semicircular detours around x + i b."""
    segments: List[Segment] = []
    holes = sorted(holes, reverse=not upward)
    current = ctx.mpc(x, bottom if upward else top)
    # clockwise turns keep the detour on the left of an upward edge (Re z < x)
    for b in holes:
        below, above = ctx.mpc(x, b - eps), ctx.mpc(x, b + eps)
        first, second = (below, above) if upward else (above, below)
        segments.append(LineSegment(current, first, label))
        half_pi = ctx.pi / 2
        if upward:
            angles = (-half_pi, -3 * half_pi) if inside else (-half_pi, half_pi)
        else:
            angles = (half_pi, -half_pi) if inside else (half_pi, 3 * half_pi)
        segments.append(
            CircleArc(ctx.mpc(x, b), eps, angles[0], angles[1], inside=inside, label=label)
        )
        current = second
    segments.append(LineSegment(current, ctx.mpc(x, top if upward else bottom), label))
    return segments


def _check_holes(holes: Sequence, bottom, top, eps):
    ordered = sorted(float(b) for b in holes)
    if any(b - eps <= float(bottom) or b + eps >= float(top) for b in ordered):
        raise DomainError(
            f"detours of radius {float(eps)} do not fit in ]{float(bottom)}, {float(top)}["
        )
    if any(b2 - b1 <= 2 * eps for b1, b2 in zip(ordered, ordered[1:])):
        raise DomainError(f"detours of radius {float(eps)} overlap")


def _arc(ctx, eps, corner_eps, arc_points: Sequence) -> List[Segment]:
    """The unit arc from 2pi/3 down to pi/3.

    With `corner_eps` the corners are cut by clockwise sixth-circle detours inside D;
    each angle of `arc_points` is passed on the outside of D by a half-turn of radius eps.
    """
    segments: List[Segment] = []
    start, end = 2 * ctx.pi / 3, ctx.pi / 3
    if corner_eps:
        # chord half-angle of the arc point at distance corner_eps from the corner
        cut = 2 * ctx.asin(corner_eps / 2)
        segments.append(
            CircleArc(
                ctx.expjpi(ctx.mpf(2) / 3),
                corner_eps,
                ctx.pi / 2,
                ctx.pi / 6 - cut / 2,
                inside=True,
                label="corner",
            )
        )
        start, end = start - cut, end + cut
    delta = 2 * ctx.asin(eps / 2)
    current = start
    for theta in sorted((ctx.mpf(theta) for theta in arc_points), reverse=True):
        if not end + delta < theta < current - delta:
            raise DomainError(f"arc detour at theta = {float(theta):.9f} does not fit")
        segments.append(UnitArc(current, theta + delta))
        segments.append(
            CircleArc(
                ctx.expj(theta),
                eps,
                theta + delta / 2 + ctx.pi / 2,
                theta - delta / 2 + 3 * ctx.pi / 2,
                label="arc",
            )
        )
        current = theta - delta
    segments.append(UnitArc(current, end))
    if corner_eps:
        segments.append(
            CircleArc(
                ctx.expjpi(ctx.mpf(1) / 3),
                corner_eps,
                5 * ctx.pi / 6 + cut / 2,
                ctx.pi / 2,
                inside=True,
                label="corner",
            )
        )
    return segments


def build_critical_contour(k: int, T, eps, line_zeros: Sequence, bits: int = 128) -> Contour:
    """Counterclockwise boundary of D_T = {|Re z| <= 1/2, |z| >= 1, Im z <= T} with detours.

    Zeros 1/2 + i b of E_k' are kept inside by outward semicircles and their translates
    -1/2 + i b excluded by inward ones; for k = 2 mod 6 the corner zeros e^{i pi/3},
    e^{2 i pi/3} are excluded by sixth-circle detours inside D_T.
    """
    ctx = get_context(bits)
    eps = ctx.mpf(eps)
    T = ctx.mpf(T)
    half = ctx.mpf(1) / 2
    corner_eps = eps if k % 6 == 2 else None
    bottom = ctx.sqrt(3) / 2 + (corner_eps or 0)
    _check_holes(line_zeros, bottom, T, eps)

    right = _vertical_edge(ctx, half, bottom, T, line_zeros, eps, True, False, "right")
    top = [LineSegment(ctx.mpc(half, T), ctx.mpc(-half, T), "top")]
    left = _vertical_edge(ctx, -half, bottom, T, line_zeros, eps, False, True, "left")
    return Contour(tuple(right + top + left + _arc(ctx, eps, corner_eps, ())))


def build_phi_contour(
    k: int,
    T,
    eps,
    poles: Sequence,
    arc_points: Sequence = (),
    corner_eps=None,
    bits: int = 128,
) -> Contour:
    """Counterclockwise boundary of D_T with clockwise detours inside D around +-1/2 + i b.

    Points e^{i theta} of `arc_points` are enclosed by outward half-turns; for
    k = 2 mod 6 the corners are cut at radius `corner_eps` (default eps).
    """
    ctx = get_context(bits)
    eps = ctx.mpf(eps)
    T = ctx.mpf(T)
    half = ctx.mpf(1) / 2
    corner_eps = ctx.mpf(corner_eps or eps) if k % 6 == 2 else None
    bottom = ctx.sqrt(3) / 2 + (corner_eps or 0)
    _check_holes(poles, bottom, T, eps)
    right = _vertical_edge(ctx, half, bottom, T, poles, eps, True, True, "right")
    top = [LineSegment(ctx.mpc(half, T), ctx.mpc(-half, T), "top")]
    left = _vertical_edge(ctx, -half, bottom, T, poles, eps, False, True, "left")
    return Contour(tuple(right + top + left + _arc(ctx, eps, corner_eps, arc_points)))


def default_detour_radius(points: Sequence[float], cap: float) -> float:
    """A third of the smallest gap between the listed imaginary parts, capped."""
    ordered = sorted(points)
    gaps = [b - a for a, b in zip(ordered, ordered[1:]) if b > a]
    return min([cap] + [gap / 3 for gap in gaps])
