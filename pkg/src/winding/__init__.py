from .curves import (
    CircleArc,
    Contour,
    LineSegment,
    ParameterInterval,
    UnitArc,
    build_critical_contour,
    build_phi_contour,
    default_detour_radius,
)
from .quantities import (
    arg_at_endpoint,
    compute_A,
    compute_B,
    contour_count_I,
    default_contour,
    edge_cancellation,
    expected_A,
    expected_B,
    expected_I,
    gk_curve,
)
from .trace import ArgTrace, arg_variation, contour_variation, total_variation
