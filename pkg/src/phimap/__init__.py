from .boundary import (
    arc_seeds,
    band_signs,
    expected_band_sign,
    expected_limit_signs,
    expected_w_endpoint,
    expected_w_midpoint,
    pole_limit_signs,
    pole_table,
    v_table,
    w_anchor,
    w_midpoint,
    w_table,
)
from .locus import check_curve, check_disjoint, trace_curve, trace_locus
from .phi import (
    Fk_jet,
    conjugation_residual,
    equivariance_residual,
    eval_Fk,
    imaginary_axis_check,
    inversion_product,
    is_pole,
    phi,
    phi_derivative,
    phi_jet,
    v,
)
from .solve import (
    SAMPLE_CASES,
    parse_lambda,
    phi_contour,
    sample_matrix,
    solve_phi_eq,
    total_line_count,
    trajectory,
    winding_count,
    zeros_in_gamma_D,
)
from .types import ASYMPTOTE, GammaZero, LocusCurve, PoleTable, UnimodularMatrix, WTable
