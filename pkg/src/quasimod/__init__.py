from .derivations import (
    D_power,
    apply_D,
    apply_dE2,
    build_Ff,
    check_bracket,
    check_derivative_powers,
    d_dX_power,
)
from .evaluate import modular_defect, multiple_zero_scan, psi_eval
from .poly import MIXED, ONE, ZERO, IsobaricPoly, X, Y, Z
from .qexpansion import QExpansion, eisenstein_expansion, eisenstein_poly, q_expand
