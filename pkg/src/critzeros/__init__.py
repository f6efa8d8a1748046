from .arc_zeros import expected_g_signs, interior_arc_count, locate_arc_zeros
from .e2_zero import e2_line_zero
from .line_zeros import (
    line_endpoint_zero,
    locate_line_zeros,
    second_derivative_spot_check,
    translated_line_zeros,
)
from .records import (
    ArcZeroRecord,
    BracketTable,
    CriticalPointRecord,
    SignCertificate,
    SignMachineryReport,
)
from .signs import bracket_table, line_sign, bracket_sign, sign_machinery
