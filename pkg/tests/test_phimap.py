import math
import random
from fractions import Fraction

import numpy as np
import pytest

from conf import VERIFY_LAMBDAS
from numkernel import DomainError, HalfPlanePoint
from phimap import (
    ASYMPTOTE,
    SAMPLE_CASES,
    LocusCurve,
    PoleTable,
    UnimodularMatrix,
    band_signs,
    conjugation_residual,
    equivariance_residual,
    expected_band_sign,
    expected_limit_signs,
    expected_w_endpoint,
    expected_w_midpoint,
    imaginary_axis_check,
    inversion_product,
    parse_lambda,
    phi,
    phi_derivative,
    pole_limit_signs,
    pole_table,
    sample_matrix,
    solve_phi_eq,
    total_line_count,
    trace_locus,
    trajectory,
    v,
    w_midpoint,
    w_table,
    winding_count,
    zeros_in_gamma_D,
)

SQRT3_OVER_2 = math.sqrt(3) / 2
SQRT3_OVER_6 = math.sqrt(3) / 6


def test_unimodular_matrix():
    gamma = UnimodularMatrix.from_text("2,1,1,1")
    assert gamma.as_tuple() == (2, 1, 1, 1)
    assert gamma.act(1j) == pytest.approx((2j + 1) / (1j + 1))
    with pytest.raises(DomainError):
        UnimodularMatrix(1, 1, 1, 1)
    with pytest.raises(DomainError):
        UnimodularMatrix.from_text("1,0,1")


def test_pole_table_must_interleave():
    with pytest.raises(DomainError):
        PoleTable(k=16, b_values=(2.0, 1.5), c_values=(1.8, 1.2))


def test_pole_table_k10():
    table = pole_table(10)
    assert table.n == 1
    assert table.c_values[0] > table.b_values[0] > SQRT3_OVER_2


def test_pole_table_k16():
    table = pole_table(16)
    assert table.n == 2
    c1, c2 = table.c_values
    b1, b2 = table.b_values
    assert c1 > b1 > c2 > b2 > SQRT3_OVER_2


def test_pole_table_k8_is_empty():
    table = pole_table(8)
    assert table.n == 0
    assert table.bands(SQRT3_OVER_2) == [(SQRT3_OVER_2, math.inf)]


@pytest.mark.parametrize(
    "k, expected", [(12, -SQRT3_OVER_2), (10, SQRT3_OVER_2), (16, SQRT3_OVER_2)]
)
def test_v_at_the_corner(k, expected):
    assert v(k, SQRT3_OVER_2) == pytest.approx(expected, abs=1e-9)


def test_phi_is_translation_equivariant():
    z = HalfPlanePoint(0.2, 1.3)
    shifted = phi(12, z.shift(1)).complex
    assert shifted == pytest.approx(phi(12, z).complex + 1, abs=1e-12)


def test_phi_on_the_boundary():
    for theta in (1.1, 1.4, 1.9):
        assert abs(phi(12, complex(math.cos(theta), math.sin(theta))).complex) == pytest.approx(1)
    for t in (0.9, 1.3, 2.4):
        assert phi(8, HalfPlanePoint(0.5, t)).complex.real == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("k", [12, 16])
def test_symmetries(k):
    z = HalfPlanePoint(0.3, 1.2)
    assert inversion_product(k, z) == pytest.approx(-1, abs=1e-12)
    assert conjugation_residual(k, z) < 1e-12
    assert equivariance_residual(k, z, UnimodularMatrix(2, 1, 1, 1)) < 1e-9
    assert imaginary_axis_check(k, [1.1, 1.5, 2.0]) < 1e-12


@pytest.mark.parametrize(
    "k, expected", [(18, 16 * math.pi / 3), (20, 20 * math.pi / 3), (16, 20 * math.pi / 3)]
)
def test_w_endpoint(k, expected):
    table = w_table(k)
    assert expected_w_endpoint(k) == pytest.approx(expected)
    assert table.values[-1] == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("k", [12, 14, 16])
def test_w_is_increasing_and_symmetric(k):
    table = w_table(k)
    assert np.all(np.diff(table.values) > 0)
    _, values = table.grid()
    sums = values + values[::-1]
    assert np.ptp(sums) < 1e-6
    middle, ends = w_midpoint(k, table)
    assert middle == pytest.approx(expected_w_midpoint(k), abs=1e-6)
    assert ends == pytest.approx(2 * expected_w_midpoint(k), abs=1e-6)


def test_sign_pattern_on_the_line():
    table = pole_table(16)
    assert pole_limit_signs(16, table) == [
        expected_limit_signs(16, m) for m in range(1, table.n + 1)
    ]
    assert band_signs(16, table) == [
        {expected_band_sign(16, m)} for m in range(1, table.n + 2)
    ]


def test_locus_k16():
    curves = trace_locus(16)
    assert len(curves) == 3
    table = pole_table(16)
    assert curves[0].end == ASYMPTOTE
    assert abs(float(curves[0].polyline[-1].re) - 0.25) < 0.02
    for curve in curves[1:]:
        assert complex(curve.end) == pytest.approx(complex(0.5, table.b_values[curve.index - 1]))
    for curve in curves:
        assert abs(complex(curve.start)) == pytest.approx(1, abs=1e-12)
        assert np.all(np.abs(curve.phi_values) >= 1 - 1e-9)


def test_locus_k8():
    (curve,) = trace_locus(8)
    assert curve.index == 0
    assert curve.end == ASYMPTOTE


def test_mirrored_curve():
    curve = LocusCurve(
        index=0,
        polyline=[HalfPlanePoint(0.3, 0.96), HalfPlanePoint(0.28, 1.5)],
        start=HalfPlanePoint(0.3, 0.96),
        end=ASYMPTOTE,
        phi_values=np.array([1.0, 2.0]),
    )
    mirrored = curve.mirrored()
    assert complex(mirrored.start) == pytest.approx(complex(-0.3, 0.96))
    assert list(mirrored.phi_values) == [-1.0, -2.0]
    assert curve.to_json()["points"][1] == [0.28, 1.5]


def test_parse_lambda():
    assert parse_lambda("3/2") == Fraction(3, 2)
    assert parse_lambda(" -7/3 ") == Fraction(-7, 3)
    assert parse_lambda(0.5) == 0.5
    with pytest.raises(DomainError):
        parse_lambda("three halves")


def test_no_solutions_inside_the_unit_disc_of_values():
    assert solve_phi_eq(12, Fraction(1, 2)) == []


def test_solutions_of_modulus_one_lie_on_the_arc():
    solutions = solve_phi_eq(12, 1)
    assert len(solutions) == 2
    for point in solutions:
        z = complex(point)
        assert abs(z) == pytest.approx(1, abs=1e-12)
        assert math.pi / 3 < math.atan2(z.imag, z.real) < 2 * math.pi / 3
        assert phi(12, point).complex == pytest.approx(1, abs=1e-9)


def test_solutions_in_the_interior():
    solutions = solve_phi_eq(16, "3/2")
    assert len(solutions) == 3
    for point in solutions:
        z = complex(point)
        assert abs(z) > 1 + 1e-6
        assert abs(z.real) < 0.5
        assert phi(16, point).complex == pytest.approx(1.5, abs=1e-9)


def test_winding_count_matches_the_number_of_solutions():
    assert winding_count(16, Fraction(3, 2)) == pytest.approx(3, abs=1e-6)
    assert winding_count(16, 0) == pytest.approx(0, abs=1e-6)


def test_zeros_in_translate_on_the_line():
    zeros = zeros_in_gamma_D(12, UnimodularMatrix(1, 0, 1, 1))
    assert len(zeros) == 2
    for zero in zeros:
        assert float(zero.image.re) == pytest.approx(0.5, abs=1e-9)
        assert SQRT3_OVER_6 < float(zero.image.im) < SQRT3_OVER_2
        assert zero.residual < 1e-9
        assert zero.derivative < 1e-8
        assert set(zero.to_row()) == {"tau_re", "tau_im", "re", "im", "residual", "derivative"}


@pytest.mark.parametrize("gamma", [UnimodularMatrix(0, -1, 1, 0), UnimodularMatrix(1, 0, 2, 1)])
def test_translates_without_zeros(gamma):
    assert zeros_in_gamma_D(12, gamma) == []


def test_zeros_in_gamma_D_needs_c():
    with pytest.raises(DomainError):
        zeros_in_gamma_D(12, UnimodularMatrix(1, 1, 0, 1))


@pytest.mark.parametrize("k, expected", [(12, 3), (8, 3), (4, 1)])
def test_total_line_count(k, expected):
    assert total_line_count(k) == expected


@pytest.mark.parametrize("case", SAMPLE_CASES)
def test_sample_matrix(case):
    rng = random.Random(7)
    for _ in range(20):
        gamma = sample_matrix(case, rng)
        assert gamma.a * gamma.d - gamma.b * gamma.c == 1
        assert gamma.c != 0
        if case == "d<c":
            assert abs(gamma.d) < abs(gamma.c)
        elif case == "d=c":
            assert abs(gamma.d) == abs(gamma.c)
        else:
            assert abs(gamma.d) > abs(gamma.c)
    with pytest.raises(DomainError):
        sample_matrix("d!=c")


def test_trajectory_passes_through_plus_and_minus_one():
    rows = trajectory(12)
    crossings = [row for row in rows if row["segment"] == "crossing"]
    assert len(crossings) == 4
    assert sorted(round(row["phi_re"]) for row in crossings) == [-1, -1, 1, 1]
    assert {"right", "top", "left", "arc"} <= {row["segment"] for row in rows}


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 42, 2))
def test_solution_counts(k):
    table = pole_table(k)
    curves = trace_locus(k, table=table)
    for text in VERIFY_LAMBDAS:
        lam = Fraction(text)
        expected = (k + 2) // 6 if abs(lam) >= 1 else 0
        assert len(solve_phi_eq(k, lam, curves=curves, table=table)) == expected


@pytest.mark.slow
@pytest.mark.parametrize("k", [8, 12, 16, 20, 26])
@pytest.mark.parametrize("case", SAMPLE_CASES)
def test_transported_zeros(k, case):
    rng = random.Random(k)
    table = pole_table(k)
    curves = trace_locus(k, table=table)
    for _ in range(10):
        gamma = sample_matrix(case, rng)
        zeros = zeros_in_gamma_D(k, gamma, curves=curves, table=table)
        assert len(zeros) == (0 if case == "d<c" else (k + 2) // 6)


def test_phi_derivative_matches_a_difference_quotient():
    z = complex(0.2, 1.3)
    h = 1e-6
    quotient = (phi(12, z + h).complex - phi(12, z - h).complex) / (2 * h)
    assert phi_derivative(12, z).complex == pytest.approx(quotient, rel=1e-6)


@pytest.mark.parametrize("k", [12, 22])
def test_locus_components_end_at_the_poles(k):
    table = pole_table(k)
    curves = trace_locus(k, table=table)
    assert len(curves) == (k + 2) // 6 == table.n + 1
    assert curves[0].end == ASYMPTOTE
    for curve in curves[1:]:
        assert complex(curve.end) == pytest.approx(complex(0.5, table.b_values[curve.index - 1]))


@pytest.mark.parametrize("lam", [math.sqrt(2), -math.pi])
def test_solutions_for_irrational_values(lam):
    solutions = solve_phi_eq(16, lam)
    assert len(solutions) == 3
    for point in solutions:
        assert phi(16, point).complex == pytest.approx(lam, abs=1e-9)


@pytest.mark.parametrize("k, expected", [(28, 9), (30, 9), (36, 11), (38, 13)])
def test_total_line_count_past_k26(k, expected):
    assert total_line_count(k) == expected


@pytest.mark.parametrize("k", [40, 60])
def test_pole_table_for_larger_weights(k):
    table = pole_table(k)
    assert table.n == (k - 4) // 6
    values = sorted(table.b_values + table.c_values, reverse=True)
    assert values == [x for pair in zip(table.c_values, table.b_values) for x in pair]


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 122, 2))
def test_pole_table_and_line_count_sweep(k):
    table = pole_table(k)
    assert table.n == (k - 4) // 6
    assert total_line_count(k) == 1 + 2 * ((k - 2) // 6)
