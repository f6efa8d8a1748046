import math
import random

import pytest

from critzeros import (
    bracket_table,
    e2_line_zero,
    expected_g_signs,
    line_endpoint_zero,
    locate_arc_zeros,
    locate_line_zeros,
    bracket_sign,
    second_derivative_spot_check,
    sign_machinery,
    translated_line_zeros,
)
from numkernel import ContradictionError, DomainError

SQRT3_OVER_2 = math.sqrt(3) / 2


def test_bracket_table_small_weights():
    table = bracket_table(4)
    assert table.M == 0
    assert table.t_values == ()
    assert not table.includes_base_interval
    assert table.intervals() == []


def test_bracket_table_k12():
    table = bracket_table(12)
    assert table.M == 2
    assert table.t_values[0] == pytest.approx(0.5 / math.tan(math.pi / 13))
    assert table.t_values[0] == pytest.approx(2.0286, abs=1e-4)
    assert table.t_values[1] == pytest.approx(0.9813, abs=1e-4)
    assert not table.includes_base_interval
    assert table.intervals() == [(table.t_values[1], table.t_values[0])]


def test_bracket_table_k10_has_base_interval():
    table = bracket_table(10)
    assert table.M == 1
    assert table.includes_base_interval
    assert table.intervals() == [(pytest.approx(SQRT3_OVER_2), table.t_values[0])]


def test_bracket_table_rejects_odd_weight():
    with pytest.raises(DomainError):
        bracket_table(11)


@pytest.mark.parametrize("k, m, sign", [(12, 1, -1), (12, 2, 1), (31, 5, -1), (24, 3, -1)])
@pytest.mark.parametrize("route", ["qseries", "lattice"])
def test_bracket_sign(k, m, sign, route):
    certificate = bracket_sign(k, m, route=route)
    assert certificate.sign == sign
    assert abs(certificate.value) > certificate.bound


def test_bracket_sign_rejects_out_of_range_index():
    with pytest.raises(DomainError):
        bracket_sign(12, 3)
    with pytest.raises(DomainError):
        bracket_sign(12, 0)


def test_sign_machinery_series_regime():
    report = sign_machinery(12, 1)
    assert report.regime == "series"
    assert report.passed, report.checks


def test_sign_machinery_lattice_regime():
    report = sign_machinery(31, 5)
    assert report.regime == "lattice"
    assert report.passed, report.checks
    assert report.dominant < 0
    assert report.remainder < abs(report.dominant)


def test_line_zero_k10_in_base_interval():
    records = locate_line_zeros(10)
    assert len(records) == 1
    (record,) = records
    assert float(record.location.re) == 0.5
    assert SQRT3_OVER_2 < float(record.location.im) < bracket_table(10).t_values[0]


def test_line_zero_k12_between_brackets():
    table = bracket_table(12)
    (record,) = locate_line_zeros(12)
    assert table.t_values[1] < float(record.location.im) < table.t_values[0]
    assert record.classification == "nontrivial"
    assert record.simplicity_margin > 1e6 * record.residual


def test_k8_has_only_the_endpoint_zero():
    assert locate_line_zeros(8) == []
    endpoint = line_endpoint_zero(8)
    assert endpoint is not None
    assert endpoint.classification == "trivial"
    assert float(endpoint.location.im) == pytest.approx(SQRT3_OVER_2)
    records = locate_line_zeros(8, include_endpoint=True)
    assert [record.kind for record in records] == ["endpoint"]


@pytest.mark.parametrize("k", [4, 6, 10, 12])
def test_endpoint_is_not_a_zero_off_the_residue_class(k):
    assert line_endpoint_zero(k) is None


def test_translated_line_zeros():
    records = locate_line_zeros(16)
    shifted = translated_line_zeros(records)
    for original, moved in zip(records, shifted):
        assert float(moved.location.re) == pytest.approx(-0.5)
        assert moved.location.im == original.location.im
        assert moved.residual <= 1e-9


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 122, 2))
def test_line_zero_count_law(k):
    records = locate_line_zeros(k)
    assert len(records) == (k - 4) // 6
    table = bracket_table(k)
    for record, (lo, hi) in zip(records, sorted(table.intervals())):
        assert lo < float(record.location.im) < hi
        assert record.simplicity_margin > 1e6 * record.residual
    assert (line_endpoint_zero(k) is not None) == (k % 6 == 2)


def test_arc_zeros_k16_endpoints_are_simple_zeros():
    records = locate_arc_zeros(16)
    assert len(records) == 4
    assert records[0].theta == pytest.approx(math.pi / 3)
    assert records[-1].theta == pytest.approx(2 * math.pi / 3)
    assert [record.g_sign for record in records] == [-1, 1, -1, 1]


def test_arc_zeros_k18_interior_only():
    records = locate_arc_zeros(18)
    assert len(records) == 3
    assert all(math.pi / 3 < record.theta < 2 * math.pi / 3 for record in records)
    assert [record.g_sign for record in records] == [1, -1, 1]


def test_arc_zeros_k20_double_endpoints():
    records = locate_arc_zeros(20)
    assert [record.kind for record in records] == ["endpoint", "arc", "arc", "endpoint"]
    assert records[0].order == records[-1].order == 2
    assert [record.g_sign for record in records] == expected_g_signs(20)


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 50, 2))
def test_arc_zero_signs_alternate(k):
    signs = [record.g_sign for record in locate_arc_zeros(k) if record.g_sign]
    assert all(a == -b for a, b in zip(signs, signs[1:]))


def test_e2_zero_on_imaginary_axis():
    record = e2_line_zero(0.4, 0.7)
    assert float(record.location.im) == pytest.approx(0.5235, abs=1e-3)
    assert record.simplicity_margin > 0
    assert record.residual < 1e-20


def test_e2_zero_needs_a_sign_change():
    with pytest.raises(DomainError):
        e2_line_zero(2, 3)


def test_second_derivative_zeros_are_simple():
    for record in second_derivative_spot_check(24):
        assert record.kind == "d2"
        assert record.simplicity_margin > 1e6 * record.residual


def test_contradiction_error_is_an_assertion_error():
    assert issubclass(ContradictionError, AssertionError)


def _lattice_cases(count=30):
    rng = random.Random(80)
    cases = []
    while len(cases) < count:
        k = rng.randint(5, 80)
        cases.append((k, rng.randint(1, (k + 1) // 6)))
    return cases


@pytest.mark.slow
@pytest.mark.parametrize("k, m", _lattice_cases())
def test_bracket_sign_routes_agree(k, m):
    series = bracket_sign(k, m, route="qseries")
    lattice = bracket_sign(k, m, route="lattice")
    assert series.sign == lattice.sign == series.expected
    assert abs(lattice.value) > lattice.bound


@pytest.mark.parametrize("k", range(6, 82, 2))
def test_sign_machinery_series_regime_sweep(k):
    m = 1
    while 3 * m * m <= k and m <= (k + 1) // 6:
        report = sign_machinery(k, m)
        assert report.regime == "series"
        assert report.checks["alternating signs"]
        assert report.passed, (k, m, report.checks)
        m += 1
