import math

import pytest

from critzeros import locate_line_zeros
from numkernel import DomainError, EvalResult, RefinementLimitError, ZeroOnCurveError
from winding import (
    CircleArc,
    UnitArc,
    arg_at_endpoint,
    arg_variation,
    build_critical_contour,
    build_phi_contour,
    compute_A,
    compute_B,
    contour_count_I,
    contour_variation,
    edge_cancellation,
    expected_A,
    expected_B,
    expected_I,
    gk_curve,
    total_variation,
)


def power(n):
    def evaluate(z, budget):
        return EvalResult(z**n, 0.0, 0)

    return evaluate


def test_identity_on_upper_semicircle():
    trace = arg_variation(power(1), UnitArc(0, math.pi))
    assert trace.total_variation == pytest.approx(math.pi, abs=1e-12)
    reverse = arg_variation(power(1), UnitArc(math.pi, 0))
    assert reverse.total_variation == pytest.approx(-math.pi, abs=1e-12)


def test_refinement_follows_fast_rotation():
    trace = arg_variation(power(5), CircleArc(0, 1, 0, 2 * math.pi))
    assert trace.total_variation == pytest.approx(10 * math.pi, abs=1e-9)
    assert len(trace) > 17
    steps = [b - a for a, b in zip(trace.unwrapped_args, trace.unwrapped_args[1:])]
    assert max(abs(step) for step in steps) < math.pi / 2


def test_refinement_limit():
    with pytest.raises(RefinementLimitError):
        arg_variation(power(5), CircleArc(0, 1, 0, 2 * math.pi), max_samples=20)


def test_zero_on_curve_is_reported():
    def shifted(z, budget):
        return EvalResult(z - 1, 0.0, 0)

    with pytest.raises(ZeroOnCurveError) as info:
        arg_variation(shifted, UnitArc(0, math.pi))
    assert info.value.parameter == 0.0


def test_trace_rows():
    rows = arg_variation(power(1), UnitArc(0, math.pi)).to_rows()
    assert list(rows[0]) == ["parameter", "re", "im", "unwrapped_arg"]
    assert rows[0]["re"] == pytest.approx(1.0)
    assert rows[-1]["unwrapped_arg"] == pytest.approx(math.pi)


def test_contours_are_closed():
    plain = build_critical_contour(12, 3.0, 0.02, [1.5])
    assert plain.closed
    assert len(plain.labelled("corner")) == 0
    cornered = build_critical_contour(20, 3.0, 0.02, [1.5, 2.5])
    assert cornered.closed
    assert len(cornered.labelled("corner")) == 2
    assert all(segment.clockwise for segment in cornered.labelled("corner"))
    phi = build_phi_contour(12, 4.0, 0.02, [1.2, 2.0])
    assert phi.closed
    assert all(segment.inside and segment.clockwise for segment in phi.labelled("right", "left"))
    with_arc = build_phi_contour(8, 4.0, 0.02, [], arc_points=[1.6, 1.9], corner_eps=1e-3)
    assert with_arc.closed
    arc_detours = with_arc.labelled("arc")
    assert [s.kind for s in arc_detours].count("detour") == 2
    assert not any(s.inside or s.clockwise for s in arc_detours if s.kind == "detour")


def test_line_detours_turn_outward_on_the_right_and_inward_on_the_left():
    contour = build_critical_contour(16, 3.0, 0.02, [1.5])
    (right,) = [s for s in contour.labelled("right") if s.kind == "detour"]
    (left,) = [s for s in contour.labelled("left") if s.kind == "detour"]
    assert not right.inside and not right.clockwise
    assert left.inside and left.clockwise


def test_overlapping_detours_are_rejected():
    with pytest.raises(DomainError):
        build_critical_contour(16, 3.0, 0.1, [1.5, 1.6])
    with pytest.raises(DomainError):
        build_critical_contour(16, 3.0, 0.1, [0.9])


@pytest.mark.parametrize("k", [12, 16, 18, 20])
def test_arc_variations(k):
    a = compute_A(k)
    b = compute_B(k)
    assert a == pytest.approx(expected_A(k), abs=1e-6)
    assert b == pytest.approx(expected_B(k), abs=1e-6)
    assert a == pytest.approx(b - (k + 2) * math.pi / 6, abs=1e-6)


def test_expected_closed_forms():
    assert expected_A(16) == pytest.approx(-6 * math.pi)
    assert expected_A(18) == pytest.approx(-6 * math.pi)
    assert expected_B(18) == pytest.approx(-8 * math.pi / 3)
    assert expected_B(20) == pytest.approx(-3 * math.pi)
    assert [expected_I(k) for k in (4, 8, 10, 16, 20)] == [0, 0, 1, 2, 2]


@pytest.mark.parametrize("k", [8, 12, 16, 20])
def test_contour_count(k):
    count = contour_count_I(k)
    assert count == pytest.approx(expected_I(k), abs=1e-6)


def test_contour_count_does_not_depend_on_the_detour_radius():
    heights = [float(record.location.im) for record in locate_line_zeros(16)]
    first = contour_count_I(16, eps=0.01, line_zeros=heights)
    second = contour_count_I(16, eps=0.004, line_zeros=heights)
    assert round(first) == round(second) == 2
    assert first == pytest.approx(second, abs=1e-6)


def test_vertical_edges_cancel():
    assert edge_cancellation(16) < 1e-8


@pytest.mark.parametrize("k", [6, 12, 18])
def test_g_direction_at_the_left_endpoint(k):
    assert arg_at_endpoint(k) == pytest.approx(-math.pi / 3, abs=1e-9)


def test_gk_curve_stops_short_of_double_zeros():
    trace = gk_curve(20)
    assert abs(trace.values[0]) > 0
    assert trace.label == "gk"


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 42, 2))
def test_winding_laws(k):
    assert compute_A(k) == pytest.approx(expected_A(k), abs=1e-6)
    assert compute_B(k) == pytest.approx(expected_B(k), abs=1e-6)
    assert contour_count_I(k) == pytest.approx(expected_I(k), abs=1e-6)


def test_contour_variation_adds_up_per_segment():
    contour = build_critical_contour(12, 3.0, 0.02, [1.5])

    def around(center):
        def evaluate(z, budget):
            return EvalResult(z - center, 0.0, 0)

        return evaluate

    traces = contour_variation(around(complex(0.1, 1.5)), contour)
    assert len(traces) == len(contour)
    assert abs(total_variation(traces)) == pytest.approx(2 * math.pi, abs=1e-9)
    outside = contour_variation(around(complex(0.1, 3.5)), contour)
    assert total_variation(outside) == pytest.approx(0, abs=1e-9)
