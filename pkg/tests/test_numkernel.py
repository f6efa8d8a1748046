import random
from fractions import Fraction

import mpmath
import pytest

from conf import DEFAULT_PRECISION_BITS, PRECISION_BITS_PER_WEIGHT
from numkernel import (
    CertificationError,
    DomainError,
    EvalBudget,
    HalfPlanePoint,
    InconsistencyError,
    bernoulli,
    divisor_power_sum,
    eisenstein_coefficient,
    eisenstein_jet,
    eval_delta,
    eval_Ek,
    eval_Ek_deriv,
    eval_fk_gk,
    eval_Gk_lattice,
    eval_hk,
    eval_hk_lattice,
    get_context,
    hk_to_derivative_factor,
    with_escalation,
)

I = complex(0, 1)


def rho(bits=128):
    ctx = get_context(bits)
    return HalfPlanePoint(-ctx.mpf(1) / 2, ctx.sqrt(3) / 2)


def test_bernoulli_closed_forms():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert eisenstein_coefficient(2) == -24
    assert eisenstein_coefficient(4) == 240
    assert eisenstein_coefficient(6) == -504


@pytest.mark.parametrize("k", [3, 0, -2, 2.0])
def test_bernoulli_rejects_bad_weight(k):
    with pytest.raises(DomainError):
        bernoulli(k)


def test_divisor_power_sum():
    assert divisor_power_sum(12, 1) == 28
    assert divisor_power_sum(6, 3) == 252
    assert divisor_power_sum(1, 7) == 1
    assert divisor_power_sum(9, 0) == 3
    with pytest.raises(DomainError):
        divisor_power_sum(0, 1)


def test_half_plane_point_rejects_real_axis():
    with pytest.raises(DomainError):
        HalfPlanePoint(0.3, 0)
    with pytest.raises(DomainError):
        HalfPlanePoint(0.3, -1)


def test_budget_escalation_doubles_precision():
    budget = EvalBudget(working_precision_bits=64, max_terms=10, target_rel_error=1e-10)
    bigger = budget.escalated(2)
    assert bigger.working_precision_bits == 256
    assert bigger.max_terms == 40
    assert bigger.target_rel_error == pytest.approx(1e-40)
    with pytest.raises(DomainError):
        EvalBudget(target_abs_error=0)


def test_e4_at_i_matches_gamma_closed_form(budget):
    result = eval_Ek(4, I, budget)
    mp = get_context(256)
    expected = 3 * mp.gamma(mp.mpf(1) / 4) ** 8 / (2 * mp.pi) ** 6
    assert abs(result.value - expected) <= result.tail_bound + 1e-35
    assert result.tail_bound <= 1e-30
    assert result.is_certified_nonzero()


def test_e2_at_i_is_three_over_pi(budget):
    ctx = get_context(budget.working_precision_bits)
    result = eval_Ek(2, I, budget)
    assert abs(result.value - 3 / ctx.pi) < 1e-30


def test_e6_vanishes_at_i_and_e4_at_rho(budget):
    assert abs(eval_Ek(6, I, budget).value) <= 1e-29
    assert abs(eval_Ek(4, rho(), budget).value) <= 1e-29


def test_eval_ek_rejects_odd_weight_and_lower_half_plane(budget):
    with pytest.raises(DomainError):
        eval_Ek(5, I, budget)
    with pytest.raises(DomainError):
        eval_Ek(4, complex(0.2, -1), budget)


def test_ramanujan_identity_for_e4_derivative(budget):
    ctx = get_context(budget.working_precision_bits)
    z = complex(0.13, 0.92)
    e2, e4, e6 = (eval_Ek(k, z, budget).value for k in (2, 4, 6))
    derivative = eval_Ek_deriv(4, z, 1, budget)
    expected = 2 * ctx.pi * ctx.j * (e2 * e4 - e6) / 3
    assert abs(derivative.value - expected) < 1e-25


def test_jet_agrees_with_single_evaluations(budget):
    z = complex(-0.31, 1.4)
    jet = eisenstein_jet(8, z, order=2, budget=budget)
    assert len(jet) == 3
    assert abs(jet[0].value - eval_Ek(8, z, budget).value) < 1e-28
    assert abs(jet[2].value - eval_Ek_deriv(8, z, 2, budget).value) < 1e-25


def test_hk_relates_to_derivative(budget):
    z = complex(0.5, 1.1)
    ctx = get_context(budget.working_precision_bits)
    h = eval_hk(10, z, budget)
    derivative = eval_Ek_deriv(10, z, 1, budget)
    assert abs(hk_to_derivative_factor(10, ctx) * h.value - derivative.value) < 1e-25


@pytest.mark.parametrize("k", [4, 5, 12])
def test_hk_lattice_oracle_matches_series(k, budget):
    z = complex(0.1, 1.2)
    series = eval_hk(k, z, budget)
    lattice = eval_hk_lattice(k, z, budget)
    assert abs(series.value - lattice.value) <= series.tail_bound + lattice.tail_bound + 1e-28


def test_gk_lattice_is_two_zeta_times_ek(budget):
    ctx = get_context(budget.working_precision_bits)
    z = complex(-0.2, 1.05)
    lattice = eval_Gk_lattice(4, z, budget)
    series = eval_Ek(4, z, budget)
    expected = 2 * ctx.zeta(4) * series.value
    assert abs(lattice.value - expected) < 1e-25
    with pytest.raises(DomainError):
        eval_Gk_lattice(2, z, budget)


def test_delta_product_matches_gamma_value(budget):
    mp = get_context(256)
    expected = mp.gamma(mp.mpf(1) / 4) ** 24 / (2**24 * mp.pi**18)
    result = eval_delta(I, budget)
    assert abs(result.value - expected) <= result.tail_bound + 1e-35


def test_delta_agrees_with_e4_e6_combination(budget):
    z = complex(0.25, 1.3)
    e4 = eval_Ek(4, z, budget).value
    e6 = eval_Ek(6, z, budget).value
    assert abs(eval_delta(z, budget).value - (e4**3 - e6**2) / 1728) < 1e-27


def test_small_budget_raises_certification_error():
    budget = EvalBudget(max_terms=1)
    with pytest.raises(CertificationError) as info:
        eval_Ek(4, complex(0.1, 0.3), budget)
    assert info.value.best_bound is not None


def test_with_escalation_retries_until_success():
    seen = []

    def flaky(budget):
        seen.append(budget.working_precision_bits)
        if len(seen) < 3:
            raise CertificationError("not yet", best_bound=1.0)
        return budget.working_precision_bits

    assert with_escalation(flaky, budget=EvalBudget(working_precision_bits=64)) == 256
    assert seen == [64, 128, 256]


def test_unit_circle_values_are_real_and_vanish_at_rho(budget):
    ctx = get_context(budget.working_precision_bits)
    f, g = eval_fk_gk(4, 2 * ctx.pi / 3, budget)
    assert abs(f.value) <= f.tail_bound + 1e-30
    assert g.is_certified_nonzero()
    f_mid, _ = eval_fk_gk(4, mpmath.pi / 2, budget)
    # f_4(pi/2) = e^{i pi} E_4(i) = -E_4(i)
    assert f_mid.real == pytest.approx(-1.4557628922687093, rel=1e-12)


def test_unit_circle_rejects_out_of_range_angle(budget):
    with pytest.raises(DomainError):
        eval_fk_gk(4, 0, budget)
    with pytest.raises(DomainError):
        eval_fk_gk(2, 1.0, budget)


def test_inconsistency_error_is_arithmetic_error():
    assert issubclass(InconsistencyError, ArithmeticError)


@pytest.mark.parametrize("k", [2, 4, 12])
def test_series_are_periodic(k, budget):
    z = complex(0.3, 0.9)
    for evaluate in (eval_Ek, eval_hk):
        here, shifted = evaluate(k, z, budget), evaluate(k, z + 1, budget)
        assert abs(here.value - shifted.value) <= here.tail_bound + shifted.tail_bound + 1e-35


def test_ek_is_one_far_up(budget):
    assert abs(eval_Ek(4, complex(0.1, 50), budget).value - 1) <= 1e-30


@pytest.mark.parametrize("k", [4, 6, 12, 20])
def test_ek_transforms_under_inversion(k, budget):
    ctx = get_context(budget.working_precision_bits)
    zc = ctx.mpc(0.2, 1.1)
    inverted = eval_Ek(k, -1 / zc, budget)
    here = eval_Ek(k, zc, budget)
    gap = abs(inverted.value - zc**k * here.value)
    assert gap <= inverted.tail_bound + abs(zc) ** k * here.tail_bound + 1e-25


@pytest.mark.parametrize("k", [4, 8])
def test_gk_lattice_transforms_under_inversion(k, budget):
    ctx = get_context(budget.working_precision_bits)
    zc = ctx.mpc(-0.15, 1.2)
    inverted = eval_Gk_lattice(k, -1 / zc, budget).value
    expected = zc**k * eval_Gk_lattice(k, zc, budget).value
    assert abs(inverted - expected) <= 1e-10 * abs(expected)


@pytest.mark.parametrize("gamma", [(0, -1, 1, 0), (2, 1, 1, 1), (1, 0, 2, 1)])
def test_e2_is_quasi_modular(gamma, budget):
    ctx = get_context(budget.working_precision_bits)
    a, b, c, d = gamma
    zc = ctx.mpc(0.1, 1.3)
    moved = (a * zc + b) / (c * zc + d)
    lhs = eval_Ek(2, moved, budget).value
    rhs = (c * zc + d) ** 2 * eval_Ek(2, zc, budget).value + 12 * c * (c * zc + d) / (
        2 * ctx.pi * ctx.j
    )
    assert abs(lhs - rhs) < 1e-25


@pytest.mark.parametrize("k", range(4, 22, 2))
def test_values_on_the_line_re_one_half(k, budget):
    ctx = get_context(budget.working_precision_bits)
    for t in (0.9, 1.3, 2.0):
        z = HalfPlanePoint(ctx.mpf(1) / 2, ctx.mpf(t))
        value = eval_Ek(k, z, budget)
        slope = eval_Ek_deriv(k, z, 1, budget)
        assert abs(value.value.imag) <= value.tail_bound + 1e-30 * max(1, abs(value.value))
        assert abs(slope.value.real) <= slope.tail_bound + 1e-30 * max(1, abs(slope.value))


@pytest.mark.parametrize("k", [8, 12, 14])
def test_fk_reflects_across_pi_over_two(k, budget):
    sign = (-1) ** (k // 2)
    for theta in (1.2, 1.4, 1.9):
        f, _ = eval_fk_gk(k, theta, budget)
        f_reflected, _ = eval_fk_gk(k, mpmath.pi - theta, budget)
        assert f_reflected.real == pytest.approx(sign * f.real, abs=1e-10)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_derivatives_match_difference_quotients(r, budget):
    z, h = complex(0.21, 1.05), 1e-6

    def lower(point):
        if r == 1:
            return eval_Ek(8, point, budget).complex
        return eval_Ek_deriv(8, point, r - 1, budget).complex

    quotient = (lower(z + h) - lower(z - h)) / (2 * h)
    assert eval_Ek_deriv(8, z, r, budget).complex == pytest.approx(quotient, rel=1e-4)


@pytest.mark.slow
def test_lattice_oracle_agrees_at_random_points(budget):
    rng = random.Random(2024)
    for _ in range(50):
        k = rng.randint(2, 30)
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 3.0))
        series = eval_hk(k, z, budget)
        lattice = eval_hk_lattice(k, z, budget)
        slack = 1e-20 * max(1, abs(series.value))
        assert abs(series.value - lattice.value) <= series.tail_bound + lattice.tail_bound + slack


def test_budget_for_weight():
    budget = EvalBudget.for_signs()
    assert budget.for_weight(8) is budget
    raised = budget.for_weight(120)
    expected = DEFAULT_PRECISION_BITS // 2 + PRECISION_BITS_PER_WEIGHT * 120
    assert raised.working_precision_bits == expected
    assert raised.target_rel_error == budget.target_rel_error
