import math
from fractions import Fraction

import numpy as np
import pytest

from nessdrag import asymptotics as A
from nessdrag.params import SIInputs, SystemParams, from_si
from nessdrag.response import ResponseContext


def test_rational_identities():
    assert A.LTE_COEFF + A.J_COEFF == Fraction(81, 16)
    assert 90 * Fraction(21, 20) + 72 * Fraction(87, 80) == Fraction(864, 5)
    assert A.total_si_identity() and A.dimensionless_identity()
    assert A.averaged_deficit() == Fraction(29, 35)
    assert float(A.averaged_deficit()) == pytest.approx(0.82857, abs=1e-5)


def test_fig2_values(ctx):
    V = 1e-5
    shift = 5.97835e-5 / (24 * math.pi * 1e-3)
    base = shift * 0.01 / (24 * math.pi) * V**3 / 1e-7
    assert A.lte_low_v(ctx, V) == pytest.approx(45 / 16 * base, rel=1e-4)
    assert A.lte_low_v(ctx, V) == pytest.approx(2.95e-15, rel=0.01)
    assert A.total_low_v(ctx, V) == pytest.approx(5.32e-15, rel=0.01)
    assert A.total_low_v(ctx, V) == A.lte_low_v(ctx, V) + A.j_low_v(ctx, V)
    assert A.j_low_v(ctx, V) / A.lte_low_v(ctx, V) == pytest.approx(0.8, rel=1e-12)


def test_include_shift(ctx):
    ratio = A.lte_low_v(ctx, 1e-5, include_shift=True) / A.lte_low_v(ctx, 1e-5)
    assert 1 < ratio < 1.002


def test_v_cubed(ctx):
    assert A.j_low_v(ctx, 2e-5) / A.j_low_v(ctx, 1e-5) == pytest.approx(8.0, rel=1e-12)
    with pytest.raises(ValueError):
        A.lte_low_v(ctx, 0.0)


def random_inputs(rng):
    return SIInputs(alpha0=10 ** rng.uniform(-40, -38), omega_p=10 ** rng.uniform(15.5, 16.5),
                    Gamma=10 ** rng.uniform(13, 15), z_a=10 ** rng.uniform(-9, -7),
                    omega_a=10 ** rng.uniform(14.5, 15.5), v=10 ** rng.uniform(1, 5))


@pytest.mark.parametrize("seed", range(10))
def test_si_and_dimensionless_forms_agree(seed):
    inputs = random_inputs(np.random.default_rng(seed))
    params, norm, V = from_si(inputs)
    c = ResponseContext.from_params(params)
    F0 = norm.F0_SI
    pairs = [
        (A.lte_low_v_si(inputs), A.lte_low_v(c, V, averaged=True)),
        (A.j_low_v_si(inputs), A.j_low_v(c, V, averaged=True)),
        (A.total_low_v_si(inputs), A.total_low_v(c, V, averaged=True)),
        (A.gamma_form_si(inputs), A.gamma_form(c, V)),
        (A.lte_low_v_si(inputs, c.factors.A_lte), A.lte_low_v(c, V)),
        (A.j_low_v_si(inputs, c.factors.A_j), A.j_low_v(c, V)),
    ]
    for si, dimless in pairs:
        assert si / F0 == pytest.approx(dimless, rel=1e-10)
    assert A.induced_damping(c) * norm.omega_sp == pytest.approx(A.gamma_induced_si(inputs), rel=1e-10)
    high = A.high_v(c, V)
    if high > 1e-300:
        assert A.high_v_si(inputs) / F0 == pytest.approx(high, rel=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_gamma_form_equals_averaged_total(seed):
    rng = np.random.default_rng(100 + seed)
    p = SystemParams(rng.uniform(0.05, 1), rng.uniform(0.01, 1), rng.uniform(0.01, 1), 10 ** rng.uniform(-7, -3))
    c = ResponseContext.from_params(p)
    V = 10 ** rng.uniform(-7, -2)
    assert A.gamma_form(c, V) == pytest.approx(A.total_low_v(c, V, averaged=True), rel=1e-12)


def test_induced_damping_distance_law(ctx):
    p = ctx.params
    far = ResponseContext.from_params(SystemParams(p.xi_a, p.Z * 2 ** (1 / 3), p.eta, p.alpha_sp))
    assert A.induced_damping(far) == pytest.approx(A.induced_damping(ctx) / 2, rel=1e-12)


def test_high_v(ctx):
    p = ctx.params
    V = 4e-3
    x = 2 * p.Z * p.xi_a / V
    expected = p.eta / 24 * math.sqrt(p.xi_a**7 / (math.pi * p.Z**5 * V**3)) * (1 + 5 / x) * math.exp(-x)
    assert A.high_v(ctx, V) == pytest.approx(expected, rel=1e-12)
    assert A.high_v(ctx, 1e-4) < 1e-150
    assert A.high_v(ctx, 1e-6, with_flag=True) == (0.0, True)
    assert A.high_v(ctx, V, with_flag=True)[1] is False
    grid = np.geomspace(2e-3, 2e-2, 20)
    values = [A.high_v(ctx, v) for v in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_crossover(ctx):
    v_star = A.crossover_velocity(ctx)
    assert 1e-3 / 3 < v_star < 3e-3
    assert A.total_low_v(ctx, v_star) == pytest.approx(A.high_v(ctx, v_star), rel=1e-4)
    p = ctx.params
    bigger = ResponseContext.from_params(SystemParams(0.3, p.Z, p.eta, p.alpha_sp, p.orientation))
    assert A.crossover_velocity(bigger) > v_star
    with pytest.raises(A.CrossoverError):
        A.crossover_velocity(ctx, 1e-6, 1e-4)
    with pytest.raises(ValueError):
        A.crossover_velocity(ctx, 1e-2, 1e-3)


def test_registry(ctx):
    assert set(A.LAWS) == {"low_lte", "low_j", "low_total", "high_resonant", "gamma_form"}
    low = A.LAWS["low_total"].evaluate
    assert low(ctx, 1e-5) == A.LAWS["low_lte"].evaluate(ctx, 1e-5) + A.LAWS["low_j"].evaluate(ctx, 1e-5)
