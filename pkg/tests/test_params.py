import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nessdrag import constants
from nessdrag.params import (
    DEFAULT_CONFIG,
    SIInputs,
    SystemParams,
    alpha_sp_from_si,
    reference_params,
    from_si,
    omega_sp_from_plasma,
    params_from_config,
    parse_config,
    parse_dipole,
    si_inputs,
    to_si,
)

# independent constants table, hbar rounded to 10 digits (cross-table agreement ~1e-9)
HBAR = 1.054571817e-34
C = 299792458.0
EPS0 = 8.8541878128e-12
E = 1.602176634e-19

RB_ALPHA0 = 5.26e-39


def rb_inputs(v=1e3):
    w_sp = 9 * E / HBAR / math.sqrt(2)
    return SIInputs(alpha0=RB_ALPHA0, omega_p=9.0, omega_p_unit="eV", Gamma=0.1 * w_sp,
                    z_a=0.1 * C / w_sp, omega_a=0.2 * w_sp, v=v)


def test_constants_agree_with_table():
    assert constants.HBAR == pytest.approx(HBAR, rel=1e-9)
    assert constants.C == C
    assert constants.EPSILON_0 == pytest.approx(EPS0, rel=1e-9)
    assert constants.EV_TO_RAD_S == pytest.approx(E / HBAR, rel=1e-9)


def test_rb_reduction():
    params, norm, V = from_si(rb_inputs())
    assert params.Z == pytest.approx(0.1, rel=1e-9)
    assert params.eta == pytest.approx(0.1, rel=1e-9)
    assert params.xi_a == pytest.approx(0.2, rel=1e-9)
    w_sp = 9 * E / HBAR / math.sqrt(2)
    assert norm.omega_sp == pytest.approx(w_sp, rel=1e-9)
    assert norm.omega_sp * HBAR / E == pytest.approx(6.3640, abs=1e-4)
    alpha_sp = 3 * RB_ALPHA0 * w_sp**3 / (EPS0 * C**3)
    assert params.alpha_sp == pytest.approx(alpha_sp, rel=1e-9)
    assert params.alpha_sp == pytest.approx(5.97e-5, rel=2e-3)
    F0 = 3 * HBAR * w_sp**5 * RB_ALPHA0 / (2 * math.pi * EPS0 * C**4)
    assert norm.F0_SI == pytest.approx(-F0, rel=1e-9)
    assert abs(norm.F0_SI) * 1e15 == pytest.approx(0.31, abs=0.01)
    assert norm.rho == pytest.approx(0.1 * w_sp / (EPS0 * 2 * w_sp**2), rel=1e-9)


def test_to_si_sign_and_zero():
    params, norm, _ = from_si(rb_inputs())
    assert to_si(params, norm, 0.0) == 0.0
    assert to_si(params, norm, 1.0) == pytest.approx(-0.3129e-15, rel=1e-3)


pos = st.floats(min_value=1e-3, max_value=1e3)


@settings(max_examples=40, deadline=None)
@given(pos, pos, pos, pos, pos, st.floats(min_value=1e-6, max_value=0.5))
def test_round_trip(a, wp, g, z, wa, beta):
    inputs = SIInputs(alpha0=a * 1e-39, omega_p=wp * 1e15, Gamma=g * 1e13, z_a=z * 1e-9,
                      omega_a=wa * 1e14, v=beta * C)
    params, norm, V = from_si(inputs)
    back = si_inputs(params, norm, V)
    for name in ("alpha0", "omega_p", "Gamma", "z_a", "omega_a", "v"):
        assert getattr(back, name) == pytest.approx(getattr(inputs, name), rel=1e-12)


def test_omega_sp_linear():
    assert omega_sp_from_plasma(3.7e15 * 2.5) == pytest.approx(2.5 * omega_sp_from_plasma(3.7e15), rel=1e-15)


def test_alpha_sp_rescaling_invariance():
    lam = 8.0
    assert alpha_sp_from_si(lam * 1e-39, 1e16 * lam ** (-1 / 3)) == pytest.approx(
        alpha_sp_from_si(1e-39, 1e16), rel=1e-13)


@pytest.mark.parametrize("field", ["alpha0", "omega_p", "Gamma", "z_a", "omega_a", "v"])
def test_si_domain_errors_name_field(field):
    kw = dict(alpha0=1e-39, omega_p=1e16, Gamma=1e14, z_a=1e-8, omega_a=1e15, v=1e3)
    kw[field] = -1.0
    with pytest.raises(ValueError, match=field):
        SIInputs(**kw)


def test_v_below_c():
    with pytest.raises(ValueError):
        SIInputs(alpha0=1e-39, omega_p=1e16, Gamma=1e14, z_a=1e-8, omega_a=1e15, v=C)


def test_system_params_normalises_orientation():
    p = SystemParams(0.2, 0.1, 0.1, 1e-4, (1.0, 1.0, 1.0))
    assert sum(c * c for c in p.orientation) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        SystemParams(0.2, -0.1, 0.1, 1e-4)
    with pytest.raises(ValueError):
        SystemParams(0.2, 0.1, 0.1, 1e-4, (0, 0, 0))


def test_config_parsing():
    cfg = parse_config("# comment\nZ = 0.05\nxi_a=0.3  # trailing\ndipole = \"1, 0, 0\"\n\n")
    assert cfg == {"Z": "0.05", "xi_a": "0.3", "dipole": "1, 0, 0"}
    with pytest.raises(ValueError, match="unknown key"):
        parse_config("bogus = 1")
    with pytest.raises(ValueError):
        parse_config("Z 0.1")
    assert parse_dipole("1,2,3") == (1.0, 2.0, 3.0)
    with pytest.raises(ValueError):
        parse_dipole("1,2")


def test_dimensionless_keys_override_si():
    cfg = dict(DEFAULT_CONFIG, alpha_sp="1e-4", eta="0.05")
    params, norm = params_from_config(cfg)
    assert params.alpha_sp == 1e-4
    assert params.eta == 0.05
    assert norm is not None


def test_missing_keys_rejected():
    with pytest.raises(ValueError, match="alpha_sp"):
        params_from_config({"Z": "0.1", "xi_a": "0.2", "eta": "0.1"})


def test_reference_params():
    p = reference_params()
    assert (p.xi_a, p.Z, p.eta) == (0.2, 0.1, 0.1)
    assert p.alpha_sp == pytest.approx(5.978e-5, rel=1e-3)
