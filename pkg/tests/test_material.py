import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nessdrag.material import Drude, LinearOhmic, make_model, reflection, reflection_im


def test_drude_examples():
    m = Drude(0.1)
    assert reflection(m, 0.0) == 1 + 0j
    assert reflection(m, 1.0) == pytest.approx(10j, rel=1e-15)
    assert reflection_im(m, 1.0) == pytest.approx(10.0, rel=1e-15)
    assert reflection_im(m, 0.0) == 0.0
    ref = 1 / (1 - mpmath.mpf("0.01") ** 2 - 1j * mpmath.mpf("0.1") * mpmath.mpf("0.01"))
    assert complex(reflection(m, 0.01)) == pytest.approx(complex(ref), rel=1e-14)
    assert complex(reflection(m, 0.01)) == pytest.approx(1.0001 + 0.0010j, abs=1e-5)


def test_drude_im_peak_near_plasmon():
    m = Drude(0.05)
    xi = np.linspace(0.01, 3, 30001)
    assert xi[np.argmax(m.reflection_im(xi))] == pytest.approx(1.0, abs=2e-3)


def test_drude_decay():
    m = Drude(0.1)
    assert abs(reflection(m, 1e4)) * 1e8 == pytest.approx(1.0, rel=1e-6)


def test_ohmic():
    m = LinearOhmic(r0=0.8, eta=0.2)
    assert reflection(m, 0.5) == pytest.approx(0.8 + 0.1j)
    with pytest.raises(ValueError):
        LinearOhmic(r0=1.5, eta=0.1)
    with pytest.raises(ValueError):
        Drude(0.0)


def test_make_model():
    assert isinstance(make_model("Drude", 0.1), Drude)
    assert isinstance(make_model("ohmic", 0.1, 0.9), LinearOhmic)
    with pytest.raises(ValueError):
        make_model("gold", 0.1)


@pytest.mark.parametrize("model", [Drude(0.1), Drude(2.0), LinearOhmic(0.5, 0.3)])
def test_slope_matches_finite_difference(model):
    xi = np.array([-1.3, 0.0, 0.4, 0.99])
    h = 1e-6
    fd = (model.reflection_im(xi + h) - model.reflection_im(xi - h)) / (2 * h)
    assert np.allclose(model.reflection_im_slope(xi), fd, rtol=1e-6, atol=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-50, max_value=50), st.floats(min_value=1e-3, max_value=5))
def test_reality_and_passivity(xi, eta):
    for m in (Drude(eta), LinearOhmic(1.0, eta)):
        assert reflection(m, -xi) == np.conj(reflection(m, xi))
        assert reflection_im(m, -xi) == -reflection_im(m, xi)
        if xi > 0:
            assert reflection_im(m, xi) > 0
