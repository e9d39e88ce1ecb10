import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from covering_radii.errors import QuadratureError
from covering_radii.quadrature import QuadResult, adaptive_gauss_legendre


@pytest.mark.parametrize("deg", [0, 1, 5, 19])
def test_polynomial_exactness(deg):
    # a 10-point rule integrates degree <= 19 exactly on one panel
    res = adaptive_gauss_legendre(lambda t: t**deg, 0.0, 1.0, tol=1e-13)
    assert res.value == pytest.approx(1.0 / (deg + 1), rel=1e-14)
    assert res.n_panels == 1


def test_against_scipy():
    f = lambda t: np.log1p(t) / (1 + t * t)
    res = adaptive_gauss_legendre(f, 0.0, 1.0, tol=1e-12)
    want = math.pi / 8 * math.log(2)
    assert res.value == pytest.approx(want, abs=1e-12)
    assert res.value == pytest.approx(quad(f, 0, 1, epsabs=1e-14)[0], abs=1e-12)


@settings(max_examples=30)
@given(st.floats(0.1, 20.0), st.floats(-3.0, 3.0), st.floats(0.1, 4.0))
def test_oscillatory_closed_form(w, a, width):
    f = lambda t: np.cos(w * t) * np.exp(-0.3 * t)
    res = adaptive_gauss_legendre(f, a, a + width, tol=1e-11)
    F = lambda t: math.exp(-0.3 * t) * (w * math.sin(w * t) - 0.3 * math.cos(w * t)) / (0.09 + w * w)
    want = F(a + width) - F(a)
    assert abs(res.value - want) <= 1e-11
    assert res.error <= 1e-11


def test_endpoint_singularity_resolved():
    res = adaptive_gauss_legendre(lambda t: 1 / np.sqrt(t), 1e-12, 1.0, tol=1e-9)
    assert res.value == pytest.approx(2 - 2e-6, abs=1e-9)
    assert res.n_panels > 10


def test_empty_interval():
    assert adaptive_gauss_legendre(np.sin, 1.0, 1.0) == QuadResult(0.0, 0.0, 0, 0)


def test_reversed_interval():
    res = adaptive_gauss_legendre(lambda t: t, 1.0, 0.0)
    assert res.value == pytest.approx(-0.5, abs=1e-15)


def test_failure_reports_achieved_error():
    f = lambda t: np.sin(1 / t)
    with pytest.raises(QuadratureError) as exc:
        adaptive_gauss_legendre(f, 1e-6, 1.0, tol=1e-14, max_panels=8)
    assert exc.value.achieved > 1e-14
