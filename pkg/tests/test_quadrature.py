import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reglap.quadrature import (QuadratureSpec, integrate_singular,
                               integrate_to_infinity)


def test_plain_polynomial():
    res = integrate_singular(lambda t: 3.0 * t ** 2, 0.0, 2.0)
    assert res.converged
    assert res.value == pytest.approx(8.0, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(e=st.floats(-0.95, -0.05))
def test_left_endpoint_power(e):
    spec = QuadratureSpec(endpoint_exponents=(e, 0.0))
    res = integrate_singular(lambda t: t ** e, 0.0, 1.0, spec)
    assert res.converged
    assert res.value == pytest.approx(1.0 / (e + 1.0), rel=1e-9)


def test_right_endpoint_power():
    spec = QuadratureSpec(endpoint_exponents=(0.0, -0.3))
    res = integrate_singular(lambda t: (1.0 - t) ** -0.3, 0.0, 1.0, spec)
    assert res.value == pytest.approx(1.0 / 0.7, rel=1e-10)


def test_log_singularity():
    spec = QuadratureSpec(endpoint_exponents=(-0.01, 0.0))
    res = integrate_singular(np.log, 0.0, 1.0, spec)
    assert res.value == pytest.approx(-1.0, rel=1e-8)


def test_tail_power():
    res = integrate_to_infinity(lambda t: t ** -2.5, 1.0, 2.5)
    assert res.converged
    assert res.value == pytest.approx(2.0 / 3.0, rel=1e-10)


def test_tail_mixed_decays():
    # secondary fractional tail must be graded even when the leading
    # decay exponent is an integer
    f = lambda t: t ** -2.0 + t ** -2.5
    res = integrate_to_infinity(f, 1.0, (2.0, 2.5))
    assert res.converged
    assert res.value == pytest.approx(1.0 + 2.0 / 3.0, rel=1e-9)


def test_tail_rejects_nonintegrable():
    with pytest.raises(ValueError):
        integrate_to_infinity(lambda t: 1.0 / t, 1.0, 1.0)
    with pytest.raises(ValueError):
        integrate_to_infinity(lambda t: 1.0 / t, 1.0, (2.0, 0.5))


def test_error_estimate_covers_truth():
    spec = QuadratureSpec(endpoint_exponents=(-0.5, 0.0))
    res = integrate_singular(lambda t: t ** -0.5 * np.cos(t), 0.0, 1.0, spec)
    # reference from the Fresnel-type series, frozen
    ref = 1.8090484758005438
    assert abs(res.value - ref) <= max(res.error_estimate, 1e-9)


def test_additivity():
    f = lambda t: np.sin(3.0 * t)
    whole = integrate_singular(f, 0.0, 2.0).value
    parts = (integrate_singular(f, 0.0, 0.7).value
             + integrate_singular(f, 0.7, 2.0).value)
    assert whole == pytest.approx(parts, rel=1e-11)
    assert whole == pytest.approx((1.0 - math.cos(6.0)) / 3.0, rel=1e-10)
