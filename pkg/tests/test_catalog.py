"""Closed-form constants against frozen high-precision references.

The reference literals were produced by an independent mpmath evaluation
(tanh-sinh quadrature at 40 digits) of the defining integrals.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reglap import catalog


# (args, value) pairs frozen from the independent evaluation
GAMMA_REFS = [
    ((1.5, 0.9), 1.3584111018541242),
    ((1.3, -0.5), 1.4901819441303178),
    ((1.7, 1.2), 3.0694973734518037),
    ((1.5, 1.0), 2.0),
]
GAMMA_BAR_REFS = [
    ((1.5, 1.2), 1.8128473777289281),
    ((1.5, 0.9), 0.41075055076349149),
]
I_REFS = [
    ((1.5, 0.4), -3.0004361911243269),
    ((1.7, 1.0), 1.4285714285714286),  # equals 1/(alpha - 1)
]
A_REFS = [
    ((2, 1.5), 0.17116712969055234),
    ((3, 1.2), 0.11678928917923956),
    ((1, 1.9), 0.090992482475194496),
]
K_REFS = [
    ((2, 1.5), 1.7480383695280799),
    ((3, 1.8), 2.243994752564138),
]


@pytest.mark.parametrize("args,ref", GAMMA_REFS)
def test_gamma_coeff_reference(args, ref):
    assert catalog.gamma_coeff(*args) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("args,ref", GAMMA_BAR_REFS)
def test_gamma_bar_reference(args, ref):
    assert catalog.gamma_bar_coeff(*args) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("args,ref", I_REFS)
def test_i_coeff_reference(args, ref):
    assert catalog.i_coeff(*args) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("args,ref", A_REFS)
def test_normalization_reference(args, ref):
    assert catalog.normalization_constant(*args) == pytest.approx(
        ref, rel=1e-13)


@pytest.mark.parametrize("args,ref", K_REFS)
def test_lateral_factor_reference(args, ref):
    assert catalog.lateral_factor(*args) == pytest.approx(ref, rel=1e-13)


def test_composite_constants_reference():
    assert catalog.c_half_space(2, 1.5, 1.0) == pytest.approx(
        0.59841342060214902, rel=1e-11)
    assert catalog.lambda_killed(2, 1.5, 0.4) == pytest.approx(
        -0.23940017125722557, rel=1e-11)
    assert catalog.lambda_regional(2, 1.5, 0.4) == pytest.approx(
        -0.039929031056509236, rel=1e-11)


def test_gamma_vanishes_at_alpha_minus_one():
    for alpha in np.arange(1.1, 1.95, 0.1):
        assert catalog.gamma_coeff(alpha, alpha - 1.0) == 0.0
        assert catalog.gamma_bar_coeff(alpha, alpha - 1.0) == pytest.approx(
            0.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(1.05, 1.95), frac=st.floats(0.02, 0.98))
def test_gamma_symmetry(alpha, frac):
    # gamma(alpha, p) = gamma(alpha, alpha - 1 - p) on (-1, alpha)
    p = -1.0 + frac * (alpha + 1.0)
    a = catalog.gamma_coeff(alpha, p)
    b = catalog.gamma_coeff(alpha, alpha - 1.0 - p)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-10)


def test_lambda_vanishes_at_half_alpha():
    for n in (1, 2, 3):
        for alpha in np.arange(1.1, 1.95, 0.1):
            assert catalog.lambda_killed(n, alpha, alpha / 2.0) == 0.0


def test_sign_charts():
    # C < 0 on (0, alpha-1), C > 0 on (alpha-1, alpha);
    # Lambda < 0 on (0, alpha/2), Lambda > 0 on (alpha/2, alpha)
    for alpha in (1.2, 1.5, 1.8):
        for n in (2, 3):
            assert catalog.c_half_space(n, alpha, 0.5 * (alpha - 1)) < 0.0
            assert catalog.c_half_space(n, alpha, 0.5 * (alpha - 1 + alpha)) \
                > 0.0
            assert catalog.lambda_killed(n, alpha, 0.3 * alpha) < 0.0
            assert catalog.lambda_killed(n, alpha, 0.8 * alpha) > 0.0


def test_regional_equals_reflected_combination():
    # Lambdabar(n,alpha,p) agrees with A*K*gamma computed the direct way
    for p in (0.4, 0.9, 1.3):
        lhs = catalog.lambda_regional(2, 1.5, p)
        rhs = catalog.c_half_space(2, 1.5, p)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


def test_killed_regional_gap_identity():
    # Lambdabar - Lambda = (A / alpha) * S(n, alpha)
    for n in (2, 3):
        for alpha in (1.2, 1.5, 1.8):
            for p in (0.3, 0.8):
                gap = (catalog.lambda_regional(n, alpha, p)
                       - catalog.lambda_killed(n, alpha, p))
                ref = (catalog.normalization_constant(n, alpha) / alpha
                       * catalog.hemisphere_moment(n, alpha))
                assert gap == pytest.approx(ref, rel=1e-9)


def test_domain_errors():
    with pytest.raises(Exception):
        catalog.gamma_coeff(1.5, 1.6)
    with pytest.raises(Exception):
        catalog.gamma_coeff(2.0, 0.5)
    with pytest.raises(Exception):
        catalog.i_coeff(1.5, -0.1)
    with pytest.raises(Exception):
        catalog.c_half_space(1, 1.5, 0.5)


def test_constants_table_fields():
    tab = catalog.constants_table(2, 1.5, 0.9)
    assert tab.gamma == pytest.approx(catalog.gamma_coeff(1.5, 0.9))
    assert tab.c_halfspace == pytest.approx(
        catalog.c_half_space(2, 1.5, 0.9))
    assert math.isfinite(tab.lambda_killed)


@settings(max_examples=30, deadline=None)
@given(v=st.floats(1e-8, 0.9), p=st.floats(-0.5, 1.8))
def test_power_pair_diff_matches_direct(v, p):
    # w_p paired second difference: series branch vs direct evaluation
    f = catalog.w_power(p)
    got = float(f.profile_pair_diff(1.0, np.array([v]))[0])
    direct = (1.0 + v) ** p + (1.0 - v) ** p - 2.0
    # direct form loses digits near v=0; compare at matching accuracy
    assert got == pytest.approx(direct, rel=1e-6, abs=1e-12)


def test_power_kinds_evaluate():
    from reglap.geometry import HalfSpace
    dom = HalfSpace(2)
    w = catalog.w_power(0.7)
    h = catalog.h_power(0.7, dom)
    assert w(np.array([0.3, 0.5])) == pytest.approx(0.5 ** 0.7)
    assert h(np.array([0.3, 0.5])) == pytest.approx(0.5 ** 0.7)
    assert h(np.array([5.0, 0.5])) == 0.0  # outside the lateral cutoff
    assert w(np.array([0.0, -1.0])) == 0.0
