import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reglap import geometry
from reglap.geometry import (Ball, GraphDomain, HalfSpace, LipschitzWedge,
                             box, box_contains, graph_power, graph_zero)


def test_halfspace_basics():
    dom = HalfSpace(2)
    x = np.array([0.3, 0.7])
    assert geometry.contains(dom, x)
    assert geometry.height(dom, x) == pytest.approx(0.7)
    assert geometry.distance(dom, x) == pytest.approx(0.7)
    assert not geometry.contains(dom, np.array([0.3, -0.1]))
    np.testing.assert_allclose(geometry.reflect(dom, x), [0.3, -0.7])
    np.testing.assert_allclose(geometry.nearest_boundary_point(dom, x),
                               [0.3, 0.0])


def test_ball_distance():
    dom = Ball((1.0, 0.0), 2.0)
    x = np.array([1.0, 0.5])
    assert geometry.contains(dom, x)
    assert geometry.distance(dom, x) == pytest.approx(1.5)
    assert not geometry.contains(dom, np.array([3.5, 0.0]))


@settings(max_examples=30, deadline=None)
@given(slope=st.floats(0.2, 3.0), x0=st.floats(-1.5, 1.5),
       lift=st.floats(0.05, 2.0))
def test_wedge_distance_formula(slope, x0, lift):
    dom = LipschitzWedge(2, slope)
    x = np.array([x0, slope * abs(x0) + lift])
    assert geometry.contains(dom, x)
    d = geometry.distance(dom, x)
    assert 0.0 < d <= lift + 1e-12
    # brute-force distance to the graph
    ts = np.linspace(x0 - 5.0, x0 + 5.0, 20001)
    brute = np.min(np.hypot(ts - x0, slope * np.abs(ts) - x[1]))
    assert d == pytest.approx(brute, rel=1e-3, abs=1e-4)


def test_graph_power_height():
    dom = GraphDomain(graph_power(2, 1.0, 1.8))
    x = np.array([0.5, 1.0])
    gamma = abs(0.5) ** 1.8
    assert geometry.height(dom, x) == pytest.approx(1.0 - gamma)
    assert geometry.contains(dom, x)
    assert not geometry.contains(dom, np.array([0.5, gamma - 0.01]))


def test_graph_zero_matches_halfspace():
    flat = GraphDomain(graph_zero(2))
    half = HalfSpace(2)
    for pt in ([0.2, 0.9], [-1.0, 0.1]):
        x = np.array(pt)
        assert geometry.distance(flat, x) == pytest.approx(
            geometry.distance(half, x), rel=1e-9)


def test_reflection_is_involution_on_halfspace():
    dom = HalfSpace(3)
    x = np.array([0.1, -0.4, 0.9])
    xb = geometry.reflect(dom, x)
    np.testing.assert_allclose(geometry.reflect(dom, xb), x, atol=1e-12)


def test_box_membership():
    dom = HalfSpace(2)
    region = box(np.zeros(2), a=1.0, r=0.5, parent=dom)
    assert box_contains(region, np.array([0.2, 0.5]))
    assert not box_contains(region, np.array([0.7, 0.5]))
    assert not box_contains(region, np.array([0.2, 1.5]))
    assert not box_contains(region, np.array([0.2, -0.1]))


def test_contains_many_consistency():
    dom = GraphDomain(graph_power(2, 1.0, 1.8))
    rng = np.random.default_rng(3)
    Y = rng.uniform(-2.0, 2.0, size=(200, 2))
    mask = geometry.contains_many(dom, Y)
    single = np.array([geometry.contains(dom, y) for y in Y])
    np.testing.assert_array_equal(mask, single)
    h = geometry.height_many(dom, Y)
    hs = np.array([geometry.height(dom, y) for y in Y])
    np.testing.assert_allclose(h, hs, atol=1e-12)
