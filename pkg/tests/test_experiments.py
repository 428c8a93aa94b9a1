import math

import numpy as np
import pytest

from reglap.experiments import (ExperimentConfig, bhi_decay_fit,
                                carleson_scan, curved_bound_scan,
                                fit_exponent, harnack_scan, lipschitz_ratio)
from reglap.geometry import GraphDomain, HalfSpace, LipschitzWedge


def _cfg(**kw):
    base = dict(name="t", domain={"type": "halfspace", "n": 2},
                alpha=1.5, ladder=tuple(np.geomspace(0.3, 0.02, 6)),
                n_paths=2500, seed=1)
    base.update(kw)
    return ExperimentConfig(**base)


def test_fit_exponent_recovers_noiseless_slope():
    ts = np.geomspace(0.3, 0.01, 8)
    u = 2.7 * ts ** 0.62
    fit = fit_exponent(ts, u, 0.01 * u)
    assert fit.slope == pytest.approx(0.62, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-9)
    assert fit.intercept == pytest.approx(math.log(2.7), abs=1e-9)


def test_fit_exponent_needs_five_points():
    with pytest.raises(ValueError):
        fit_exponent([1, 2, 3], [1, 2, 3], [0.1] * 3)


def test_ladder_must_decrease():
    with pytest.raises(ValueError):
        _cfg(ladder=(0.1, 0.2))


def test_build_domain_types():
    assert isinstance(_cfg().build_domain(), HalfSpace)
    assert isinstance(
        _cfg(domain={"type": "wedge", "slope": 1.0}).build_domain(),
        LipschitzWedge)
    assert isinstance(
        _cfg(domain={"type": "graph_power", "c": 1.0,
                     "beta": 1.8}).build_domain(), GraphDomain)
    with pytest.raises(ValueError):
        _cfg(domain={"type": "torus"}).build_domain()


def test_absorb_delta_defaults_below_ladder():
    cfg = _cfg()
    assert cfg.boundary_absorb_delta == pytest.approx(0.002)


def test_bhi_decay_smoke():
    res = bhi_decay_fit(_cfg())
    assert len(res.rows) >= 5
    # loose window at smoke scale; acceptance runs the tight version
    assert 0.2 < res.fit.slope < 0.8
    assert res.fit.r_squared > 0.8


def test_harnack_smoke():
    res = harnack_scan(_cfg(n_paths=4000))
    assert [r["k"] for r in res.rows] == [1, 2, 3]
    assert not any(r["suspect"] for r in res.rows)
    assert all(r["ratio"] >= 1.0 for r in res.rows)


def test_carleson_smoke():
    res = carleson_scan(_cfg(n_paths=3000))
    assert res.summary["sup_ratio"] > 0.0
    assert res.summary["u0"] > 0.0
    assert all(r["ratio"] <= res.summary["sup_ratio"] + 1e-12
               for r in res.rows)


def test_curved_scan_decay():
    cfg = _cfg(domain={"type": "graph_power", "c": 1.0, "beta": 1.8},
               beta=1.8, ladder=tuple(np.geomspace(1e-1, 1e-3, 6)))
    res = curved_bound_scan(cfg, lemma="decay")
    assert res.fit is not None
    assert res.fit.slope >= 1.8 - 2.0 - 0.1
    assert res.summary["reference_exponent"] == pytest.approx(-0.2)


def test_curved_scan_positivity():
    cfg = _cfg(domain={"type": "graph_power", "c": 1.0, "beta": 1.8},
               beta=1.8, ladder=tuple(np.geomspace(3e-3, 1e-4, 6)))
    res = curved_bound_scan(cfg, lemma="positivity")
    assert res.summary["all_positive"]
    assert res.summary["p"] == pytest.approx(0.75)


def test_curved_scan_divergence():
    cfg = _cfg(domain={"type": "graph_power", "c": 1.0, "beta": 1.5},
               beta=1.5, ladder=(0.05,))
    res = curved_bound_scan(cfg, lemma="divergence")
    assert res.summary["verdict"] == "divergent-"


def test_curved_scan_needs_beta():
    with pytest.raises(ValueError):
        curved_bound_scan(_cfg(), lemma="decay")


def test_lipschitz_smoke():
    cfg = _cfg(domain={"type": "wedge", "slope": 1.0}, n_paths=4000)
    res = lipschitz_ratio(cfg)
    assert len(res.rows) >= 5
    band = res.summary["ratio_band"]
    assert 1.0 <= band < 5.0
