import json

import numpy as np
import pytest

from heisodiam import analysis, canonical, metric, sets

PI = np.pi
COARSE = sets.SearchConfig(grid_r=48, grid_theta=32, starts=8)


def test_ratio_of_A_and_ball():
    ra = analysis.iso_ratio(canonical.build_A(1.0), COARSE)
    rb = analysis.iso_ratio(sets.ProfileSet.ball(0.5), COARSE)
    assert ra.diameter == pytest.approx(1.0, abs=2e-3)
    assert ra.ratio / rb.ratio >= 1.03
    json.dumps(ra.to_dict())


def test_ratio_scale_invariance():
    vals = [analysis.iso_ratio(canonical.build_A(lam), COARSE).ratio for lam in (0.5, 1.0, 2.0, 5.0)]
    np.testing.assert_allclose(vals, vals[1], rtol=1e-6)


def test_compare_labels():
    A = canonical.build_A(1.0)
    rep = analysis.compare(A, sets.ProfileSet.ball(0.5), COARSE)
    assert rep.larger == "a" and rep.relative_margin > 0.03
    assert analysis.compare(A, canonical.build_A(2.0), COARSE, tol=1e-6).larger == "equal"


def test_pair_bounds_against_direct_distances():
    r = np.array([0.0, 0.1, 0.3, 0.5])
    G = analysis.pair_bounds(r, theta_grid=512)
    # putting u_i + u_j = G_ij: the worst-angle pair sits exactly at distance 1
    for i in range(4):
        for j in range(4):
            th = np.linspace(0, 2 * PI, 8001)
            ui = uj = 0.5 * G[i, j]
            P = np.column_stack([r[i] * np.ones_like(th), 0 * th, ui * np.ones_like(th)])
            Q = np.column_stack([r[j] * np.cos(th), r[j] * np.sin(th), -uj * np.ones_like(th)])
            assert np.max(metric.distance(P, Q)) == pytest.approx(1.0, abs=1e-6)


def test_optimizer_small_grid_reaches_A():
    cfg = analysis.OptimizerConfig(m=48, theta_grid=128, search=COARSE)
    prof, rep, trace = analysis.optimize_profile(cfg)
    assert trace.converged
    err = np.max(np.abs(prof.u - canonical.l_profile(1.0, prof.grid)))
    assert err <= 5e-3
    assert rep.diameter == pytest.approx(1.0, abs=2e-3)
    vols = [s["volume"] for s in trace.sweeps]
    assert all(b >= a - 1e-15 for a, b in zip(vols, vols[1:]))


def test_optimizer_start_A_is_fixed():
    cfg = analysis.OptimizerConfig(m=48, theta_grid=128, start="A", search=COARSE)
    prof, _, trace = analysis.optimize_profile(cfg)
    assert trace.sweeps[0]["max_move"] <= 1e-6


def test_optimizer_config_validation():
    with pytest.raises(ValueError):
        analysis.OptimizerConfig(m=1)
    with pytest.raises(ValueError):
        analysis.optimize_profile(analysis.OptimizerConfig(m=8, start="cube"))


def test_random_sigma_invariant_set_is_invariant():
    s = analysis.random_sigma_invariant_set(np.random.default_rng(0))
    key = {tuple(np.round(z, 12)): iv.tobytes() for z, iv in zip(s.zsamples, s.sections)}
    for z, iv in zip(s.zsamples, s.sections):
        assert key[(round(z[0], 12), round(-z[1], 12) + 0.0)] == iv.tobytes()


def test_verify_rejects_unknown_level():
    with pytest.raises(ValueError):
        analysis.verify_suite("medium")
