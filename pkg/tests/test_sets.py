import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisodiam import analysis, metric, sets

PI = np.pi
# Ball volume from a 1-D adaptive quad of 4 pi int_0^1 r h(r) dr, frozen.
BALL_VOLUME = 3.303503048836652
COARSE = sets.SearchConfig(grid_r=48, grid_theta=32, starts=8, nc_samples=16, nc_grid_r=48, nc_grid_theta=48)


def brute_diameter(s):
    P, _ = s.endpoints()
    i, j = np.triu_indices(len(P), 1)
    return float(np.max(metric.distance(P[i], P[j])))


def test_ball_volume_matches_quad_oracle():
    from scipy.integrate import quad

    v, _ = quad(lambda r: 4 * PI * r * metric.h_fn(r), 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)
    assert v == pytest.approx(BALL_VOLUME, rel=1e-12)
    assert sets.volume(sets.ProfileSet.ball(1.0)) == pytest.approx(BALL_VOLUME, rel=1e-10)


def test_volume_homogeneity():
    v1 = sets.volume(sets.ProfileSet.ball(1.0))
    v2 = sets.volume(sets.ProfileSet.ball(0.5))
    assert v2 == pytest.approx(v1 / 16, rel=1e-10)


def test_sampled_profile_volume_converges():
    v = sets.volume(sets.ProfileSet.ball(1.0, m=512).sampled())
    assert v == pytest.approx(BALL_VOLUME, rel=1e-4)


def test_profile_csv_roundtrip():
    s = sets.ProfileSet.ball(1.0, m=16)
    back = sets.ProfileSet.from_csv(s.to_csv())
    np.testing.assert_array_equal(back.grid, s.grid)
    np.testing.assert_array_equal(back.u, s.u)
    with pytest.raises(ValueError):
        sets.ProfileSet.from_csv("x,y\n0,1\n")


def test_invalid_sets_rejected():
    with pytest.raises(ValueError):
        sets.ProfileSet([0.1, 1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        sets.ProfileSet([0.0, 1.0], [-1.0, 0.0])
    with pytest.raises(ValueError):
        sets.SectionSet(1, [[0, 0]], [[[1.0, 0.0]]])
    with pytest.raises(ValueError):
        sets.SectionSet(1, [[0, 0]], [[[0.0, 1.0], [0.5, 2.0]]])


def test_section_json_roundtrip():
    s = sets.SectionSet(1, [[0, 0], [0.1, 0.2]], [[[-1.0, 1.0]], []], areas=[0.5, 0.25])
    back = sets.SectionSet.from_json(s.to_json())
    np.testing.assert_array_equal(back.zsamples, s.zsamples)
    np.testing.assert_array_equal(back.areas, s.areas)
    assert sets.volume(back) == pytest.approx(1.0)
    assert not back.is_empty()


def test_round_trip_profile_to_sections_volume():
    A = sets.ProfileSet.ball(1.0)
    S = sets.profile_to_sections(A, zcount=4096)
    assert sets.volume(S) == pytest.approx(sets.volume(A), rel=1e-8)


def test_ball_diameter():
    rep = sets.diameter(sets.ProfileSet.ball(1.0), COARSE)
    assert rep.value == pytest.approx(2.0, abs=2e-3)
    p, q = rep.witness
    assert metric.distance(p, q) == pytest.approx(rep.value, rel=1e-12)


def test_section_diameter_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(5):
        s = analysis.random_sigma_invariant_set(rng)
        assert sets.diameter(s).value == pytest.approx(brute_diameter(s), rel=1e-12)


def test_section_diameter_threads_agree():
    rng = np.random.default_rng(9)
    s = analysis.random_sigma_invariant_set(rng, pairs=40)
    one = sets.diameter(s, sets.SearchConfig(workers=1, chunk=16)).value
    many = sets.diameter(s, sets.SearchConfig(workers=4, chunk=16)).value
    assert one == many


def test_max_dist_from_point():
    B = sets.ProfileSet.ball(1.0)
    val, q = sets.max_dist_from_point(B, [0, 0, 0], COARSE)
    assert val == pytest.approx(1.0, abs=1e-6)
    assert metric.distance([0, 0, 0], q) == pytest.approx(val, rel=1e-12)
    val, _ = sets.max_dist_from_point(B, [0, 0, 1 / PI], COARSE)
    assert val == pytest.approx(np.sqrt(2), abs=1e-4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_steiner_preserves_volume_and_tco_diameter(seed):
    rng = np.random.default_rng(seed)
    s = analysis.random_sigma_invariant_set(rng, pairs=6)
    st_ = sets.steiner_symmetrize(s)
    assert sets.volume(st_) == pytest.approx(sets.volume(s), rel=1e-14)
    d = brute_diameter(s)
    assert brute_diameter(st_) <= d + 1e-9
    assert brute_diameter(sets.t_convex_hull(s)) == pytest.approx(d, abs=1e-9)
    for iv in st_.sections:
        assert len(iv) <= 1
        if len(iv):
            assert iv[0, 0] == pytest.approx(-iv[0, 1])


def test_envelopes_of_single_interval_set():
    s = sets.SectionSet(1, [[0, 0], [0.1, 0]], [[[-1.0, 2.0]], [[0.0, 0.5]]])
    env = sets.envelopes(s)
    assert env.f_plus[0] == 2.0 and env.f_minus[0] == -1.0


def test_dilate_set_scales_volume():
    rng = np.random.default_rng(2)
    s = analysis.random_sigma_invariant_set(rng)
    assert sets.volume(sets.dilate_set(2.0, s)) == pytest.approx(16 * sets.volume(s), rel=1e-12)
    B = sets.ProfileSet.ball(1.0)
    assert sets.volume(sets.dilate_set(0.5, B)) == pytest.approx(BALL_VOLUME / 16, rel=1e-9)


def test_nc_on_ball_fails_at_pole():
    rep = sets.nc_check(sets.ProfileSet.ball(1.0), diam_hint=2.0, cfg=COARSE)
    assert rep.worst_slack >= 0.3
    assert abs(rep.worst_point[0]) < 1e-9 and abs(rep.worst_point[1]) < 1e-9


def test_higher_dimension_ball_volume():
    # n = 2: 2 pi^2 int_0^1 r^3 h(r) dr
    from scipy.integrate import quad

    v, _ = quad(lambda r: 2 * sets.sphere_area(2) * r**3 * metric.h_fn(r), 0, 1, epsabs=1e-14, limit=200)
    assert sets.volume(sets.ProfileSet.ball(1.0, n=2)) == pytest.approx(v, rel=1e-9)
