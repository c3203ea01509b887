import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from heisodiam import core, metric

PI = np.pi


def oracle_distance(a, s):
    """Independent scalar oracle built on brentq and plain trig."""
    s = abs(s)
    if a == 0:
        return np.sqrt(PI * s)
    if s == 0:
        return a
    g = lambda p: (2 * p - np.sin(2 * p)) / (2 * p * p)
    rho = lambda p: np.sin(p) / p
    phi = brentq(lambda p: g(p) - (s / a**2) * rho(p) ** 2, 1e-12, PI - 1e-15, xtol=1e-16, rtol=1e-15)
    return a / rho(phi) if phi < PI / 2 else np.sqrt(s / g(phi))


# Frozen values from the oracle above (and bisection on h directly).
FROZEN_DIST = [((0.5, 0.2), 0.6005265162514366)]
FROZEN = {
    "h(0.5)": 0.6117197409864404,
    "rho_inv(0.5)": 1.895494267033981,
    "phi_c": 2.7983860457838867,
    "r_c": 0.12025089155421821,
    "rbar(1,0.3)": 0.9635292844859037,
}


def test_frozen_distance():
    for (a, s), want in FROZEN_DIST:
        assert oracle_distance(a, s) == pytest.approx(want, rel=1e-13)
        assert metric.distance([0, 0, 0], [a, 0, s]) == pytest.approx(want, rel=1e-12)


def test_frozen_profile_values():
    assert metric.h_fn(0.5) == pytest.approx(FROZEN["h(0.5)"], rel=1e-12)
    assert metric.rho_inv(0.5) == pytest.approx(FROZEN["rho_inv(0.5)"], rel=1e-12)
    phi_c, r_c = metric.critical_point()
    assert phi_c == pytest.approx(FROZEN["phi_c"], rel=1e-13)
    assert r_c == pytest.approx(FROZEN["r_c"], rel=1e-12)
    assert metric.rbar(1.0, 0.3) == pytest.approx(FROZEN["rbar(1,0.3)"], rel=1e-12)


def test_special_values():
    assert metric.h_fn(0.0) == pytest.approx(1 / PI, abs=1e-15)
    assert metric.h_fn(2 / PI) == pytest.approx(2 / PI, abs=1e-14)
    assert metric.h_fn(1.0) == pytest.approx(0.0, abs=1e-15)
    assert metric.distance([0, 0, 0], [0, 0, 1]) == pytest.approx(np.sqrt(PI), rel=1e-15)
    assert metric.g_fn(0.0) == 0.0 and metric.rho_fn(0.0) == 1.0


def test_domain_errors():
    with pytest.raises(ValueError):
        metric.h_fn(1.5)
    with pytest.raises(ValueError):
        metric.h_prime(1.0)
    with pytest.raises(ValueError):
        metric.distance([0, 0, 0], [0, 0, np.nan])
    with pytest.raises(ValueError):
        metric.distance([0, 0, 0], [0, 0, 0, 0, 1])
    with pytest.raises(ValueError):
        metric.distance([0, 0, 0], [1, 0, 0], method="magic")


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-6, 10), st.floats(1e-8, 50))
def test_against_oracle(a, s):
    assert metric.distance_ws(a, s) == pytest.approx(oracle_distance(a, s), rel=1e-11)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 5), st.floats(-PI, PI), st.floats(0, 2 * PI))
def test_geodesic_endpoint_distance(L, phi, arg):
    p = metric.geodesic_point(metric.GeodesicParam(L * np.exp(1j * arg), phi))
    assert metric.distance(core.origin(1), p) == pytest.approx(L, rel=1e-10)


def test_cross_oracle_extremes():
    a = np.array([1e-8, 1e-3, 1.0, 1.0, 10.0, 1e-4])
    s = np.array([1.0, 1e-9, 1e-12, 1e3, 1e-14, 1e4])
    np.testing.assert_allclose(metric.distance_ws(a, s), metric._distance_ws_bisect(a, s), rtol=1e-10)


def test_screening_table_accuracy():
    rng = np.random.default_rng(3)
    a = rng.uniform(0, 3, 5000)
    s = rng.uniform(0, 3, 5000) ** 3
    exact = metric.distance_ws(a, s)
    approx = metric.approx_distance_ws(a, s)
    assert np.max(np.abs(approx - exact) / exact) < metric.SCREEN_RTOL


def test_h_prime_and_second_finite_differences():
    r = np.linspace(0.02, 0.95, 60)
    e = 1e-6
    np.testing.assert_allclose(metric.h_prime(r), (metric.h_fn(r + e) - metric.h_fn(r - e)) / (2 * e), atol=1e-6)
    e = 1e-4
    fd2 = (metric.h_prime(r + e) - metric.h_prime(r - e)) / (2 * e)
    np.testing.assert_allclose(metric.h_second(r), fd2, rtol=1e-5, atol=1e-5)


def test_h_second_sign_change_at_critical_point():
    _, r_c = metric.critical_point()
    lo, hi = metric.h_second(np.array([r_c - 1e-4, r_c + 1e-4]))
    assert lo * hi < 0


def test_profile_table_shape():
    t = metric.profile_table(10)
    assert t.shape == (10, 4)
    np.testing.assert_allclose(t[:, 1], metric.h_fn(t[:, 0]))


def test_ball_contains_and_envelope():
    c = np.array([0.3, -0.2, 0.1])
    z = np.array([0.5, 0.1])
    top = metric.ball_envelope(c, 1.0, 0.5 + 0.1j, +1)
    bot = metric.ball_envelope(c, 1.0, 0.5 + 0.1j, -1)
    with pytest.raises(ValueError):
        metric.ball_envelope(c, 1.0, z, +1)  # two complex coordinates in H^1
    assert metric.distance(c, np.r_[z, top]) == pytest.approx(1.0, rel=1e-10)
    assert metric.distance(c, np.r_[z, bot]) == pytest.approx(1.0, rel=1e-10)
    assert metric.ball_contains(c, 1.0, np.r_[z, 0.5 * (top + bot)])
    assert not metric.ball_contains(c, 1.0, np.r_[z, top + 1e-6])


def test_lemma_constants_positive():
    k = metric.lemma_constants(1.0, 1.0, 0.3)
    assert k.alpha > 0 and k.gamma > 0 and k.M >= k.alpha
    assert k.beta == pytest.approx(k.alpha + 2.0)
    with pytest.raises(ValueError):
        metric.lemma_constants(1.0, 1.0, 1.0)  # delta above 2 d^2 / pi


def test_bicone_contains():
    p1, p2 = [0.0, 0.0, -0.1], [0.0, 0.0, 0.1]
    assert metric.bicone_contains(p1, p2, 0.2, [0.0, 0.0, 0.0])
    assert metric.bicone_contains(p1, p2, 0.2, [0.1, 0.0, 0.05 - 1e-9])
    assert not metric.bicone_contains(p1, p2, 0.2, [0.1, 0.0, 0.06])
    with pytest.raises(ValueError):
        metric.bicone_contains(p1, [0.1, 0.0, 0.1], 0.2, [0, 0, 0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_metric_axioms_random(seed):
    rng = np.random.default_rng(seed)
    P, Q, R, G = (rng.uniform(-3, 3, (20, 3)) for _ in range(4))
    d = metric.distance(P, Q)
    np.testing.assert_allclose(metric.distance(Q, P), d, rtol=1e-10)
    assert np.all(metric.distance(P, R) + metric.distance(R, Q) - d >= -1e-9)
    np.testing.assert_allclose(metric.distance(core.mul(G, P), core.mul(G, Q)), d, rtol=1e-9)


def test_higher_dimension_distance():
    p = core.make_point([0.3 + 0.1j, -0.2j], 0.4)
    q = core.make_point([0.1, 0.5 + 0.5j], -0.3)
    rel = core.mul(core.inv(p), q)
    a = np.linalg.norm(rel[:4])
    assert metric.distance(p, q) == pytest.approx(oracle_distance(a, rel[4]), rel=1e-11)
