import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from heisodiam import canonical, metric, sets

PI = np.pi
A1_VOLUME = 0.21763819049950855  # frozen from the oracle below


def oracle_h(x):
    """h(x) = g(rho^-1(x)) with brentq; independent of the package."""
    if x >= 1.0:
        return 0.0
    if x <= 0.0:
        return 1 / PI
    phi = brentq(lambda p: np.sin(p) / p - x, 1e-14, PI, xtol=1e-16, rtol=1e-15)
    return (2 * phi - np.sin(2 * phi)) / (2 * phi * phi)


def oracle_A_volume(lam):
    cyl = PI * (lam / PI) ** 2 * lam**2 / PI
    cap, _ = quad(lambda r: 2 * PI * r * 2 * 0.25 * lam**2 * oracle_h(2 * r / lam), lam / PI, lam / 2,
                  epsabs=1e-15, epsrel=1e-13, limit=200)
    return cyl + cap


def test_A_volume_frozen_and_oracle():
    assert oracle_A_volume(1.0) == pytest.approx(A1_VOLUME, rel=1e-11)
    assert sets.volume(canonical.build_A(1.0)) == pytest.approx(A1_VOLUME, rel=1e-10)


@pytest.mark.parametrize("lam", [0.5, 2.0, 5.0])
def test_A_volume_homogeneity(lam):
    assert sets.volume(canonical.build_A(lam)) == pytest.approx(A1_VOLUME * lam**4, rel=1e-9)


def test_l_profile_shape():
    assert canonical.l_profile(1.0, 0.0) == pytest.approx(1 / (2 * PI))
    assert canonical.l_profile(1.0, 0.5) == pytest.approx(0.0, abs=1e-15)
    # continuity at the cylinder edge: cap meets the flat top
    assert canonical.l_profile(1.0, 1 / PI + 1e-12) == pytest.approx(1 / (2 * PI), abs=1e-9)
    # cap is the ball of radius 1/2 at the origin
    r = np.linspace(0.33, 0.49, 7)
    np.testing.assert_allclose(canonical.l_profile(1.0, r), metric.ball_profile(0.5, r), rtol=1e-13)
    with pytest.raises(ValueError):
        canonical.l_profile(1.0, 0.6)


def _cap_points(rng, N, lam=1.0):
    r = rng.uniform(lam / PI + 1e-6, lam / 2 - 1e-6, N)
    th = rng.uniform(0, 2 * PI, N)
    sd = rng.choice([-1.0, 1.0], N)
    return np.column_stack([r * np.cos(th), r * np.sin(th), sd * canonical.l_profile(lam, r)])


@pytest.mark.parametrize("lam", [1.0, 3.0])
def test_antipode_distance_and_involution(lam):
    P = _cap_points(np.random.default_rng(1), 300, lam)
    Q = canonical.antipode(P, lam)
    np.testing.assert_allclose(metric.distance(P, Q), lam, rtol=1e-10)
    np.testing.assert_allclose(canonical.antipode(Q, lam), P, atol=1e-9 * lam)


def test_antipode_rejects_bad_points():
    with pytest.raises(ValueError):
        canonical.antipode([0.1, 0.0, 1 / (2 * PI)])  # inside the cylinder
    with pytest.raises(ValueError):
        canonical.antipode([0.4, 0.0, 0.0])  # not on the sphere


def test_admissibility_constants():
    adm = canonical.admissibility(1.0)
    assert adm.r_adm == pytest.approx(1 / (4 * PI), rel=1e-12)
    assert 0 < adm.rhat and 0 < adm.rbar1 <= 1 / PI
    adm2 = canonical.admissibility(2.0)
    assert adm2.r_adm == pytest.approx(adm.r_adm, rel=1e-12)  # radii scale with lambda separately


def test_bump_admissibility():
    adm = canonical.admissibility(1.0)
    f = canonical.make_bump("radial_cone", adm=adm)
    canonical.check_bump(f, 1.0, adm)
    steep = canonical.make_bump("radial_cone", adm=adm, lipschitz=PI * adm.r_adm)
    with pytest.raises(canonical.InadmissibleBumpError) as exc:
        canonical.check_bump(steep, 1.0, adm)
    assert exc.value.violations
    wide = canonical.make_bump("offcenter_cone", center=0.05, support_radius=0.05, adm=adm)
    with pytest.raises(canonical.InadmissibleBumpError):
        canonical.check_bump(wide, 1.0, adm)
    with pytest.raises(ValueError):
        canonical.BumpSpec("triangle", 0.0, 0.1, 0.1, 0.01)


def test_custom_samples_bump():
    adm = canonical.admissibility(1.0)
    th = np.linspace(0, 2 * PI, 12, endpoint=False)
    rim = 0.9 * adm.r_adm
    zs = np.vstack([[0.0, 0.0], np.column_stack([rim * np.cos(th), rim * np.sin(th)])])
    vals = np.r_[0.01 * rim, np.zeros(12)]
    f = canonical.make_bump("custom_samples", sample_z=zs, sample_values=vals, adm=adm)
    canonical.check_bump(f, 1.0, adm)
    assert canonical.bump_values(f, [[0.0, 0.0]])[0] == pytest.approx(0.01 * rim)
    assert canonical.bump_values(f, [[1.0, 1.0]])[0] == 0.0


def test_perturbed_volume_and_class_R():
    adm = canonical.admissibility(1.0)
    base = canonical.build_A_perturbed(1.0, None, rings=32, angles=48)
    assert sets.volume(base) == pytest.approx(A1_VOLUME, rel=1e-6)
    rad = canonical.build_A_perturbed(1.0, canonical.make_bump("radial_cone", adm=adm), rings=32, angles=48)
    off = canonical.build_A_perturbed(
        1.0, canonical.make_bump("offcenter_cone", center=0.3 * adm.r_adm, adm=adm), rings=32, angles=48
    )
    assert sets.volume(rad) == pytest.approx(sets.volume(base), rel=1e-14)
    assert sets.volume(off) == pytest.approx(sets.volume(base), rel=1e-14)
    assert canonical.in_class_R(base) and canonical.in_class_R(rad)
    assert not canonical.in_class_R(off)
    assert np.isfinite(canonical.class_R_defect(off)[1])


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 0.9), st.floats(0, 2 * PI), st.floats(0.1, 0.99))
def test_generated_bumps_admissible(frac, arg, lip_frac):
    adm = canonical.admissibility(1.0)
    c = frac * adm.r_adm * np.exp(1j * arg)
    budget = PI * adm.r_adm / 4
    f = canonical.make_bump("offcenter_cone", center=c, adm=adm, lipschitz=lip_frac * budget)
    canonical.check_bump(f, 1.0, adm)
    assert f.amplitude == pytest.approx(f.lipschitz * f.support_radius)


def test_l_profile_concave_on_cap():
    # second differences of l_1 on [1/pi, 1/2]; the cap joins the flat top with zero slope
    r = np.linspace(1 / PI, 0.5, 2001)
    u = canonical.l_profile(1.0, r)
    assert np.max(np.diff(u, 2)) <= 1e-15
    assert metric.h_prime(2 / PI) == pytest.approx(0.0, abs=1e-12)
