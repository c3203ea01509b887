import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisodiam import core

coord = st.floats(-10, 10, allow_nan=False)


def pt(n=1):
    return st.lists(coord, min_size=2 * n + 1, max_size=2 * n + 1).map(np.array)


def test_group_law_shear():
    p = core.make_point([1.0 + 0j], 0.0)
    q = core.make_point([1j], 0.0)
    # 2 Im(1 * conj(i)) = -2
    assert core.mul(p, q)[-1] == pytest.approx(-2.0)


def test_dim_and_split():
    p = core.make_point([1 + 2j, 3 - 1j], 5.0)
    assert core.dim_of(p) == 2
    x, y, t = core.split(p)
    np.testing.assert_allclose(x + 1j * y, [1 + 2j, 3 - 1j])
    np.testing.assert_allclose(core.zpart(p), [1 + 2j, 3 - 1j])
    assert t == 5.0
    with pytest.raises(ValueError):
        core.dim_of(np.zeros(4))


@given(pt(), pt(), pt())
def test_associativity(p, q, r):
    a = core.mul(core.mul(p, q), r)
    b = core.mul(p, core.mul(q, r))
    np.testing.assert_allclose(a, b, atol=1e-9 * (1 + np.abs(a).max()))


@given(pt())
def test_inverse(p):
    np.testing.assert_allclose(core.mul(p, core.inv(p)), core.origin(1), atol=1e-12)


@given(st.floats(0.1, 5), pt(), pt())
def test_dilation_is_automorphism(lam, p, q):
    a = core.dilate(lam, core.mul(p, q))
    b = core.mul(core.dilate(lam, p), core.dilate(lam, q))
    np.testing.assert_allclose(a, b, atol=1e-9 * (1 + np.abs(a).max()))


@given(st.floats(0, 7), pt(), pt())
def test_rotation_is_automorphism(th, p, q):
    a = core.rotate(th, core.mul(p, q))
    b = core.mul(core.rotate(th, p), core.rotate(th, q))
    np.testing.assert_allclose(a, b, atol=1e-9 * (1 + np.abs(a).max()))


@given(pt())
def test_reflections_are_involutions(p):
    np.testing.assert_allclose(core.reflect_sigma(core.reflect_sigma(p)), p)
    np.testing.assert_allclose(core.reflect_iota(core.reflect_iota(p)), p)


def test_point_serialization_roundtrip():
    p = np.array([0.1, -2.5, 1 / 3])
    np.testing.assert_array_equal(core.point_from_json(core.point_to_json(p)), p)
    # csv rows carry 9 significant digits
    np.testing.assert_allclose(core.point_from_csv_row(core.point_to_csv_row(p)), p, rtol=1e-8)
