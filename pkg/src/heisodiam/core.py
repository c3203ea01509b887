"""Group algebra on the Heisenberg group H^n.

A point ``[z, t]`` with ``z = x + iy`` in C^n is stored as a flat real
vector ``(x_1..x_n, y_1..y_n, t)`` of length ``2n + 1``.  Every function
accepts a single point or a stack of points (shape ``(..., 2n + 1)``) and
broadcasts over the leading axes.
"""

import json

import numpy as np

__all__ = [
    "dim_of",
    "make_point",
    "split",
    "zpart",
    "tpart",
    "mul",
    "inv",
    "dilate",
    "rotate",
    "reflect_sigma",
    "reflect_iota",
    "project",
    "im_inner",
    "origin",
    "point_to_json",
    "point_from_json",
    "point_to_csv_row",
    "point_from_csv_row",
]


def dim_of(p):
    """Return n for an array whose last axis has length 2n + 1."""
    size = np.shape(p)[-1]
    if size < 3 or size % 2 == 0:
        raise ValueError(f"point length {size} is not of the form 2n+1 with n >= 1")
    return (size - 1) // 2


def _as_points(p):
    p = np.asarray(p, dtype=float)
    dim_of(p)
    return p


def _check_same_dim(p, q):
    if np.shape(p)[-1] != np.shape(q)[-1]:
        raise ValueError(
            f"dimension mismatch: points of length {np.shape(p)[-1]} and {np.shape(q)[-1]}"
        )


def make_point(z, t):
    """Build a point from a complex n-vector (or scalar) ``z`` and real ``t``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return np.concatenate([z.real, z.imag, [float(t)]])


def origin(n=1):
    return np.zeros(2 * n + 1)


def split(p):
    """Return ``(x, y, t)`` views of a point array."""
    p = _as_points(p)
    n = dim_of(p)
    return p[..., :n], p[..., n:2 * n], p[..., 2 * n]


def zpart(p):
    """Complex horizontal component, shape ``(..., n)``."""
    x, y, _ = split(p)
    return x + 1j * y


def tpart(p):
    return split(p)[2]


def im_inner(xp, yp, xq, yq):
    """``Im(z_p . conj(z_q))`` summed over coordinates, from real parts."""
    return np.sum(yp * xq - xp * yq, axis=-1)


def mul(p, q):
    """Group product ``[z_p + z_q, t_p + t_q + 2 Im(z_p conj(z_q))]``."""
    p = _as_points(p)
    q = _as_points(q)
    _check_same_dim(p, q)
    xp, yp, tp = split(p)
    xq, yq, tq = split(q)
    t = tp + tq + 2.0 * im_inner(xp, yp, xq, yq)
    return np.concatenate([xp + xq, yp + yq, t[..., None]], axis=-1)


def inv(p):
    return -_as_points(p)


def dilate(lam, p):
    """Anisotropic dilation ``[lam z, lam^2 t]``."""
    if lam < 0:
        raise ValueError("dilation factor must be nonnegative")
    p = _as_points(p)
    n = dim_of(p)
    out = p * lam
    out[..., 2 * n] *= lam
    return out


def rotate(theta, p):
    """Coordinatewise phase rotation ``z_j -> exp(i theta_j) z_j``; t is fixed."""
    p = _as_points(p)
    n = dim_of(p)
    theta = np.mod(np.broadcast_to(np.asarray(theta, dtype=float), (n,)), 2 * np.pi)
    c, s = np.cos(theta), np.sin(theta)
    x, y, t = split(p)
    return np.concatenate([c * x - s * y, s * x + c * y, t[..., None]], axis=-1)


def reflect_sigma(p):
    """``[z, t] -> [conj(z), t]``."""
    p = _as_points(p).copy()
    n = dim_of(p)
    p[..., n:2 * n] *= -1.0
    return p


def reflect_iota(p):
    """``[z, t] -> [conj(z), -t]``; an isometry of the CC distance."""
    p = reflect_sigma(p)
    p[..., -1] *= -1.0
    return p


def project(p):
    """Canonical projection to C^n."""
    return zpart(p)


def point_to_json(p):
    return json.dumps([float(v) for v in np.asarray(p, dtype=float).ravel()])


def point_from_json(text):
    return _as_points(json.loads(text))


def point_to_csv_row(p):
    return ",".join(f"{float(v):.9g}" for v in np.asarray(p, dtype=float).ravel())


def point_from_csv_row(row):
    return _as_points([float(v) for v in row.strip().split(",")])
