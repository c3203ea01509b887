"""Carnot-Caratheodory distance on H^n from the closed-form ball description.

The closed unit ball is ``{|z| <= 1, |t| <= h(|z|)}`` with ``h = g o rho^-1``,

    g(phi)   = (2 phi - sin 2 phi) / (2 phi^2),
    rho(phi) = sin(phi) / phi.

A point ``[w, s]`` with ``w != 0`` lies on the sphere of radius ``d`` when
``|w| = d rho(phi)`` and ``|s| = d^2 g(phi)``, so ``phi`` solves
``g(phi) / rho(phi)^2 = |s| / |w|^2``.  That ratio is strictly increasing on
``[0, pi)``, which makes the inversion well posed.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import core
from ._roots import ConvergenceError, bisect, newton_bracketed

__all__ = [
    "GeodesicParam",
    "LemmaConstants",
    "ConvergenceError",
    "g_fn",
    "rho_fn",
    "rho_inv",
    "h_fn",
    "h_prime",
    "h_second",
    "critical_point",
    "ball_profile",
    "geodesic_point",
    "distance",
    "distance_ws",
    "approx_distance_ws",
    "SCREEN_RTOL",
    "ball_contains",
    "ball_envelope",
    "rbar",
    "cone_alpha",
    "lipschitz_h",
    "lemma_constants",
    "bicone_contains",
    "profile_table",
]

PI = np.pi
_SERIES_CUT = 0.5
_K = 12

# Taylor coefficients in powers of phi^2, highest degree first for np.polyval
_G_COEF = np.array([(-1) ** (k + 1) * 4.0 ** k / factorial(2 * k + 1) for k in range(1, _K + 1)])[::-1]
_GP_COEF = np.array(
    [(-1) ** (k + 1) * 4.0 ** k * (2 * k - 1) / factorial(2 * k + 1) for k in range(1, _K + 1)]
)[::-1]
_RHO_COEF = np.array([(-1) ** k / factorial(2 * k + 1) for k in range(0, _K + 1)])[::-1]
_OMR_COEF = np.array([(-1) ** (k + 1) / factorial(2 * k + 1) for k in range(1, _K + 1)])[::-1]
_RP_COEF = np.array([(-1) ** k * 2.0 * k / factorial(2 * k + 1) for k in range(1, _K + 1)])[::-1]


# --- scalar profile functions on [0, pi], no validation ---------------------

def _piecewise(phi, series, direct):
    """Evaluate ``series`` below the cut and ``direct`` above, each only where needed."""
    phi = np.asarray(phi, dtype=float)
    out = np.empty(phi.shape)
    small = phi < _SERIES_CUT
    if small.all():
        return series(phi)
    if not small.any():
        return direct(phi)
    out[small] = series(phi[small])
    out[~small] = direct(phi[~small])
    return out


def _g(phi):
    return _piecewise(
        phi,
        lambda x: x * np.polyval(_G_COEF, x * x),
        lambda x: (2.0 * x - np.sin(2.0 * x)) / (2.0 * x * x),
    )


def _g_prime(phi):
    return _piecewise(
        phi,
        lambda x: np.polyval(_GP_COEF, x * x),
        lambda x: 2.0 * np.cos(x) * (np.sin(x) - x * np.cos(x)) / x ** 3,
    )


def _rho(phi):
    return _piecewise(phi, lambda x: np.polyval(_RHO_COEF, x * x), lambda x: np.sin(x) / x)


def _one_minus_rho(phi):
    return _piecewise(
        phi,
        lambda x: x * x * np.polyval(_OMR_COEF, x * x),
        lambda x: 1.0 - np.sin(x) / x,
    )


def _rho_prime(phi):
    return _piecewise(
        phi,
        lambda x: x * np.polyval(_RP_COEF, x * x),
        lambda x: (x * np.cos(x) - np.sin(x)) / (x * x),
    )


_PHI_TAB = np.linspace(0.0, PI, 2049)
_RHO_TAB = _rho(_PHI_TAB)


def _rho_inv(r, e=None):
    """Inverse of rho on [0, 1]; ``e = 1 - r`` may be passed for accuracy near 1."""
    r = np.asarray(r, dtype=float)
    if e is None:
        e = 1.0 - r
    e = np.asarray(e, dtype=float)
    r, e = np.broadcast_arrays(r, e)

    # r - rho(phi) == (1 - rho(phi)) - e; the complement form keeps digits near r = 1
    def f(phi, e):
        return _one_minus_rho(phi) - e

    def fp(phi, e):
        return -_rho_prime(phi)

    x0 = np.interp(r, _RHO_TAB[::-1], _PHI_TAB[::-1])
    x0 = np.where(e < 1e-3, np.sqrt(6.0 * np.maximum(e, 0.0)), x0)
    out = newton_bracketed(f, fp, np.zeros(r.shape), np.full(r.shape, PI), x0=x0, args=(e,))
    out = np.where(e <= 0.0, 0.0, out)
    return np.where(r <= 0.0, PI, out)


def _rho_inv_bisect(r, e=None):
    """Bisection-only inverse of rho, kept independent of the Newton path."""
    r = np.asarray(r, dtype=float)
    if e is None:
        e = 1.0 - r
    e = np.asarray(e, dtype=float)
    r, e = np.broadcast_arrays(r, e)

    def f(phi, e):
        return _one_minus_rho(phi) - e

    out = bisect(f, np.zeros(r.shape), np.full(r.shape, PI), args=(e,), maxiter=1200)
    # below 1e-200 the leading term sqrt(6e) is exact in double precision
    tiny = e < 1e-200
    return np.where(tiny, np.sqrt(6.0 * np.maximum(e, 0.0)), out)


def _h(r, e=None):
    return _g(_rho_inv(r, e))


def _h_prime(r):
    phi = _rho_inv(r)
    with np.errstate(divide="ignore"):
        return -2.0 * np.cos(phi) / phi


def _h_second(r):
    phi = _rho_inv(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 2.0 * (phi * np.sin(phi) + np.cos(phi)) / (phi * phi * _rho_prime(phi))


# --- validated public scalar functions --------------------------------------

def _ret(x, like):
    return float(x) if np.ndim(like) == 0 else x


def _check_interval(x, lo, hi, name, open_lo=False, open_hi=False):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name}: non-finite argument")
    bad_lo = x <= lo if open_lo else x < lo
    bad_hi = x >= hi if open_hi else x > hi
    if np.any(bad_lo | bad_hi):
        lb = "(" if open_lo else "["
        rb = ")" if open_hi else "]"
        raise ValueError(f"{name}: argument outside {lb}{lo:g}, {hi:g}{rb}")
    return x


def g_fn(phi):
    """``(2 phi - sin 2phi) / (2 phi^2)`` on ``[0, pi]``, with ``g(0) = 0``."""
    x = _check_interval(phi, 0.0, PI, "g_fn")
    return _ret(_g(x), phi)


def rho_fn(phi):
    """``sin(phi) / phi`` on ``[0, pi]``, with ``rho(0) = 1``."""
    x = _check_interval(phi, 0.0, PI, "rho_fn")
    return _ret(_rho(x), phi)


def rho_inv(r):
    x = _check_interval(r, 0.0, 1.0, "rho_inv")
    return _ret(_rho_inv(x), r)


def h_fn(r):
    """Unit-ball profile: ``B(0,1) = {|z| <= 1, |t| <= h(|z|)}``."""
    x = _check_interval(r, 0.0, 1.0, "h_fn")
    return _ret(_h(x), r)


def h_prime(r):
    """Closed form ``h'(r) = -2 cos(phi) / phi`` with ``phi = rho^-1(r)``; r in [0, 1)."""
    x = _check_interval(r, 0.0, 1.0, "h_prime", open_hi=True)
    return _ret(_h_prime(x), r)


def h_second(r):
    """Closed form of h''; defined on [0, 1) (it blows up as r -> 1)."""
    x = _check_interval(r, 0.0, 1.0, "h_second", open_hi=True)
    return _ret(_h_second(x), r)


_CRIT = None


def critical_point():
    """Return ``(phi_c, r_c)``: the inflection of h, where ``phi sin phi + cos phi = 0``."""
    global _CRIT
    if _CRIT is None:
        phi_c = newton_bracketed(
            lambda x: -(x * np.sin(x) + np.cos(x)),
            lambda x: -(x * np.cos(x)),
            np.array(PI / 2), np.array(PI), xtol=1e-16,
        )
        phi_c = float(phi_c)
        _CRIT = (phi_c, float(_rho(phi_c)))
    return _CRIT


def ball_profile(lam, r):
    """Profile of the ball of radius ``lam`` at the origin: ``lam^2 h(r / lam)``."""
    if not lam > 0:
        raise ValueError("ball_profile: radius must be positive")
    x = _check_interval(r, 0.0, lam, "ball_profile")
    return _ret(lam * lam * _h(np.minimum(x / lam, 1.0)), r)


def _ball_profile_unchecked(lam, r):
    x = np.clip(np.asarray(r, dtype=float) / lam, 0.0, 1.0)
    return lam * lam * _h(x)


# --- geodesics and distances -------------------------------------------------

@dataclass(frozen=True)
class GeodesicParam:
    """Sphere parametrization from the origin: endpoint at distance ``|chi|``."""

    chi: np.ndarray
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "chi", np.atleast_1d(np.asarray(self.chi, dtype=complex)))
        if not abs(self.phi) <= PI:
            raise ValueError("GeodesicParam: |phi| must not exceed pi")


def geodesic_point(gp):
    a = abs(gp.phi)
    z = _rho(a) * gp.chi
    t = np.sign(gp.phi) * _g(a) * float(np.vdot(gp.chi, gp.chi).real)
    return core.make_point(z, t)


def _phi_from_ratio(k):
    """Solve ``g(phi) = k rho(phi)^2`` for phi in (0, pi); k > 0 finite.

    Solved in the form ``log g - 2 log rho = log k``, which stays well
    conditioned at both ends of the bracket.
    """
    k = np.asarray(k, dtype=float)

    def f(phi, logk):
        return np.log(_g(phi)) - 2.0 * np.log(_rho(phi)) - logk

    def fp(phi, logk):
        return _g_prime(phi) / _g(phi) - 2.0 * _rho_prime(phi) / _rho(phi)

    x0 = np.interp(k, _PSI_TAB, _PHI_TAB[:-1])
    x0 = np.where(k < 1e-3, 1.5 * k, x0)
    with np.errstate(divide="ignore", over="ignore"):
        x0 = np.where(k > 1e5, PI - np.sqrt(PI / k), x0)
    return newton_bracketed(f, fp, np.zeros(k.shape), np.full(k.shape, PI), x0=x0, args=(np.log(k),))


with np.errstate(divide="ignore", invalid="ignore"):
    _PSI_TAB = _g(_PHI_TAB[:-1]) / _rho(_PHI_TAB[:-1]) ** 2


def distance_ws(a, s):
    """Distance from the origin to ``[w, s]`` given ``a = |w|`` and s.

    Vectorized; the inversion route.
    """
    a = np.asarray(a, dtype=float)
    s = np.abs(np.asarray(s, dtype=float))
    a, s = np.broadcast_arrays(a, s)
    out = np.empty(a.shape)
    vert = a == 0.0
    horiz = (s == 0.0) & ~vert
    out[vert] = np.sqrt(PI * s[vert])
    out[horiz] = a[horiz]
    gen = ~(vert | horiz)
    if gen.any():
        ag, sg = a[gen], s[gen]
        with np.errstate(over="ignore"):
            k = sg / (ag * ag)
        k = np.minimum(k, 1e300)
        phi = _phi_from_ratio(k)
        lowphi = phi <= PI / 2
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(lowphi, ag / _rho(np.where(lowphi, phi, 0.0)), np.sqrt(sg / _g(np.where(lowphi, 1.0, phi))))
        out[gen] = d
    return out


def _distance_ws_bisect(a, s):
    """Nesting-based oracle: the unique d >= |w| with ``d^2 h(|w|/d) = |s|``."""
    a = np.asarray(a, dtype=float)
    s = np.abs(np.asarray(s, dtype=float))
    a, s = np.broadcast_arrays(a, s)
    out = np.empty(a.shape)
    vert = a == 0.0
    horiz = (s == 0.0) & ~vert
    out[vert] = np.sqrt(PI * s[vert])
    out[horiz] = a[horiz]
    gen = ~(vert | horiz)
    if gen.any():
        ag, sg = a[gen], s[gen]

        def f(d, ag, sg):
            e = np.clip((d - ag) / d, 0.0, 1.0)
            return d * d * _g(_rho_inv_bisect(1.0 - e, e)) - sg

        out[gen] = bisect(f, ag, ag + np.sqrt(PI * sg), args=(ag, sg))
    return out


def _reduce_pair(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.shape(p)[-1] != np.shape(q)[-1]:
        raise ValueError("distance: dimension mismatch")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
        raise ValueError("distance: non-finite coordinates")
    rel = core.mul(core.inv(p), q)
    n = core.dim_of(rel)
    a = np.sqrt(np.sum(rel[..., :2 * n] ** 2, axis=-1))
    return a, rel[..., 2 * n]


def distance(p, q, method="inversion"):
    """CC distance between points (or broadcast stacks of points)."""
    a, s = _reduce_pair(p, q)
    if method == "inversion":
        d = distance_ws(a, s)
    elif method == "bisection":
        d = _distance_ws_bisect(a, s)
    else:
        raise ValueError(f"unknown distance method {method!r}")
    return float(d) if np.ndim(d) == 0 else d


# Tabulated 1-homogeneous reduction used to screen large pair sets:
# d(a, s) = sqrt(a^2 + |s|) * Phi(atan2(sqrt|s|, a)).
_BETA_TAB = np.linspace(0.0, PI / 2, 8193)
_PHI_DIST_TAB = distance_ws(np.cos(_BETA_TAB), np.sin(_BETA_TAB) ** 2)


def _screen_error():
    mid = 0.5 * (_BETA_TAB[1:] + _BETA_TAB[:-1])
    exact = distance_ws(np.cos(mid), np.sin(mid) ** 2)
    approx = np.interp(mid, _BETA_TAB, _PHI_DIST_TAB)
    return float(np.max(np.abs(exact - approx)))


SCREEN_RTOL = 8.0 * _screen_error() + 1e-12


_TAB_SCALE = (_BETA_TAB.size - 1) / (PI / 2)
_TAB_SLOPE = np.diff(_PHI_DIST_TAB)


def approx_distance_ws(a, s):
    """Cheap interpolated distance, relative error below ``SCREEN_RTOL``."""
    a = np.asarray(a, dtype=float)
    b2 = np.abs(np.asarray(s, dtype=float))
    rad = np.sqrt(a * a + b2)
    x = np.arctan2(np.sqrt(b2), a) * _TAB_SCALE
    i = np.minimum(x.astype(np.intp), _TAB_SLOPE.size - 1)
    return rad * (_PHI_DIST_TAB[i] + (x - i) * _TAB_SLOPE[i])


# --- balls -------------------------------------------------------------------

_BAND = 1e-12


def ball_contains(center, radius, p, closed=True):
    """Membership in ``B(center, radius)`` through the profile description."""
    if not radius > 0:
        raise ValueError("ball_contains: radius must be positive")
    a, s = _reduce_pair(center, p)
    tol_w = _BAND * max(1.0, radius)
    tol_t = _BAND * max(1.0, radius * radius)
    prof = _ball_profile_unchecked(radius, a)
    if closed:
        res = (a <= radius + tol_w) & (np.abs(s) <= prof + tol_t)
    else:
        res = (a < radius - tol_w) & (np.abs(s) < prof - tol_t)
    return bool(res) if np.ndim(res) == 0 else res


def ball_envelope(p, dbar, z, sign=1):
    """Upper (sign=+1) or lower (sign=-1) t-envelope of ``B(p, dbar)`` over z."""
    if not dbar > 0:
        raise ValueError("ball_envelope: radius must be positive")
    p = np.asarray(p, dtype=float)
    n = core.dim_of(p)
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        z = z[None]
    if z.shape[-1] != n:
        raise ValueError(f"ball_envelope: z must be a complex {n}-vector")
    zp = core.zpart(p)
    off = np.sqrt(np.sum(np.abs(z - zp) ** 2, axis=-1))
    if np.any(off > dbar * (1 + _BAND)):
        raise ValueError("ball_envelope: z lies outside the projected ball")
    cross = np.sum((zp * np.conj(z)).imag, axis=-1)
    sgn = 1.0 if sign in (1, "+") else -1.0
    val = sgn * _ball_profile_unchecked(dbar, off) + p[2 * n] + 2.0 * cross
    return float(val) if np.ndim(val) == 0 else val


# --- lemma constants -----------------------------------------------------------

def _check_delta(d, delta):
    if not (d > 0 and delta > 0):
        raise ValueError("d and delta must be positive")
    top = 2.0 * d * d / PI
    if delta > top * (1 + 1e-14):
        raise ValueError(f"delta={delta:g} exceeds the maximal profile height {top:g}")


def rbar(d, delta):
    """Root of ``h_d(r) = delta`` on the decreasing branch ``[2d/pi, d]``."""
    _check_delta(d, delta)
    level = min(delta / (d * d), 2.0 / PI)
    phi = newton_bracketed(
        lambda x: _g(x) - level, _g_prime, np.array(0.0), np.array(PI / 2), xtol=1e-16
    )
    return float(d * _rho(phi))


def _sup_abs_hprime(x):
    """``sup |h'|`` on ``[0, x]`` for ``x < 1`` (one interior extremum at r_c)."""
    _, r_c = critical_point()
    cands = [2.0 / PI, abs(float(_h_prime(x)))]
    cands.append(float(_h_prime(min(r_c, x))))
    grid = np.linspace(0.0, x, 256)
    cands.append(float(np.max(np.abs(_h_prime(grid)))))
    return max(cands)


def lipschitz_h(d, upto):
    """Lipschitz constant of ``h_d`` on ``[0, upto]``, ``upto < d``."""
    if not 0 <= upto < d:
        raise ValueError("lipschitz_h: need 0 <= upto < d")
    return d * _sup_abs_hprime(upto / d)


def cone_alpha(d, delta):
    """Slope of the outer vertical cone at sphere points with ``|t| >= delta``."""
    return lipschitz_h(d, rbar(d, delta))


@dataclass(frozen=True)
class LemmaConstants:
    C: float
    d: float
    delta: float
    alpha: float
    rbar: float
    M: float
    gamma: float
    beta: float


def lemma_constants(C, d, delta):
    if C < 0:
        raise ValueError("C must be nonnegative")
    rb = rbar(d, delta)
    rb = max(rb, 0.5 * d * (1 + 1e-12))
    alpha = lipschitz_h(d, rb)
    M = lipschitz_h(d, 0.5 * (d + rb))
    gamma = min(0.5 * (d - rb), delta / (2 * C + 2 * d + M))
    return LemmaConstants(C=C, d=d, delta=delta, alpha=alpha, rbar=rb, M=M, gamma=gamma, beta=alpha + 2 * C)


def bicone_contains(p1, p2, r, q, tol=1e-12):
    """Membership in the double cone spanned by a vertical pair over radius r."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    n = core.dim_of(p1)
    if not r > 0:
        raise ValueError("bicone_contains: r must be positive")
    if np.max(np.abs(p1[:2 * n] - p2[:2 * n])) > 1e-12:
        raise ValueError("bicone_contains: p1 and p2 are not vertically aligned")
    d12 = 0.5 * (p2[2 * n] - p1[2 * n])
    if not d12 > 0:
        raise ValueError("bicone_contains: need t(p2) > t(p1)")
    q = np.asarray(q, dtype=float)
    off = np.sqrt(np.sum((q[..., :2 * n] - p1[:2 * n]) ** 2, axis=-1))
    mid = 0.5 * (p1[2 * n] + p2[2 * n])
    res = (off <= r * (1 + tol)) & (np.abs(q[..., 2 * n] - mid) <= d12 * (1.0 - off / r) + tol * max(1.0, d12))
    return bool(res) if np.ndim(res) == 0 else res


def profile_table(m=101):
    """Rows ``(r, h, h', h'')`` on ``r = k/m``, ``k = 0..m-1``."""
    r = np.arange(m) / m
    return np.column_stack([r, _h(r), _h_prime(r), _h_second(r)])
