"""Compact sets in H^n: representations, volume, diameter and transforms.

Two representations are supported.

``ProfileSet``
    A rotationally invariant body ``{|z| <= R, |t| <= u(|z|)}`` given by a
    radial upper profile.  It is t-convex and plane-symmetric by
    construction.

``SectionSet``
    A finite family of horizontal samples ``z_i`` with a cell area each and,
    over each sample, a sorted list of disjoint closed t-intervals.  The
    represented compact set is the union of those vertical segments.

For either kind the diameter is attained at section endpoints: a vertical
segment lies in any ball containing its two ends, so interior points of a
section never beat its endpoints.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from math import gamma as _gamma_fn
from typing import Callable, Optional

import numpy as np
from scipy import integrate, interpolate, spatial

from . import core
from ._roots import golden_max
from .metric import SCREEN_RTOL, approx_distance_ws, distance, distance_ws

__all__ = [
    "ProfileSet",
    "SectionSet",
    "SearchConfig",
    "DiameterReport",
    "NcReport",
    "Envelopes",
    "sphere_area",
    "volume",
    "diameter",
    "max_dist_from_point",
    "nc_check",
    "t_convex_hull",
    "steiner_symmetrize",
    "envelopes",
    "profile_to_sections",
    "dilate_set",
    "polar_samples",
    "polar_rings",
    "cartesian_samples",
    "rotational_defect",
]


def sphere_area(n):
    """Area of the unit sphere S^{2n-1} in R^{2n}."""
    return 2.0 * np.pi ** n / _gamma_fn(n)


def sine_grid(R, m):
    """Radii ``R sin(pi k / 2m)``, k = 0..m: uniform near the axis, dense at the rim."""
    r = R * np.sin(0.5 * np.pi * np.arange(m + 1) / m)
    r[-1] = R
    return r


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProfileSet:
    """Body ``{|z| <= R, |t| <= u(|z|)}`` from samples ``u`` on ``grid``.

    Between samples the profile is a monotone piecewise cubic.  When ``func``
    is given it is used instead for evaluation and quadrature, and the
    samples only serve as a search grid and for serialization.
    """

    grid: np.ndarray
    u: np.ndarray
    n: int = 1
    func: Optional[Callable] = None
    breakpoints: tuple = ()

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        u = np.asarray(self.u, dtype=float)
        if grid.ndim != 1 or grid.shape != u.shape or grid.size < 2:
            raise ValueError("ProfileSet: grid and u must be 1-D of equal length >= 2")
        if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("ProfileSet: grid must start at 0 and increase strictly")
        if np.any(u < 0) or not np.all(np.isfinite(u)):
            raise ValueError("ProfileSet: profile samples must be finite and nonnegative")
        if self.n < 1:
            raise ValueError("ProfileSet: n must be >= 1")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))

    @classmethod
    def from_function(cls, func, R, m=256, n=1, breakpoints=()):
        grid = sine_grid(R, m)
        return cls(grid, np.maximum(func(grid), 0.0), n=n, func=func, breakpoints=breakpoints)

    @classmethod
    def ball(cls, radius=1.0, n=1, m=256):
        from .metric import _ball_profile_unchecked

        return cls.from_function(lambda r: _ball_profile_unchecked(radius, r), radius, m=m, n=n)

    @property
    def R(self):
        return float(self.grid[-1])

    @cached_property
    def _pchip(self):
        return interpolate.PchipInterpolator(self.grid, self.u, extrapolate=False)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= 0) & (r <= self.R)
        rc = np.clip(r, 0.0, self.R)
        val = self.func(rc) if self.func is not None else self._pchip(rc)
        return np.where(inside, np.maximum(val, 0.0), 0.0)

    def sampled(self):
        """Same samples with the exact profile dropped."""
        return ProfileSet(self.grid, self.u, n=self.n)

    def to_csv(self):
        lines = ["r,u"]
        lines += [f"{r:.17g},{v:.17g}" for r, v in zip(self.grid, self.u)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text, n=1):
        rows = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not rows or rows[0].replace(" ", "").lower() != "r,u":
            raise ValueError("profile CSV must start with the header 'r,u'")
        data = np.array([[float(x) for x in ln.split(",")] for ln in rows[1:]])
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError("profile CSV rows must have two columns")
        return cls(data[:, 0], data[:, 1], n=n)


@dataclass(frozen=True, eq=False)
class SectionSet:
    """Union of vertical segments over horizontal samples.

    ``zsamples`` has shape ``(N, 2n)`` in real coordinates ``(x, y)``;
    ``sections[i]`` is a ``(k_i, 2)`` array of sorted disjoint intervals
    (``k_i = 0`` when the sample is not in the projection); ``areas[i]`` is
    the horizontal cell measure used by volume.
    """

    n: int
    zsamples: np.ndarray
    sections: tuple
    areas: np.ndarray = field(default=None)

    def __post_init__(self):
        z = np.atleast_2d(np.asarray(self.zsamples, dtype=float))
        if z.shape[1] != 2 * self.n:
            raise ValueError("SectionSet: zsamples must have 2n columns")
        secs = []
        for iv in self.sections:
            iv = np.asarray(iv, dtype=float).reshape(-1, 2)
            if iv.size:
                if np.any(iv[:, 1] < iv[:, 0]):
                    raise ValueError("SectionSet: interval with t1 < t0")
                if np.any(iv[1:, 0] <= iv[:-1, 1]):
                    raise ValueError("SectionSet: intervals must be sorted and disjoint")
            secs.append(iv)
        if len(secs) != z.shape[0]:
            raise ValueError("SectionSet: one section list per sample is required")
        areas = np.ones(len(secs)) if self.areas is None else np.asarray(self.areas, dtype=float)
        if areas.shape != (len(secs),):
            raise ValueError("SectionSet: one area per sample is required")
        object.__setattr__(self, "zsamples", z)
        object.__setattr__(self, "sections", tuple(secs))
        object.__setattr__(self, "areas", areas)

    def __len__(self):
        return len(self.sections)

    @property
    def lengths(self):
        """Total 1-D measure of each section."""
        return np.array([float(np.sum(iv[:, 1] - iv[:, 0])) for iv in self.sections])

    def endpoints(self):
        """All interval endpoints as points, shape ``(M, 2n+1)``, with owner indices."""
        pts, owner = [], []
        for i, iv in enumerate(self.sections):
            if iv.size == 0:
                continue
            ts = iv.ravel()
            pts.append(np.column_stack([np.repeat(self.zsamples[i][None], ts.size, 0), ts]))
            owner.append(np.full(ts.size, i))
        if not pts:
            return np.empty((0, 2 * self.n + 1)), np.empty(0, dtype=int)
        return np.vstack(pts), np.concatenate(owner)

    def is_empty(self):
        return all(iv.size == 0 for iv in self.sections)

    def to_json(self):
        return json.dumps(
            {
                "n": self.n,
                "zsamples": self.zsamples.tolist(),
                "sections": [iv.tolist() for iv in self.sections],
                "areas": self.areas.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(
            n=int(obj["n"]),
            zsamples=obj["zsamples"],
            sections=obj["sections"],
            areas=obj.get("areas"),
        )


_PANEL_X, _PANEL_W = np.polynomial.legendre.leggauss(4)


def polar_rings(R, rings, breaks=()):
    """Ring radii and radial weights for ``int_0^R F(r) dr``.

    Composite 4-point Gauss panels in ``s`` with ``r = R sin s``; panel edges
    are aligned with ``breaks`` so profiles with kinks there integrate to
    high order.  Returns ``(radii, weights)`` with about ``rings`` entries.
    """
    edges = [0.0] + sorted(float(np.arcsin(min(1.0, b / R))) for b in breaks if 0 < b < R) + [0.5 * np.pi]
    panels_total = max(len(edges) - 1, int(np.ceil(rings / _PANEL_X.size)))
    span = 0.5 * np.pi
    r_out, w_out = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, int(round(panels_total * (b - a) / span)))
        cuts = np.linspace(a, b, k + 1)
        mid = 0.5 * (cuts[1:] + cuts[:-1])
        half = 0.5 * np.diff(cuts)
        sig = (mid[:, None] + half[:, None] * _PANEL_X[None]).ravel()
        wsig = (half[:, None] * _PANEL_W[None]).ravel()
        r_out.append(R * np.sin(sig))
        w_out.append(R * np.cos(sig) * wsig)
    return np.concatenate(r_out), np.concatenate(w_out)


def polar_samples(R, rings, angles, n=1, breaks=(), seed=0):
    """Polar sampling of the ball ``|z| <= R``; returns ``(zsamples, areas, radii)``.

    For n = 1 the angles are equispaced (starting at 0); for n >= 2 the
    directions are seeded Gaussian draws normalized to the sphere, in
    antipodal pairs.
    """
    r, w = polar_rings(R, rings, breaks)
    ring_w = sphere_area(n) * r ** (2 * n - 1) * w
    if n == 1:
        th = 2 * np.pi * np.arange(angles) / angles
        dirs = np.column_stack([np.cos(th), np.sin(th)])
    else:
        # antipodal pairs keep the sampling centred
        g = np.random.default_rng(seed).standard_normal(((angles + 1) // 2, 2 * n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        dirs = np.vstack([g, -g])[:angles]
    z = (r[:, None, None] * dirs[None]).reshape(-1, 2 * n)
    areas = np.repeat(ring_w / angles, angles)
    radii = np.repeat(r, angles)
    return z, areas, radii


def cartesian_samples(half_width, per_side):
    """Cell centres of a square grid over ``[-w, w]^2`` (n = 1)."""
    h = 2.0 * half_width / per_side
    c = -half_width + h * (np.arange(per_side) + 0.5)
    X, Y = np.meshgrid(c, c, indexing="ij")
    z = np.column_stack([X.ravel(), Y.ravel()])
    return z, np.full(z.shape[0], h * h)


# ---------------------------------------------------------------------------
# reports and configuration
# ---------------------------------------------------------------------------

@dataclass
class SearchConfig:
    """Grid sizes and refinement schedule for the maximizations."""

    grid_r: int = 128
    grid_theta: int = 64
    grid_kappa: int = 5
    starts: int = 16
    cycles: int = 6
    golden_iters: int = 40
    nc_samples: int = 64
    nc_grid_r: int = 128
    nc_grid_theta: int = 128
    nc_starts: int = 3
    wall_samples: int = 9
    chunk: int = 1024
    workers: int = 1
    thickness_eps: float = 1e-9

    def __post_init__(self):
        for name in ("grid_r", "grid_theta", "grid_kappa", "starts", "nc_samples", "chunk", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"SearchConfig.{name} must be positive")


@dataclass
class DiameterReport:
    value: float
    witness: tuple
    iterations: int
    refinement_level: int
    lower_witness_gap: float

    def to_dict(self):
        return {
            "value": self.value,
            "witness": [np.asarray(w).tolist() for w in self.witness],
            "iterations": self.iterations,
            "refinement_level": self.refinement_level,
            "lower_witness_gap": self.lower_witness_gap,
        }


@dataclass
class NcReport:
    samples: np.ndarray
    slack: np.ndarray
    worst_point: np.ndarray
    worst_slack: float
    diameter: float

    def to_dict(self):
        return {
            "samples": np.asarray(self.samples).tolist(),
            "slack": np.asarray(self.slack).tolist(),
            "worst_point": np.asarray(self.worst_point).tolist(),
            "worst_slack": self.worst_slack,
            "diameter": self.diameter,
        }


@dataclass
class Envelopes:
    f_plus: np.ndarray
    f_minus: np.ndarray
    U: np.ndarray
    Ehat: SectionSet


# ---------------------------------------------------------------------------
# volume
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def volume(s):
    """Lebesgue (Haar) measure of the set."""
    if isinstance(s, SectionSet):
        return float(np.sum(s.areas * s.lengths))
    n = s.n
    R = s.R
    if s.func is not None:
        # r = R sin(sig) removes the square-root cusp of ball-like profiles at the rim
        def integrand(sig):
            r = R * np.sin(sig)
            return 2.0 * float(s(r)) * r ** (2 * n - 1) * R * np.cos(sig)

        pts = sorted(np.arcsin(np.clip(b / R, 0, 1)) for b in s.breakpoints if 0 < b < R)
        val, _ = integrate.quad(
            integrand, 0.0, 0.5 * np.pi, points=pts or None, epsabs=0.0, epsrel=1e-13, limit=400
        )
        return sphere_area(n) * val
    # exact Gauss-Legendre on each cubic piece times r^(2n-1)
    a, b = s.grid[:-1], s.grid[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    r = mid[:, None] + half[:, None] * _GL_X[None]
    vals = 2.0 * s(r) * r ** (2 * n - 1)
    return sphere_area(n) * float(np.sum(half * (vals @ _GL_W)))


# ---------------------------------------------------------------------------
# pair distances for profile sets
# ---------------------------------------------------------------------------

def _pair_ws(r_p, t_p, r_q, t_q, theta, kappa):
    """Reduced offset for ``p = [r_p e_1, t_p]`` and ``q`` at relative angle theta.

    ``kappa`` is the modulus of the normalized Hermitian product of the two
    horizontal parts (1 for n = 1).
    """
    c = r_p * r_q * kappa
    a2 = r_p * r_p + r_q * r_q - 2.0 * c * np.cos(theta)
    s = t_q - t_p + 2.0 * c * np.sin(theta)
    return np.sqrt(np.maximum(a2, 0.0)), s


def _pair_points(n, r_p, t_p, r_q, t_q, theta, kappa):
    zp = np.zeros(n, dtype=complex)
    zp[0] = r_p
    zq = np.zeros(n, dtype=complex)
    zq[0] = r_q * kappa * np.exp(1j * theta)
    if n > 1:
        zq[1] = r_q * np.sqrt(max(0.0, 1.0 - kappa * kappa))
    return core.make_point(zp, t_p), core.make_point(zq, t_q)


def _grid_axes(s, cfg, r_count, theta_count):
    r = np.linspace(0.0, s.R, r_count)
    th = np.linspace(-np.pi, np.pi, theta_count + 1)[:-1]
    kap = np.array([1.0]) if s.n == 1 else np.linspace(0.0, 1.0, cfg.grid_kappa)
    return r, th, kap


def _pick_starts(values, count, shape, max_scan=4000):
    """Indices of up to ``count`` high grid values at least two cells apart."""
    flat = values.ravel()
    scan = min(max_scan, flat.size)
    top = np.argpartition(-flat, scan - 1)[:scan]
    top = top[np.argsort(-flat[top], kind="stable")]
    picked = []
    for idx in top:
        mi = np.array(np.unravel_index(idx, shape))
        if all(np.max(np.abs(mi - pj)) > 1 for pj in picked):
            picked.append(mi)
            if len(picked) == count:
                break
    return np.array(picked)


def _refine(obj, X, lo, hi, step, active, cycles, iters):
    """Coordinatewise golden-section ascent of ``obj`` from each row of X."""
    X = X.copy()
    best = obj(X)
    step = np.array(step, dtype=float)
    for cyc in range(cycles):
        for d in active:
            a = np.maximum(X[:, d] - step[d], lo[d])
            b = np.minimum(X[:, d] + step[d], hi[d])

            def f1(x, d=d):
                Y = X.copy()
                Y[:, d] = x
                return obj(Y)

            x, v = golden_max(f1, a, b, iters=iters)
            better = v > best
            X[better, d] = x[better]
            best = np.where(better, v, best)
        if cyc >= 1:
            step *= 0.5
    return X, best


def _profile_diameter(s, cfg):
    r, th, kap = _grid_axes(s, cfg, cfg.grid_r, cfg.grid_theta)
    u_r = s(r)
    sides = np.array([1.0, -1.0])
    shape = (r.size, r.size, th.size, kap.size, 2)
    vals = np.empty(shape)
    RP = r[:, None, None]
    TP = u_r[:, None, None]
    for jq in range(r.size):
        for k, sd in enumerate(sides):
            a, sv = _pair_ws(RP, TP, r[jq], sd * u_r[jq], th[None, :, None], kap[None, None, :])
            vals[:, jq, :, :, k] = approx_distance_ws(a, sv)
    starts = _pick_starts(vals, cfg.starts, shape)

    def obj(X):
        rp, rq, t, kp, sd = X.T
        a, sv = _pair_ws(rp, s(rp), rq, sd * s(rq), t, kp)
        return distance_ws(a, sv)

    X = np.column_stack([r[starts[:, 0]], r[starts[:, 1]], th[starts[:, 2]], kap[starts[:, 3]], sides[starts[:, 4]]])
    dr = r[1] - r[0]
    dth = th[1] - th[0]
    dk = (kap[1] - kap[0]) if kap.size > 1 else 0.0
    lo = np.array([0.0, 0.0, -2 * np.pi, 0.0, -1.0])
    hi = np.array([s.R, s.R, 2 * np.pi, 1.0, 1.0])
    active = [0, 1, 2] + ([3] if s.n > 1 else [])
    X, best = _refine(obj, X, lo, hi, [dr, dr, dth, dk, 0.0], active, cfg.cycles, cfg.golden_iters)
    i = int(np.argmax(best))
    rp, rq, t, kp, sd = X[i]
    p, q = _pair_points(s.n, rp, float(s(rp)), rq, sd * float(s(rq)), t, kp)
    value = float(best[i])
    gap = value - distance(p, q)
    return DiameterReport(
        value=value,
        witness=(p, q),
        iterations=int(vals.size + len(starts) * cfg.cycles * len(active) * (cfg.golden_iters + 2)),
        refinement_level=cfg.cycles,
        lower_witness_gap=max(0.0, gap),
    )


def _frame(zp):
    """Unitary matrix whose first column is ``zp / |zp|``."""
    n = zp.size
    nz = np.linalg.norm(zp)
    if nz == 0:
        return np.eye(n, dtype=complex)
    M = np.eye(n, dtype=complex)
    M[:, 0] = zp / nz
    Q, Rm = np.linalg.qr(M)
    Q[:, 0] *= Rm[0, 0]
    return Q


def _profile_max_from(s, P, cfg, starts_per_point):
    """Max over the set of ``d(p, .)`` for each row of P (shape (B, 2n+1))."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    n = s.n
    zP = core.zpart(P)
    rP = np.linalg.norm(zP, axis=1)
    tP = P[:, 2 * n]
    r, th, kap = _grid_axes(s, cfg, cfg.nc_grid_r, cfg.nc_grid_theta)
    u_r = s(r)
    sides = np.array([1.0, -1.0])
    shape = (r.size, th.size, kap.size, 2)
    X_all, owner = [], []
    for b in range(P.shape[0]):
        vals = np.empty(shape)
        for k, sd in enumerate(sides):
            a, sv = _pair_ws(rP[b], tP[b], r[:, None, None], sd * u_r[:, None, None], th[None, :, None], kap[None, None, :])
            vals[..., k] = approx_distance_ws(a, sv)
        st = _pick_starts(vals, starts_per_point, shape)
        X_all.append(np.column_stack([
            np.full(len(st), rP[b]), np.full(len(st), tP[b]),
            r[st[:, 0]], th[st[:, 1]], kap[st[:, 2]], sides[st[:, 3]],
        ]))
        owner.append(np.full(len(st), b))
    X = np.vstack(X_all)
    owner = np.concatenate(owner)

    def obj(X):
        rp, tp, rq, t, kp, sd = X.T
        a, sv = _pair_ws(rp, tp, rq, sd * s(rq), t, kp)
        return distance_ws(a, sv)

    dr = r[1] - r[0]
    dth = th[1] - th[0]
    dk = (kap[1] - kap[0]) if kap.size > 1 else 0.0
    lo = np.array([0, -np.inf, 0.0, -2 * np.pi, 0.0, -1.0])
    hi = np.array([np.inf, np.inf, s.R, 2 * np.pi, 1.0, 1.0])
    active = [2, 3] + ([4] if n > 1 else [])
    X, best = _refine(obj, X, lo, hi, [0, 0, dr, dth, dk, 0], active, cfg.cycles, cfg.golden_iters)
    values = np.full(P.shape[0], -np.inf)
    witnesses = np.zeros_like(P)
    for b in range(P.shape[0]):
        rows = np.nonzero(owner == b)[0]
        j = rows[int(np.argmax(best[rows]))]
        values[b] = best[j]
        _, rq, t, kp, sd = X[j, 1], X[j, 2], X[j, 3], X[j, 4], X[j, 5]
        _, q = _pair_points(n, rP[b], tP[b], rq, sd * float(s(rq)), t, kp)
        U = _frame(zP[b])
        zq = U @ core.zpart(q)
        witnesses[b] = core.make_point(zq, q[2 * n])
    return values, witnesses


# ---------------------------------------------------------------------------
# pair distances for section sets
# ---------------------------------------------------------------------------

def _ws_between(A, B):
    """Reduced offsets between every row of A and every row of B.

    Uses the Gram form of the horizontal distance, so ``a`` carries an
    absolute error near ``1e-8 |z|`` for nearly coincident points; callers
    only use it for screening and recompute exact offsets for candidates.
    """
    n = core.dim_of(A)
    xa, ya, ta = A[:, :n], A[:, n:2 * n], A[:, 2 * n]
    xb, yb, tb = B[:, :n], B[:, n:2 * n], B[:, 2 * n]
    na = np.sum(xa * xa + ya * ya, axis=1)
    nb = np.sum(xb * xb + yb * yb, axis=1)
    a2 = na[:, None] + nb[None, :] - 2.0 * (xa @ xb.T + ya @ yb.T)
    cross = ya @ xb.T - xa @ yb.T
    s = tb[None, :] - ta[:, None] - 2.0 * cross
    return np.sqrt(np.maximum(a2, 0.0)), s


def _ws_rows(P, Q):
    """Reduced offsets between matching rows of P and Q, computed directly."""
    n = core.dim_of(P)
    d = Q[:, :2 * n] - P[:, :2 * n]
    a = np.sqrt(np.sum(d * d, axis=1))
    cross = core.im_inner(P[:, :n], P[:, n:2 * n], Q[:, :n], Q[:, n:2 * n])
    return a, Q[:, 2 * n] - P[:, 2 * n] - 2.0 * cross


def _row_max(A, B, cfg, upper=False):
    """Exact ``max_j d(A_i, B_j)`` and argmax for every row, screened by the table.

    With ``upper=True`` (A and B the same array) only ``j >= i`` is scanned;
    the overall maximum is unchanged by symmetry of the distance.
    """
    margin = 3.0 * SCREEN_RTOL

    def work(lo):
        blk = A[lo:lo + cfg.chunk]
        off = lo if upper else 0
        a, s = _ws_between(blk, B[off:])
        approx = approx_distance_ws(a, s)
        rowmax = approx.max(axis=1)
        cand = approx >= (rowmax * (1.0 - margin))[:, None]
        ii, jj = np.nonzero(cand)
        jj = jj + off
        exact = distance_ws(*_ws_rows(blk[ii], B[jj]))
        best = np.full(blk.shape[0], -np.inf)
        arg = np.zeros(blk.shape[0], dtype=int)
        order = np.lexsort((jj, -exact, ii))
        first = np.unique(ii[order], return_index=True)[1]
        sel = order[first]
        best[ii[sel]] = exact[sel]
        arg[ii[sel]] = jj[sel]
        return best, arg

    starts = range(0, A.shape[0], cfg.chunk)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as ex:
            parts = list(ex.map(work, starts))
    else:
        parts = [work(lo) for lo in starts]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _section_diameter(s, cfg):
    P, _ = s.endpoints()
    if P.shape[0] == 0:
        raise ValueError("diameter of an empty set")
    best, arg = _row_max(P, P, cfg, upper=True)
    i = int(np.argmax(best))
    p, q = P[i], P[arg[i]]
    value = float(best[i])
    return DiameterReport(
        value=value,
        witness=(p, q),
        iterations=int(P.shape[0] ** 2),
        refinement_level=0,
        lower_witness_gap=max(0.0, value - distance(p, q)),
    )


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def diameter(s, cfg=None):
    """Diameter with a witness pair; see ``SearchConfig`` for the search budget."""
    cfg = cfg or SearchConfig()
    if isinstance(s, SectionSet):
        return _section_diameter(s, cfg)
    if not np.any(s.u > 0) and s.R == 0:
        raise ValueError("diameter of an empty set")
    return _profile_diameter(s, cfg)


def max_dist_from_point(s, p, cfg=None):
    """``(max_q d(p, q), q)`` over the set."""
    cfg = cfg or SearchConfig()
    p = np.asarray(p, dtype=float)
    if isinstance(s, SectionSet):
        P, _ = s.endpoints()
        if P.shape[0] == 0:
            raise ValueError("max_dist_from_point over an empty set")
        best, arg = _row_max(p[None], P, cfg)
        return float(best[0]), P[arg[0]]
    vals, wit = _profile_max_from(s, p[None], cfg, cfg.starts)
    return float(vals[0]), wit[0]


def _profile_boundary_samples(s, cfg):
    r = np.linspace(0.0, s.R, cfg.nc_samples)
    pts = [core.make_point(ri, float(s(ri))) if s.n == 1 else core.make_point(np.r_[ri, np.zeros(s.n - 1)], float(s(ri))) for ri in r]
    uR = float(s(s.R))
    if uR > 0:
        for t in np.linspace(-uR, uR, cfg.wall_samples + 2)[1:-1]:
            pts.append(core.make_point(np.r_[s.R, np.zeros(s.n - 1)], t))
    return np.array(pts)


def nc_check(s, diam_hint=None, cfg=None):
    """Slack ``diam - max_q d(p, q)`` at boundary samples p.

    A set that satisfies the diametral-partner condition has slack ~0
    everywhere.
    """
    cfg = cfg or SearchConfig()
    diam = diam_hint if diam_hint is not None else diameter(s, cfg).value
    if isinstance(s, SectionSet):
        P, _ = s.endpoints()
        if P.shape[0] == 0:
            raise ValueError("nc_check of an empty set")
        best, _ = _row_max(P, P, cfg)
    else:
        P = _profile_boundary_samples(s, cfg)
        best, _ = _profile_max_from(s, P, cfg, cfg.nc_starts)
    slack = diam - best
    i = int(np.argmax(slack))
    return NcReport(samples=P, slack=slack, worst_point=P[i], worst_slack=float(slack[i]), diameter=float(diam))


def t_convex_hull(s):
    """Replace every section by the single interval [min, max]."""
    secs = [iv if iv.shape[0] <= 1 else np.array([[iv[0, 0], iv[-1, 1]]]) for iv in s.sections]
    return SectionSet(s.n, s.zsamples, secs, s.areas)


def steiner_symmetrize(s):
    """Centered interval of the same total length over every sample."""
    secs = []
    for iv in s.sections:
        if iv.size == 0:
            secs.append(iv)
            continue
        half = 0.5 * float(np.sum(iv[:, 1] - iv[:, 0]))
        secs.append(np.array([[-half, half]]))
    return SectionSet(s.n, s.zsamples, secs, s.areas)


def envelopes(s, thickness_eps=None):
    """Upper/lower envelopes, the thick set U, and the regularized set Ehat.

    ``thickness_eps`` defaults to 1e-9 times the vertical extent.  The
    closure of U is approximated by adding every sample within one grid
    cell (1.5 nearest-neighbour spacings) of a sample in U.
    """
    N = len(s)
    fp = np.full(N, np.nan)
    fm = np.full(N, np.nan)
    for i, iv in enumerate(s.sections):
        if iv.size:
            fm[i], fp[i] = iv[0, 0], iv[-1, 1]
    have = ~np.isnan(fp)
    if not have.any():
        return Envelopes(fp, fm, np.zeros(N, bool), SectionSet(s.n, s.zsamples, [np.empty((0, 2))] * N, s.areas))
    extent = float(np.nanmax(fp) - np.nanmin(fm))
    eps = thickness_eps if thickness_eps is not None else 1e-9 * max(extent, 1e-300)
    U = have & (fp - fm > eps)
    closure = U.copy()
    if U.any() and N > 1:
        tree = spatial.cKDTree(s.zsamples)
        nn = tree.query(s.zsamples, k=2)[0][:, 1]
        for i in np.nonzero(U)[0]:
            closure[tree.query_ball_point(s.zsamples[i], 1.5 * nn[i])] = True
        closure &= have
    secs = [np.array([[fm[i], fp[i]]]) if closure[i] else np.empty((0, 2)) for i in range(N)]
    return Envelopes(fp, fm, U, SectionSet(s.n, s.zsamples, secs, s.areas))


def profile_to_sections(s, zcount=4096, rings=None, seed=0):
    """Sample a profile body on a polar grid of about ``zcount`` points."""
    if rings is None:
        rings = max(1, int(round(np.sqrt(zcount / np.pi))))
    angles = max(1, zcount // rings)
    z, areas, radii = polar_samples(s.R, rings, angles, n=s.n, breaks=s.breakpoints, seed=seed)
    u = s(radii)
    secs = [np.array([[-v, v]]) for v in u]
    return SectionSet(s.n, z, secs, areas)


def dilate_set(lam, s):
    """Image of the set under ``[z, t] -> [lam z, lam^2 t]``."""
    if not lam > 0:
        raise ValueError("dilate_set: factor must be positive")
    if isinstance(s, SectionSet):
        return SectionSet(
            s.n, s.zsamples * lam, [iv * lam * lam for iv in s.sections], s.areas * lam ** (2 * s.n)
        )
    if lam == 1:
        return s
    func = None
    if s.func is not None:
        f0 = s.func

        def func(r):
            return lam * lam * f0(np.asarray(r) / lam)

    return ProfileSet(s.grid * lam, s.u * lam * lam, n=s.n, func=func, breakpoints=tuple(b * lam for b in s.breakpoints))


def rotational_defect(s, decimals=9):
    """Largest disagreement between sections over samples of equal |z|.

    Zero (up to rounding) for sets invariant under rotations about the
    t-axis sampled on a polar grid.
    """
    radius = np.round(np.linalg.norm(s.zsamples, axis=1), decimals)
    worst = 0.0
    for rv in np.unique(radius):
        idx = np.nonzero(radius == rv)[0]
        ref = s.sections[idx[0]]
        for i in idx[1:]:
            iv = s.sections[i]
            if iv.shape != ref.shape:
                return np.inf
            if iv.size:
                worst = max(worst, float(np.max(np.abs(iv - ref))))
    return worst
