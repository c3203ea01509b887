"""The candidate isodiametric sets A_lambda and their perturbations A_{lambda,f}.

``A_lambda`` is the body of revolution with upper profile

    l(r) = lambda^2 / (2 pi)             for 0 <= r <= lambda / pi,
    l(r) = lambda^2 h(2 r / lambda) / 4   for lambda / pi <= r <= lambda / 2,

i.e. a flat cylinder capped by the ball of radius lambda/2.  Shearing its
central cylinder vertically by a small Lipschitz bump f gives sets with the
same volume and diameter.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import interpolate, spatial

from . import core
from ._roots import bisect, newton_bracketed
from .metric import (
    _g,
    _g_prime,
    _h,
    _rho,
    _rho_inv,
    distance_ws,
)
from .sets import ProfileSet, SectionSet, polar_samples, rotational_defect

__all__ = [
    "InadmissibleBumpError",
    "l_profile",
    "build_A",
    "antipode",
    "AdmissibilityConstants",
    "admissibility",
    "BumpSpec",
    "make_bump",
    "check_bump",
    "bump_values",
    "build_A_perturbed",
    "class_R_defect",
    "in_class_R",
]

PI = np.pi


class InadmissibleBumpError(ValueError):
    """A bump violates the admissibility constraints; ``violations`` lists them."""

    def __init__(self, violations):
        super().__init__("inadmissible bump: " + "; ".join(violations))
        self.violations = list(violations)


def _l_unchecked(lam, r):
    r = np.asarray(r, dtype=float)
    x = np.clip(2.0 * r / lam, 0.0, 1.0)
    cap = 0.25 * lam * lam * _h(x, 1.0 - x)
    return np.where(r <= lam / PI, lam * lam / (2.0 * PI), cap)


def l_profile(lam, r):
    """Upper profile of A_lambda at horizontal radius r."""
    if not lam > 0:
        raise ValueError("l_profile: lambda must be positive")
    r = np.asarray(r, dtype=float)
    tol = 1e-12 * lam
    if np.any(r < -tol) or np.any(r > lam / 2 + tol):
        raise ValueError("l_profile: r must lie in [0, lambda/2]")
    out = _l_unchecked(lam, np.clip(r, 0.0, lam / 2))
    return float(out) if out.ndim == 0 else out


def build_A(lam=1.0, grid_size=256, n=1):
    """A_lambda as a profile set (exact profile attached)."""
    if not lam > 0:
        raise ValueError("build_A: lambda must be positive")
    return ProfileSet.from_function(
        lambda r: _l_unchecked(lam, r), lam / 2, m=grid_size, n=n, breakpoints=(lam / PI,)
    )


# ---------------------------------------------------------------------------
# antipodes on the cap
# ---------------------------------------------------------------------------

_RHO_QUARTER = float(_rho(PI / 4))


def _g_inv_low(v):
    """Inverse of g on [0, pi/2] (where g is increasing)."""
    v = np.asarray(v, dtype=float)
    return newton_bracketed(
        lambda x, v: _g(x) - v, lambda x, v: _g_prime(x),
        np.zeros(v.shape), np.full(v.shape, PI / 2), x0=np.minimum(1.5 * v, PI / 4), args=(v,),
    )


def antipode(p, lam=1.0):
    """Diametral partner of a point on the spherical cap of A_lambda.

    ``p`` must lie on the sphere of radius lambda/2 about the origin with
    ``lambda/pi < |z_p| < lambda/2``.  Writing ``p`` in sphere coordinates
    with angle phi in (-pi/2, pi/2), the partner is
    ``[exp(i(pi + 2 phi)) z_p, -t_p]``.  Accepts a single point or a stack.
    """
    if not lam > 0:
        raise ValueError("antipode: lambda must be positive")
    p = np.asarray(p, dtype=float)
    single = p.ndim == 1
    P = np.atleast_2d(p)
    n = core.dim_of(P)
    z = core.zpart(P)
    t = P[:, 2 * n]
    nz = np.linalg.norm(z, axis=1)
    rad = 0.5 * lam
    if np.any(nz <= lam / PI) or np.any(nz >= rad):
        raise ValueError("antipode: |z_p| must lie strictly between lambda/pi and lambda/2")
    if np.any(np.abs(distance_ws(nz, t) - rad) > 1e-8 * lam):
        raise ValueError("antipode: p is not on the sphere of radius lambda/2")
    # rho is flat near phi = 0 and g is flat near pi/2: invert whichever is steep
    x = nz / rad
    e = 1.0 - x
    from_rho = _rho_inv(x, e)
    from_g = _g_inv_low(np.abs(t) / (rad * rad))
    phi = np.where(x > _RHO_QUARTER, from_g, from_rho) * np.sign(t)
    zq = np.exp(1j * (PI + 2.0 * phi))[:, None] * z
    Q = np.column_stack([zq.real, zq.imag, -t])
    return Q[0] if single else Q


# ---------------------------------------------------------------------------
# admissibility of perturbations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityConstants:
    kappa: float
    rbar1: float
    rhat: float
    r_adm: float
    lam: float = 1.0

    def to_dict(self):
        return {"kappa": self.kappa, "rbar1": self.rbar1, "rhat": self.rhat, "r_adm": self.r_adm, "lam": self.lam}


def _tangent_defect(r):
    """``|h(r) - h(0) - h'(0) r| - (kappa/2) r``; nonpositive where the tangent bound holds."""
    r = np.asarray(r, dtype=float)
    return np.abs(_h(r, 1.0 - r) - 1.0 / PI - 2.0 * r / PI) - r / (2.0 * PI)


@lru_cache(maxsize=None)
def _admissibility_unit(samples, safety):
    kappa = 1.0 / PI
    # largest rho0 with the tangent bound on (0, rho0]: scan, then bisect the first crossing
    r = np.linspace(0.0, 1.0, 20001)[1:]
    bad = np.nonzero(_tangent_defect(r) > 0)[0]
    if bad.size == 0:
        rho0 = 1.0
    else:
        j = bad[0]
        lo = r[j - 1] if j > 0 else 0.0
        rho0 = float(bisect(lambda x: _tangent_defect(x), np.array(lo), np.array(r[j])))
    rbar1 = min(0.5 * rho0, 0.5 * (1.0 - 1e-12), (1.0 / PI) * (1.0 - 1e-12))
    # K: boundary of A_1 with |z| >= rbar1; by rotation invariance only |z| matters
    rk = np.linspace(rbar1, 0.5, samples)
    lk = _l_unchecked(1.0, rk)
    p0t = 1.0 / (2.0 * PI)
    worst = -np.inf
    for side in (1.0, -1.0):
        tq = side * lk
        d_up = distance_ws(rk, tq - p0t)
        d_dn = distance_ws(rk, tq + p0t)
        worst = max(worst, float(np.max(np.maximum(d_up, d_dn))))
    rhat = safety * max(1.0 - worst, 0.0)
    if not rhat > 0:
        raise RuntimeError("admissibility: sampled K touches the unit spheres about p0")
    r_adm = min(rbar1, 2.0 * rhat / PI, kappa / 4.0)
    return kappa, rbar1, rhat, r_adm


def admissibility(lam=1.0, samples=4096, safety=0.95):
    """Constants bounding admissible perturbations of A_lambda.

    ``rbar1`` is half the largest radius on which h stays within
    ``(kappa/2) r`` of its tangent line at 0; ``rhat`` is ``safety`` times
    the sampled margin ``min_K (1 - max(d(p0, q), d(p0^-1, q)))`` with
    ``p0 = [0, 1/(2 pi)]``; ``r_adm = min(rbar1, 2 rhat / pi, kappa / 4)``.
    All are computed at lambda = 1; perturbations of A_lambda scale
    horizontally by lambda.
    """
    if not lam > 0:
        raise ValueError("admissibility: lambda must be positive")
    kappa, rbar1, rhat, r_adm = _admissibility_unit(int(samples), float(safety))
    return AdmissibilityConstants(kappa, rbar1, rhat, r_adm, float(lam))


# ---------------------------------------------------------------------------
# bumps
# ---------------------------------------------------------------------------

BUMP_KINDS = ("radial_cone", "offcenter_cone", "custom_samples")


@dataclass(frozen=True, eq=False)
class BumpSpec:
    """A Lipschitz height function f on C^n with compact support.

    Cones are ``amplitude * max(0, 1 - |z - center| / support_radius)``.
    ``custom_samples`` (n = 1 only) interpolates ``sample_values`` given at
    ``sample_z`` piecewise linearly and is zero outside their convex hull.
    """

    kind: str
    center: np.ndarray
    support_radius: float
    lipschitz: float
    amplitude: float
    sample_z: np.ndarray = field(default=None)
    sample_values: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kind not in BUMP_KINDS:
            raise ValueError(f"unknown bump kind {self.kind!r}")
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=complex)))
        if self.kind == "custom_samples":
            if self.sample_z is None or self.sample_values is None:
                raise ValueError("custom_samples bump needs sample_z and sample_values")
            object.__setattr__(self, "sample_z", np.atleast_2d(np.asarray(self.sample_z, dtype=float)))
            object.__setattr__(self, "sample_values", np.asarray(self.sample_values, dtype=float))

    @property
    def n(self):
        return self.center.size

    def to_dict(self):
        d = {
            "kind": self.kind,
            "center": [[c.real, c.imag] for c in self.center],
            "support_radius": self.support_radius,
            "lipschitz": self.lipschitz,
            "amplitude": self.amplitude,
        }
        if self.kind == "custom_samples":
            d["sample_z"] = self.sample_z.tolist()
            d["sample_values"] = self.sample_values.tolist()
        return d


def make_bump(kind, support_radius=None, center=0.0, amplitude=None, lam=1.0, adm=None, n=1,
              sample_z=None, sample_values=None, lipschitz=None):
    """Build a bump, filling unspecified sizes from the admissibility budget.

    Defaults: support radius half the admissible radius (minus the centre
    offset), Lipschitz constant 0.9 times the budget ``pi lam r_adm / 4`` and
    the matching cone amplitude.
    """
    adm = adm or admissibility(lam)
    budget = PI * lam * adm.r_adm / 4.0
    c = np.zeros(n, dtype=complex)
    c[:np.size(center)] = np.atleast_1d(np.asarray(center, dtype=complex))
    if kind == "custom_samples":
        vals = np.asarray(sample_values, dtype=float)
        zs = np.atleast_2d(np.asarray(sample_z, dtype=float))
        lip = lipschitz if lipschitz is not None else _sampled_lipschitz(zs, vals)
        supp = support_radius if support_radius is not None else float(np.max(np.linalg.norm(zs, axis=1)))
        return BumpSpec(kind, c, supp, lip, float(np.max(np.abs(vals))), zs, vals)
    if support_radius is None:
        support_radius = 0.5 * (lam * adm.r_adm - float(np.linalg.norm(c)))
    if amplitude is None:
        lip = 0.9 * budget if lipschitz is None else lipschitz
        amplitude = lip * support_radius
    else:
        lip = abs(amplitude) / support_radius if lipschitz is None else lipschitz
    return BumpSpec(kind, c, float(support_radius), float(lip), float(amplitude))


def _sampled_lipschitz(zs, vals):
    if zs.shape[0] < 3:
        return 0.0
    tri = spatial.Delaunay(zs)
    edges = set()
    for simplex in tri.simplices:
        for i in range(3):
            a, b = sorted((simplex[i], simplex[(i + 1) % 3]))
            edges.add((a, b))
    e = np.array(sorted(edges))
    dz = np.linalg.norm(zs[e[:, 0]] - zs[e[:, 1]], axis=1)
    return float(np.max(np.abs(vals[e[:, 0]] - vals[e[:, 1]]) / dz))


def bump_values(f, z):
    """Evaluate the bump at real horizontal samples ``z`` of shape (N, 2n)."""
    z = np.atleast_2d(np.asarray(z, dtype=float))
    n = z.shape[1] // 2
    if f.kind == "custom_samples":
        if n != 1:
            raise ValueError("custom_samples bumps are only supported for n = 1")
        interp = interpolate.LinearNDInterpolator(f.sample_z, f.sample_values, fill_value=0.0)
        return interp(z)
    zc = z[:, :n] + 1j * z[:, n:]
    dist = np.linalg.norm(zc - f.center[None, :], axis=1)
    return f.amplitude * np.maximum(0.0, 1.0 - dist / f.support_radius)


def check_bump(f, lam=1.0, adm=None):
    """Raise ``InadmissibleBumpError`` listing every violated constraint."""
    adm = adm or admissibility(lam)
    limit_r = lam * adm.r_adm
    budget = PI * lam * adm.r_adm / 4.0
    bad = []
    if not f.support_radius > 0:
        bad.append("support radius must be positive")
    if not f.lipschitz > 0 and f.amplitude != 0:
        bad.append("Lipschitz constant must be positive")
    if f.kind == "custom_samples":
        reach = float(np.max(np.linalg.norm(f.sample_z, axis=1)))
        actual_lip = _sampled_lipschitz(f.sample_z, f.sample_values)
        edge = f.sample_values[np.abs(np.linalg.norm(f.sample_z, axis=1) - reach) < 1e-12 * max(reach, 1.0)]
        if np.any(edge != 0):
            bad.append("custom samples must vanish on the outer boundary")
    else:
        reach = float(np.linalg.norm(f.center)) + f.support_radius
        actual_lip = abs(f.amplitude) / f.support_radius if f.support_radius > 0 else np.inf
    if not reach < limit_r:
        bad.append(f"support reaches |z| = {reach:.6g}, must stay below lambda*r_adm = {limit_r:.6g}")
    if not f.lipschitz < budget:
        bad.append(f"Lipschitz constant {f.lipschitz:.6g} must be below pi*lambda*r_adm/4 = {budget:.6g}")
    if actual_lip > f.lipschitz * (1 + 1e-12):
        bad.append(f"actual slope {actual_lip:.6g} exceeds the declared Lipschitz constant {f.lipschitz:.6g}")
    if abs(f.amplitude) > f.lipschitz * f.support_radius * (1 + 1e-12):
        bad.append("|amplitude| must not exceed lipschitz * support_radius")
    if bad:
        raise InadmissibleBumpError(bad)
    return adm


def build_A_perturbed(lam=1.0, f=None, rings=64, angles=96, adm=None):
    """A_{lambda,f} sampled on a polar grid.

    Over ``|z| <= lambda/pi`` the section is ``[f(z) - lambda^2/(2 pi),
    f(z) + lambda^2/(2 pi)]``; outside it is that of A_lambda.  With
    ``f = None`` this is A_lambda itself on the same grid.
    """
    if not lam > 0:
        raise ValueError("build_A_perturbed: lambda must be positive")
    n = 1 if f is None else f.n
    if f is not None:
        check_bump(f, lam, adm)
    z, areas, radii = polar_samples(lam / 2, rings, angles, n=n, breaks=(lam / PI,))
    half = _l_unchecked(lam, radii)
    shift = np.zeros(len(radii)) if f is None else bump_values(f, z)
    shift = np.where(radii <= lam / PI, shift, 0.0)
    secs = np.column_stack([shift - half, shift + half])
    return SectionSet(n, z, list(secs[:, None, :]), areas)


# ---------------------------------------------------------------------------
# class R
# ---------------------------------------------------------------------------

def class_R_defect(s, decimals=9):
    """``(center, defect)`` for the only left translates that could be rotation invariant.

    A left translate of ``s`` is invariant under rotations about the t-axis
    only if its projection is centred at 0, which pins the horizontal part
    of the translation to minus the projected centroid.  Vertical
    translation does not change the defect, so for sets whose projection is
    already centred the defect is ``rotational_defect(s)``; otherwise it is
    infinite at this sampling.
    """
    have = np.array([iv.size > 0 for iv in s.sections])
    w = s.areas[have]
    c = (w[:, None] * s.zsamples[have]).sum(axis=0) / w.sum()
    spread = float(np.max(np.linalg.norm(s.zsamples[have], axis=1)))
    if np.linalg.norm(c) > 1e-9 * max(spread, 1.0):
        return c, np.inf
    return c, rotational_defect(s, decimals)


def in_class_R(s, tol=1e-12):
    """Whether some left translate of the sampled set is rotation invariant."""
    return class_R_defect(s)[1] <= tol
