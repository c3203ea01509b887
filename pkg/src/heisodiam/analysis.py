"""Isodiametric ratios, comparisons, profile optimization and the claim suite."""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import canonical, core, metric, sets
from ._roots import golden_max

__all__ = [
    "RatioReport",
    "CompareReport",
    "OptimizerConfig",
    "OptimizerTrace",
    "iso_ratio",
    "compare",
    "pair_bounds",
    "optimize_profile",
    "random_sigma_invariant_set",
    "verify_suite",
]

PI = np.pi


# ---------------------------------------------------------------------------
# ratios
# ---------------------------------------------------------------------------

@dataclass
class RatioReport:
    volume: float
    diameter: float
    ratio: float
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


@dataclass
class CompareReport:
    ratio_a: float
    ratio_b: float
    difference: float
    relative_margin: float
    larger: str

    def to_dict(self):
        return asdict(self)


def iso_ratio(s, cfg=None):
    """``volume / diameter^(2n+2)`` with the search settings in ``cfg``."""
    cfg = cfg or sets.SearchConfig()
    vol = sets.volume(s)
    rep = sets.diameter(s, cfg)
    diag = {"kind": type(s).__name__, "n": s.n, "lower_witness_gap": rep.lower_witness_gap}
    if isinstance(s, sets.ProfileSet):
        diag.update(grid_points=int(s.grid.size), grid_r=cfg.grid_r, grid_theta=cfg.grid_theta)
    else:
        diag.update(samples=len(s))
    return RatioReport(vol, rep.value, vol / rep.value ** (2 * s.n + 2), diag)


def compare(a, b, cfg=None, tol=1e-9):
    """Ratios of two sets; ``larger`` is ``"a"``, ``"b"`` or ``"equal"`` (within ``tol`` relative)."""
    ra = iso_ratio(a, cfg).ratio
    rb = iso_ratio(b, cfg).ratio
    margin = ra / rb - 1.0
    larger = "equal" if abs(margin) <= tol else ("a" if margin > 0 else "b")
    return CompareReport(ra, rb, ra - rb, margin, larger)


# ---------------------------------------------------------------------------
# optimizer
# ---------------------------------------------------------------------------

@dataclass
class OptimizerConfig:
    """Settings for the symmetric-profile ascent (n = 1, support radius D/2).

    ``start`` is ``"ball"``, ``"A"`` or an array of node values.
    """

    m: int = 256
    max_sweeps: int = 50
    step_tol: float = 1e-10
    diameter: float = 1.0
    theta_grid: int = 256
    golden_iters: int = 40
    start: object = "ball"
    search: sets.SearchConfig = None

    def __post_init__(self):
        if self.m < 2 or self.max_sweeps < 1 or self.theta_grid < 3:
            raise ValueError("OptimizerConfig: m >= 2, max_sweeps >= 1 and theta_grid >= 3 required")
        if not (self.step_tol > 0 and self.diameter > 0):
            raise ValueError("OptimizerConfig: step_tol and diameter must be positive")


@dataclass
class OptimizerTrace:
    sweeps: list
    converged: bool

    def to_dict(self):
        return {"sweeps": self.sweeps, "converged": self.converged}


def pair_bounds(r, D=1.0, theta_grid=256, golden_iters=40, chunk=4096):
    """Matrix ``G`` with: the profile nodes satisfy diameter <= D iff ``u_i + u_j <= G_ij``.

    For top/bottom boundary points over radii r_i, r_j at relative angle
    theta, the offset is ``a^2 = r_i^2 + r_j^2 - 2 r_i r_j cos theta`` and
    ``|s| = u_i + u_j + 2 r_i r_j |sin theta|``, so the pair stays within D
    iff ``u_i + u_j <= h_D(a) - 2 r_i r_j |sin theta|`` for every theta.
    Same-side pairs are implied because u >= 0.  Requires ``r <= D/2``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r > D / 2 * (1 + 1e-12)):
        raise ValueError("pair_bounds: radii must not exceed D/2")
    I, J = np.triu_indices(r.size)
    th = np.linspace(0.0, PI, theta_grid)
    dth = th[1] - th[0]
    out = np.empty(I.size)

    def F(ri, rj, t):
        a = np.sqrt(np.maximum(ri * ri + rj * rj - 2 * ri * rj * np.cos(t), 0.0))
        x = np.minimum(a / D, 1.0)
        return D * D * metric._h(x, 1.0 - x) - 2.0 * ri * rj * np.abs(np.sin(t))

    for lo in range(0, I.size, chunk):
        ri = r[I[lo:lo + chunk]][:, None]
        rj = r[J[lo:lo + chunk]][:, None]
        vals = F(ri, rj, th[None, :])
        k = np.argmin(vals, axis=1)
        best = vals[np.arange(k.size), k]
        a = np.maximum(th[k] - dth, 0.0)
        b = np.minimum(th[k] + dth, PI)
        ri1, rj1 = ri[:, 0], rj[:, 0]
        _, neg = golden_max(lambda t: -F(ri1, rj1, t), a, b, iters=golden_iters)
        out[lo:lo + chunk] = np.minimum(best, -neg)
    G = np.empty((r.size, r.size))
    G[I, J] = out
    G[J, I] = out
    return G


def _linear_volume(r, u):
    """Volume (n = 1) of the body whose profile is piecewise linear through the nodes.

    Monotone in the node values, which makes it the natural ascent trace.
    """
    a, b = r[:-1], r[1:]
    ua, ub = u[:-1], u[1:]
    # int_a^b r (ua + (ub-ua)(r-a)/(b-a)) dr, times 2 * 2 pi
    seg = (b - a) * (ua * (2 * a + b) + ub * (a + 2 * b)) / 6.0
    return 4.0 * PI * float(np.sum(seg))


def optimize_profile(cfg=None):
    """Coordinate ascent on symmetric profiles under the diameter constraint.

    Each node is raised to the largest value compatible with every other
    node (the constraint is the exact pair condition of ``pair_bounds``),
    sweeping outer to inner radii until no node moves more than
    ``step_tol``.  Returns ``(profile, report, trace)``.
    """
    cfg = cfg or OptimizerConfig()
    D = cfg.diameter
    r = sets.sine_grid(D / 2, cfg.m)
    if isinstance(cfg.start, str):
        if cfg.start == "ball":
            u = metric._ball_profile_unchecked(D / 2, r)
        elif cfg.start == "A":
            u = canonical._l_unchecked(D, r)
        else:
            raise ValueError(f"unknown optimizer start {cfg.start!r}")
    else:
        u = np.asarray(cfg.start, dtype=float).copy()
        if u.shape != r.shape:
            raise ValueError(f"start profile must have {r.size} node values")
    u = np.array(u, dtype=float)
    G = pair_bounds(r, D, cfg.theta_grid, cfg.golden_iters)
    diagG = np.diag(G).copy()
    np.fill_diagonal(G, np.inf)
    sweeps = []
    converged = False
    for k in range(cfg.max_sweeps):
        move = 0.0
        for i in range(r.size - 1, -1, -1):
            new = max(0.0, min(0.5 * float(diagG[i]), float(np.min(G[i] - u))))
            move = max(move, abs(new - float(u[i])))
            u[i] = new
        sweeps.append({"sweep": k + 1, "max_move": move, "volume": _linear_volume(r, u)})
        if move <= cfg.step_tol:
            converged = True
            break
    prof = sets.ProfileSet(r, u, n=1)
    report = iso_ratio(prof, cfg.search)
    return prof, report, OptimizerTrace(sweeps, converged)


# ---------------------------------------------------------------------------
# random test sets
# ---------------------------------------------------------------------------

def random_sigma_invariant_set(rng, pairs=12, axis_points=4, max_intervals=3, extent=1.0):
    """Random n = 1 section set with ``sigma(F) = F``.

    Samples come in conjugate pairs ``z, conj(z)`` (plus a few on the real
    axis) carrying identical sections of 1 to ``max_intervals`` intervals.
    """
    zs, secs = [], []

    def intervals():
        k = int(rng.integers(1, max_intervals + 1))
        pts = np.sort(rng.uniform(-extent, extent, 2 * k))
        iv = pts.reshape(k, 2)
        if rng.random() < 0.2:
            iv[0, 1] = iv[0, 0]  # a single point
        return iv

    for _ in range(pairs):
        x = rng.uniform(-extent, extent)
        y = rng.uniform(1e-3, extent)
        iv = intervals()
        zs += [[x, y], [x, -y]]
        secs += [iv, iv.copy()]
    for _ in range(axis_points):
        zs.append([rng.uniform(-extent, extent), 0.0])
        secs.append(intervals())
    areas = rng.uniform(0.5, 1.5, len(zs))
    return sets.SectionSet(1, np.array(zs), secs, areas)


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

def _rand_points(rng, N, n=1, scale=2.0):
    return rng.uniform(-scale, scale, (N, 2 * n + 1))


def _unit_dirs(rng, N, n):
    g = rng.standard_normal((N, 2 * n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _claim(name, residual, tolerance):
    residual = float(residual)
    return {"name": name, "residual": residual, "tolerance": float(tolerance), "passed": bool(residual <= tolerance)}


def _rel(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _metric_claims(rng, N):
    out = []
    P = _rand_points(rng, N)
    Q = _rand_points(rng, N)
    # horizontal pairs: z' = c z with c real keeps Im(z conj z') = 0
    c = rng.uniform(-3, 3, N)
    Qh = np.column_stack([c * P[:, 0], c * P[:, 1], P[:, 2]])
    out.append(_claim("distance.horizontal_formula", _rel(metric.distance(P, Qh), np.hypot(*(Qh[:, :2] - P[:, :2]).T)), 1e-10))
    Qv = P.copy()
    Qv[:, 2] += rng.uniform(-5, 5, N)
    out.append(_claim("distance.vertical_formula", _rel(metric.distance(P, Qv), np.sqrt(PI * np.abs(Qv[:, 2] - P[:, 2]))), 1e-10))
    out.append(_claim("distance.cross_oracle", _rel(metric.distance(P, Q), metric.distance(P, Q, method="bisection")), 1e-8))
    d = metric.distance(P, Q)
    out.append(_claim("metric.symmetry", _rel(metric.distance(Q, P), d), 1e-10))
    R = _rand_points(rng, N)
    slack = metric.distance(P, R) + metric.distance(R, Q) - d
    out.append(_claim("metric.triangle", max(0.0, -float(np.min(slack))), 1e-9))
    g = _rand_points(rng, N)
    out.append(_claim("metric.left_invariance", _rel(metric.distance(core.mul(g, P), core.mul(g, Q)), d), 1e-9))
    lam = rng.uniform(0.1, 5.0)
    out.append(_claim("metric.dilation", _rel(metric.distance(core.dilate(lam, P), core.dilate(lam, Q)), lam * d), 1e-10))
    th = rng.uniform(0, 2 * PI)
    out.append(_claim("metric.rotation_isometry", _rel(metric.distance(core.rotate(th, P), core.rotate(th, Q)), d), 1e-10))
    out.append(_claim("metric.iota_isometry", _rel(metric.distance(core.reflect_iota(P), core.reflect_iota(Q)), d), 1e-10))
    return out


def _profile_claims():
    res = max(
        abs(metric.h_fn(0.0) - 1 / PI), abs(metric.h_fn(2 / PI) - 2 / PI), abs(metric.h_fn(1.0))
    )
    out = [_claim("profile.identities", res, 1e-12)]
    r = np.linspace(0.01, 0.99, 99)
    step = 1e-6
    fd = (metric.h_fn(r + step) - metric.h_fn(r - step)) / (2 * step)
    out.append(_claim("profile.h_prime_fd", float(np.max(np.abs(fd - metric.h_prime(r)))), 1e-6))
    phi_c, r_c = metric.critical_point()
    hs = metric.h_second(np.array([r_c - 1e-3, r_c + 1e-3]))
    sign_ok = hs[0] * hs[1] < 0
    out.append(_claim("profile.inflection", abs(phi_c * np.sin(phi_c) + np.cos(phi_c)) + (0 if sign_ok else 1), 1e-12))
    return out


def _ball_claims(rng, N):
    """Vertical segments between points of a ball stay inside; segment max rule."""
    bad = 0
    worst = 0.0
    for _ in range(N):
        c = _rand_points(rng, 1)[0]
        rad = rng.uniform(0.2, 2.0)
        z = c[:2] + _unit_dirs(rng, 1, 1)[0] * rad * rng.uniform(0, 1)
        a = np.hypot(*(z - c[:2]))
        # section of the ball over z: |t - t_c - shear| <= h_rad(a)
        shear = 2.0 * core.im_inner(c[0:1], c[1:2], z[0:1], z[1:2])
        half = float(metric.ball_profile(rad, a))
        ts = c[2] + shear + half * rng.uniform(-1, 1, 2)
        tt = np.linspace(ts.min(), ts.max(), 7)
        pts = np.column_stack([np.full(7, z[0]), np.full(7, z[1]), tt])
        dist = metric.distance(np.broadcast_to(c, pts.shape), pts)
        bad += int(np.sum(dist > rad * (1 + 1e-9)))
        p = _rand_points(rng, 1)[0]
        p1 = np.r_[z, ts[0]]
        p2 = np.r_[z, ts[1]]
        m = max(metric.distance(p, p1), metric.distance(p, p2))
        mid = metric.distance(np.broadcast_to(p, pts.shape), pts)
        worst = max(worst, float(np.max(mid - m)) / max(m, 1e-300))
    return [
        _claim("balls.vertical_segments_inside", bad, 0),
        _claim("balls.segment_distance_max", max(worst, 0.0), 1e-9),
    ]


def _outer_cone_claim(rng, N):
    """Points above the cone of slope alpha over a top boundary point are outside."""
    violations = 0
    for _ in range(N):
        d = rng.uniform(0.3, 3.0)
        delta = rng.uniform(0.05, 0.95) * 2 * d * d / PI
        k = metric.lemma_constants(0.0, d, delta)
        hd = lambda x: metric.ball_profile(d, x)
        while True:
            rz = rng.uniform(0, k.rbar)
            if hd(rz) >= delta:
                break
        zp = _unit_dirs(rng, 1, 1)[0] * rz
        sign = rng.choice([-1.0, 1.0])
        tp = sign * float(hd(rz))
        w = zp + _unit_dirs(rng, 1, 1)[0] * rng.uniform(0, 1.5 * d)
        eps = (1e-9 if rng.random() < 0.3 else rng.uniform(0, 0.1)) * d * d
        s = tp + sign * (k.alpha * np.hypot(*(w - zp)) + eps)
        dist = metric.distance_ws(np.hypot(*w), s)
        violations += int(dist < d * (1 - 1e-12))
    return _claim("cone.outer_vertical_cone", violations, 0)


def _bicone_claim(rng, N):
    """Double cones of radius gamma over a vertical pair lie in every ball containing the pair."""
    violations = 0
    for _ in range(N):
        C = rng.uniform(0.0, 2.0)
        d = rng.uniform(0.3, 3.0)
        delta = rng.uniform(0.05, 0.95) * 2 * d * d / PI
        k = metric.lemma_constants(C, d, delta)
        z12 = _unit_dirs(rng, 1, 1)[0] * rng.uniform(0, C)
        t1 = rng.uniform(-1, 1)
        t2 = t1 + 2 * delta
        mid = 0.5 * (t1 + t2)
        hd = lambda x: metric.ball_profile(d, x)
        while True:
            rz = rng.uniform(0, k.rbar)
            if hd(rz) >= delta:
                break
        room = float(hd(rz)) - delta
        u = rng.uniform(-1, 1)
        if rng.random() < 0.3:
            u = np.sign(u)
        pz = _unit_dirs(rng, 1, 1)[0] * rz
        p = core.mul(np.r_[z12, mid], np.r_[pz, u * room])
        p1, p2 = np.r_[z12, t1], np.r_[z12, t2]
        if max(metric.distance(p, p1), metric.distance(p, p2)) > d * (1 + 1e-12):
            continue
        off = k.gamma * (1.0 if rng.random() < 0.2 else rng.uniform(0, 1))
        w = z12 + _unit_dirs(rng, 1, 1)[0] * off
        v = rng.uniform(-1, 1)
        if rng.random() < 0.3:
            v = np.sign(v)
        q = np.r_[w, mid + v * delta * (1 - off / k.gamma)]
        violations += int(metric.distance(p, q) > d * (1 + 1e-10))
    return _claim("bicone.inside_ball", violations, 0)


def _transform_claims(rng, count):
    cfg = sets.SearchConfig()
    vol_res = tco_res = st_res = 0.0
    for _ in range(count):
        s = random_sigma_invariant_set(rng)
        d0 = sets.diameter(s, cfg).value
        st = sets.steiner_symmetrize(s)
        tc = sets.t_convex_hull(s)
        vol_res = max(vol_res, abs(sets.volume(st) - sets.volume(s)) / sets.volume(s))
        st_res = max(st_res, sets.diameter(st, cfg).value - d0)
        tco_res = max(tco_res, abs(sets.diameter(tc, cfg).value - d0))
    return [
        _claim("transforms.steiner_volume", vol_res, 1e-12),
        _claim("transforms.steiner_diameter", max(st_res, 0.0), 1e-6),
        _claim("transforms.tco_diameter", tco_res, 1e-6),
    ]


def _canonical_claims(rng, N, fast):
    out = []
    cfg = sets.SearchConfig(grid_r=64, grid_theta=48, nc_samples=24, nc_grid_r=64, nc_grid_theta=64) if fast else sets.SearchConfig()
    A = canonical.build_A(1.0)
    rep = sets.diameter(A, cfg)
    out.append(_claim("A.diameter", abs(rep.value - 1.0), 2e-3))
    zc = 0.5 / PI
    vw = metric.distance([zc, 0, 1 / (2 * PI)], [zc, 0, -1 / (2 * PI)])
    out.append(_claim("A.vertical_witness", abs(vw - 1.0), 1e-12))
    r0 = rng.uniform(1 / PI + 1e-6, 0.5 - 1e-6, N)
    th = rng.uniform(0, 2 * PI, N)
    sd = rng.choice([-1.0, 1.0], N)
    P = np.column_stack([r0 * np.cos(th), r0 * np.sin(th), sd * canonical.l_profile(1.0, r0)])
    Q = canonical.antipode(P)
    out.append(_claim("A.antipodes", float(np.max(np.abs(metric.distance(P, Q) - 1.0))), 1e-6))
    out.append(_claim("A.antipode_involution", float(np.max(np.abs(canonical.antipode(Q) - P))), 1e-9))
    # cylinder bound for invariant sets of diameter 1
    rr = A.grid
    cyl = max(float(np.max(2 * rr)) - 1.0, float(np.max(2 * PI * A.u)) - 1.0, 0.0)
    out.append(_claim("A.cylinder_bound", cyl, 1e-12))
    nc_A = sets.nc_check(A, diam_hint=1.0, cfg=cfg)
    out.append(_claim("A.nc_holds", max(nc_A.worst_slack, 0.0), 2e-3))
    ball = sets.ProfileSet.ball(1.0)
    nc_B = sets.nc_check(ball, diam_hint=2.0, cfg=cfg)
    out.append(_claim("ball.nc_fails", max(0.0, 0.3 - nc_B.worst_slack), 0.0))
    half_ball = sets.ProfileSet.ball(0.5)
    ratio = (sets.volume(A) / rep.value ** 4) / (sets.volume(half_ball) / sets.diameter(half_ball, cfg).value ** 4)
    out.append(_claim("ratio.A_over_ball", max(0.0, 1.03 - ratio), 0.0))
    return out


def _perturbation_claims(fast):
    out = []
    adm = canonical.admissibility(1.0)
    out.append(_claim("perturbation.constants_positive", 0.0 if min(adm.rbar1, adm.rhat, adm.r_adm) > 0 else 1.0, 0.0))
    rings, angles = (40, 64) if fast else (64, 96)
    base = canonical.build_A_perturbed(1.0, None, rings=rings, angles=angles)
    v0 = sets.volume(base)
    vA = sets.volume(canonical.build_A(1.0))
    out.append(_claim("perturbation.grid_volume", abs(v0 - vA) / vA, 1e-6))
    cfg = sets.SearchConfig()
    bumps = [canonical.make_bump("radial_cone", adm=adm)]
    if not fast:
        bumps.append(canonical.make_bump("offcenter_cone", center=0.3 * adm.r_adm, adm=adm))
    vres = dres = 0.0
    for f in bumps:
        s = canonical.build_A_perturbed(1.0, f, rings=rings, angles=angles, adm=adm)
        vres = max(vres, abs(sets.volume(s) - v0) / v0)
        dres = max(dres, abs(sets.diameter(s, cfg).value - 1.0))
    out.append(_claim("perturbation.volume", vres, 1e-6))
    out.append(_claim("perturbation.diameter", dres, 2e-3))
    too_steep = canonical.BumpSpec("radial_cone", 0.0, 0.5 * adm.r_adm, PI * adm.r_adm, PI * adm.r_adm * 0.5 * adm.r_adm)
    try:
        canonical.check_bump(too_steep, 1.0, adm)
        rejected = False
    except canonical.InadmissibleBumpError:
        rejected = True
    out.append(_claim("perturbation.inadmissible_rejected", 0.0 if rejected else 1.0, 0.0))
    radial = canonical.build_A_perturbed(1.0, bumps[0], rings=rings, angles=angles, adm=adm)
    off = canonical.build_A_perturbed(
        1.0, canonical.make_bump("offcenter_cone", center=0.3 * adm.r_adm, adm=adm), rings=rings, angles=angles, adm=adm
    )
    ok = canonical.in_class_R(radial) and not canonical.in_class_R(off)
    out.append(_claim("perturbation.class_R_dichotomy", 0.0 if ok else 1.0, 0.0))
    return out


def verify_suite(level="fast", seed=0):
    """Run every numerical claim check; returns a JSON-ready dict.

    ``fast`` uses small sample counts and coarse search grids; ``full`` uses
    10^4 metric samples, 10^3 lemma instances and default grids.
    """
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    fast = level == "fast"
    rng = np.random.default_rng(seed)
    claims = []
    claims += _metric_claims(rng, 500 if fast else 10_000)
    claims += _profile_claims()
    claims += _ball_claims(rng, 50 if fast else 1000)
    claims.append(_outer_cone_claim(rng, 100 if fast else 1000))
    claims.append(_bicone_claim(rng, 100 if fast else 1000))
    claims += _transform_claims(rng, 10 if fast else 100)
    claims += _canonical_claims(rng, 200 if fast else 1000, fast)
    claims += _perturbation_claims(fast)
    return {"level": level, "seed": seed, "passed": all(c["passed"] for c in claims), "claims": claims}


def verify_json(level="fast", seed=0):
    """Deterministic serialization of ``verify_suite``."""
    return json.dumps(verify_suite(level, seed), indent=2, sort_keys=True)
