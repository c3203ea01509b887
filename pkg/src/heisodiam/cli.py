"""Command-line interface.

Set files: profile bodies are CSV with header ``r,u``; section sets are
JSON ``{n, zsamples, sections, areas}``.  A path of ``-`` (or no path) reads
standard input, and the format is taken from the extension or, for
standard input, from the first character.  Reports are JSON with numbers
rounded to 9 significant digits; set files keep full precision.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, canonical, core, metric, sets

THREADS_ENV = "HEISODIAM_THREADS"


def _sig9(obj):
    """Round every float in a JSON-ready structure to 9 significant digits."""
    if isinstance(obj, dict):
        return {k: _sig9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sig9(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _sig9(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        return float(f"{x:.9g}")
    return obj


def _num(x):
    return f"{float(x):.9g}"


def _emit(args, text):
    if getattr(args, "output", None) and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(_sig9(obj), indent=2, sort_keys=True) + "\n")


def _read_text(path):
    if path in (None, "-"):
        return sys.stdin.read(), None
    with open(path) as fh:
        return fh.read(), os.path.splitext(path)[1].lower()


def load_set(path, n=1):
    """Load a ProfileSet (CSV) or SectionSet (JSON) from a path or stdin."""
    text, ext = _read_text(path)
    if ext == ".json" or (ext not in (".csv",) and text.lstrip().startswith("{")):
        return sets.SectionSet.from_json(text)
    return sets.ProfileSet.from_csv(text, n=n)


def dump_set(s):
    return s.to_csv() if isinstance(s, sets.ProfileSet) else s.to_json() + "\n"


def _search_cfg(args):
    threads = args.threads if args.threads is not None else int(os.environ.get(THREADS_ENV, "1"))
    kw = {"workers": max(1, threads)}
    for name in ("grid_r", "grid_theta", "nc_samples"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = val
    return sets.SearchConfig(**kw)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dist(args):
    p = np.array(args.p, dtype=float)
    q = np.array(args.q, dtype=float)
    _emit(args, _num(metric.distance(p, q, method=args.method)) + "\n")


def cmd_profile(args):
    rows = metric.profile_table(args.m)
    lines = ["r,h,h_prime,h_second"] + [",".join(_num(v) for v in row) for row in rows]
    _emit(args, "\n".join(lines) + "\n")


def cmd_make_a(args):
    s = canonical.build_A(args.lam, grid_size=args.m, n=args.n)
    if args.format == "json":
        s = sets.profile_to_sections(s, zcount=args.zcount)
    _emit(args, dump_set(s))


def cmd_make_ball(args):
    s = sets.ProfileSet.ball(args.radius, n=args.n, m=args.m)
    if args.format == "json":
        s = sets.profile_to_sections(s, zcount=args.zcount)
    _emit(args, dump_set(s))


def cmd_perturb(args):
    adm = canonical.admissibility(args.lam)
    center = complex(*args.center) if args.center else 0.0
    f = canonical.make_bump(
        args.bump, support_radius=args.support, center=center, amplitude=args.amplitude,
        lam=args.lam, adm=adm, lipschitz=args.lipschitz,
    )
    s = canonical.build_A_perturbed(args.lam, f, rings=args.rings, angles=args.angles, adm=adm)
    _emit(args, dump_set(s))


def cmd_volume(args):
    _emit(args, _num(sets.volume(load_set(args.file, args.n))) + "\n")


def cmd_diameter(args):
    _emit_json(args, sets.diameter(load_set(args.file, args.n), _search_cfg(args)).to_dict())


def cmd_nc(args):
    rep = sets.nc_check(load_set(args.file, args.n), diam_hint=args.diam_hint, cfg=_search_cfg(args))
    _emit_json(args, rep.to_dict())


def _as_sections(s, zcount):
    return sets.profile_to_sections(s, zcount=zcount) if isinstance(s, sets.ProfileSet) else s


def cmd_symmetrize(args):
    s = load_set(args.file, args.n)
    if isinstance(s, sets.ProfileSet):
        _emit(args, dump_set(s))  # already its own symmetrization
    else:
        _emit(args, dump_set(sets.steiner_symmetrize(s)))


def cmd_tco(args):
    s = load_set(args.file, args.n)
    if isinstance(s, sets.ProfileSet):
        _emit(args, dump_set(s))  # profile bodies are t-convex
    else:
        _emit(args, dump_set(sets.t_convex_hull(s)))


def cmd_ratio(args):
    _emit_json(args, analysis.iso_ratio(load_set(args.file, args.n), _search_cfg(args)).to_dict())


def cmd_compare(args):
    a = load_set(args.a, args.n)
    b = load_set(args.b, args.n)
    _emit_json(args, analysis.compare(a, b, _search_cfg(args)).to_dict())


def cmd_optimize(args):
    cfg = analysis.OptimizerConfig(
        m=args.m, max_sweeps=args.max_sweeps, step_tol=args.step_tol, start=args.start, search=_search_cfg(args)
    )
    prof, rep, trace = analysis.optimize_profile(cfg)
    if args.profile_out:
        with open(args.profile_out, "w") as fh:
            fh.write(prof.to_csv())
    _emit_json(args, {"report": rep.to_dict(), "trace": trace.to_dict()})
    return 0 if trace.converged else 3


def cmd_verify(args):
    res = analysis.verify_suite(args.level, args.seed)
    _emit_json(args, res)
    return 0 if res["passed"] else 1


def cmd_cross_section(args):
    s = load_set(args.file, args.n)
    if isinstance(s, sets.ProfileSet):
        r = np.linspace(0.0, s.R, args.samples)
        u = s(r)
        cols = ["r", "upper", "lower"]
        data = [r, u, -u]
        if args.ball_radius:
            b = metric._ball_profile_unchecked(args.ball_radius, np.minimum(r, args.ball_radius))
            b = np.where(r <= args.ball_radius, b, np.nan)
            cols += ["ball_upper", "ball_lower"]
            data += [b, -b]
        rows = np.column_stack(data)
    else:
        # samples on the positive real axis, one row per interval
        z = s.zsamples
        on_axis = (np.abs(z[:, s.n:]).max(axis=1) < 1e-12) & (z[:, 0] >= 0) & (np.abs(z[:, 1:s.n]).max(axis=1, initial=0) < 1e-12)
        idx = np.nonzero(on_axis)[0]
        idx = idx[np.argsort(z[idx, 0], kind="stable")]
        cols = ["r", "lower", "upper"]
        rows = np.array([[z[i, 0], a, b] for i in idx for a, b in s.sections[i]]).reshape(-1, 3)
    lines = [",".join(cols)] + [",".join("nan" if np.isnan(v) else _num(v) for v in row) for row in rows]
    _emit(args, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, search=False):
    p.add_argument("--n", type=int, default=1, help="dimension n of H^n (default 1)")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    if search:
        p.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")
        p.add_argument("--grid-r", dest="grid_r", type=int, default=None, help="radial search grid size")
        p.add_argument("--grid-theta", dest="grid_theta", type=int, default=None, help="angular search grid size")
        p.add_argument("--nc-samples", dest="nc_samples", type=int, default=None, help="boundary samples for nc")


def build_parser():
    parser = argparse.ArgumentParser(prog="heisodiam", description="Isodiametric geometry in the Heisenberg group.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two points: dist x.. y.. t -- x.. y.. t")
    p.add_argument("p", nargs="+", type=float)
    p.add_argument("--method", choices=("inversion", "bisection"), default="inversion")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("profile", help="table of h, h', h'' on r = k/m")
    p.add_argument("--m", type=int, default=101)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_profile)

    for name, func in (("make-a", cmd_make_a), ("make-ball", cmd_make_ball)):
        p = sub.add_parser(name, help="write A_lambda" if name == "make-a" else "write a closed ball about 0")
        if name == "make-a":
            p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        else:
            p.add_argument("--radius", type=float, default=1.0)
        p.add_argument("--m", type=int, default=256, help="profile grid size")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--zcount", type=int, default=4096, help="samples for json output")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("perturb", help="write A_{lambda,f} for an admissible bump f")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--bump", choices=("radial_cone", "offcenter_cone"), default="radial_cone")
    p.add_argument("--center", type=float, nargs=2, default=None, metavar=("X", "Y"))
    p.add_argument("--support", type=float, default=None)
    p.add_argument("--amplitude", type=float, default=None)
    p.add_argument("--lipschitz", type=float, default=None)
    p.add_argument("--rings", type=int, default=64)
    p.add_argument("--angles", type=int, default=96)
    _common(p)
    p.set_defaults(func=cmd_perturb)

    simple = {
        "volume": (cmd_volume, False, "volume of a set"),
        "diameter": (cmd_diameter, True, "diameter report"),
        "nc": (cmd_nc, True, "diametral-partner check"),
        "symmetrize": (cmd_symmetrize, False, "Steiner symmetrization"),
        "tco": (cmd_tco, False, "t-convex hull"),
        "ratio": (cmd_ratio, True, "isodiametric ratio"),
        "cross-section": (cmd_cross_section, False, "CSV cross-section for plotting"),
    }
    for name, (func, search, hlp) in simple.items():
        p = sub.add_parser(name, help=hlp)
        p.add_argument("file", nargs="?", default="-")
        _common(p, search)
        if name == "nc":
            p.add_argument("--diam-hint", dest="diam_hint", type=float, default=None)
        if name == "cross-section":
            p.add_argument("--samples", type=int, default=201)
            p.add_argument("--ball-radius", dest="ball_radius", type=float, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("compare", help="compare the ratios of two sets")
    p.add_argument("a")
    p.add_argument("b")
    _common(p, True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("optimize", help="symmetric-profile ascent at diameter 1")
    p.add_argument("--m", type=int, default=256)
    p.add_argument("--max-sweeps", dest="max_sweeps", type=int, default=50)
    p.add_argument("--step-tol", dest="step_tol", type=float, default=1e-10)
    p.add_argument("--start", choices=("ball", "A"), default="ball")
    p.add_argument("--profile-out", dest="profile_out", default=None)
    _common(p, True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="run the claim verification suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def _split_dist(argv):
    """``dist`` takes two coordinate lists separated by ``--``."""
    rest = argv[1:]
    if "--" not in rest:
        raise SystemExit("dist: separate the two points with --")
    k = rest.index("--")
    left, right = rest[:k], rest[k + 1:]
    return left, right


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv and argv[0] == "dist":
            left, right = _split_dist(argv)
            args = parser.parse_args(["dist"] + left)
            extra = build_parser().parse_args(["dist"] + right)
            args.q = extra.p
            if extra.method != "inversion":
                args.method = extra.method
            if len(args.p) != len(args.q):
                raise ValueError("dist: both points need the same number of coordinates")
            core.dim_of(np.asarray(args.p))
        else:
            args = parser.parse_args(argv)
        code = args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        return exc.code if exc.code is not None else 0
    except canonical.InadmissibleBumpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if code is None else code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
