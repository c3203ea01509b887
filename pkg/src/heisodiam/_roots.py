"""Vectorized bracketing solvers shared by the metric and set modules."""

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver exhausts its iteration budget."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def _flat_args(shape, args):
    return tuple(np.broadcast_to(np.asarray(a, dtype=float), shape).ravel() for a in args)


def bisect(f, lo, hi, args=(), maxiter=200):
    """Plain bisection for an increasing function, elementwise.

    ``f(x, *args)`` receives only the still-active elements (and the
    matching slices of ``args``).  Runs until the brackets stop shrinking in
    floating point, so the result is the float boundary of the sign change.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    shape = lo.shape
    lo, hi = lo.ravel().copy(), hi.ravel().copy()
    args = _flat_args(shape, args)
    idx = np.arange(lo.size)
    for _ in range(maxiter):
        mid = 0.5 * (lo[idx] + hi[idx])
        act = (mid > lo[idx]) & (mid < hi[idx])
        idx, mid = idx[act], mid[act]
        if idx.size == 0:
            break
        neg = f(mid, *(a[idx] for a in args)) < 0
        lo[idx[neg]] = mid[neg]
        hi[idx[~neg]] = mid[~neg]
    else:
        raise ConvergenceError("bisection did not converge", float(np.max(hi[idx] - lo[idx])))
    return (0.5 * (lo + hi)).reshape(shape)


def newton_bracketed(f, fprime, lo, hi, x0=None, args=(), xtol=1e-15, maxiter=100):
    """Safeguarded Newton for an increasing function on ``[lo, hi]``.

    ``f(lo) <= 0 <= f(hi)`` is assumed.  Steps that leave the current
    bracket fall back to bisection, so convergence is guaranteed.  An
    element also stops once its steps are tiny and no longer contracting,
    which is where rounding noise in ``f`` takes over.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    shape = lo.shape
    lo, hi = lo.ravel().copy(), hi.ravel().copy()
    if x0 is None:
        x = 0.5 * (lo + hi)
    else:
        x = np.array(np.broadcast_to(np.asarray(x0, dtype=float), shape), dtype=float).ravel()
    args = _flat_args(shape, args)
    prev = np.full(x.size, np.inf)
    idx = np.arange(x.size)
    for _ in range(maxiter):
        xi = x[idx]
        sub = tuple(a[idx] for a in args)
        fx = f(xi, *sub)
        neg = fx < 0
        lo[idx] = np.where(neg, xi, lo[idx])
        hi[idx] = np.where(neg, hi[idx], xi)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            xn = xi - fx / fprime(xi, *sub)
        bad = ~np.isfinite(xn) | (xn <= lo[idx]) | (xn >= hi[idx])
        xn = np.where(bad, 0.5 * (lo[idx] + hi[idx]), xn)
        step = np.abs(xn - xi)
        scale = np.maximum(np.abs(xi), 1.0)
        stalled = ~bad & (step < 1e-9 * scale) & (step >= 0.5 * prev[idx])
        conv = (fx == 0) | (step <= xtol * scale) | (hi[idx] - lo[idx] <= xtol * scale) | stalled
        x[idx] = np.where(fx == 0, xi, xn)
        prev[idx] = np.where(bad, np.inf, step)
        idx = idx[~conv]
        if idx.size == 0:
            return x.reshape(shape)
    raise ConvergenceError("bracketed Newton did not converge", float(np.max(hi[idx] - lo[idx])))


def golden_max(f, lo, hi, iters=60):
    """Elementwise golden-section maximization of ``f`` on ``[lo, hi]``.

    Returns ``(x, f(x))``.  Assumes ``f`` is unimodal on each bracket; the
    caller supplies brackets around grid maxima.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(iters):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        fc_next = np.where(left, np.nan, fd)
        fd_next = np.where(left, fc, np.nan)
        # only one new evaluation per element, gathered into a single call
        x_eval = np.where(left, c_next, d_next)
        f_eval = f(x_eval)
        fc = np.where(left, f_eval, fc_next)
        fd = np.where(left, fd_next, f_eval)
        c, d = c_next, d_next
    x = np.where(fc >= fd, c, d)
    return x, np.maximum(fc, fd)
