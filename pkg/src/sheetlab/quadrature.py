"""Vectorized adaptive quadrature used by the singular-operator machinery.

Two entry points:

* ``adaptive_quad``: globally adaptive composite Gauss-Legendre panels with an
  embedded whole-vs-halves error estimate.  Integrands must accept ndarray
  arguments.
* ``pv_quad``: principal value across one interior odd-type singularity.  The
  symmetric window around the pole is reduced exactly to the pair integral
  int_0^r [g(c+s)+g(c-s)] ds, whose integrand is smooth, so no extrapolation
  in the exclusion radius is needed; the limit is built into the reduction and
  the exclusion stays symmetric by construction.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import QuadratureFailure

__all__ = ["adaptive_quad", "pv_quad"]

_TINY = 1e-300


def _gl_cache(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


_GL_NODES, _GL_WEIGHTS = _gl_cache(12)


def _panel_eval(f: Callable, lo: np.ndarray, hi: np.ndarray, dtype=float):
    """Fine (two-half) values and whole-vs-halves error estimates per panel."""
    mid = 0.5 * (lo + hi)
    half1 = (lo, mid)
    half2 = (mid, hi)

    def gl(a, b):
        c = 0.5 * (a + b)[:, None]
        h = 0.5 * (b - a)[:, None]
        x = c + h * _GL_NODES[None, :]
        y = np.asarray(f(x.ravel()), dtype=dtype).reshape(x.shape)
        return (y * _GL_WEIGHTS[None, :]).sum(axis=1) * h[:, 0]

    coarse = gl(lo, hi)
    fine = gl(*half1) + gl(*half2)
    return fine, np.abs(fine - coarse)


def adaptive_quad(f: Callable, a: float, b: float, *, rtol: float = 1e-10,
                  atol: float = 0.0, breakpoints: Iterable[float] = (),
                  max_depth: int = 40, max_rounds: int = 200,
                  max_panels: int = 16384, dtype=float) -> tuple[float, float]:
    """Integrate vectorized ``f`` over [a, b]; returns (value, error_estimate).

    Pass ``dtype=complex`` for complex integrands; tolerances then act on the
    modulus.  Callers integrating a component that may vanish by symmetry must
    pass an ``atol`` tied to the problem scale; a pure ``rtol`` target around a
    zero value cannot terminate.
    """
    if a == b:
        return dtype(0.0), 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    inner = sorted({float(p) for p in breakpoints if a < p < b})
    edges = np.array([a] + inner + [b], dtype=float)
    lo, hi = edges[:-1], edges[1:]
    depth = np.zeros(lo.size, dtype=int)
    val, err = _panel_eval(f, lo, hi, dtype)

    for _ in range(max_rounds):
        if lo.size > max_panels:
            raise QuadratureFailure(
                f"adaptive_quad exceeded {max_panels} panels on [{a}, {b}]")
        total = val.sum().item()
        toterr = float(err.sum())
        tol = max(atol, rtol * abs(total), _TINY)
        if toterr <= tol:
            return sign * total, toterr
        bad = (err > 0.5 * tol / max(lo.size, 1)) & (depth < max_depth)
        if not bad.any():
            break
        mid = 0.5 * (lo[bad] + hi[bad])
        c_lo = np.concatenate([lo[bad], mid])
        c_hi = np.concatenate([mid, hi[bad]])
        c_val, c_err = _panel_eval(f, c_lo, c_hi, dtype)
        c_depth = np.concatenate([depth[bad], depth[bad]]) + 1
        lo = np.concatenate([lo[~bad], c_lo])
        hi = np.concatenate([hi[~bad], c_hi])
        val = np.concatenate([val[~bad], c_val])
        err = np.concatenate([err[~bad], c_err])
        depth = np.concatenate([depth[~bad], c_depth])

    total = val.sum().item()
    toterr = float(err.sum())
    tol = max(atol, rtol * abs(total), _TINY)
    if toterr > 10.0 * tol:
        raise QuadratureFailure(
            f"adaptive_quad stalled: err={toterr:.3e} > tol={tol:.3e} on [{a}, {b}]")
    return sign * total, toterr


def pv_quad(g: Callable, c: float, a: float, b: float, *, rtol: float = 1e-10,
            atol: float = 0.0, breakpoints: Sequence[float] = (),
            fold_floor: float = 0.0) -> tuple[float, float]:
    """Principal value of int_a^b g(x) dx with one odd-type pole at x = c.

    ``g`` must be vectorized and finite away from c.  The window |x-c| < r,
    r = min(c-a, b-c), is folded into the smooth pair integral; the remainder
    is regular.

    When ``g`` is computed with rounding noise that the fold amplifies like
    1/s^2 near the pole, pass ``fold_floor`` (a fraction of r): the folded
    integral then starts at s = fold_floor*r and the inner piece uses a
    one-point rectangle, which is exact to O(floor^3) for the even fold.
    """
    if not (a < c < b):
        raise ValueError("pv_quad: pole must lie strictly inside the interval")
    r = min(c - a, b - c)

    def paired(s):
        s = np.asarray(s, dtype=float)
        return g(c + s) + g(c - s)

    delta = fold_floor * r
    s_breaks = sorted({abs(p - c) for p in breakpoints
                       if delta < abs(p - c) < r})
    val, err = adaptive_quad(paired, delta, r, rtol=rtol, atol=atol,
                             breakpoints=s_breaks)
    if delta > 0.0:
        rect = float(paired(np.array([delta]))[0]) * delta
        val += rect
        err += abs(rect) * fold_floor
    for lo, hi in ((a, c - r), (c + r, b)):
        if hi > lo:
            bp = [p for p in breakpoints if lo < p < hi]
            v2, e2 = adaptive_quad(g, lo, hi, rtol=rtol, atol=atol, breakpoints=bp)
            val += v2
            err += e2
    return val, err
