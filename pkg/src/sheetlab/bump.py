"""Canonical smooth cutoff used everywhere a mollifier is needed.

The profile is even, equals 1 on |x| <= 1/2, vanishes for |x| >= 1, and rides
an exp(-1/u) smoothstep in between, so it is C-infinity with all derivatives
vanishing at both plateau edges.  All operators and cutoff-dependent constants
in the package are defined relative to this one profile.
"""

from __future__ import annotations

import numpy as np

__all__ = ["smoothstep", "smoothstep_d1", "bump", "bump_d1", "bump_d2", "scaled_bump",
           "scaled_bump_d1", "flat_smoothstep", "flat_smoothstep_d1"]


def _logit_gap(t: np.ndarray) -> np.ndarray:
    # g(t) = 1/t - 1/(1-t); S(t) = sigmoid(-g).  Clipped to avoid overflow in exp.
    return np.clip(1.0 / t - 1.0 / (1.0 - t), -700.0, 700.0)


def smoothstep(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, strictly increasing between."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    if np.any(mid):
        g = _logit_gap(t[mid])
        out[mid] = 1.0 / (1.0 + np.exp(g))
    return out


def smoothstep_d1(t):
    """Derivative of smoothstep."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    if np.any(mid):
        tm = t[mid]
        s = 1.0 / (1.0 + np.exp(_logit_gap(tm)))
        out[mid] = (1.0 / tm**2 + 1.0 / (1.0 - tm) ** 2) * s * (1.0 - s)
    return out


def _smoothstep_d2(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    if np.any(mid):
        tm = t[mid]
        s = 1.0 / (1.0 + np.exp(_logit_gap(tm)))
        gp = -1.0 / tm**2 - 1.0 / (1.0 - tm) ** 2
        gpp = 2.0 / tm**3 - 2.0 / (1.0 - tm) ** 3
        sp = s * (1.0 - s)
        out[mid] = -gpp * sp + gp * gp * sp * (1.0 - 2.0 * s)
    return out


def bump(x):
    """psi(x): 1 on |x| <= 1/2, 0 on |x| >= 1, smooth even transition."""
    x = np.asarray(x, dtype=float)
    t = 2.0 * np.abs(x) - 1.0
    return 1.0 - smoothstep(t)


def bump_d1(x):
    """psi'(x)."""
    x = np.asarray(x, dtype=float)
    t = 2.0 * np.abs(x) - 1.0
    return -2.0 * np.sign(x) * smoothstep_d1(t)


def bump_d2(x):
    """psi''(x)."""
    x = np.asarray(x, dtype=float)
    t = 2.0 * np.abs(x) - 1.0
    return -4.0 * _smoothstep_d2(t)


_GLX, _GLW = np.polynomial.legendre.leggauss(8)
_FLAT_N = 512
_flat_cache: list | None = None


def _flat_table():
    global _flat_cache
    if _flat_cache is None:
        edges = np.linspace(0.0, 1.0, _FLAT_N + 1)
        a, b = edges[:-1], edges[1:]
        mids = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * _GLX[None, :]
        vals = bump(2.0 * mids - 1.0) @ _GLW * 0.5 * (b - a)
        cum = np.concatenate([[0.0], np.cumsum(vals)])
        _flat_cache = [cum, cum[-1]]
    return _flat_cache


def flat_smoothstep(t):
    """C-infinity step whose derivative plateaus: proportional to psi(2t - 1).

    Same endpoint behaviour as smoothstep but with the smallest derivative
    peak (about 4/3) this bump family allows, so profiles built on it bend
    no harder than they must.
    """
    cum, total = _flat_table()
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, 0.0, 1.0)
    k = np.minimum((tc * _FLAT_N).astype(int), _FLAT_N - 1)
    a = k / _FLAT_N
    half = 0.5 * (tc - a)
    mids = (a + half)[..., None] + half[..., None] * _GLX
    part = bump(2.0 * mids - 1.0) @ _GLW * half
    return (cum[k] + part) / total


def flat_smoothstep_d1(t):
    """Derivative of flat_smoothstep."""
    _, total = _flat_table()
    t = np.asarray(t, dtype=float)
    return bump(2.0 * t - 1.0) / total * ((t > 0.0) & (t < 1.0))


def scaled_bump(x, r: float):
    """psi_r(x) = psi(x / r): 1 on |x| <= r/2, 0 on |x| >= r."""
    return bump(np.asarray(x, dtype=float) / r)


def scaled_bump_d1(x, r: float):
    """Derivative of psi_r."""
    return bump_d1(np.asarray(x, dtype=float) / r) / r
