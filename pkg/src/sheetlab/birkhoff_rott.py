"""Periodized Birkhoff-Rott velocities and the near-pinch decomposition.

The induced velocity of a 2pi-periodic vortex sheet is evaluated through the
closed-form image sum of the Cauchy-type kernel (half-cotangent identity), so
no truncated image sums appear outside test oracles.  Principal values on the
curve use the alternating-node trapezoidal rule; off-curve and near-pinch
evaluations use adaptive panel quadrature.

Vector convention: (a, b)^perp = (-b, a); a velocity (u, v) is carried as the
complex number u + iv.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .bump import bump
from .curves import (PeriodicCurve, SplashFrame, resample_periodic,
                     taylor_gap_scale)
from .errors import (CurveValidationError, FrameTooNarrow, OnCurve,
                     QuadratureFailure, ResolutionError)
from .quadrature import adaptive_quad, pv_quad

__all__ = [
    "SheetStrength", "VelocityDecomposition", "br_velocity",
    "interface_velocities", "offcurve_velocity", "far_field_velocity",
    "near_field_velocity", "frame_trace_velocity",
]

_TWO_PI = 2.0 * np.pi


class SheetStrength:
    """Sheet-strength samples on the companion curve's uniform grid.

    Treated as a real trigonometric polynomial, so off-grid values come from
    spectral interpolation.
    """

    __slots__ = ("values", "_evk", "_evc", "_fine_cache")

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size < 2 or values.size % 2 != 0:
            raise CurveValidationError("strength samples must be a 1-D even-length array")
        if not np.all(np.isfinite(values)):
            raise CurveValidationError("strength samples contain non-finite values")
        self._fine_cache = {}
        self.values = values.copy()
        n = values.size
        chat = np.fft.fft(values) / n
        k = np.fft.fftfreq(n, d=1.0 / n)
        evk = np.concatenate([k, [n / 2.0]])
        evc = np.concatenate([chat, [0.0]]).astype(complex)
        evc[n // 2] *= 0.5
        evc[-1] = evc[n // 2]
        evk[n // 2] = -n / 2.0
        gauge = np.abs(evc)
        keep = gauge >= 1e-16 * max(gauge.max(), 1e-300)
        keep[0] = True
        self._evk = evk[keep]
        self._evc = evc[keep]

    @property
    def n(self) -> int:
        return self.values.size

    @classmethod
    def from_function(cls, curve: PeriodicCurve, fn) -> "SheetStrength":
        return cls(np.asarray(fn(curve.nodes), dtype=float))

    def eval(self, beta) -> np.ndarray:
        beta = np.asarray(beta, dtype=float)
        scalar = beta.ndim == 0
        flat = beta.ravel()
        vals = np.empty(flat.size)
        # cap the points-by-modes work matrix at ~64 MiB
        step = max(1, 4_194_304 // max(self._evk.size, 1))
        for i in range(0, flat.size, step):
            blk = flat[i:i + step]
            vals[i:i + step] = (np.exp(1j * np.outer(blk, self._evk))
                                @ self._evc).real
        vals = vals.reshape(beta.shape)
        return vals[()] if scalar else vals

    def fine_values(self, m: int) -> np.ndarray:
        """Values on a uniform m-grid via spectral padding; cached."""
        if m not in self._fine_cache:
            if len(self._fine_cache) >= 8:
                self._fine_cache.clear()
            self._fine_cache[m] = resample_periodic(self.values, m)
        return self._fine_cache[m]


def _as_strength(omega, n: int) -> SheetStrength:
    if not isinstance(omega, SheetStrength):
        omega = SheetStrength(omega)
    if omega.n != n:
        raise CurveValidationError(
            f"strength has {omega.n} samples but the curve has {n}")
    return omega


def _as_point(x) -> complex:
    if np.iscomplexobj(x) and np.ndim(x) == 0:
        return complex(x)
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise CurveValidationError("point must be a pair (x, y)")
    return complex(x[0], x[1])


def _to_vectors(w: np.ndarray) -> np.ndarray:
    w = np.atleast_1d(w)
    return np.stack([w.real, w.imag], axis=-1)


def _wrap(delta):
    return (np.asarray(delta) + np.pi) % _TWO_PI - np.pi


def _resolution_screen(curve: PeriodicCurve, targets: np.ndarray) -> None:
    """Reject targets sitting under one node spacing from the opposing branch."""
    h = _TWO_PI / curve.N
    eps1, _ = taylor_gap_scale(curve)
    # points this close in parameter are the target's own branch, whose
    # near-diagonal kernel the alternating rule integrates exactly
    cut = max(eps1, 4.0 * h)
    m = max(8 * curve.N, 2048)
    fine = curve.fine_values(m)
    betas = _TWO_PI * np.arange(m) / m
    zt = curve.eval_complex(targets)
    for blk in range(0, targets.size, 256):
        sl = slice(blk, min(blk + 256, targets.size))
        sep = np.abs(_wrap(betas[None, :] - targets[sl, None]))
        dist = np.abs(fine[None, :] - zt[sl, None])
        dist = np.where(dist > np.pi, np.abs(fine[None, :] + _TWO_PI - zt[sl, None]), dist)
        dist = np.where(dist > np.pi, np.abs(fine[None, :] - _TWO_PI - zt[sl, None]), dist)
        far_branch = np.where(sep > cut, dist, np.inf).min(axis=1)
        if np.any(far_branch < h):
            bad = targets[sl][far_branch < h]
            raise ResolutionError(
                f"targets {bad[:4]} lie within one node spacing of the "
                f"opposing branch; use the near-field decomposition")


def _br_nodes(curve: PeriodicCurve, omega: SheetStrength) -> np.ndarray:
    """Alternating-node rule at all curve nodes (complex velocities)."""
    n = curve.N
    h = _TWO_PI / n
    z = curve.node_values()
    w = omega.values
    out = np.empty(n, dtype=complex)
    idx = np.arange(n)
    for blk in range(0, n, 1024):
        stop = min(blk + 1024, n)
        rows = idx[blk:stop]
        arg = 0.5 * (z[rows, None] - z[None, :])
        # same-parity columns are masked out; keep tan finite on the diagonal
        arg[np.arange(rows.size), rows] = 1.0
        kern = 1.0 / np.tan(arg)
        mask = ((rows[:, None] + idx[None, :]) % 2) == 1
        out[rows] = (np.where(mask, kern, 0.0) * w[None, :]).sum(axis=1)
    return np.conj(out * (-1j) * h / _TWO_PI)


def _br_offgrid(curve: PeriodicCurve, omega: SheetStrength,
                targets: np.ndarray) -> np.ndarray:
    """Alternating rule with the source comb re-centered on each target."""
    n = curve.N
    h = _TWO_PI / n
    offs = (2.0 * np.arange(n // 2) + 1.0) * h
    zt = curve.eval_complex(targets)
    out = np.empty(targets.size, dtype=complex)
    for blk in range(0, targets.size, 64):
        sl = slice(blk, min(blk + 64, targets.size))
        beta = targets[sl, None] + offs[None, :]
        zb = curve.eval_complex(beta)
        wb = omega.eval(beta)
        kern = 1.0 / np.tan(0.5 * (zt[sl, None] - zb))
        out[sl] = (kern * wb).sum(axis=1)
    return np.conj(out * (-1j) * (2.0 * h) / (4.0 * np.pi))


def br_velocity(curve: PeriodicCurve, omega, targets=None,
                check_resolution: bool = True) -> np.ndarray:
    """Principal-value sheet-induced velocity at curve parameters.

    ``targets`` defaults to the curve nodes.  Returns an (len(targets), 2)
    array.  With ``check_resolution`` the evaluation refuses targets whose
    distance to the opposing branch falls under one node spacing, where the
    alternating rule loses accuracy.
    """
    omega = _as_strength(omega, curve.N)
    if targets is None:
        if check_resolution:
            _resolution_screen(curve, curve.nodes)
        return _to_vectors(_br_nodes(curve, omega))
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    if check_resolution:
        _resolution_screen(curve, targets)
    h = _TWO_PI / curve.N
    on_grid = np.abs(targets / h - np.round(targets / h)) < 1e-12
    out = np.empty(targets.size, dtype=complex)
    if np.all(on_grid):
        nodes = _br_nodes(curve, omega)
        out[:] = nodes[np.round(targets / h).astype(int) % curve.N]
    else:
        out[:] = _br_offgrid(curve, omega, targets)
    return _to_vectors(out)


def interface_velocities(curve: PeriodicCurve, omega, targets=None,
                         check_resolution: bool = True):
    """One-sided velocity traces v1 (lower side) and v2 (upper side).

    v1 = BR + (omega/2) z_a/|z_a|^2 and v2 = BR - (omega/2) z_a/|z_a|^2, so
    (v1 - v2) . z_a = omega holds identically.
    """
    omega = _as_strength(omega, curve.N)
    br = br_velocity(curve, omega, targets, check_resolution)
    brc = br[:, 0] + 1j * br[:, 1]
    if targets is None:
        t = curve.node_values(1)
        ww = omega.values
    else:
        targets = np.atleast_1d(np.asarray(targets, dtype=float))
        t = curve.eval_complex(targets, 1)
        ww = omega.eval(targets)
    add = 0.5 * ww * t / np.abs(t) ** 2
    return _to_vectors(brc + add), _to_vectors(brc - add)


def _grid_velocity(curve: PeriodicCurve, omega: SheetStrength, targets,
                   weight_fn=None, rtol: float = 1e-10, m0: int | None = None,
                   max_m: int = 2 ** 21) -> np.ndarray:
    """Velocities from trapezoid sums of the periodized kernel.

    The integrand is smooth and periodic whenever the targets avoid the live
    part of the sheet, so the uniform rule converges spectrally; the grid is
    doubled until two consecutive grids agree.  Far cheaper than panel
    subdivision here because uniform grids come from FFT resampling instead of
    arbitrary-point spectral evaluation.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=complex))
    m = max(int(m0) if m0 is not None else 2 * curve.N, 2048)
    prev = None
    while m <= max_m:
        z = curve.fine_values(m)
        coef = omega.fine_values(m).astype(complex)
        if weight_fn is not None:
            coef = coef * weight_fn(_TWO_PI * np.arange(m) / m)
        live = coef != 0.0
        zl, cl = z[live], coef[live]
        vals = np.empty(targets.size, dtype=complex)
        step = max(1, 4_194_304 // max(zl.size, 1))
        for i in range(0, targets.size, step):
            diff = 0.5 * (targets[i:i + step, None] - zl[None, :])
            vals[i:i + step] = (cl[None, :] / np.tan(diff)).sum(axis=1)
        vals *= _TWO_PI / m
        if prev is not None:
            scale = max(float(np.abs(vals).max()), 1e-30)
            if float(np.abs(vals - prev).max()) <= rtol * scale + 1e-15:
                return np.conj(vals * (-1j) / (4.0 * np.pi))
        prev = vals
        m *= 2
    raise QuadratureFailure(
        f"periodic grid quadrature did not settle by m = {max_m}")


def _near_params(curve: PeriodicCurve, xc: complex, m: int = None):
    """Parameters of the locally nearest curve points to xc (up to 4)."""
    if m is None:
        m = max(8 * curve.N, 2048)
    fine = curve.fine_values(m)
    betas = _TWO_PI * np.arange(m) / m
    dist = np.abs(_wrap(fine.real - xc.real) + 1j * (fine.imag - xc.imag))
    order = np.argsort(dist)
    reps = []
    for i in order[:64]:
        b = betas[i]
        if all(abs(_wrap(b - r)) > 0.2 for r in reps):
            reps.append(float(b))
        if len(reps) >= 4:
            break
    return reps, float(dist.min())


def _curve_distance(curve: PeriodicCurve, xc: complex) -> float:
    """Distance from xc to the curve (periodic in the horizontal direction)."""
    m = max(8 * curve.N, 2048)
    reps, dmin = _near_params(curve, xc, m)
    hf = _TWO_PI / m

    def gap2(b):
        # squared distance stays smooth through the minimum, which the
        # plain distance does not when the target sits on the curve
        zb = curve.eval_complex(np.array([b]))[0]
        return float(_wrap(zb.real - xc.real)) ** 2 + (zb.imag - xc.imag) ** 2

    # the sampled minimum overestimates by O(hf); polish each candidate
    for r in reps:
        res = minimize_scalar(gap2, bounds=(r - 2.0 * hf, r + 2.0 * hf),
                              method="bounded", options={"xatol": 1e-14})
        dmin = min(dmin, float(max(res.fun, 0.0)) ** 0.5)
    return dmin


def offcurve_velocity(curve: PeriodicCurve, omega, x,
                      rtol: float = 1e-10) -> np.ndarray:
    """Fluid velocity at a point off the interface (smooth quadrature)."""
    omega = _as_strength(omega, curve.N)
    xc = _as_point(x)
    dmin = _curve_distance(curve, xc)
    scale = max(1.0, curve.offset_scale())
    if dmin < 1e-12 * scale:
        raise OnCurve(f"target {x} lies on the interface")
    # grids must resolve the kernel peak, whose width is the curve distance
    m0 = 2 * curve.N
    while m0 < _TWO_PI / max(dmin, 1e-6):
        m0 *= 2
    return _to_vectors(_grid_velocity(curve, omega, xc, rtol=rtol, m0=m0))[0]


def _pair_of(locator):
    return locator.pair if isinstance(locator, SplashFrame) else locator


def _beta_extent(frame: SplashFrame) -> float:
    w = frame.window
    return float(min(abs(frame.beta(1, -w)), abs(frame.beta(1, w)),
                     abs(frame.beta(2, -w)), abs(frame.beta(2, w))))


def far_field_velocity(curve: PeriodicCurve, omega, locator, x,
                       cutoff_radius: float | None = None,
                       rtol: float = 1e-10) -> np.ndarray:
    """Velocity induced by the sheet outside cutoffs around the paired points.

    The strength is weighted by 1 - psi(wrap(b - a1)/r) - psi(wrap(b - a2)/r),
    which removes both near-pinch humps; targets inside the dead zones may sit
    on the curve itself.
    """
    omega = _as_strength(omega, curve.N)
    pair = _pair_of(locator)
    if cutoff_radius is None:
        if not isinstance(locator, SplashFrame):
            raise CurveValidationError(
                "cutoff_radius is required when only a pair is given")
        cutoff_radius = 0.5 * _beta_extent(locator)
    r = float(cutoff_radius)
    a1, a2 = pair.alpha1, pair.alpha2
    if abs(_wrap(a2 - a1)) <= 2.0 * r:
        raise FrameTooNarrow("cutoff humps around the paired points overlap")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[1] != 2:
        raise CurveValidationError("points must have shape (2,) or (k, 2)")
    xc = pts[:, 0] + 1j * pts[:, 1]

    def weight(beta):
        return 1.0 - bump(_wrap(beta - a1) / r) - bump(_wrap(beta - a2) / r)

    # targets must stay off the weighted support of the sheet
    m = max(8 * curve.N, 2048)
    fine = curve.fine_values(m)
    betas = _TWO_PI * np.arange(m) / m
    live = fine[weight(betas) > 0.0]
    dist = np.abs(_wrap(live.real[None, :] - xc.real[:, None])
                  + 1j * (live.imag[None, :] - xc.imag[:, None])).min(axis=1)
    if float(dist.min()) < 1e-12 * max(1.0, curve.offset_scale()):
        raise OnCurve("target lies on the sheet outside the cutoff dead zones")

    # grids must resolve both cutoff shoulders and the kernel peak
    m0 = 2 * curve.N
    while m0 < _TWO_PI / max(min(0.5 * r, float(dist.min())), 1e-6):
        m0 *= 2
    out = _to_vectors(_grid_velocity(curve, omega, xc, weight_fn=weight,
                                     rtol=rtol, m0=m0))
    return out[0] if single else out


@dataclass
class VelocityDecomposition:
    """Near-pinch velocity assembly on the frame abscissa grid.

    For each branch n, ``v_frame[n]`` = local + far + kernel contributions;
    the independent cross-check is frame_trace_velocity, which reaches the
    same values through the global trace path.
    """

    mu: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    local1: np.ndarray
    local2: np.ndarray
    far1: np.ndarray
    far2: np.ndarray
    kernel11: np.ndarray
    kernel12: np.ndarray
    kernel21: np.ndarray
    kernel22: np.ndarray
    strength1: np.ndarray
    strength2: np.ndarray
    cutoff_radius: float
    eval_halfwidth: float
    support1: tuple[float, float]
    support2: tuple[float, float]

    def vertical_gap(self) -> float:
        """|vertical(v1) - vertical(v2)| at the window center."""
        i = int(np.argmin(np.abs(self.mu)))
        return float(abs(self.v1[i, 1] - self.v2[i, 1]))


def _support_bounds(frame: SplashFrame, branch: int, r: float):
    w = frame.window

    def g(rho):
        return abs(float(frame.beta(branch, rho))) - r

    if g(w) < 0.0 or g(-w) < 0.0:
        raise FrameTooNarrow(
            f"cutoff support of branch {branch} exceeds the frame window")
    hi = brentq(g, 0.0, w, xtol=1e-14)
    lo = -brentq(lambda rho: g(-rho), 0.0, w, xtol=1e-14)
    return lo, hi


def near_field_velocity(curve: PeriodicCurve, omega, frame: SplashFrame,
                        cutoff_radius: float | None = None, mu=None,
                        rtol: float = 1e-10) -> VelocityDecomposition:
    """Assemble the branch velocities near the pinch in frame coordinates.

    Each branch velocity splits into the half-strength local term, the
    far-field term rotated into the frame, and four kernel integrals coupling
    the two branch graphs.  All kernel integrals use pair-folded adaptive
    panel quadrature, which stays accurate however small the gap is compared
    to the node spacing.
    """
    omega = _as_strength(omega, curve.N)
    pair = frame.pair
    if cutoff_radius is None:
        cutoff_radius = 0.5 * _beta_extent(frame)
    r = float(cutoff_radius)
    if r <= 0.0:
        raise FrameTooNarrow("cutoff radius must be positive")
    sup1 = _support_bounds(frame, 1, r)
    sup2 = _support_bounds(frame, 2, r)
    if abs(_wrap(pair.alpha2 - pair.alpha1)) <= 2.0 * r:
        raise FrameTooNarrow("cutoff humps around the paired points overlap")

    # evaluation half-width: keep targets inside the dead zone with margin
    def margin(mu_val):
        return max(abs(float(frame.beta(1, mu_val))),
                   abs(float(frame.beta(2, mu_val)))) - 0.25 * r

    w = frame.window
    w_eval = w if margin(w) <= 0.0 else brentq(margin, 0.0, w, xtol=1e-14)
    w_eval = min(w_eval, w if margin(-w) <= 0.0
                 else brentq(lambda v: margin(-v), 0.0, w, xtol=1e-14))
    if mu is None:
        mu = np.linspace(-w_eval, w_eval, 17)
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if np.any(np.abs(mu) > w_eval + 1e-15):
        raise FrameTooNarrow(
            f"requested abscissas exceed the evaluation half-width {w_eval:.3e}")

    alphas = (pair.alpha1, pair.alpha2)
    sups = (sup1, sup2)

    def strength_on(branch, rho):
        a0 = alphas[branch - 1]
        return (omega.eval(a0 + np.asarray(frame.beta(branch, rho)))
                * np.asarray(frame.beta(branch, rho, 1)))

    def kernel_density(branch, rho):
        # measure transported to ascending rho: |beta'|, not signed beta',
        # or a backward-running branch would flip its kernel contribution
        a0 = alphas[branch - 1]
        return (omega.eval(a0 + np.asarray(frame.beta(branch, rho)))
                * np.abs(frame.beta(branch, rho, 1)))

    def cutoff_on(branch, rho):
        return bump(np.asarray(frame.beta(branch, rho)) / r)

    def source_complex(branch, rho):
        rho = np.asarray(rho, dtype=float)
        pts = frame.from_frame(np.stack([rho, np.asarray(frame.f(branch, rho))],
                                        axis=-1))
        return pts[..., 0] + 1j * pts[..., 1]

    def periodization(w):
        # 0.5*cot(w/2) - 1/w, analytic through w = 0
        w = np.asarray(w, dtype=complex)
        small = np.abs(w) < 0.2
        ws = np.where(small, w, 1.0)
        series = -ws / 12.0 - ws ** 3 / 720.0 - ws ** 5 / 30240.0
        wd = np.where(small, 1.0, w)
        direct = 0.5 / np.tan(0.5 * wd) - 1.0 / wd
        return np.where(small, series, direct)

    mcount = mu.size
    local = {1: np.zeros((mcount, 2)), 2: np.zeros((mcount, 2))}
    farv = {1: np.zeros((mcount, 2)), 2: np.zeros((mcount, 2))}
    kern = {(n, m): np.zeros((mcount, 2)) for n in (1, 2) for m in (1, 2)}
    strengths = {1: strength_on(1, mu), 2: strength_on(2, mu)}
    # absolute floor for integral tolerances: below the strength's own
    # round-off scale the integrand is noise no subdivision can settle
    noise = 1e-11 * float(np.max(np.abs(omega.values), initial=1e-30))

    for n in (1, 2):
        a0 = alphas[n - 1]
        fp = np.asarray(frame.f(n, mu, 1))
        local[n][:, 0] = strengths[n] * 1.0 / (2.0 * (1.0 + fp ** 2))
        local[n][:, 1] = strengths[n] * fp / (2.0 * (1.0 + fp ** 2))
        zts = curve.eval_complex(a0 + np.asarray(frame.beta(n, mu)))
        vecs = far_field_velocity(curve, omega, frame,
                                  np.stack([zts.real, zts.imag], axis=-1),
                                  cutoff_radius=r, rtol=rtol)
        farv[n] = frame.rotate_to_frame(vecs)
        for j, mu_j in enumerate(mu):
            fn_mu = float(frame.f(n, mu_j))
            for m in (1, 2):
                lo, hi = sups[m - 1]

                def comp(rho, axis, m=m, mu_j=mu_j, fn_mu=fn_mu):
                    rho = np.asarray(rho, dtype=float)
                    fm = np.asarray(frame.f(m, rho))
                    den = (mu_j - rho) ** 2 + (fn_mu - fm) ** 2
                    num = (fm - fn_mu) if axis == 0 else (mu_j - rho)
                    return (num / den) * kernel_density(m, rho) * cutoff_on(m, rho)

                for axis in (0, 1):
                    probe = np.abs(comp(np.linspace(lo, hi, 129), axis))
                    probe = probe[np.isfinite(probe)]
                    atol = max(rtol * float(np.median(probe)) * (hi - lo),
                               noise)
                    if m == n:
                        # same-branch kernel: the pair fold amplifies the
                        # curve-evaluation noise in f like 1/s^2, so keep the
                        # fold away from the pole
                        val, _ = pv_quad(lambda rho: comp(rho, axis),
                                         float(mu_j), lo, hi, rtol=rtol,
                                         atol=atol, fold_floor=1e-4)
                    else:
                        val, _ = adaptive_quad(lambda rho: comp(rho, axis),
                                               lo, hi, rtol=rtol, atol=atol,
                                               breakpoints=[0.0, float(mu_j)])
                    kern[(n, m)][j, axis] = val / _TWO_PI

                # the flat kernel above misses the form the far field removed
                # around the images; restore the analytic periodization part
                zt_c = complex(zts[j])

                def gcomp(rho, m=m, zt_c=zt_c):
                    return (periodization(zt_c - source_complex(m, rho))
                            * kernel_density(m, rho) * cutoff_on(m, rho))

                probe = np.abs(gcomp(np.linspace(lo, hi, 65)))
                gatol = max(rtol * float(np.median(probe)) * (hi - lo), noise)
                tot, _ = adaptive_quad(gcomp, lo, hi, rtol=rtol, atol=gatol,
                                       dtype=complex)
                wc = np.conj(tot / (2j * np.pi))
                kern[(n, m)][j] += frame.rotate_to_frame(
                    np.array([wc.real, wc.imag]))

    v1 = local[1] + farv[1] + kern[(1, 1)] + kern[(1, 2)]
    v2 = local[2] + farv[2] + kern[(2, 1)] + kern[(2, 2)]
    return VelocityDecomposition(
        mu=mu, v1=v1, v2=v2, local1=local[1], local2=local[2],
        far1=farv[1], far2=farv[2], kernel11=kern[(1, 1)],
        kernel12=kern[(1, 2)], kernel21=kern[(2, 1)], kernel22=kern[(2, 2)],
        strength1=strengths[1], strength2=strengths[2], cutoff_radius=r,
        eval_halfwidth=float(w_eval), support1=sup1, support2=sup2)


def frame_trace_velocity(curve: PeriodicCurve, omega, frame: SplashFrame,
                         mu, branch: int,
                         check_resolution: bool = True) -> np.ndarray:
    """Frame components of the lower-side trace at branch abscissas.

    Independent cross-check path for near_field_velocity: evaluates the trace
    v1 through the global alternating rule and rotates it into the frame.
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    a0 = frame.pair.alpha1 if branch == 1 else frame.pair.alpha2
    targets = a0 + np.asarray(frame.beta(branch, mu))
    v1, _ = interface_velocities(curve, omega, targets, check_resolution)
    return np.asarray(frame.rotate_to_frame(v1))
