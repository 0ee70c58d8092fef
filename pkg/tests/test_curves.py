import numpy as np
import pytest

from sheetlab.curves import (
    PeriodicCurve,
    ChordArcReport,
    build_splash_frame,
    chord_arc,
    classify_segment,
    find_conjugate_pair,
    make_pinch_curve,
    min_chord_arc,
    region_of_point,
    reparametrize_arclength,
    segment_crossings,
    taylor_gap_scale,
)
from sheetlab.errors import (
    CurveValidationError,
    DegenerateMinimizer,
    NoPinch,
    OnCurve,
    ResolutionError,
)

TWO_PI = 2.0 * np.pi

_cache = {}


def flat_curve():
    if "flat" not in _cache:
        _cache["flat"] = PeriodicCurve.flat(64)
    return _cache["flat"]


def cos_graph(n=256):
    key = ("cos", n)
    if key not in _cache:
        _cache[key] = PeriodicCurve.from_graph(lambda a: 0.1 * np.cos(a), n)
    return _cache[key]


def pinch(d, a1, a2, **kw):
    key = ("pinch", d, a1, a2, tuple(sorted(kw.items())))
    if key not in _cache:
        _cache[key] = make_pinch_curve(d, a1, a2, **kw)
    return _cache[key]


def grid_chord_arc_min(curve, n):
    # exhaustive scan of chord_arc over all node pairs with parameter
    # separation in (0, 2pi), using the periodic lift for wrapped pairs
    h = TWO_PI / n
    z = curve.fine_values(n)
    best = np.inf
    for k in range(1, n):
        zk = np.concatenate([z[k:], z[:k] + TWO_PI])
        best = min(best, float(np.abs(zk - z).min()) / (k * h))
    return best


# -- chord_arc ------------------------------------------------------------------


def test_chord_arc_flat_pairs():
    c = flat_curve()
    assert chord_arc(c, 1.0, 2.0) == pytest.approx(1.0, abs=1e-13)
    assert chord_arc(c, 0.0, np.pi) == pytest.approx(1.0, abs=1e-13)
    # wrapped pair must use the closest periodic image
    assert chord_arc(c, 0.1, TWO_PI - 0.1) == pytest.approx(1.0, abs=1e-13)
    assert chord_arc(c, 3.0, 3.0 + 2 * TWO_PI + 1.0) == pytest.approx(1.0, abs=1e-13)


def test_chord_arc_diagonal_is_speed():
    assert chord_arc(flat_curve(), 0.3, 0.3) == pytest.approx(1.0, abs=1e-13)
    c = cos_graph()
    for a in (0.0, 0.7, 2.5, 4.0):
        speed = np.hypot(1.0, -0.1 * np.sin(a))
        assert chord_arc(c, a, a) == pytest.approx(speed, rel=1e-12)


def test_chord_arc_vectorized_matches_scalar():
    c = cos_graph()
    a = np.array([0.1, 1.3, 5.0])
    b = np.array([2.0, 1.3, 0.2])
    vals = chord_arc(c, a, b)
    for i in range(3):
        assert vals[i] == pytest.approx(float(chord_arc(c, a[i], b[i])), rel=1e-14)


def test_chord_arc_pinch_grid_min_matches_pair_ratio():
    c = pinch(1e-3, 0.5, 1.3)
    pr = find_conjugate_pair(c)
    ratio = pr.d / abs(pr.alpha2 - pr.alpha1)
    grid_min = grid_chord_arc_min(c, 4096)
    # the refined pair minimum lower-bounds the lattice scan, and the
    # lattice comes within quantization error of it
    assert grid_min >= ratio * (1.0 - 1e-9)
    assert grid_min == pytest.approx(ratio, rel=0.25)


# -- min_chord_arc ----------------------------------------------------------------


def test_min_chord_arc_flat():
    rep = min_chord_arc(flat_curve())
    assert rep.global_min == pytest.approx(1.0, abs=1e-10)
    assert rep.eps1 == pytest.approx(0.5)
    assert rep.eps2 == pytest.approx(0.05)
    assert rep.global_min <= rep.restricted_min


def test_min_chord_arc_graph_agrees_with_dense_grid():
    c = cos_graph()
    rep = min_chord_arc(c)
    oracle = grid_chord_arc_min(c, 8192)
    assert abs(rep.global_min - oracle) <= 1e-8
    assert rep.global_min <= oracle + 1e-12


def test_min_chord_arc_small_gap_restricted_equals_global():
    c = pinch(1e-4, 0.5, 1.3)
    rep = min_chord_arc(c)
    assert rep.restricted_min == pytest.approx(rep.global_min, rel=1e-9)
    assert rep.global_min > 0.0


def test_taylor_lower_bound_inside_eps1():
    # within parameter separation eps1 the ratio cannot drop below half
    # the minimum speed
    for c in (flat_curve(), cos_graph(), pinch(1e-2, 1.0, 1.0)):
        eps1, _ = taylor_gap_scale(c)
        min_speed = float(c.speed_fine(4).min())
        alphas = TWO_PI * np.arange(128) / 128
        for frac in (0.2, 0.6, 1.0):
            vals = chord_arc(c, alphas, alphas + frac * eps1)
            assert vals.min() >= 0.5 * min_speed


# -- find_conjugate_pair -----------------------------------------------------------


def test_flat_curve_has_no_pinch():
    with pytest.raises(NoPinch):
        find_conjugate_pair(flat_curve())


def test_conjugate_pair_symmetric_pinch():
    c = pinch(1e-2, 1.0, 1.0)
    rep = min_chord_arc(c)
    pr = find_conjugate_pair(c, rep)
    assert pr.d == pytest.approx(1e-2, abs=1e-6)
    # mirror symmetry forces a vertical chord
    assert abs(pr.e[0]) <= 1e-6
    assert abs(pr.e[1]) == pytest.approx(1.0, abs=1e-6)
    t1 = c.eval_complex(pr.alpha1, 1)
    t2 = c.eval_complex(pr.alpha2, 1)
    assert t1.real * t2.real + t1.imag * t2.imag < 0.0
    sep = abs(pr.alpha2 - pr.alpha1)
    assert 2.0 * rep.eps1 <= sep <= 0.5 / rep.eps1
    assert pr.ortho_residual <= 1e-8 * max(1.0, pr.d)


def test_conjugate_pair_distance_identity():
    c = pinch(1e-3, 0.5, 1.3)
    rep = min_chord_arc(c)
    pr = find_conjugate_pair(c, rep)
    sep = abs(pr.alpha2 - pr.alpha1)
    # two code paths must agree: the pair distance and the restricted
    # ratio times the separation
    assert abs(pr.d - rep.restricted_min * sep) <= 1e-8
    assert pr.d == pytest.approx(rep.restricted_chord, rel=1e-12)
    assert pr.ratio == pytest.approx(pr.d / sep, rel=1e-12)
    assert np.hypot(*pr.e) == pytest.approx(1.0, rel=1e-12)


def test_degenerate_minimizer_rejected():
    c = cos_graph()
    eps1, eps2 = taylor_gap_scale(c)
    # fabricated report whose minimizing pair fails the first-order
    # orthogonality conditions
    fake = ChordArcReport(
        global_min=0.01, restricted_min=0.01, argmin=(0.0, 1.0),
        band=(eps1, 1.0 / eps1), eps1=eps1, eps2=eps2,
        restricted_argmin=(0.0, 1.0), restricted_chord=0.01,
        diagonal_min=1.0)
    with pytest.raises(DegenerateMinimizer):
        find_conjugate_pair(c, fake)


def test_nopinch_when_restricted_min_above_threshold():
    c = cos_graph()
    rep = min_chord_arc(c)
    assert rep.restricted_min > rep.eps2
    with pytest.raises(NoPinch):
        find_conjugate_pair(c, rep)


# -- build_splash_frame -------------------------------------------------------------


def frame_case(d, a1, a2):
    key = ("frame", d, a1, a2)
    if key not in _cache:
        c = pinch(d, a1, a2)
        pr = find_conjugate_pair(c)
        _cache[key] = (c, pr, build_splash_frame(c, pr))
    return _cache[key]


def test_frame_center_values():
    c, pr, fr = frame_case(1e-2, 1.0, 1.0)
    assert fr.f(1, 0.0) == pytest.approx(-pr.d / 2.0, abs=1e-12)
    assert fr.f(2, 0.0) == pytest.approx(+pr.d / 2.0, abs=1e-12)
    assert fr.f(1, 0.0) == pytest.approx(-0.005, abs=1e-6)
    assert abs(fr.f(1, 0.0, 1)) <= 1e-8
    assert abs(fr.f(2, 0.0, 1)) <= 1e-8
    assert abs(fr.beta(1, 0.0)) <= 1e-12
    assert abs(fr.beta(2, 0.0)) <= 1e-12


def test_frame_window_invariants():
    c, pr, fr = frame_case(1e-2, 1.0, 1.0)
    assert fr.window > 0.0
    rho = np.linspace(-fr.window, fr.window, 81)
    f1 = fr.f(1, rho)
    f2 = fr.f(2, rho)
    assert np.all(f2 - f1 >= pr.d - 1e-12)
    assert np.all(-fr.beta(1, rho, 1) * fr.beta(2, rho, 1) > 0.0)
    # rigid motion: orthogonal with unit determinant
    q = fr.rotation
    assert np.abs(q @ q.T - np.eye(2)).max() <= 1e-12
    assert np.linalg.det(q) == pytest.approx(1.0, abs=1e-12)


def test_frame_round_trip():
    c, pr, fr = frame_case(1e-2, 1.0, 1.0)
    rho = np.linspace(-fr.window, fr.window, 41)
    for n, a0 in ((1, pr.alpha1), (2, pr.alpha2)):
        z = c.eval_complex(a0 + fr.beta(n, rho))
        xy = fr.from_frame(np.stack([rho, fr.f(n, rho)], axis=1))
        assert np.abs(xy[:, 0] + 1j * xy[:, 1] - z).max() <= 1e-8
    # to_frame inverts from_frame
    pts = np.array([[0.3, -0.7], [1.0, 2.0]])
    assert np.abs(fr.to_frame(fr.from_frame(pts)) - pts).max() <= 1e-12


def test_frame_recovers_branch_curvatures():
    c, pr, fr = frame_case(1e-4, 1.0, 2.5)
    rho = np.linspace(-fr.window / 2.0, fr.window / 2.0, 81)
    for n, a in ((1, 1.0), (2, 2.5)):
        coef = np.polyfit(rho, fr.f(n, rho), 4)
        assert abs(abs(2.0 * coef[-3]) - 2.0 * a) <= 1e-4


# -- segment classification ----------------------------------------------------------


def test_classify_segment_flat_examples():
    c = flat_curve()
    assert classify_segment(c, (0.0, 1.0), (0.0, 2.0)) == "clear"
    assert classify_segment(c, (0.0, -1.0), (0.0, 1.0)) == "crosses_interface"
    with pytest.raises(CurveValidationError):
        classify_segment(c, (0.5, 0.5), (0.5, 0.5))


def test_classify_conjugate_chord_is_clear():
    c = pinch(1e-3, 0.5, 1.3)
    pr = find_conjugate_pair(c)
    p = c.eval(np.array(pr.alpha1))
    q = c.eval(np.array(pr.alpha2))
    assert classify_segment(c, p, q) == "clear"


def polyline_oracle(curve, p, q, m=None):
    # brute-force crossing count against a dense closed polyline; flags
    # near-tangent or near-endpoint hits as ambiguous
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    if m is None:
        m = max(64 * curve.N, 16384)
    z = curve.fine_values(m)
    pts = np.stack([z.real, z.imag], axis=1)
    dq = q - p
    seg_len = np.hypot(*dq)
    hit = False
    ambiguous = False
    klo = int(np.floor((min(p[0], q[0]) - pts[:, 0].max()) / TWO_PI))
    khi = int(np.ceil((max(p[0], q[0]) - pts[:, 0].min()) / TWO_PI))
    for k in range(klo, khi + 1):
        a = pts + np.array([TWO_PI * k, 0.0])
        b = np.roll(a, -1, axis=0)
        b[-1, 0] += TWO_PI
        c1 = dq[0] * (a[:, 1] - p[1]) - dq[1] * (a[:, 0] - p[0])
        c2 = dq[0] * (b[:, 1] - p[1]) - dq[1] * (b[:, 0] - p[0])
        edge = b - a
        c3 = edge[:, 0] * (p[1] - a[:, 1]) - edge[:, 1] * (p[0] - a[:, 0])
        c4 = edge[:, 0] * (q[1] - a[:, 1]) - edge[:, 1] * (q[0] - a[:, 0])
        if np.any((c1 * c2 < 0) & (c3 * c4 < 0)):
            hit = True
        scale = seg_len * np.hypot(edge[:, 0], edge[:, 1])
        near_vertex = (np.minimum(np.abs(c1), np.abs(c2)) < 1e-7 * seg_len) & (
            (c3 * c4 < 1e-12 * scale**2) | (c1 * c2 < 1e-12 * seg_len**2))
        if np.any(np.abs(c3 * c4) < 1e-14 * scale**2) or np.any(near_vertex):
            ambiguous = True
    return hit, ambiguous


def test_classify_segment_random_against_polyline():
    rng = np.random.default_rng(7)
    for c in (cos_graph(128), pinch(1e-2, 1.0, 1.0)):
        kept = 0
        tried = 0
        while kept < 100 and tried < 500:
            tried += 1
            p = np.array([rng.uniform(-np.pi, np.pi), rng.uniform(-2.5, 3.0)])
            q = np.array([rng.uniform(-np.pi, np.pi), rng.uniform(-2.5, 3.0)])
            if np.hypot(*(q - p)) < 1e-3:
                continue
            hit, ambiguous = polyline_oracle(c, p, q)
            if ambiguous:
                continue
            kept += 1
            want = "crosses_interface" if hit else "clear"
            assert classify_segment(c, p, q) == want
        assert kept == 100


def test_segment_crossings_sorted_interior():
    c = pinch(1e-2, 1.0, 1.0)
    hits = segment_crossings(c, (0.1, -3.0), (0.1, 3.5))
    ts = [t for t, _ in hits]
    assert ts == sorted(ts)
    assert all(0.0 < t < 1.0 for t in ts)
    assert len(hits) % 2 == 1  # endpoints are in different regions


# -- region_of_point -----------------------------------------------------------------


def test_region_of_point_flat():
    c = flat_curve()
    assert region_of_point(c, (1.0, -0.5)) == 1
    assert region_of_point(c, (1.0, +0.5)) == 2
    with pytest.raises(OnCurve):
        region_of_point(c, (0.5, 0.0))


def test_region_of_point_pinch_channel():
    c = pinch(1e-2, 1.0, 1.0)
    assert region_of_point(c, (0.0, 0.0)) == 2
    assert region_of_point(c, (0.0, -3.0)) == 1
    assert region_of_point(c, (0.0, 4.0)) == 2


# -- make_pinch_curve ----------------------------------------------------------------


def test_make_pinch_rejects_bad_parameters():
    for args in ((0.0, 1.0, 1.0), (0.2, 1.0, 1.0), (1e-2, 6.0, 1.0),
                 (1e-2, 1.0, -1.0)):
        with pytest.raises(CurveValidationError):
            make_pinch_curve(*args)
    with pytest.raises(CurveValidationError):
        make_pinch_curve(1e-2, 1.0, 1.0, width=1e-3)


def test_make_pinch_gap_and_resolution():
    c = pinch(1e-2, 1.0, 1.0)
    pr = find_conjugate_pair(c)
    assert pr.d == pytest.approx(1e-2, abs=1e-6)
    assert c.spectral_tail_ratio() < PeriodicCurve.TAIL_TOL


def test_make_pinch_narrow_window_resolved():
    c = pinch(1e-4, 1.0, 1.0, width=0.05, n=2048)
    assert c.spectral_tail_ratio() < PeriodicCurve.TAIL_TOL
    pr = find_conjugate_pair(c)
    assert pr.d == pytest.approx(1e-4, abs=1e-6)


def test_make_pinch_gap_scaling():
    # the same profile family closes to the requested gap across scales
    for d in (1e-2, 1e-3, 1e-4):
        pr = find_conjugate_pair(pinch(d, 0.5, 1.3))
        assert pr.d == pytest.approx(d, abs=1e-6)


# -- PeriodicCurve basics ------------------------------------------------------------


def test_eval_periodicity_and_derivative():
    c = cos_graph()
    a = np.array([0.3, 1.1, 4.9])
    assert np.abs(c.eval_complex(a + TWO_PI) - c.eval_complex(a) - TWO_PI).max() <= 1e-11
    h = 1e-5
    fd = (c.eval_complex(a + h) - c.eval_complex(a - h)) / (2 * h)
    assert np.abs(fd - c.eval_complex(a, 1)).max() <= 1e-8
    nodes_d1 = c.node_values(1)
    assert np.abs(nodes_d1 - c.eval_complex(c.nodes, 1)).max() <= 1e-10


def test_from_graph_reproduces_height():
    c = cos_graph()
    z = c.eval_complex(c.nodes)
    assert np.abs(z.imag - 0.1 * np.cos(c.nodes)).max() <= 1e-12
    assert np.abs(z.real - c.nodes).max() <= 1e-12


def test_undersampled_offsets_rejected():
    rng = np.random.default_rng(3)
    offsets = np.zeros((64, 2))
    offsets[:, 1] = 0.5 * rng.standard_normal(64)
    with pytest.raises(ResolutionError):
        PeriodicCurve(offsets)


def test_invalid_shapes_rejected():
    with pytest.raises(CurveValidationError):
        PeriodicCurve(np.zeros((8, 2)))  # below minimum size
    with pytest.raises(CurveValidationError):
        PeriodicCurve(np.zeros((17, 2)))  # odd length
    with pytest.raises(CurveValidationError):
        PeriodicCurve(np.zeros((64, 3)))


# -- reparametrize_arclength -----------------------------------------------------------


def test_reparametrize_arclength_uniform_speed():
    c = cos_graph()
    rc = reparametrize_arclength(c)
    sp = rc.speed_fine(8)
    assert (sp.max() - sp.min()) / sp.mean() <= 1e-10
    assert rc.arclength() == pytest.approx(c.arclength(), rel=1e-12)
    # the point set is preserved: resampled nodes stay on the graph
    z = rc.node_values()
    assert np.abs(z.imag - 0.1 * np.cos(z.real)).max() <= 1e-10
