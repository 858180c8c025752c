"""Real-rational SISO transfer functions and their frequency-domain sets.

Covers pole analysis, adaptive sampling of the Nyquist contour, winding
numbers, the Nyquist stability count, the hyperbolic (h-)convex hull used for
the SRG of a stable LTI operator, and the extended SRG that also collects the
points encircled by the Nyquist curve.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import shapely
from numpy.polynomial import Polynomial
from scipy.spatial import ConvexHull, QhullError
from shapely.geometry import LineString, Polygon, box
from shapely.ops import unary_union

from .region import (
    DEFAULT_TOL,
    Region,
    RegionError,
    _box,
    _clean,
    _polygons,
    disk_region,
)

POLE_AXIS_TOL = 1e-9
ROOT_RTOL = 1e-9
WINDOW_CAP = 1e8


class TransferFunctionError(ValueError):
    pass


class NyquistError(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def _trim(c):
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if not np.all(np.isfinite(c)):
        raise TransferFunctionError("coefficients must be finite")
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        return np.zeros(1)
    return c[: nz[-1] + 1]


def _roots(coeffs):
    """Roots via companion eigenvalues, polished by Newton steps and residual-checked."""
    coeffs = np.asarray(coeffs, dtype=float)
    peak = np.max(np.abs(coeffs)) if len(coeffs) else 0.0
    if peak > 0:
        # roots are scale free; normalising keeps subnormal inputs well behaved
        coeffs = coeffs / peak
    p = Polynomial(coeffs)
    if p.degree() < 1:
        return np.zeros(0, dtype=complex)
    r = np.asarray(p.roots(), dtype=complex)
    dp = p.deriv()
    scale = np.sum(np.abs(coeffs))
    for _ in range(3):
        d = dp(r)
        ok = np.abs(d) > 1e-300
        step = np.zeros_like(r)
        step[ok] = p(r[ok]) / d[ok]
        cand = r - step
        better = np.abs(p(cand)) < np.abs(p(r))
        r = np.where(better, cand, r)
    # real coefficients: snap near-real roots onto the axis
    r = np.where(np.abs(r.imag) <= 1e-12 * np.maximum(1.0, np.abs(r)), r.real + 0j, r)
    res = np.abs(p(r)) / (scale * np.maximum(1.0, np.abs(r)) ** p.degree())
    if np.any(res > ROOT_RTOL * 1e3):
        warnings.warn("root residual above tolerance; poles may be inaccurate", RuntimeWarning)
    return np.sort_complex(r)


@dataclass(frozen=True)
class TransferFunction:
    """``num(s)/den(s)`` with coefficients in ascending powers of s."""

    num: tuple
    den: tuple
    notes: tuple = field(default=(), compare=False)

    def __init__(self, num, den):
        n, d = _trim(num), _trim(den)
        if not np.any(d):
            raise TransferFunctionError("denominator is identically zero")
        nd = len(n) - 1 if np.any(n) else 0
        if nd > len(d) - 1:
            raise TransferFunctionError("improper transfer function (deg num > deg den)")
        object.__setattr__(self, "num", tuple(float(x) for x in n))
        object.__setattr__(self, "den", tuple(float(x) for x in d))
        notes = []
        if np.any(n) and len(n) > 1 and len(d) > 1:
            zs, ps = _roots(n), _roots(d)
            for z in zs:
                if np.any(np.abs(ps - z) <= 1e-7 * max(1.0, abs(z))):
                    notes.append(f"common root near {z:.6g} between numerator and denominator")
                    break
        object.__setattr__(self, "notes", tuple(notes))

    @classmethod
    def static(cls, k):
        return cls([k], [1.0])

    @property
    def num_poly(self):
        return Polynomial(self.num)

    @property
    def den_poly(self):
        return Polynomial(self.den)

    @property
    def order(self):
        return len(self.den) - 1

    @property
    def relative_degree(self):
        if not any(self.num):
            return math.inf
        return len(self.den) - len(self.num)

    @property
    def strictly_proper(self):
        return self.relative_degree > 0

    @property
    def is_static(self):
        return self.order == 0 or (len(self.num) == 1 and self.num[0] == 0)

    def high_frequency_gain(self):
        if len(self.num) < len(self.den):
            return 0.0
        return self.num[-1] / self.den[-1]

    def __call__(self, s):
        return tf_eval(self, s)

    def __repr__(self):
        return f"TransferFunction(num={list(self.num)}, den={list(self.den)})"


def tf_poles(tf: TransferFunction):
    """Denominator roots (with multiplicity), sorted."""
    return _roots(np.asarray(tf.den))


def tf_zeros(tf: TransferFunction):
    return _roots(np.asarray(tf.num))


def n_unstable(tf: TransferFunction, axis_tol=POLE_AXIS_TOL):
    return int(np.sum(tf_poles(tf).real > axis_tol))


def imag_axis_poles(tf: TransferFunction, axis_tol=POLE_AXIS_TOL):
    p = tf_poles(tf)
    return p[np.abs(p.real) <= axis_tol]


def is_stable(tf: TransferFunction, axis_tol=POLE_AXIS_TOL):
    return bool(np.all(tf_poles(tf).real < -axis_tol))


def _eval_array(tf, s):
    """Vectorised evaluation; large |s| uses reversed coefficients to avoid overflow."""
    s = np.asarray(s, dtype=complex)
    num = np.asarray(tf.num)
    den = np.asarray(tf.den)
    out = np.empty(s.shape, dtype=complex)
    big = np.abs(s) > 1.0
    small = ~big
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if np.any(small):
            ss = s[small]
            out[small] = np.polynomial.polynomial.polyval(ss, num) / np.polynomial.polynomial.polyval(ss, den)
        if np.any(big):
            w = 1.0 / s[big]
            n_deg, d_deg = len(num) - 1, len(den) - 1
            nr = np.polynomial.polynomial.polyval(w, num[::-1])
            dr = np.polynomial.polynomial.polyval(w, den[::-1])
            out[big] = nr / dr * w ** (d_deg - n_deg)
    return out


def tf_eval(tf: TransferFunction, s):
    """Evaluate G(s); ``s = inf`` gives the high-frequency limit.  Raises at a pole."""
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    inf = np.isinf(s_arr.real) | np.isinf(s_arr.imag)
    out = np.empty(s_arr.shape, dtype=complex)
    out[inf] = tf.high_frequency_gain()
    if np.any(~inf):
        fin = s_arr[~inf]
        d = np.asarray(tf.den)
        # relative size of den(s); reversed coefficients in 1/s keep large |s| finite
        big = np.abs(fin) > 1.0
        x = np.where(big, 1.0 / np.where(big, fin, 1.0), fin)
        den = np.where(big, np.polynomial.polynomial.polyval(x, d[::-1]),
                       np.polynomial.polynomial.polyval(x, d))
        scale = np.where(big, np.polynomial.polynomial.polyval(np.abs(x), np.abs(d[::-1])),
                         np.polynomial.polynomial.polyval(np.abs(x), np.abs(d)))
        if np.any(np.abs(den) <= 1e-14 * np.maximum(scale, 1e-300)):
            raise TransferFunctionError("evaluation at a pole")
        out[~inf] = _eval_array(tf, fin)
    return complex(out[0]) if scalar else out


def chordal(a, b):
    """Chordal distance on the Riemann sphere."""
    return np.abs(a - b) / (np.sqrt(1 + np.abs(a) ** 2) * np.sqrt(1 + np.abs(b) ** 2))


# ------------------------------------------------------------ Nyquist curve

@dataclass
class NyquistCurve:
    """Samples of G along the D-contour, ordered from ω = -∞ to ω = +∞.

    ``s`` are contour points, ``values`` the images.  The large arc of the
    contour maps onto ``closure_point`` (= G(∞)) for proper G, which closes
    the curve.  ``param`` increases monotonically along the contour.
    """

    s: np.ndarray
    values: np.ndarray
    param: np.ndarray
    closure_point: complex
    refinement_tol: float
    indented_poles: tuple = ()
    warnings: tuple = ()

    @property
    def omega(self):
        return self.s.imag

    @property
    def closed(self):
        """Closed polyline (first point repeated at the end)."""
        v = self.values
        pts = [v]
        if abs(v[-1] - self.closure_point) > 0:
            pts.append([self.closure_point])
        pts.append(v[:1])
        return np.concatenate(pts)

    def upper(self):
        """Samples folded into the closed upper half-plane."""
        v = np.concatenate([self.values, [self.closure_point]])
        return v.real + 1j * np.abs(v.imag)

    def max_modulus(self):
        return float(np.max(np.abs(self.values)))

    def __len__(self):
        return len(self.values)


def _pieces(tf, indent_eps):
    """Contour pieces for the half contour ω ≥ 0 as (kind, a, b, centre) tuples."""
    axis = imag_axis_poles(tf)
    w0s = sorted({round(float(abs(p.imag)), 12) for p in axis})
    pieces = []
    start = 0.0
    for w0 in w0s:
        if w0 == 0.0:
            pieces.append(("arc", 0.0, math.pi / 2, 0.0))
            start = indent_eps
            continue
        pieces.append(("axis", start, w0 - indent_eps, None))
        pieces.append(("arc", -math.pi / 2, math.pi / 2, w0))
        start = w0 + indent_eps
    pieces.append(("axis", start, math.inf, None))
    return pieces, w0s


def _omega_scale(tf):
    mags = [abs(p) for p in tf_poles(tf)] + [abs(z) for z in tf_zeros(tf)]
    mags = [m for m in mags if m > 0]
    return float(np.exp(np.mean(np.log(mags)))) if mags else 1.0


def _refine(fun, t, tol, max_chord, max_samples, floor):
    """Bisect parameter intervals until images are smooth enough; returns (t, values)."""
    t = np.unique(np.asarray(t, dtype=float))
    g = fun(t)
    while True:
        tm = 0.5 * (t[:-1] + t[1:])
        active = (t[1:] - t[:-1]) > floor
        if not np.any(active):
            break
        gm = np.full(tm.shape, np.nan + 0j)
        gm[active] = fun(tm[active])
        chord_ok = chordal(g[:-1], g[1:]) <= max_chord
        scale = np.maximum(1.0, np.maximum(np.abs(g[:-1]), np.abs(g[1:])) / 10.0) ** 2
        dev = np.abs(gm - 0.5 * (g[:-1] + g[1:]))
        smooth = dev <= tol * scale
        need = active & ~(chord_ok & smooth)
        if not np.any(need):
            break
        t = np.concatenate([t, tm[need]])
        g = np.concatenate([g, gm[need]])
        order = np.argsort(t, kind="stable")
        t, g = t[order], g[order]
        if len(t) > max_samples:
            raise NyquistError("max_samples exceeded while refining the Nyquist curve", (t, g))
    return t, g


def nyquist_curve(tf: TransferFunction, refinement_tol=DEFAULT_TOL, max_samples=400_000,
                  indent_eps=1e-6, max_chord=None) -> NyquistCurve:
    """Adaptive samples of G along the D-contour.

    Imaginary-axis poles are bypassed by right half-plane semicircles of
    radius ``indent_eps``; any indentation adds a warning to the curve.
    """
    if max_chord is None:
        max_chord = refinement_tol
    pieces, w0s = _pieces(tf, indent_eps)
    wc = _omega_scale(tf)
    crit = sorted({abs(p.imag) for p in tf_poles(tf)} | {abs(p) for p in tf_poles(tf)}
                  | {abs(z) for z in tf_zeros(tf)})
    base = np.concatenate([wc * np.logspace(-4, 4, 161), crit])
    ss, params = [], []
    offset = 0.0
    budget = max_samples // 2
    for kind, a, b, centre in pieces:
        if kind == "axis":
            ta = math.atan(a / wc)
            tb = math.pi / 2 if math.isinf(b) else math.atan(b / wc)
            if tb <= ta:
                continue
            grid = np.arctan(base / wc)
            grid = np.concatenate([[ta, tb], grid[(grid > ta) & (grid < tb)],
                                   np.linspace(ta, tb, 9)])

            def s_of(t, wc=wc):
                return 1j * wc * np.tan(t)

            def fun(t, s_of=s_of):
                out = _eval_array(tf, s_of(t))
                out[t >= math.pi / 2] = tf.high_frequency_gain()
                return out

            floor = 1e-15 * max(1.0, abs(tb))
        else:
            ta, tb = a, b

            def s_of(t, centre=centre):
                return 1j * centre + indent_eps * np.exp(1j * t)

            def fun(t, s_of=s_of):
                return _eval_array(tf, s_of(t))

            grid = np.linspace(ta, tb, 65)
            floor = 1e-12
        t, g = _refine(fun, grid, refinement_tol, max_chord, budget, floor)
        s = s_of(t)
        if kind == "axis" and tb == math.pi / 2:
            s[-1] = complex(0, math.inf)
        ss.append((s, g))
        params.append(offset + (t - ta))
        offset += (tb - ta) + 1.0
    s_pos = np.concatenate([p[0] for p in ss])
    g_pos = np.concatenate([p[1] for p in ss])
    t_pos = np.concatenate(params)
    closure = complex(tf.high_frequency_gain())
    # drop the infinite-frequency endpoint; it is the closure point
    if np.isinf(s_pos[-1].imag):
        s_pos, g_pos, t_pos = s_pos[:-1], g_pos[:-1], t_pos[:-1]
    # mirror: ω < 0 half is the conjugate of the ω > 0 half, traversed backwards
    # the first positive-half point is real (s = 0 or s = ε), so it is shared
    s_neg = np.conj(s_pos[1:][::-1])
    g_neg = np.conj(g_pos[1:][::-1])
    t_neg = -t_pos[1:][::-1]
    s_all = np.concatenate([s_neg, s_pos])
    g_all = np.concatenate([g_neg, g_pos])
    t_all = np.concatenate([t_neg, t_pos])
    warns = ()
    if w0s:
        warns = (f"contour indented around imaginary-axis poles at ω = {w0s} (radius {indent_eps:g}); "
                 "verdict relies on the indentation",)
    return NyquistCurve(s_all, g_all, t_all, closure, refinement_tol, tuple(w0s), warns)


def _winding_raw(closed, zs):
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    out = np.empty(len(zs))
    for i, z in enumerate(zs):
        d = closed - z
        out[i] = np.sum(np.angle(d[1:] / d[:-1]))
    return -out / (2 * math.pi)


def _curve_distance(closed, z):
    a, b = closed[:-1], closed[1:]
    seg = b - a
    L2 = np.abs(seg) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.clip(((z - a) * np.conj(seg)).real / L2, 0.0, 1.0)
    t = np.where(L2 > 0, t, 0.0)
    return float(np.min(np.abs(a + t * seg - z)))


def winding_number(curve: NyquistCurve, z, tol=None) -> int:
    """Net clockwise encirclements of z by the closed Nyquist curve."""
    tol = curve.refinement_tol if tol is None else tol
    closed = curve.closed
    z = complex(z)
    if _curve_distance(closed, z) <= tol:
        raise NyquistError("point on contour")
    w = _winding_raw(closed, [z])[0]
    n = round(w)
    if abs(w - n) > 0.1:
        raise NyquistError("winding residue too large; refine the curve")
    return int(n)


@dataclass(frozen=True)
class NyquistVerdict:
    n_p: int
    n_n: int
    n_z: int
    warnings: tuple = ()

    @property
    def stable(self):
        return self.n_z == 0

    def to_dict(self):
        return {"n_p": self.n_p, "n_n": self.n_n, "n_z": self.n_z, "stable": self.stable,
                "warnings": list(self.warnings)}


def nyquist_criterion(ltf: TransferFunction, curve: NyquistCurve | None = None,
                      tol=DEFAULT_TOL) -> NyquistVerdict:
    """Unstable closed-loop pole count of the unity negative-feedback loop around ``ltf``."""
    curve = curve or nyquist_curve(ltf, tol)
    n_p = n_unstable(ltf)
    n_n = winding_number(curve, -1.0, tol)
    return NyquistVerdict(n_p, n_n, n_n + n_p, curve.warnings + ltf.notes)


def closed_loop_unstable_count(ltf: TransferFunction):
    """Direct count of roots of den + num with positive real part."""
    d = np.zeros(max(len(ltf.den), len(ltf.num)))
    d[: len(ltf.den)] += ltf.den
    d[: len(ltf.num)] += ltf.num
    return int(np.sum(_roots(_trim(d)).real > POLE_AXIS_TOL))


# ------------------------------------------------------------ h-convex hull

def _geodesic_arc(za, zb, sagitta):
    """Points along the upper half-plane geodesic from za to zb (inclusive)."""
    dx = za.real - zb.real
    if abs(dx) <= 1e-12 * max(1.0, abs(za), abs(zb)):
        return np.array([za, zb])
    c = (abs(za) ** 2 - abs(zb) ** 2) / (2.0 * dx)
    R = abs(za - c)
    ta, tb = np.angle(za - c), np.angle(zb - c)
    ta, tb = min(max(ta, 0.0), math.pi), min(max(tb, 0.0), math.pi)
    step = math.sqrt(8.0 * sagitta / R) if R > 0 else math.pi
    n = int(min(max(2, math.ceil(abs(tb - ta) / max(step, 1e-9)) + 1), 20000))
    t = np.linspace(ta, tb, n)
    pts = c + R * np.exp(1j * t)
    pts[0], pts[-1] = za, zb
    return pts


def _to_klein(z, c):
    p = (z - 1j * c) / (z + 1j * c)
    return 2 * p / (1 + np.abs(p) ** 2)


def _from_klein(k, c):
    k = np.asarray(k, dtype=complex)
    m = np.abs(k) ** 2
    p = k / (1 + np.sqrt(np.clip(1 - m, 0.0, None)))
    return 1j * c * (1 + p) / (1 - p)


def h_convex_hull(points, tol=DEFAULT_TOL, window=None) -> Region:
    """Hyperbolic convex hull of upper half-plane points, mirrored across ℝ.

    Points on ℝ are ideal points of the half-plane.  The hull is computed as
    a Euclidean hull in the Klein model; its edges are mapped back to
    geodesics (arcs centred on ℝ, or vertical segments).  Output is inflated
    by ``tol``.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if len(z) == 0:
        raise RegionError("h_convex_hull needs at least one point")
    if np.any(~np.isfinite(z)):
        raise RegionError("h_convex_hull points must be finite")
    z = z.real + 1j * np.abs(z.imag)
    mag = float(np.max(np.abs(z)))
    if window is None:
        window = 10.0 * max(mag, 1.0)
    # condition with a hyperbolic isometry z -> (z - x0)/c
    x0 = float(np.median(z.real))
    spread = np.abs(z - x0)
    c = float(np.median(spread[spread > 0])) if np.any(spread > 0) else 1.0
    w = (z - x0) / c
    ideal_eps = 1e-12 * max(1.0, float(np.max(np.abs(w))))
    w = np.where(w.imag <= ideal_eps, w.real + 0j, w)
    w = np.unique(np.round(w.real, 15) + 1j * np.round(w.imag, 15))
    if len(w) == 1:
        return _finish_hull([w[0] * c + x0], tol, window, line=True)
    k = _to_klein(w, 1.0)
    kxy = np.column_stack((k.real, k.imag))
    centred = kxy - kxy.mean(axis=0)
    sv = np.linalg.svd(centred, compute_uv=False)
    verts = None
    if sv[1] > 1e-10 * max(sv[0], 1e-300):
        try:
            hull = ConvexHull(kxy)
            verts = w[hull.vertices]
        except QhullError:
            try:
                hull = ConvexHull(kxy, qhull_options="QJ")
                verts = w[hull.vertices]
            except QhullError:
                verts = None
    sag = 0.25 * tol / c
    if verts is None:
        # all points on one geodesic: the hull is the geodesic segment between the extremes
        u = centred @ np.linalg.svd(centred)[2][0]
        a, b = w[np.argmin(u)], w[np.argmax(u)]
        arc = _geodesic_arc(a, b, sag)
        return _finish_hull(arc * c + x0, tol, window, line=True)
    ring = []
    nv = len(verts)
    for i in range(nv):
        arc = _geodesic_arc(verts[i], verts[(i + 1) % nv], sag)
        ring.append(arc[:-1])
    ring = np.concatenate(ring) * c + x0
    return _finish_hull(ring, tol, window, line=False)


def _finish_hull(ring, tol, window, line):
    ring = np.asarray(ring, dtype=complex)
    xy = np.column_stack((ring.real, ring.imag))
    mirror = xy * np.array([1.0, -1.0])
    parts = []
    if len(ring) == 1:
        parts += [shapely.Point(xy[0]), shapely.Point(mirror[0])]
    elif line or len(ring) < 3:
        parts += [LineString(xy), LineString(mirror)]
    else:
        parts += [_clean(Polygon(xy)), _clean(Polygon(mirror[::-1])),
                  LineString(np.vstack([xy, xy[:1]])), LineString(np.vstack([mirror, mirror[:1]]))]
    geom = _clean(unary_union(parts).buffer(tol, quad_segs=8))
    return Region(geom, False, tol, window, None)


def srg_lti_stable(tf: TransferFunction, tol=DEFAULT_TOL, curve: NyquistCurve | None = None,
                   window=None) -> Region:
    """SRG of a stable LTI operator: h-convex hull of its Nyquist curve."""
    if n_unstable(tf) > 0 or len(imag_axis_poles(tf)) > 0:
        raise RegionError("the LTI SRG requires a stable operator; use extended_srg")
    if tf.is_static:
        k = tf.high_frequency_gain() if tf.order else tf.num[0] / tf.den[0]
        return disk_region(k, k, tol)
    curve = curve or nyquist_curve(tf, tol)
    return h_convex_hull(curve.upper(), tol, window)


@dataclass
class ExtendedSrg:
    hull: Region
    encircled: Region | None
    combined: Region
    n_p: int
    real_only_mode: bool
    curve: NyquistCurve | None = None
    warnings: tuple = ()


def _faces(closed, window):
    line = LineString(np.column_stack((closed.real, closed.imag)))
    frame = _box(window).exterior
    noded = shapely.node(shapely.union(line, frame))
    return list(shapely.polygonize(list(getattr(noded, "geoms", [noded]))).geoms)


def extended_srg(tf: TransferFunction, tol=DEFAULT_TOL, real_only=False,
                 curve: NyquistCurve | None = None) -> ExtendedSrg:
    """Hull of the Nyquist curve united with ``{z : N(z) + n_p > 0}``.

    ``N`` counts clockwise encirclements.  With ``real_only`` only the real
    points of the encircled set are added.
    """
    n_p = n_unstable(tf)
    if tf.is_static:
        k = tf.num[0] / tf.den[0] if tf.order == 0 else 0.0
        pt = disk_region(k, k, tol)
        return ExtendedSrg(pt, None, pt, n_p, real_only, None)
    curve = curve or nyquist_curve(tf, tol)
    mag = curve.max_modulus()
    window = min(10.0 * max(mag, 1.0), WINDOW_CAP)
    hull = h_convex_hull(curve.upper(), tol, window)
    closed = curve.closed
    faces = _faces(closed, window)
    chosen = []
    for face in faces:
        core = face.buffer(-tol)
        if core.is_empty:
            continue
        rep = core.representative_point()
        n = round(_winding_raw(closed, [complex(rep.x, rep.y)])[0])
        if n + n_p > 0:
            chosen.append(face)
    frame = _box(window)
    geom = _clean(unary_union(chosen).buffer(tol, quad_segs=8)) if chosen else Polygon()
    if real_only:
        axis = LineString([(-window, 0.0), (window, 0.0)])
        geom = _clean(geom.intersection(axis).buffer(tol)) if not geom.is_empty else geom
    geom = _clean(geom.intersection(frame))
    has_inf = n_p > 0
    encircled = None
    if has_inf or not geom.is_empty:
        encircled = Region(geom, has_inf, tol, window, None)
    combined_geom = _clean(unary_union([hull.geom, geom]).intersection(frame))
    combined = Region(combined_geom, has_inf, tol, window, None)
    warns = curve.warnings
    if real_only:
        warns = warns + ("encircled set restricted to the real axis",)
    return ExtendedSrg(hull, encircled, combined, n_p, real_only, curve, warns)


def loop_transform_tf(tf: TransferFunction, kappa: float) -> TransferFunction:
    """``G / (1 + κ G)``, the plant seen after moving a static gain κ into the loop."""
    num = np.asarray(tf.num)
    den = np.zeros(max(len(tf.den), len(num)))
    den[: len(tf.den)] += tf.den
    den[: len(num)] += kappa * num
    return TransferFunction(num, den)
