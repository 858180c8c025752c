"""Closed subsets of the extended complex plane.

A :class:`Region` stores an *outer* polygonal approximation of a closed set
``S ⊂ ℂ ∪ {∞}``.  Finite parts live in a shapely geometry; sets that contain
``∞`` additionally own everything outside the square working window
``[-window, window]²``.  Every constructor and operation in this module keeps
the stored set a superset of the true set, so distances computed from stored
sets are lower bounds on true distances.

Sets that are exactly a disk centred on the real axis, a vertical half-plane
or the exterior of such a disk carry an analytic :class:`Circular` descriptor.
Those shapes are closed under real affine maps and inversion, so radius,
membership and property checks on them are exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import shapely
from shapely import affinity
from shapely.geometry import LineString, MultiPolygon, Point, Polygon, box
from shapely.geometry.base import BaseGeometry
from shapely.ops import unary_union

DEFAULT_TOL = 1e-3
# 0 closer than this fraction of tol to a boundary makes inversion singular.
SINGULAR_FRACTION = 1e-2
# Densification slack used by inversion, as a fraction of tol.
INVERT_SLACK = 1.0 / 64


class RegionError(ValueError):
    """Raised when a set operation is undefined for its operands."""


class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary-within-tol"


class Confidence(enum.Enum):
    ANALYTIC = "verified-analytic"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class PropertyReport:
    chord: bool
    arc_left: bool
    arc_right: bool
    samples_used: int
    confidence: Confidence

    @property
    def arc(self):
        return self.arc_left or self.arc_right

    def to_dict(self):
        return {
            "chord": self.chord,
            "arc_left": self.arc_left,
            "arc_right": self.arc_right,
            "samples_used": self.samples_used,
            "confidence": self.confidence.value,
        }


def _inv(x):
    return math.inf if x == 0 else 1.0 / x


@dataclass(frozen=True)
class Circular:
    """A closed set bounded by a circle centred on ℝ or by a vertical line.

    ``kind`` is one of

    * ``"disk"``: ``D[a, b]``, the disk meeting ℝ in ``[a, b]`` (a point when a == b);
    * ``"right"``: ``{Re z >= a} ∪ {∞}``;
    * ``"left"``: ``{Re z <= a} ∪ {∞}``;
    * ``"exterior"``: ``ℂ`` minus the open disk meeting ℝ in ``(a, b)``, plus ``∞``.
    """

    kind: str
    a: float
    b: float = math.nan

    @property
    def bounded(self):
        return self.kind == "disk"

    @property
    def center(self):
        return 0.5 * (self.a + self.b)

    @property
    def radius(self):
        return 0.5 * (self.b - self.a)

    def affine(self, alpha, beta):
        if self.kind == "disk" or self.kind == "exterior":
            lo, hi = sorted((alpha * self.a + beta, alpha * self.b + beta))
            return Circular(self.kind, lo, hi)
        c = alpha * self.a + beta
        flip = {"right": "left", "left": "right"}
        return Circular(self.kind if alpha > 0 else flip[self.kind], c)

    def invert(self):
        out = self._invert()
        bounds = (out.a,) if out.kind in ("right", "left") else (out.a, out.b)
        if not np.all(np.isfinite(bounds)):
            raise RegionError("inversion overflow: boundary too close to zero")
        return out

    def _invert(self):
        a, b = self.a, self.b
        # a reciprocal that overflows is snapped to 0 where that only enlarges the set
        tiny = 1.0 / np.finfo(float).max
        if self.kind == "disk":
            a = 0.0 if 0 < a < tiny else a
            b = 0.0 if -tiny < b < 0 else b
        elif self.kind == "right" and 0 < a < tiny or self.kind == "left" and -tiny < a < 0:
            a = 0.0
        if self.kind == "disk":
            if a > 0 or b < 0:
                return Circular("disk", 1.0 / b, 1.0 / a)
            if a == 0 and b == 0:
                raise RegionError("inverse of {0} is {∞} alone, which is not representable")
            if a == 0:
                return Circular("right", 1.0 / b)
            if b == 0:
                return Circular("left", 1.0 / a)
            return Circular("exterior", 1.0 / a, 1.0 / b)
        if self.kind == "right":
            if a > 0:
                return Circular("disk", 0.0, 1.0 / a)
            if a == 0:
                return Circular("right", 0.0)
            return Circular("exterior", 1.0 / a, 0.0)
        if self.kind == "left":
            if a < 0:
                return Circular("disk", 1.0 / a, 0.0)
            if a == 0:
                return Circular("left", 0.0)
            return Circular("exterior", 0.0, 1.0 / a)
        # exterior of the open disk (a, b)
        if a < 0 < b:
            return Circular("disk", 1.0 / a, 1.0 / b)
        if a == 0:
            return Circular("left", 1.0 / b)
        if b == 0:
            return Circular("right", 1.0 / a)
        lo, hi = sorted((1.0 / a, 1.0 / b))
        return Circular("exterior", lo, hi)

    def signed_distance(self, z):
        """Distance from z to the boundary, negative inside the set."""
        if self.kind == "disk":
            return abs(z - self.center) - self.radius
        if self.kind == "right":
            return self.a - z.real
        if self.kind == "left":
            return z.real - self.a
        return self.radius - abs(z - self.center)

    def max_modulus(self):
        if self.kind != "disk":
            return math.inf
        return max(abs(self.a), abs(self.b))

    def properties(self):
        if self.kind == "disk":
            c = self.center
            # |ρe^{jθ} - c| <= R  <=>  cos θ >= const (c > 0) or cos θ <= const (c < 0)
            return PropertyReport(True, c <= 0 or self.a == self.b, c >= 0 or self.a == self.b, 0,
                                  Confidence.ANALYTIC)
        if self.kind == "right":
            return PropertyReport(True, self.a <= 0, True, 0, Confidence.ANALYTIC)
        if self.kind == "left":
            return PropertyReport(True, True, self.a >= 0, 0, Confidence.ANALYTIC)
        c = self.center
        return PropertyReport(False, c >= 0, c <= 0, 0, Confidence.ANALYTIC)

    def to_dict(self):
        d = {"kind": self.kind, "a": self.a}
        if self.kind in ("disk", "exterior"):
            d["b"] = self.b
        return d


def _circle_coords(center, radius, tol, outer=True, max_vertices=4096):
    """Vertices of a regular polygon that contains (outer) or is contained in the circle."""
    radius = max(radius, 0.0)
    if radius <= tol:
        radius, n = max(radius, tol), 16
    else:
        if outer:
            x = math.acos(1.0 / (1.0 + 0.5 * tol / radius))
        else:
            x = math.acos(1.0 - 0.5 * tol / radius)
        n = int(min(max(16, math.ceil(math.pi / max(x, 1e-12))), max_vertices))
    rr = radius / math.cos(math.pi / n) if outer else radius
    t = 2.0 * math.pi * np.arange(n) / n
    return np.column_stack((center.real + rr * np.cos(t), center.imag + rr * np.sin(t)))


WINDOW_LIMIT = 1e12


def _window_for(*mags):
    # polygon coordinates beyond this overflow GEOS arithmetic
    finite = [abs(m) for m in mags if np.isfinite(m)]
    return min(10.0 * max(finite + [1.0]), WINDOW_LIMIT)


def _box(x):
    return box(-x, -x, x, x)


def _as_complex(z):
    return complex(z)


def is_infinite(z):
    try:
        z = complex(z)
    except TypeError:
        return False
    return math.isinf(z.real) or math.isinf(z.imag)


@dataclass(frozen=True, eq=False)
class Region:
    """Outer approximation of a closed subset of ℂ ∪ {∞}.

    ``geom`` holds the finite part (clipped to the working window when the set
    is unbounded).  ``contains_infinity`` means every point outside the window
    ``[-window, window]²`` also belongs to the set.
    """

    geom: BaseGeometry
    contains_infinity: bool = False
    tol: float = DEFAULT_TOL
    window: float = 0.0
    exact: Circular | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.tol > 0:
            raise RegionError("tol must be positive")
        if self.geom.is_empty and not self.contains_infinity:
            raise RegionError("empty regions are not supported")
        if self.contains_infinity and not self.window > 0:
            raise RegionError("regions containing infinity need a positive window")

    @cached_property
    def window_box(self):
        return _box(self.window) if self.window > 0 else Polygon()

    @cached_property
    def boundary(self):
        """Boundary of the represented set (window edges excluded when not a real boundary)."""
        if self.contains_infinity:
            return self.window_box.difference(self.geom).boundary
        return self.geom.boundary

    @cached_property
    def _prepared(self):
        g = self.geom
        shapely.prepare(g)
        return g

    @property
    def loops(self):
        """Boundary loops as complex arrays: outer loops counter-clockwise, holes clockwise."""
        out = []
        for poly in _polygons(self.geom):
            poly = shapely.geometry.polygon.orient(poly, 1.0)
            out.append(_ring_to_complex(poly.exterior))
            out.extend(_ring_to_complex(r) for r in poly.interiors)
        return out

    @property
    def is_bounded(self):
        return not self.contains_infinity

    def __repr__(self):
        if self.exact is not None:
            return f"Region(exact={self.exact}, tol={self.tol:g})"
        return (f"Region(loops={len(self.loops)}, contains_infinity={self.contains_infinity}, "
                f"tol={self.tol:g})")


def _polygons(geom):
    if geom.is_empty:
        return []
    if isinstance(geom, Polygon):
        return [geom]
    if isinstance(geom, MultiPolygon):
        return list(geom.geoms)
    if hasattr(geom, "geoms"):
        out = []
        for g in geom.geoms:
            out.extend(_polygons(g))
        return out
    return []


def _ring_to_complex(ring):
    xy = np.asarray(ring.coords)
    return xy[:, 0] + 1j * xy[:, 1]


def _clean(geom):
    """Keep only the areal part of a geometry, repaired."""
    geom = shapely.make_valid(geom)
    polys = _polygons(geom)
    if not polys:
        return Polygon()
    return unary_union(polys)


# ---------------------------------------------------------------- constructors

def region_from_circular(c: Circular, tol=DEFAULT_TOL, window=None):
    if c.kind == "disk":
        geom = Polygon(_circle_coords(complex(c.center), c.radius, tol))
        return Region(geom, False, tol, window or _window_for(c.a, c.b), c)
    x = window or _window_for(c.a, c.b)
    if c.kind == "right":
        geom = box(min(c.a, x), -x, x, x) if c.a < x else Polygon()
    elif c.kind == "left":
        geom = box(-x, -x, max(c.a, -x), x) if c.a > -x else Polygon()
    elif c.radius > 1e3 * x:
        # inside the window a huge hole is indistinguishable from a half-plane
        sag = x * x / c.radius
        if c.center < 0:
            geom = box(min(c.b - sag, x), -x, x, x) if c.b - sag < x else Polygon()
        else:
            geom = box(-x, -x, max(c.a + sag, -x), x) if c.a + sag > -x else Polygon()
    else:
        hole = Polygon(_circle_coords(complex(c.center), c.radius, tol, outer=False))
        geom = _box(x).difference(hole)
    return Region(geom, True, tol, x, c)


def disk_region(alpha, beta, tol=DEFAULT_TOL):
    """The disk ``D[alpha, beta]`` centred on ℝ (a single point when alpha == beta)."""
    if not (np.isfinite(alpha) and np.isfinite(beta)):
        raise RegionError("disk bounds must be finite")
    if alpha > beta:
        raise RegionError("disk requires alpha <= beta")
    return region_from_circular(Circular("disk", float(alpha), float(beta)), tol)


def halfplane_region(c, side="right", tol=DEFAULT_TOL):
    """``{Re z >= c}`` (side="right") or ``{Re z <= c}``, closed at ∞."""
    if side not in ("right", "left"):
        raise RegionError("side must be 'right' or 'left'")
    return region_from_circular(Circular(side, float(c)), tol)


def point_region(z, tol=DEFAULT_TOL):
    """A single point; real points get an exact descriptor."""
    z = _as_complex(z)
    if z.imag == 0:
        return disk_region(z.real, z.real, tol)
    geom = Polygon(_circle_coords(z, 0.0, tol))
    return Region(geom, False, tol, _window_for(abs(z)))


def polygon_region(loops, contains_infinity=False, tol=DEFAULT_TOL, window=None):
    """Region from closed loops, combined with the even-odd rule.

    Each loop is a sequence of complex numbers or (x, y) pairs.  When
    ``contains_infinity`` is set, the complement of the loops' union within
    the window is the unbounded face that belongs to the set.
    """
    rings = []
    mags = [1.0]
    for loop in loops:
        arr = np.asarray(loop)
        if np.iscomplexobj(arr) or arr.ndim == 1:
            arr = np.asarray(arr, dtype=complex)
            xy = np.column_stack((arr.real, arr.imag))
        else:
            xy = np.asarray(arr, dtype=float)
        if len(xy) < 3:
            raise RegionError("a loop needs at least three vertices")
        if not np.all(np.isfinite(xy)):
            raise RegionError("loop vertices must be finite")
        rings.append(_clean(Polygon(xy)))
        mags.append(float(np.max(np.abs(xy))))
    geom = Polygon()
    for r in rings:
        geom = geom.symmetric_difference(r)
    x = window or _window_for(*mags)
    if contains_infinity:
        geom = _box(x).difference(geom)
    return Region(_clean(geom), contains_infinity, tol, x)


def geometry_region(geom, contains_infinity=False, tol=DEFAULT_TOL, window=None, meta=None):
    """Wrap an existing shapely geometry as a region (no inflation applied)."""
    geom = _clean(geom)
    if window is None:
        window = _window_for(_max_modulus(geom)) if not geom.is_empty else _window_for()
    if contains_infinity:
        geom = _clean(geom.intersection(_box(window)))
    return Region(geom, contains_infinity, tol, window, None, meta or {})


def _max_modulus(geom):
    if geom.is_empty:
        return 0.0
    xy = shapely.get_coordinates(geom)
    return float(np.max(np.hypot(xy[:, 0], xy[:, 1])))


# ------------------------------------------------------------------ queries

def region_contains(a: Region, z) -> Membership:
    """Tri-state membership test; points within ``tol`` of the boundary report BOUNDARY."""
    if is_infinite(z):
        return Membership.INSIDE if a.contains_infinity else Membership.OUTSIDE
    z = _as_complex(z)
    if a.exact is not None:
        d = a.exact.signed_distance(z)
        if abs(d) <= a.tol:
            return Membership.BOUNDARY
        return Membership.INSIDE if d < 0 else Membership.OUTSIDE
    if a.contains_infinity and max(abs(z.real), abs(z.imag)) > a.window:
        return Membership.INSIDE
    p = Point(z.real, z.imag)
    bd = a.boundary
    if not bd.is_empty and bd.distance(p) <= a.tol:
        return Membership.BOUNDARY
    return Membership.INSIDE if a._prepared.covers(p) else Membership.OUTSIDE


def contains_points(a: Region, zs, tol=None):
    """Vectorised inclusive membership (inside or within ``tol`` of the set)."""
    zs = np.asarray(zs, dtype=complex).ravel()
    tol = a.tol if tol is None else tol
    if a.exact is not None:
        c = a.exact
        if c.kind == "disk":
            return np.abs(zs - c.center) <= c.radius + tol
        if c.kind == "right":
            return zs.real >= c.a - tol
        if c.kind == "left":
            return zs.real <= c.a + tol
        return np.abs(zs - c.center) >= c.radius - tol
    pts = shapely.points(zs.real, zs.imag)
    ok = shapely.dwithin(a._prepared, pts, tol) if tol > 0 else shapely.covers(a._prepared, pts)
    if a.contains_infinity:
        ok |= np.maximum(np.abs(zs.real), np.abs(zs.imag)) > a.window
    return ok


def _dist_to_outside(window, geom):
    if geom.is_empty:
        return math.inf
    minx, miny, maxx, maxy = geom.bounds
    return max(0.0, window - max(abs(minx), abs(maxx), abs(miny), abs(maxy)))


def region_distance(a: Region, b: Region) -> float:
    """Lower bound on ``inf |z1 - z2|`` over the true sets, with ``|∞ - ∞| = 0``."""
    if a.contains_infinity and b.contains_infinity:
        return 0.0
    if (a.exact is not None and b.exact is not None
            and a.exact.kind == "disk" and b.exact.kind == "disk"):
        d = abs(a.exact.center - b.exact.center) - a.exact.radius - b.exact.radius
        return max(0.0, d)
    ga, gb = a.geom, b.geom
    if ga.is_empty or gb.is_empty:
        d = math.inf
    elif a._prepared.intersects(gb):
        return 0.0
    else:
        d = ga.distance(gb)
    if a.contains_infinity:
        d = min(d, _dist_to_outside(a.window, gb))
    if b.contains_infinity:
        d = min(d, _dist_to_outside(b.window, ga))
    return float(d)


def region_radius(a: Region) -> float:
    """Smallest r with the set inside the origin-centred disk of radius r (inf if unbounded)."""
    if a.contains_infinity:
        return math.inf
    if a.exact is not None:
        return a.exact.max_modulus()
    return _max_modulus(a.geom)


def is_symmetric(a: Region, slack=None) -> bool:
    """Check symmetry about the real axis up to ``slack`` (default 2·tol) in Hausdorff distance."""
    if a.exact is not None:
        return True
    slack = 2 * a.tol if slack is None else slack
    if a.geom.is_empty:
        return True
    mirror = affinity.scale(a.geom, 1.0, -1.0, origin=(0, 0))
    return shapely.hausdorff_distance(a.geom.boundary, mirror.boundary, densify=0.25) <= slack


# --------------------------------------------------------------- operations

def region_affine(a: Region, alpha: float, beta: float) -> Region:
    """The set ``{alpha·z + beta}`` for real alpha, beta."""
    alpha, beta = float(alpha), float(beta)
    if alpha == 0:
        if a.contains_infinity:
            raise RegionError("zero scaling of an unbounded region is undefined")
        return disk_region(beta, beta, a.tol)
    if a.exact is not None:
        return region_from_circular(a.exact.affine(alpha, beta), a.tol)
    geom = affinity.affine_transform(a.geom, [alpha, 0, 0, alpha, beta, 0])
    if not a.contains_infinity:
        return Region(geom, False, a.tol, abs(alpha) * a.window + abs(beta), None)
    moved = affinity.affine_transform(a.window_box, [alpha, 0, 0, alpha, beta, 0])
    x = abs(alpha) * a.window + abs(beta)
    geom = _clean(unary_union([geom, _box(x).difference(moved)]))
    return Region(geom, True, a.tol, x, None)


def _invert_ring(z, slack):
    """Image of a closed polyline under w = 1/z, as xy vertices.

    Each segment maps onto an arc of a circle through 0; the arc is sampled
    uniformly in angle so that its chords deviate by at most ``slack``.
    """
    p, q = z[:-1], z[1:]
    seg = q - p
    length = np.abs(seg)
    keep = length > 0
    p, q, seg, length = p[keep], q[keep], seg[keep], length[keep]
    u = seg / length
    z0 = p - (p * np.conj(u)).real * u  # foot of the perpendicular from 0
    d = np.abs(z0)
    wp = 1.0 / p
    wq = 1.0 / q
    flat = d <= 1e-300
    z0 = np.where(flat, 1.0, z0)
    centre = 1.0 / (2.0 * z0)
    radius = 1.0 / (2.0 * np.where(flat, 1.0, d))
    ap = np.angle(wp - centre)
    aq = np.angle(wq - centre)
    a_inf = np.angle(-centre)  # where the image of ∞ sits on the circle
    two_pi = 2 * math.pi
    ccw = np.mod(aq - ap, two_pi)
    through_inf = np.mod(a_inf - ap, two_pi) < ccw
    sweep = np.where(through_inf, ccw - two_pi, ccw)
    step = np.sqrt(8.0 * slack / radius)
    n = np.where(flat, 1, np.maximum(1, np.ceil(np.abs(sweep) / step))).astype(np.int64)
    idx = np.repeat(np.arange(len(p)), n)
    starts = np.cumsum(n) - n
    frac = (np.arange(n.sum()) - np.repeat(starts, n)) / np.repeat(n, n)
    ang = ap[idx] + frac * sweep[idx]
    w = centre[idx] + radius[idx] * np.exp(1j * ang)
    first = frac == 0
    w[first] = wp[idx[first]]  # exact vertex images
    w = np.where(flat[idx], wp[idx], w)
    w = np.append(w, w[:1])
    return np.column_stack((w.real, w.imag))


def _encloses_origin(ring_xy):
    return Polygon(ring_xy).contains(Point(0, 0))


def region_invert(a: Region) -> Region:
    """Pointwise Möbius inversion ``r e^{jφ} ↦ (1/r) e^{jφ}`` of the set.

    0 inside the set puts ∞ in the result and vice versa.  Raises
    :class:`RegionError` when 0 lies on the stored boundary, where the
    inversion is numerically singular.
    """
    tol = a.tol
    if a.exact is not None:
        return region_from_circular(a.exact.invert(), tol)
    slack = INVERT_SLACK * tol
    origin = Point(0, 0)
    bd = a.boundary
    d0 = bd.distance(origin) if not bd.is_empty else math.inf
    if d0 < SINGULAR_FRACTION * tol:
        raise RegionError("inversion singular at boundary zero")
    zero_inside = region_contains(a, 0) is not Membership.OUTSIDE

    pieces = []
    extra_rings = []
    geom = a.geom
    cut_ring = None
    if zero_inside and not geom.is_empty:
        rho = 0.5 * min(d0, a.window if a.contains_infinity else math.inf)
        h = rho / math.sqrt(2.0)
        cut = box(-h, -h, h, h)
        if geom.covers(origin):
            geom = geom.difference(cut)
        cut_ring = np.asarray(cut.exterior.coords)
    for poly in _polygons(geom):
        ext = np.asarray(poly.exterior.coords)
        holes = [np.asarray(r.coords) for r in poly.interiors]
        ext_c = ext[:, 0] + 1j * ext[:, 1]
        ext_img = _invert_ring(ext_c, slack)
        hole_imgs = [_invert_ring(hh[:, 0] + 1j * hh[:, 1], slack) for hh in holes]
        if not _encloses_origin(ext):
            pieces.append(_clean(Polygon(ext_img, hole_imgs)))
            continue
        enclosing = [i for i, hh in enumerate(holes) if _encloses_origin(hh)]
        if not enclosing:
            raise RegionError("inversion singular at boundary zero")
        k = enclosing[0]
        outer = _clean(Polygon(hole_imgs[k]))
        inner = [_clean(Polygon(hole_imgs[i])) for i in range(len(holes)) if i != k]
        pieces.append(_clean(outer.difference(unary_union([_clean(Polygon(ext_img))] + inner))))
    if a.contains_infinity:
        wb = np.asarray(a.window_box.exterior.coords)
        extra_rings.append(_clean(Polygon(_invert_ring(wb[:, 0] + 1j * wb[:, 1], slack))))
    result = unary_union(pieces + extra_rings)
    all_xy = shapely.get_coordinates(result)
    reach = float(np.max(np.hypot(all_xy[:, 0], all_xy[:, 1]))) if len(all_xy) else 1.0
    if zero_inside:
        if cut_ring is not None:
            cut_img = _invert_ring(cut_ring[:, 0] + 1j * cut_ring[:, 1], slack)
            reach = max(reach, float(np.max(np.hypot(cut_img[:, 0], cut_img[:, 1]))))
            x = 1.05 * reach
            result = unary_union([result, _box(x).difference(_clean(Polygon(cut_img)))])
        else:
            x = 1.05 * reach
        result = _clean(result.buffer(1.5 * slack)).intersection(_box(x))
        return Region(_clean(_conjugate(result)), True, tol, x, None)
    result = _clean(result.buffer(1.5 * slack))
    return Region(_conjugate(result), False, tol, _window_for(reach), None)


def _conjugate(geom):
    # the rings above were mapped by 1/z; reflecting gives z/|z|², which keeps
    # angles and agrees with 1/z on sets symmetric about ℝ
    return shapely.transform(geom, lambda xy: xy * np.array([1.0, -1.0]))


def _outer_buffer(geom, r, quad_segs=32):
    """Buffer whose arc chords still enclose the exact r-neighbourhood."""
    if r <= 0:
        return geom
    grow = r / math.cos(math.pi / (4 * quad_segs))
    return geom.buffer(grow, quad_segs=quad_segs)


def _props_pair(a, b, props):
    if props is None:
        return check_properties(a), check_properties(b)
    if isinstance(props, PropertyReport):
        return props, props
    pa, pb = props
    return pa, pb


def region_sum(a: Region, b: Region, props=None, cover=8) -> Region:
    """Outer approximation of the Minkowski sum ``A + B``.

    ``props`` is a pair of property reports for (a, b), a single report that
    certifies the hypothesis for one of them, or None to compute them.  One of
    the operands must have the chord property.
    """
    if a.contains_infinity or b.contains_infinity:
        raise RegionError("sum requires bounded operands")
    pa, pb = _props_pair(a, b, props)
    if not (pa.chord or pb.chord):
        raise RegionError("sum requires chord property")
    tol = max(a.tol, b.tol)
    if a.exact is not None and b.exact is not None:
        ea, eb = a.exact, b.exact
        return disk_region(ea.a + eb.a, ea.b + eb.b, tol)
    if a.exact is not None:
        a, b = b, a
    if b.exact is not None:
        c, r = b.exact.center, b.exact.radius
        geom = affinity.translate(a.geom, c, 0.0)
        geom = _outer_buffer(geom, r) if r > 0 else geom
        return Region(_clean(geom), False, tol, _window_for(_max_modulus(geom)))
    # cover the coarser operand with disks and sweep the other one over them
    if len(shapely.get_coordinates(b.geom)) > len(shapely.get_coordinates(a.geom)):
        a, b = b, a
    minx, miny, maxx, maxy = b.geom.bounds
    h = max(maxx - minx, maxy - miny, tol) / cover
    parts = []
    for i in range(cover + 1):
        for j in range(cover + 1):
            cell = box(minx + i * h, miny + j * h, minx + (i + 1) * h, miny + (j + 1) * h)
            if not b._prepared.intersects(cell):
                continue
            cx, cy = minx + (i + 0.5) * h, miny + (j + 0.5) * h
            parts.append(_outer_buffer(affinity.translate(a.geom, cx, cy), h / math.sqrt(2.0), 8))
    geom = _clean(unary_union(parts))
    return Region(geom, False, tol, _window_for(_max_modulus(geom)))


def _sector_polygon(r1, r2, t1, t2, tol):
    """Polygon containing the annular sector ``[r1, r2] × [t1, t2]``."""
    span = t2 - t1
    n = max(2, int(math.ceil(span / max(math.sqrt(8.0 * 0.25 * tol / max(r2, tol)), 1e-6))))
    n = min(n, 512)
    t = np.linspace(t1, t2, n + 1)
    dt = span / n
    # outer arc circumscribed, inner arc inscribed, so the polygon contains the sector
    ro = r2 / math.cos(0.5 * dt) if dt < math.pi else 2 * r2
    outer = ro * np.exp(1j * t)
    outer[0], outer[-1] = r2 * np.exp(1j * t1), r2 * np.exp(1j * t2)
    mids = ro * np.exp(1j * (t[:-1] + 0.5 * dt))
    ring_outer = np.empty(2 * n + 1, dtype=complex)
    ring_outer[0::2] = outer
    ring_outer[1::2] = mids
    inner = r1 * np.exp(1j * t[::-1])
    ring = np.concatenate([ring_outer, inner])
    return _clean(Polygon(np.column_stack((ring.real, ring.imag))))


def _angular_range(geom):
    """Smallest arc ``[t0, t1]`` of directions covering a region that avoids 0."""
    intervals = []
    for poly in _polygons(geom):
        for ring in [poly.exterior, *poly.interiors]:
            z = _ring_to_complex(ring)
            th = np.angle(z)
            d = np.angle(z[1:] / z[:-1])
            lo = np.minimum(th[:-1], th[:-1] + d)
            hi = np.maximum(th[:-1], th[:-1] + d)
            intervals.append(np.column_stack((lo, hi)))
    iv = np.concatenate(intervals)
    width = iv[:, 1] - iv[:, 0]
    lo = np.mod(iv[:, 0], 2 * math.pi)
    hi = lo + width
    pieces = [np.column_stack((lo, np.minimum(hi, 2 * math.pi)))]
    wrap = hi > 2 * math.pi
    if np.any(wrap):
        pieces.append(np.column_stack((np.zeros(wrap.sum()), hi[wrap] - 2 * math.pi)))
    iv = np.concatenate(pieces)
    iv = iv[np.argsort(iv[:, 0])]
    merged = [list(iv[0])]
    for a, b in iv[1:]:
        if a <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    gaps = [(merged[i][1], merged[i + 1][0]) for i in range(len(merged) - 1)]
    gaps.append((merged[-1][1], merged[0][0] + 2 * math.pi))
    g0, g1 = max(gaps, key=lambda g: g[1] - g[0])
    if g1 - g0 < 1e-9:
        return -math.pi, math.pi
    return g1, g0 + 2 * math.pi


def _polar_cells(reg, n_r, n_t):
    g = reg.geom
    r_min = g.distance(Point(0, 0))
    r_max = _max_modulus(g)
    if r_max <= 0 or r_min <= 0:
        raise RegionError("product requires operands away from 0")
    lr = np.linspace(math.log(r_min), math.log(r_max), n_r + 1)
    t0, t1 = _angular_range(g)
    ts = np.linspace(t0, t1, n_t + 1)
    cells = []
    for i in range(n_r):
        r1, r2 = math.exp(lr[i]), math.exp(lr[i + 1])
        if i == 0:
            r1 = r_min
        if i == n_r - 1:
            r2 = r_max
        for k in range(n_t):
            poly = _sector_polygon(r1, r2, ts[k], ts[k + 1], reg.tol)
            if reg._prepared.intersects(poly):
                cells.append((r1, r2, ts[k], ts[k + 1]))
    return cells


def region_product(a: Region, b: Region, props=None, cover=8) -> Region:
    """Outer approximation of the product set ``A·B`` via log-polar sector covers."""
    if a.contains_infinity or b.contains_infinity:
        raise RegionError("product requires bounded operands")
    pa, pb = _props_pair(a, b, props)
    if not (pa.arc or pb.arc):
        raise RegionError("product requires arc property")
    tol = max(a.tol, b.tol)
    for reg in (a, b):
        if reg.geom.distance(Point(0, 0)) <= tol * SINGULAR_FRACTION and not (
                reg.exact is not None and reg.exact.kind == "disk" and reg.exact.a == reg.exact.b):
            raise RegionError("product requires operands away from 0")
    for x, y in ((a, b), (b, a)):
        if x.exact is not None and x.exact.a == x.exact.b:
            return region_affine(y, x.exact.a, 0.0)
    ca = _polar_cells(a, cover, 2 * cover)
    cb = _polar_cells(b, cover, 2 * cover)
    parts = []
    for (r1, r2, t1, t2) in ca:
        for (s1, s2, u1, u2) in cb:
            parts.append(_sector_polygon(r1 * s1, r2 * s2, t1 + u1, t2 + u2, tol))
    geom = _clean(unary_union(parts))
    return Region(geom, False, tol, _window_for(_max_modulus(geom)))


# --------------------------------------------------------- property checks

def _arc_coords(z, side, n=48):
    """Origin-centred arc from z to conj(z) through +|z| (side="right") or -|z|."""
    r, th = abs(z), abs(np.angle(z))
    if side == "right":
        t = np.linspace(-th, th, n)
    else:
        t = np.linspace(th, 2 * math.pi - th, n)
    w = r * np.exp(1j * t)
    return np.column_stack((w.real, w.imag))


def _sample_members(a: Region, n, rng):
    """Boundary vertices and random interior points of the stored set."""
    geom = a.geom
    bxy = shapely.get_coordinates(a.boundary) if not a.boundary.is_empty else np.zeros((0, 2))
    if len(bxy) > n:
        bxy = bxy[rng.choice(len(bxy), n, replace=False)]
    minx, miny, maxx, maxy = geom.bounds
    pts = []
    tries = 0
    while sum(len(p) for p in pts) < n and tries < 50:
        cand = np.column_stack((rng.uniform(minx, maxx, 4 * n), rng.uniform(miny, maxy, 4 * n)))
        keep = shapely.covers(a._prepared, shapely.points(cand))
        pts.append(cand[keep])
        tries += 1
    inner = np.concatenate(pts)[:n] if pts else np.zeros((0, 2))
    xy = np.concatenate([bxy, inner])
    return xy[:, 0] + 1j * xy[:, 1]


def _covers_lines(a: Region, lines, slack):
    """Whether each line lies in the stored set grown by ``slack`` (window exterior counts)."""
    grown = a.geom.buffer(slack) if slack > 0 else a.geom
    if a.contains_infinity:
        outside = _box(10 * a.window).difference(_box(a.window))
        grown = unary_union([grown, outside])
    shapely.prepare(grown)
    return shapely.covers(grown, lines)


def check_properties(a: Region, n_samples=200, seed=0) -> PropertyReport:
    """Chord and arc properties, analytic for circular shapes and sampled otherwise."""
    if a.exact is not None:
        return a.exact.properties()
    rng = np.random.default_rng(seed)
    zs = _sample_members(a, n_samples, rng)
    zs = zs[np.abs(zs.imag) > 0]
    if len(zs) == 0:
        return PropertyReport(True, True, True, 0, Confidence.SAMPLED)
    slack = a.tol
    chords = shapely.linestrings([[[z.real, z.imag], [z.real, -z.imag]] for z in zs])
    right = shapely.linestrings([_arc_coords(z, "right") for z in zs])
    left = shapely.linestrings([_arc_coords(z, "left") for z in zs])
    return PropertyReport(
        chord=bool(np.all(_covers_lines(a, chords, slack))),
        arc_left=bool(np.all(_covers_lines(a, left, slack))),
        arc_right=bool(np.all(_covers_lines(a, right, slack))),
        samples_used=int(len(zs)),
        confidence=Confidence.SAMPLED,
    )


def star_monotone(a: Region, kappa: float, n_rays=360) -> bool:
    """Whether ``τ1(A - κ) ⊆ τ2(A - κ)`` for all ``0 <= τ1 <= τ2 <= 1``.

    Equivalent to A being star-shaped about κ; checked along ``n_rays`` rays.
    """
    kappa = float(kappa)
    if region_contains(a, kappa) is Membership.OUTSIDE:
        raise RegionError("κ must lie in the region")
    if a.exact is not None and a.exact.kind != "exterior":
        return True
    geom = a.geom.buffer(0.5 * a.tol)
    if a.contains_infinity:
        reach = 2.0 * a.window
    else:
        reach = 2.0 * (_max_modulus(geom) + abs(kappa)) + a.tol
    th = 2 * math.pi * np.arange(n_rays) / n_rays
    ends = kappa + reach * np.exp(1j * th)
    rays = shapely.linestrings([[[kappa, 0.0], [e.real, e.imag]] for e in ends])
    if a.contains_infinity:
        rays = shapely.intersection(rays, a.window_box)
    shapely.prepare(geom)
    hits = shapely.intersection(geom, rays)
    for hit, ray in zip(hits, rays):
        parts = [g for g in getattr(hit, "geoms", [hit]) if isinstance(g, LineString) and not g.is_empty]
        if len(parts) > 1:
            merged = shapely.line_merge(shapely.multilinestrings(parts))
            if isinstance(merged, LineString):
                parts = [merged]
        if len(parts) != 1:
            if not parts and a.contains_infinity:
                return False
            if len(parts) > 1:
                return False
            continue
        seg = parts[0]
        start = np.asarray(seg.coords[0])
        if math.hypot(start[0] - kappa, start[1]) > 2 * a.tol:
            start = np.asarray(seg.coords[-1])
            if math.hypot(start[0] - kappa, start[1]) > 2 * a.tol:
                return False
        if a.contains_infinity and abs(seg.length - ray.length) > 2 * a.tol:
            return False
    return True


# ----------------------------------------------------------- serialization

def region_to_dict(a: Region, digits=12):
    def fmt(x):
        return float(f"{x:.{digits}g}")

    d = {
        "contains_infinity": a.contains_infinity,
        "tol": fmt(a.tol),
        "window": fmt(a.window),
        "loops": [[[fmt(z.real), fmt(z.imag)] for z in loop] for loop in a.loops],
    }
    if a.exact is not None:
        d["exact"] = {k: (fmt(v) if isinstance(v, float) else v) for k, v in a.exact.to_dict().items()}
    return d


def region_from_dict(d):
    tol = float(d.get("tol", DEFAULT_TOL))
    if "exact" in d:
        e = d["exact"]
        return region_from_circular(Circular(e["kind"], float(e["a"]), float(e.get("b", math.nan))), tol)
    window = d.get("window") or None
    loops = [np.asarray(loop, dtype=float) for loop in d.get("loops", [])]
    if d.get("contains_infinity"):
        # stored loops already describe the finite part inside the window
        geom = Polygon()
        for loop in loops:
            geom = geom.symmetric_difference(_clean(Polygon(loop)))
        return Region(_clean(geom), True, tol, float(window), None)
    return polygon_region(loops, False, tol, window)


def region_summary(a: Region, digits=12):
    def fmt(x):
        return x if not np.isfinite(x) else float(f"{x:.{digits}g}")

    loops = a.loops
    d = {
        "contains_infinity": a.contains_infinity,
        "n_loops": len(loops),
        "n_vertices": int(sum(len(l) for l in loops)),
        "radius": None if a.contains_infinity else fmt(region_radius(a)),
        "tol": fmt(a.tol),
    }
    if not a.geom.is_empty:
        d["bounds"] = [fmt(v) for v in a.geom.bounds]
    if a.exact is not None:
        d["exact"] = {k: (fmt(v) if isinstance(v, float) else v) for k, v in a.exact.to_dict().items()}
    return d
