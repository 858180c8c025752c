"""Static nonlinearities and the disks that bound their scaled relative graphs."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .region import DEFAULT_TOL, Region, disk_region


class NonlinearityError(ValueError):
    pass


class NlSource(enum.Enum):
    SECTOR = "sector"
    PWL = "pwl-derived"
    USER = "user-region"


class GraphMode(enum.Enum):
    SRG = "SRG"  # all input pairs
    SG0 = "SG0"  # second input fixed at zero


@dataclass(frozen=True)
class PiecewiseLinearNl:
    """Continuous piecewise-linear map through ``points`` with linear tails."""

    points: tuple
    left_slope: float
    right_slope: float

    def __init__(self, points, left_slope, right_slope):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 1:
            raise NonlinearityError("points must be a non-empty list of (x, y) pairs")
        if not np.all(np.isfinite(pts)) or not (np.isfinite(left_slope) and np.isfinite(right_slope)):
            raise NonlinearityError("points and slopes must be finite")
        if np.any(np.diff(pts[:, 0]) <= 0):
            raise NonlinearityError("breakpoint x values must be strictly increasing")
        object.__setattr__(self, "points", tuple(map(tuple, pts.tolist())))
        object.__setattr__(self, "left_slope", float(left_slope))
        object.__setattr__(self, "right_slope", float(right_slope))

    @classmethod
    def linear(cls, k):
        return cls([(0.0, 0.0)], k, k)

    @property
    def xs(self):
        return np.array([p[0] for p in self.points])

    @property
    def ys(self):
        return np.array([p[1] for p in self.points])

    def slopes(self):
        """All slopes from left tail to right tail."""
        xs, ys = self.xs, self.ys
        inner = np.diff(ys) / np.diff(xs) if len(xs) > 1 else np.zeros(0)
        return np.concatenate([[self.left_slope], inner, [self.right_slope]])

    def __call__(self, x):
        return nl_eval(self, x)


def nl_eval(nl: PiecewiseLinearNl, x):
    """Evaluate with interpolation between breakpoints and linear tails outside."""
    xs, ys = nl.xs, nl.ys
    x = np.asarray(x, dtype=float)
    y = np.interp(x, xs, ys)
    y = np.where(x < xs[0], ys[0] + nl.left_slope * (x - xs[0]), y)
    y = np.where(x > xs[-1], ys[-1] + nl.right_slope * (x - xs[-1]), y)
    return float(y) if y.ndim == 0 else y


def saturation(level=1.0, slope=1.0):
    return PiecewiseLinearNl([(-level, -slope * level), (level, slope * level)], 0.0, 0.0)


@dataclass(frozen=True)
class SectorSpec:
    k1: float
    k2: float
    incremental: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.k1) and np.isfinite(self.k2)):
            raise NonlinearityError("sector bounds must be finite")
        if self.k1 > self.k2:
            raise NonlinearityError("sector requires k1 <= k2")


def pwl_incremental_sector(nl: PiecewiseLinearNl) -> SectorSpec:
    """Range of difference quotients, which for a PWL map is its slope range."""
    s = nl.slopes()
    return SectorSpec(float(s.min()), float(s.max()), True)


def pwl_sector_at_zero(nl: PiecewiseLinearNl) -> SectorSpec:
    """Range of ``φ(x)/x`` over x ≠ 0; needs φ(0) = 0."""
    if abs(nl_eval(nl, 0.0)) > 1e-12 * max(1.0, float(np.max(np.abs(nl.ys)))):
        raise NonlinearityError("sector at zero requires φ(0)=0")
    xs, ys = nl.xs, nl.ys
    # on each linear piece φ(x)/x is monotone, so extremes sit at breakpoints,
    # at the limits x -> ±∞ (tail slopes) and as x -> 0 (slope of the piece through 0)
    cand = [nl.left_slope, nl.right_slope]
    nz = xs != 0
    cand.extend((ys[nz] / xs[nz]).tolist())
    eps = 1e-9 * max(1.0, float(np.max(np.abs(xs))))
    for side in (-eps, eps):
        cand.append(nl_eval(nl, side) / side)
    return SectorSpec(float(min(cand)), float(max(cand)), False)


SHARPNESS_NOTE = ("disk is attained when the slope switches discontinuously between k1 and k2; "
                  "otherwise it is an outer bound")


@dataclass(frozen=True)
class NlRegionSpec:
    source: NlSource
    region: Region
    mode: GraphMode
    sector: SectorSpec | None = None
    simulation_nl: PiecewiseLinearNl | None = None
    notes: tuple = field(default=())

    @property
    def real_interval(self):
        """[lo, hi] of the region on the real axis (sector regions only are exact)."""
        if self.sector is not None:
            return self.sector.k1, self.sector.k2
        ex = self.region.exact
        if ex is not None and ex.kind == "disk":
            return ex.a, ex.b
        return None


def nl_region(spec: SectorSpec, tol=DEFAULT_TOL, simulation_nl=None) -> NlRegionSpec:
    """The disk ``D[k1, k2]`` as SRG (incremental) or SG at zero (non-incremental)."""
    mode = GraphMode.SRG if spec.incremental else GraphMode.SG0
    return NlRegionSpec(NlSource.SECTOR, disk_region(spec.k1, spec.k2, tol), mode, spec,
                        simulation_nl, (SHARPNESS_NOTE,))


def pwl_region(nl: PiecewiseLinearNl, incremental=True, tol=DEFAULT_TOL) -> NlRegionSpec:
    spec = pwl_incremental_sector(nl) if incremental else pwl_sector_at_zero(nl)
    out = nl_region(spec, tol, nl)
    return NlRegionSpec(NlSource.PWL, out.region, out.mode, spec, nl, out.notes)


def user_region(region: Region, incremental=True, simulation_nl=None) -> NlRegionSpec:
    mode = GraphMode.SRG if incremental else GraphMode.SG0
    return NlRegionSpec(NlSource.USER, region, mode, None, simulation_nl)


def sector_representative(spec: SectorSpec) -> PiecewiseLinearNl:
    """A PWL member of the sector for simulation: slope k1 near 0, k2 for |x| > 1."""
    k1, k2 = spec.k1, spec.k2
    return PiecewiseLinearNl([(-1.0, -k1), (1.0, k1)], k2, k2)


def slope_switch_is_sharp(nl: PiecewiseLinearNl, spec: SectorSpec | None = None):
    """True when the map has adjacent pieces with slopes k1 and k2 (disk attained)."""
    spec = spec or pwl_incremental_sector(nl)
    s = nl.slopes()
    return bool(any({a, b} == {spec.k1, spec.k2} for a, b in zip(s[:-1], s[1:])))

