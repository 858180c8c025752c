"""Certification of Lur'e loops from SRG separation, with a classical cross-check.

The loop is a plant G in negative feedback with a static nonlinearity φ.
Stability and an (incremental) L2-gain bound follow when the inverse of the
plant's extended SRG keeps a positive distance r from the negated
nonlinearity region; the bound is then 1/r.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import LineString

from .lti import (
    ExtendedSrg,
    NyquistError,
    TransferFunction,
    extended_srg,
    imag_axis_poles,
    loop_transform_tf,
    n_unstable,
    nyquist_curve,
    winding_number,
)
from .nonlinearity import GraphMode, NlRegionSpec
from .region import (
    DEFAULT_TOL,
    Membership,
    Region,
    RegionError,
    check_properties,
    region_affine,
    region_contains,
    region_distance,
    region_invert,
    star_monotone,
)

CAUSALITY_NOTE = "causality of the closed loop is assumed"


class Mode(enum.Enum):
    INCREMENTAL = "incremental"
    NON_INCREMENTAL = "non-incremental"


class StabilityError(ValueError):
    pass


def loop_transform(G: TransferFunction, kappa: float) -> TransferFunction:
    """``G / (1 + κG)``; raises if ``1 + κG`` vanishes identically."""
    den = np.zeros(max(len(G.den), len(G.num)))
    den[: len(G.den)] += G.den
    den[: len(G.num)] += kappa * np.asarray(G.num)
    if not np.any(np.abs(den) > 0):
        raise StabilityError("degenerate denominator: 1 + κG is identically zero")
    return loop_transform_tf(G, kappa)


def check_homotopy(nl_region: Region, kappa: float, n_rays=360) -> bool:
    """Whether the scaled sets ``τ(S - κ)`` grow monotonically in τ ∈ [0, 1]."""
    if region_contains(nl_region, kappa) is Membership.OUTSIDE:
        raise StabilityError("κ must lie in the region")
    return star_monotone(nl_region, kappa, n_rays)


def separation(ext: ExtendedSrg, nl_region: Region, inverse: Region | None = None) -> float:
    """Lower bound on the distance between the inverted extended SRG and ``-S``."""
    inverse = inverse if inverse is not None else region_invert(ext.combined)
    return region_distance(inverse, region_affine(nl_region, -1.0, 0.0))


def tau_sweep(inverse: Region, nl_region: Region, kappa: float, tau_grid=33) -> float:
    """Smallest distance from the inverse to ``-(κ + τ(S - κ))`` over sampled τ."""
    best = math.inf
    for tau in np.linspace(0.0, 1.0, tau_grid):
        shrunk = region_affine(nl_region, -tau, -(1.0 - tau) * kappa)
        best = min(best, region_distance(inverse, shrunk))
    return best


@dataclass(frozen=True)
class LureProblem:
    plant: TransferFunction
    nl: NlRegionSpec
    mode: Mode = Mode.INCREMENTAL

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        want = GraphMode.SRG if mode is Mode.INCREMENTAL else GraphMode.SG0
        if self.nl.mode is not want:
            raise StabilityError(
                f"{mode.value} analysis needs a nonlinearity region of type {want.value}")


@dataclass
class KappaTrial:
    kappa: float
    separation: float
    star: bool
    used_tau_sweep: bool
    margin_at_kappa: float
    transformed_unstable_poles: int

    def to_dict(self):
        return {
            "kappa": self.kappa,
            "separation": self.separation,
            "star_shaped": self.star,
            "tau_sweep": self.used_tau_sweep,
            "margin_at_kappa": self.margin_at_kappa,
            "transformed_unstable_poles": self.transformed_unstable_poles,
        }


@dataclass
class LureVerdict:
    certified: bool
    gain_bound: float | None
    separation: float
    kappa: float | None
    well_posed: bool
    mode: Mode
    diagnostics: list = field(default_factory=list)
    reasons: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    regions: dict = field(default_factory=dict, repr=False)

    def to_dict(self):
        return {
            "certified": self.certified,
            "gain_bound": self.gain_bound,
            "separation": self.separation,
            "kappa": self.kappa,
            "well_posed": self.well_posed,
            "mode": self.mode.value,
            "diagnostics": list(self.diagnostics),
            "reasons": list(self.reasons),
            "kappa_trace": [t.to_dict() for t in self.trace],
        }


def _real_interval(nl: NlRegionSpec):
    iv = nl.real_interval
    if iv is not None:
        return iv
    reg = nl.region
    if reg.contains_infinity:
        line = LineString([(-reg.window, 0.0), (reg.window, 0.0)])
    else:
        minx, _, maxx, _ = reg.geom.bounds
        line = LineString([(minx - 1.0, 0.0), (maxx + 1.0, 0.0)])
    hit = reg.geom.intersection(line)
    if hit.is_empty:
        return None
    minx, _, maxx, _ = hit.bounds
    return minx, maxx


def _kappa_grid(nl: NlRegionSpec, kappa, n_kappa):
    if kappa != "auto":
        return [float(kappa)]
    iv = _real_interval(nl)
    if iv is None:
        return []
    lo, hi = iv
    grid = np.linspace(lo, hi, n_kappa) if hi > lo else np.array([lo])
    return [float(k) for k in grid if region_contains(nl.region, k) is not Membership.OUTSIDE]


def _threads():
    try:
        return max(1, int(os.environ.get("SRG_THREADS", "1")))
    except ValueError:
        return 1


def analyze_lure(problem: LureProblem, kappa="auto", tau_grid=33, n_kappa=101,
                 tol=DEFAULT_TOL, real_only=False, ext: ExtendedSrg | None = None) -> LureVerdict:
    """Separation-based certificate for the Lur'e loop.

    A failed certificate only lists reasons; it never claims instability.
    """
    mode = problem.mode
    incremental = mode is Mode.INCREMENTAL
    diagnostics = [CAUSALITY_NOTE]
    reasons = []

    def fail(sep=0.0, trace=(), k=None, regions=None):
        return LureVerdict(False, None, sep, k, False, mode, diagnostics, reasons, list(trace),
                           regions or {})

    G = problem.plant
    try:
        ext = ext or extended_srg(G, tol, real_only)
    except (NyquistError, RegionError) as exc:
        reasons.append(f"extended SRG unavailable: {exc}")
        return fail()
    diagnostics.extend(ext.warnings)
    diagnostics.extend(G.notes)
    regions = {"extended_srg": ext.combined, "hull": ext.hull, "nonlinearity": problem.nl.region}
    try:
        inverse = region_invert(ext.combined)
    except RegionError as exc:
        reasons.append(f"inconclusive: {exc}")
        return fail(regions=regions)
    regions["inverse"] = inverse
    neg_nl = region_affine(problem.nl.region, -1.0, 0.0)
    regions["negated_nonlinearity"] = neg_nl

    # one of the two sets must have the chord property
    nl_props = check_properties(problem.nl.region)
    if nl_props.chord:
        chord_ok = True
        diagnostics.append(f"chord property: nonlinearity region ({nl_props.confidence.value})")
    else:
        inv_props = check_properties(inverse)
        chord_ok = inv_props.chord
        diagnostics.append(
            f"chord property: inverse extended SRG {'holds' if chord_ok else 'fails'} "
            f"({inv_props.confidence.value}, {inv_props.samples_used} samples)")
    if not chord_ok:
        reasons.append("hypothesis failed: neither set has the chord property")

    grid = _kappa_grid(problem.nl, kappa, n_kappa)
    if not grid:
        reasons.append("hypothesis failed: no real κ in the nonlinearity region")
        return fail(regions=regions)
    if kappa != "auto" and region_contains(problem.nl.region, grid[0]) is Membership.OUTSIDE:
        reasons.append("hypothesis failed: κ must lie in the nonlinearity region")
        return fail(k=grid[0], regions=regions)

    r_full = region_distance(inverse, neg_nl)

    def trial(k):
        star = star_monotone(problem.nl.region, k)
        r = r_full if star else min(r_full, tau_sweep(inverse, problem.nl.region, k, tau_grid))
        margin = region_distance(inverse, region_affine(problem.nl.region, 0.0, -k))
        try:
            n_tr = n_unstable(loop_transform(G, k)) if not G.is_static else 0
        except (StabilityError, ValueError):
            n_tr = -1
        return KappaTrial(k, float(r), star, not star, float(margin), n_tr)

    workers = _threads()
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trace = list(pool.map(trial, grid))
    else:
        trace = [trial(k) for k in grid]

    lo, hi = grid[0], grid[-1]
    mid = 0.5 * (lo + hi)
    best_r = max(t.separation for t in trace)
    ties = [t for t in trace if t.separation >= best_r - 1e-12 * max(1.0, best_r)]
    best = min(ties, key=lambda t: (abs(t.kappa - mid), t.kappa))
    if any(t.used_tau_sweep for t in trace):
        diagnostics.append(f"homotopy: τ-sweep fallback used ({tau_grid} samples, sampled soundness)")
    r = best.separation
    if r <= 0.0:
        reasons.append("zero separation: the inverted extended SRG meets the negated nonlinearity region")
    elif r <= tol:
        reasons.append("inconclusive: separation below tolerance")
    if r > tol and best.transformed_unstable_poles != 0:
        reasons.append("inconclusive: loop-transformed plant is not stable at the chosen κ")
    if reasons:
        return LureVerdict(False, None, r, best.kappa, False, mode, diagnostics, reasons, trace, regions)
    if not incremental:
        diagnostics.append("non-incremental bound from the graph at zero; well-posedness not implied")
    return LureVerdict(True, 1.0 / r, r, best.kappa, incremental, mode, diagnostics, reasons,
                       trace, regions)


# --------------------------------------------------------- circle criterion

class CircleCase(enum.Enum):
    POS_POS = "pos-pos"
    ZERO_LOWER = "zero-lower"
    MIXED = "mixed"


@dataclass(frozen=True)
class CircleVerdict:
    case: CircleCase
    stable: bool
    details: dict

    def to_dict(self):
        return {"case": self.case.value, "stable": self.stable, "details": dict(self.details)}


def classical_circle(G: TransferFunction, k1: float, k2: float, tol=DEFAULT_TOL,
                     curve=None) -> CircleVerdict:
    """Classical circle criterion for a strictly proper G and sector [k1, k2].

    Sectors with k2 <= 0 are handled by flipping the signs of both G and φ.
    """
    if not k1 < k2:
        raise StabilityError("circle criterion needs k1 < k2")
    if not G.strictly_proper:
        raise StabilityError("circle criterion needs a strictly proper plant")
    flipped = False
    if k2 <= 0:
        G = TransferFunction([-c for c in G.num], G.den)
        k1, k2 = -k2, -k1
        flipped = True
        curve = None
    curve = curve or nyquist_curve(G, tol)
    n_p = n_unstable(G)
    g = curve.closed
    details = {"n_p": n_p, "flipped": flipped, "k1": k1, "k2": k2}
    if len(imag_axis_poles(G)) > 0:
        details["reason"] = "imaginary-axis poles"
    if k1 > 0:
        case = CircleCase.POS_POS
        c, R = -0.5 * (1 / k1 + 1 / k2), 0.5 * (1 / k1 - 1 / k2)
        margin = float(np.min(np.abs(g - c)) - R)
        details["margin"] = margin
        if margin <= 0:
            return CircleVerdict(case, False, details)
        n = winding_number(curve, c, tol=min(tol, 0.5 * margin + R))
        details["clockwise_encirclements"] = n
        stable = n == -n_p and "reason" not in details
    elif k1 == 0:
        case = CircleCase.ZERO_LOWER
        margin = float(np.min(g.real) + 1 / k2)
        details["margin"] = margin
        stable = n_p == 0 and margin > 0 and "reason" not in details
    else:
        case = CircleCase.MIXED
        c, R = -0.5 * (1 / k1 + 1 / k2), 0.5 * (1 / k2 - 1 / k1)
        margin = float(R - np.max(np.abs(g - c)))
        details["margin"] = margin
        stable = n_p == 0 and margin > 0 and "reason" not in details
    return CircleVerdict(case, bool(stable), details)


def inverse_plane_margin(G: TransferFunction, k1: float, k2: float, tol=DEFAULT_TOL, curve=None):
    """Distance from the reciprocal Nyquist samples to ``-D[k1, k2]``.

    An independent boundary measure used to skip borderline instances.
    """
    curve = curve or nyquist_curve(G, tol)
    g = curve.closed
    g = g[np.abs(g) > 1e-300]
    w = 1.0 / g
    c, R = -0.5 * (k1 + k2), 0.5 * (k2 - k1)
    return float(np.min(np.abs(w - c)) - R)
