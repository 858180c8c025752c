"""Stability certificates and gain bounds for Lur'e loops from scaled relative graphs."""

__version__ = "0.1.0"

from .lti import (
    ExtendedSrg,
    NyquistCurve,
    NyquistVerdict,
    TransferFunction,
    extended_srg,
    h_convex_hull,
    nyquist_criterion,
    nyquist_curve,
    srg_lti_stable,
    tf_eval,
    tf_poles,
    winding_number,
)
from .nonlinearity import (
    NlRegionSpec,
    PiecewiseLinearNl,
    SectorSpec,
    nl_eval,
    nl_region,
    pwl_incremental_sector,
    pwl_region,
    pwl_sector_at_zero,
)
from .region import (
    Membership,
    PropertyReport,
    Region,
    check_properties,
    disk_region,
    point_region,
    polygon_region,
    region_affine,
    region_contains,
    region_distance,
    region_invert,
    region_product,
    region_radius,
    region_sum,
    star_monotone,
)
from .stability import (
    CircleVerdict,
    LureProblem,
    LureVerdict,
    analyze_lure,
    check_homotopy,
    classical_circle,
    loop_transform,
    separation,
)
