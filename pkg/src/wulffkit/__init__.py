"""Numerical toolkit for anisotropic isoperimetry: support calculus on
convex bodies, curvature frames on parametric hypersurfaces, first and
second variations of anisotropic area, and isoperimetric profiles in cones
and planar convex domains."""

from .bodies import (Ball, ConvexBody, Ellipsoid, Fourier2D, body_from_dict,
                     body_from_json, ellipticity_bounds)
from .domains import (Disk2D, Domain, FullSpace, HalfSpace, Polygon2D,
                      PolyhedralCone, Slab, domain_from_dict, half_plane_cone,
                      octant, quarter_plane, unit_square)
from .errors import (CheckFailure, ImmersionLost, InvalidBody, ModeUnsupported,
                     NoFeasibleCandidate, NotClosed, NotStationary,
                     OptimizerDiverged, SchemaError, WulffkitError,
                     ZeroVolumeVelocity)
from .profiles import (candidate_oracle, comparison_report, concavity_report,
                       cone_body_volume, cone_profile, polygon_profile,
                       structure_checks, wulff_cone_perimeter)
from .surfaces import (Curve2D, ParamField, Surface3D, anisotropic_area,
                       boundary_frame, bump_field, circle, constant_field,
                       enclosed_volume, flat_disk, fourier_mode_field,
                       frame_at, frames, from_control_points, perturbed,
                       segment, sphere, trace_gap, wulff_arc, wulff_sample)
from .variation import (Flow, area_plus_volume_second, first_variation,
                        index_form, profile_slope_curvature,
                        second_variation, stationarity_residual,
                        volume_preserving_field)

__version__ = "0.1.0"

__all__ = [
    "Ball", "ConvexBody", "Ellipsoid", "Fourier2D", "body_from_dict",
    "body_from_json", "ellipticity_bounds",
    "Disk2D", "Domain", "FullSpace", "HalfSpace", "Polygon2D",
    "PolyhedralCone", "Slab", "domain_from_dict", "half_plane_cone", "octant",
    "quarter_plane", "unit_square",
    "CheckFailure", "ImmersionLost", "InvalidBody", "ModeUnsupported",
    "NoFeasibleCandidate", "NotClosed", "NotStationary", "OptimizerDiverged",
    "SchemaError", "WulffkitError", "ZeroVolumeVelocity",
    "candidate_oracle", "comparison_report", "concavity_report",
    "cone_body_volume", "cone_profile", "polygon_profile", "structure_checks",
    "wulff_cone_perimeter",
    "Curve2D", "ParamField", "Surface3D", "anisotropic_area",
    "boundary_frame", "bump_field", "circle", "constant_field",
    "enclosed_volume", "flat_disk", "fourier_mode_field", "frame_at",
    "frames", "from_control_points", "perturbed", "segment", "sphere",
    "trace_gap", "wulff_arc", "wulff_sample",
    "Flow", "area_plus_volume_second", "first_variation", "index_form",
    "profile_slope_curvature", "second_variation", "stationarity_residual",
    "volume_preserving_field",
]
