"""Geometry of cones over strictly convex sections and of oriented lines."""
from .intersect import Intersection, SurfaceHit, inside_indicator, intersect, surface_point
from .lines import OrientedLine, line_distance, line_from_point_direction
from .phase import (PhaseClass, PhaseTag, classify, direction_escapes, gamma_normal,
                    on_gamma, phase_of)
from .shapes import (ConeShape, EllipsoidSection, RadialFourierSection, ValidationReport,
                     builtin_shapes, circular_cone, elliptic_cone, fourier_cone, load_shape,
                     planar_angle, shape_from_dict, validate_shape)

__all__ = [
    "ConeShape", "EllipsoidSection", "Intersection", "OrientedLine", "PhaseClass", "PhaseTag",
    "RadialFourierSection", "SurfaceHit", "ValidationReport", "builtin_shapes", "circular_cone",
    "classify", "direction_escapes", "elliptic_cone", "fourier_cone", "gamma_normal",
    "inside_indicator", "intersect", "line_distance", "line_from_point_direction", "load_shape",
    "on_gamma", "phase_of", "planar_angle", "shape_from_dict", "surface_point", "validate_shape",
]
