from src.utils.geometry.core_geometry import (
    rot_x,
    rot_y,
    rot_z,
    rotation_matrix,
    Line3,
    closest_points_between_lines,
)
from src.utils.geometry.localization import (
    back_project,
    plane_depth,
    absolute_center,
    locate_endpoints,
    compute_length,
    localize,
)

__all__ = [
    "rot_x",
    "rot_y",
    "rot_z",
    "rotation_matrix",
    "Line3",
    "closest_points_between_lines",
    "back_project",
    "plane_depth",
    "absolute_center",
    "locate_endpoints",
    "compute_length",
    "localize",
]
