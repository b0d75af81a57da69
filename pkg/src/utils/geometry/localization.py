"""
3D локализация: relative pose (pixels) -> absolute keypoints (mm, camera frame).

The fish center is assumed to lie on the calibrated reference plane Z_world = 0,
which fixes its depth. Head and tail are then found where the camera rays
through their 2D keypoints meet the lines through C' along the relative-pose
offsets h - c and t - c. Only the directions of those offsets are used, so the
pixel-unit relative pose mixes safely with mm-unit rays.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from src.config import settings
from src.models.camera import CameraModel
from src.models.pose import AbsolutePose, RelativePose
from src.models.template import Template
from src.utils.errors import (
    BehindCameraError,
    DegenerateGeometryError,
    DegenerateViewError,
    InvalidInputError,
)
from src.utils.geometry.core_geometry import MIN_DIRECTION_NORM, Line3, closest_points_between_lines

logger = logging.getLogger(__name__)

UV = Tuple[float, float]


def _homogeneous(uv: UV) -> np.ndarray:
    u, v = float(uv[0]), float(uv[1])
    if not (math.isfinite(u) and math.isfinite(v)):
        raise InvalidInputError(f"pixel coordinates must be finite, got ({u}, {v})")
    return np.array([u, v, 1.0])


def back_project(cam: CameraModel, uv: UV) -> np.ndarray:
    """Depth-1 ray point K^-1 (U, V, 1)."""
    ray = cam.K_inv @ _homogeneous(uv)
    return ray / ray[2]


def plane_depth(cam: CameraModel, uv_center: UV) -> Tuple[float, float, float]:
    """
    Depth of the reference-plane point seen at uv_center.

    H^-1 (U, V, 1) = (X_w / Z_c, Y_w / Z_c, 1 / Z_c).

    Returns:
        (Z_c, X_w, Y_w): camera depth (mm) and world-plane coordinates (mm)
    """
    q = np.linalg.solve(cam.H, _homogeneous(uv_center))
    if not np.all(np.isfinite(q)) or q[2] <= 0:
        raise BehindCameraError(
            f"reference plane is not in front of the camera at pixel ({uv_center[0]:.2f}, {uv_center[1]:.2f})"
        )
    depth = 1.0 / q[2]
    return float(depth), float(q[0] * depth), float(q[1] * depth)


def absolute_center(cam: CameraModel, uv_center: UV, ray_point: np.ndarray) -> np.ndarray:
    """C' = Z_c * (X_c, Y_c, 1)."""
    depth, _, _ = plane_depth(cam, uv_center)
    return depth * np.asarray(ray_point, dtype=float).reshape(3)


def _endpoint(
    cam: CameraModel, uv: UV, C_abs: np.ndarray, offset: np.ndarray, name: str
) -> Tuple[np.ndarray, float]:
    ray = Line3(np.zeros(3), back_project(cam, uv))
    norm = np.linalg.norm(offset)
    if norm <= MIN_DIRECTION_NORM:
        raise InvalidInputError(f"{name} coincides with the center keypoint")
    body = Line3(C_abs, offset / norm)
    try:
        _, _, midpoint, gap = closest_points_between_lines(ray, body)
    except DegenerateGeometryError as e:
        raise DegenerateViewError(f"{name} direction is aligned with its viewing ray") from e
    return midpoint, gap


def compute_length(
    rel: RelativePose,
    abs_h: np.ndarray,
    abs_t: np.ndarray,
    template: Template,
    use_bend_ratio: bool = True,
) -> Tuple[float, float]:
    """
    Length = |H'T'| * (arc ht / |ht|).

    Bending is an isometry and the rest of the chain is rigid or uniform scale,
    so the head-tail arc is s times the flat template arc. With use_bend_ratio
    off the ratio is taken as 1 and the length is the bare chord |H'T'|.

    Returns:
        (length_mm, bend_ratio)
    """
    chord = rel.chord
    if not chord > 0:
        raise InvalidInputError("head and tail coincide in the relative pose")
    arc = rel.params.s * template.flat_arc
    # a flat fish has arc == chord up to rounding
    bend_ratio = 1.0 if not use_bend_ratio or rel.params.kappa == 0.0 else max(arc / chord, 1.0)
    distance = float(np.linalg.norm(np.asarray(abs_h) - np.asarray(abs_t)))
    return distance * bend_ratio, bend_ratio


def locate_endpoints(
    rel: RelativePose,
    cam: CameraModel,
    C_abs: np.ndarray,
    template: Template,
    gap_tol: Optional[float] = None,
    use_bend_ratio: bool = True,
) -> AbsolutePose:
    """
    Absolute head and tail as midpoints of the closest points between each
    viewing ray and the matching body line through C'.

    A gap above gap_tol (default GAP_TOL_FRACTION * |C'|) marks the result
    low-confidence.
    """
    C_abs = np.asarray(C_abs, dtype=float).reshape(3)
    if not (np.all(np.isfinite(C_abs)) and C_abs[2] > 0):
        raise BehindCameraError("absolute center must lie in front of the camera")
    if gap_tol is None:
        gap_tol = settings.GAP_TOL_FRACTION * float(np.linalg.norm(C_abs))

    H_abs, gap_h = _endpoint(cam, rel.h2d, C_abs, rel.h - rel.c, "head")
    T_abs, gap_t = _endpoint(cam, rel.t2d, C_abs, rel.t - rel.c, "tail")
    length_mm, bend_ratio = compute_length(rel, H_abs, T_abs, template, use_bend_ratio)

    low_confidence = max(gap_h, gap_t) > gap_tol
    if low_confidence:
        logger.warning(
            "Line gaps %.1f / %.1f mm exceed tolerance %.1f mm; length is low-confidence",
            gap_h, gap_t, gap_tol,
        )
    return AbsolutePose(
        H_abs=H_abs,
        C_abs=C_abs,
        T_abs=T_abs,
        gaps=(gap_h, gap_t),
        length_mm=length_mm,
        bend_ratio=bend_ratio,
        low_confidence=low_confidence,
    )


def localize(
    rel: RelativePose,
    cam: CameraModel,
    template: Template,
    gap_tol_fraction: Optional[float] = None,
    use_bend_ratio: bool = True,
) -> AbsolutePose:
    """back_project -> plane_depth -> absolute_center -> locate_endpoints -> compute_length."""
    ray_c = back_project(cam, rel.c2d)
    C_abs = absolute_center(cam, rel.c2d, ray_c)
    fraction = settings.GAP_TOL_FRACTION if gap_tol_fraction is None else gap_tol_fraction
    pose = locate_endpoints(rel, cam, C_abs, template, fraction * float(np.linalg.norm(C_abs)), use_bend_ratio)
    logger.debug(
        "Localized: C'=(%.1f, %.1f, %.1f) mm, length %.1f mm, bend ratio %.4f",
        *C_abs, pose.length_mm, pose.bend_ratio,
    )
    return pose
