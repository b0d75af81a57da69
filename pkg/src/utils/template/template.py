"""
Относительный 3D шаблон рыбы.

Builds the flat template S0 from a silhouette mask and applies the four
sequential deformations: scale -> bend -> translate -> rotate.
Keypoint indices are tracked through every transform since no transform
reorders points.
"""
import logging
import math
from typing import Optional, Tuple

import cv2
import numpy as np

from src.config import settings
from src.models.mask import BinaryMask
from src.models.pointset import PointSet3
from src.models.template import Template
from src.schemas.params import DeformParams
from src.utils.errors import InvalidArgumentError, InvalidInputError, OverBendError
from src.utils.geometry.core_geometry import rotation_matrix

logger = logging.getLogger(__name__)

MIN_TEMPLATE_PIXELS = 100
MIDLINE_HALF_WIDTH = 1.0
TAYLOR_THETA = 1e-4
# masks already aligned within this angle are left unrotated
AXIS_SNAP = 1e-9


def procedural_fish_mask() -> BinaryMask:
    """Flat fish silhouette: elliptic body with the head toward +y and a triangular tail fin."""
    canvas = np.zeros((240, 120), dtype=np.uint8)
    cv2.ellipse(canvas, (60, 130), (32, 85), 0, 0, 360, 255, thickness=-1)
    tail = np.array([[60, 60], [24, 12], [96, 12]], dtype=np.int32)
    cv2.fillPoly(canvas, [tail], 255)
    # mirror-symmetric about the body axis
    canvas = np.maximum(canvas, canvas[:, ::-1])
    return BinaryMask(canvas > 127)


def build_template(mask: BinaryMask, stride: int = 2) -> Template:
    """
    Build S0 from the foreground pixels of a flat fish mask.

    Every stride-th foreground pixel (row-major) is kept, together with the
    pixel nearest the centroid of that subsample, so the center keypoint sits
    within a pixel of the origin. The set is centered on its centroid and
    rotated so the body major axis lies along +y.
    """
    if stride < 1:
        raise InvalidArgumentError(f"stride must be >= 1, got {stride}")
    area = mask.area
    if area < MIN_TEMPLATE_PIXELS:
        raise InvalidInputError(
            f"template mask needs at least {MIN_TEMPLATE_PIXELS} foreground pixels, got {area}"
        )

    rows, cols = np.nonzero(mask.bits)
    every = np.column_stack([cols, rows]).astype(float)
    keep = np.arange(0, len(every), stride)
    nearest = int(np.argmin(np.linalg.norm(every - every[keep].mean(axis=0), axis=1)))
    if nearest % stride:
        keep = np.insert(keep, np.searchsorted(keep, nearest), nearest)
    xy = every[keep]
    xy -= xy.mean(axis=0)

    eigvals, eigvecs = np.linalg.eigh(np.cov(xy.T))
    major = eigvecs[:, int(np.argmax(eigvals))]
    if major[1] < 0:
        major = -major
    phi = math.atan2(major[0], major[1])
    if abs(phi) > AXIS_SNAP:
        c, s = math.cos(phi), math.sin(phi)
        xy = np.column_stack([xy[:, 0] * c - xy[:, 1] * s, xy[:, 0] * s + xy[:, 1] * c])
        xy -= xy.mean(axis=0)

    points = np.column_stack([xy, np.zeros(len(xy))])

    abs_x = np.abs(points[:, 0])
    midline = np.flatnonzero(abs_x < MIDLINE_HALF_WIDTH)
    if midline.size == 0:
        midline = np.flatnonzero(abs_x <= abs_x.min() + MIDLINE_HALF_WIDTH)

    # max/min y on the midline, ties broken by |x| then index
    head_idx = int(midline[np.lexsort((abs_x[midline], -points[midline, 1]))[0]])
    tail_idx = int(midline[np.lexsort((abs_x[midline], points[midline, 1]))[0]])
    center_idx = int(np.argmin(np.linalg.norm(points[:, :2], axis=1)))

    if len({head_idx, center_idx, tail_idx}) < 3:
        raise InvalidInputError("template mask is too small to separate head, center and tail")

    template = Template(
        points0=PointSet3(points, "pixels"),
        head_idx=head_idx,
        center_idx=center_idx,
        tail_idx=tail_idx,
        area=area,
        stride=stride,
    )
    logger.debug(
        "Template built: N=%d, head-tail arc %.1f px, stride %d",
        template.n_points, template.flat_arc, stride,
    )
    return template


def _scale(points: np.ndarray, s: float) -> np.ndarray:
    if not (math.isfinite(s) and s > 0):
        raise InvalidArgumentError(f"scale must be positive and finite, got {s!r}")
    return points * s


def _bend(points: np.ndarray, kappa: float) -> np.ndarray:
    if not math.isfinite(kappa):
        raise InvalidArgumentError(f"curvature must be finite, got {kappa!r}")
    if kappa == 0.0:
        return points.copy()

    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    theta = y * kappa
    worst = float(np.max(np.abs(theta))) if theta.size else 0.0
    if worst >= math.pi:
        raise OverBendError(
            f"bend angle {worst:.3f} rad reaches a half cylinder (kappa={kappa:.3e})"
        )

    sin_t, cos_t = np.sin(theta), np.cos(theta)
    small = np.abs(theta) < TAYLOR_THETA
    t2 = theta * theta
    # sin(t)/k and (1 - cos t)/k, with a Taylor branch near t = 0
    arc_y = np.where(small, y * (1.0 - t2 / 6.0 + t2 * t2 / 120.0), sin_t / kappa)
    arc_z = np.where(
        small, y * theta * (0.5 - t2 / 24.0 + t2 * t2 / 720.0), (1.0 - cos_t) / kappa
    )

    # points off the sheet travel along the bent surface normal
    return np.column_stack([x, arc_y - z * sin_t, arc_z + z * cos_t])


def _translate(points: np.ndarray, tx: float, ty: float) -> np.ndarray:
    if not (math.isfinite(tx) and math.isfinite(ty)):
        raise InvalidArgumentError("translation must be finite")
    return points + np.array([tx, ty, 0.0])


def _rotate(points: np.ndarray, alpha: float, beta: float, gamma: float) -> np.ndarray:
    return points @ rotation_matrix(alpha, beta, gamma)


def scale_points(ps: PointSet3, s: float) -> PointSet3:
    """S1 = s * S0."""
    return ps.with_points(_scale(ps.points, s))


def bend_points(ps: PointSet3, kappa: float) -> PointSet3:
    """
    Wrap the y axis onto a cylinder of radius 1/|kappa| tangent to the sheet.

    With theta = y * kappa: y2 = sin(theta)/kappa, z2 = (1 - cos(theta))/kappa,
    x unchanged. Arc length along every x = const line is preserved.
    """
    return ps.with_points(_bend(ps.points, kappa))


def translate_points(ps: PointSet3, tx: float, ty: float) -> PointSet3:
    """S3 = S2 + (tx, ty, 0)."""
    return ps.with_points(_translate(ps.points, tx, ty))


def rotate_points(ps: PointSet3, alpha: float, beta: float, gamma: float) -> PointSet3:
    """S4 = S3 @ R(gamma) @ R(beta) @ R(alpha)."""
    return ps.with_points(_rotate(ps.points, alpha, beta, gamma))


def deform_points(points: np.ndarray, params: DeformParams) -> np.ndarray:
    """Apply scale, bend, translate and rotate to an arbitrary subset of template points."""
    out = _scale(points, params.s)
    out = _bend(out, params.kappa)
    out = _translate(out, params.tx, params.ty)
    return _rotate(out, params.alpha, params.beta, params.gamma)


def check_bend(template: Template, params: DeformParams) -> None:
    """Raise OverBendError if params would over-bend any template point."""
    worst = template.max_abs_y * params.s * abs(params.kappa)
    if worst >= math.pi:
        raise OverBendError(
            f"bend angle {worst:.3f} rad reaches a half cylinder (kappa={params.kappa:.3e})"
        )


def apply_deformation(
    template: Template, params: DeformParams
) -> Tuple[PointSet3, np.ndarray, np.ndarray, np.ndarray]:
    """
    S0 -> S1 -> S2 -> S3 -> S4.

    Returns:
        (S4, head, center, tail) with the keypoints read from the tracked indices.
    """
    s4 = deform_points(template.points0.points, params)
    return (
        PointSet3(s4, "pixels"),
        s4[template.head_idx].copy(),
        s4[template.center_idx].copy(),
        s4[template.tail_idx].copy(),
    )


# Шаблон по умолчанию (ленивая инициализация)
_default_template: Optional[Template] = None


def init_template(path: Optional[str] = None, stride: Optional[int] = None) -> Template:
    """Load the default template from a mask file, or the procedural fish if no path is set."""
    global _default_template
    from src.utils.io.mask_io import read_mask

    path = path if path is not None else settings.TEMPLATE_PATH
    stride = stride if stride is not None else settings.TEMPLATE_STRIDE
    mask = read_mask(path) if path else procedural_fish_mask()
    _default_template = build_template(mask, stride)
    logger.info("Template initialized from %s", path or "procedural fish")
    return _default_template


def get_default_template() -> Template:
    """Получение шаблона по умолчанию"""
    if _default_template is None:
        return init_template()
    return _default_template


def shutdown_template() -> None:
    global _default_template
    _default_template = None
