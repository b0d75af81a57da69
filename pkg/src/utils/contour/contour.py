"""
Контуры масок.

Exact binary boundary extraction (a foreground pixel with a background
4-neighbour, the image border counting as background) replaces a Canny pass:
on a binary mask both find the same edge, this one without thresholds.
"""
import math
from typing import NamedTuple, Tuple

import cv2
import numpy as np
from scipy.spatial import cKDTree

from src.models.mask import BinaryMask
from src.models.pointset import ContourSet, PointSet3
from src.utils.errors import InvalidInputError

_CROSS = cv2.getStructuringElement(cv2.MORPH_CROSS, (3, 3))


class RasterizedPoints(NamedTuple):
    mask: BinaryMask
    # centered-frame coordinates of pixel (row 0, col 0)
    origin: Tuple[int, int]


def boundary_bits(bits: np.ndarray) -> np.ndarray:
    """Foreground pixels with at least one background 4-neighbour."""
    img = bits.astype(np.uint8)
    eroded = cv2.erode(img, _CROSS, borderType=cv2.BORDER_CONSTANT, borderValue=0)
    return (img > 0) & (eroded == 0)


def closing_radius(point_spacing: float) -> int:
    """
    Smallest square closing radius that bridges rasterized points spaced point_spacing apart.

    Such points leave runs of at most floor(point_spacing) empty pixels between them.
    """
    return max(1, math.ceil(math.floor(point_spacing) / 2.0))


def close_bits(bits: np.ndarray, radius: int = 1) -> np.ndarray:
    """One closing pass with a (2 * radius + 1) square."""
    kernel = np.ones((2 * radius + 1, 2 * radius + 1), dtype=np.uint8)
    closed = cv2.morphologyEx(bits.astype(np.uint8), cv2.MORPH_CLOSE, kernel)
    return closed > 0


def extract_target_contour(mask: BinaryMask) -> ContourSet:
    """Boundary pixels of the target mask, translated by -(width/2, height/2)."""
    if mask.area == 0:
        raise InvalidInputError("target mask has no foreground pixels")
    rows, cols = np.nonzero(boundary_bits(mask.bits))
    cx, cy = mask.center_offset
    return ContourSet(np.column_stack([cols - cx, rows - cy]).astype(float))


def pixel_labels(xy: np.ndarray) -> np.ndarray:
    """Integer pixel label of continuous points (pixel centres sit on integers)."""
    return np.floor(np.asarray(xy, dtype=float) + 0.5).astype(np.int64)


def rasterize(points: np.ndarray, pad: int = 0) -> RasterizedPoints:
    """
    Rasterize (x, y) points onto a grid covering their bounding box plus pad pixels.

    Each point sets the pixel that contains it.
    """
    xy = np.asarray(points, dtype=float).reshape(-1, 2)
    if xy.shape[0] == 0:
        raise InvalidInputError("nothing to rasterize")
    labels = pixel_labels(xy)
    lo = labels.min(axis=0) - pad
    hi = labels.max(axis=0) + pad
    width, height = int(hi[0] - lo[0] + 1), int(hi[1] - lo[1] + 1)
    bits = np.zeros((height, width), dtype=bool)
    bits[labels[:, 1] - lo[1], labels[:, 0] - lo[0]] = True
    return RasterizedPoints(BinaryMask(bits), (int(lo[0]), int(lo[1])))


def rasterize_closed(points: np.ndarray, pad: int = 1, point_spacing: float = 2.0) -> RasterizedPoints:
    """Rasterized silhouette of (x, y) points with the gaps between neighbouring points closed."""
    radius = closing_radius(point_spacing)
    raster, origin = rasterize(points, max(int(pad), radius))
    return RasterizedPoints(BinaryMask(close_bits(raster.bits, radius)), origin)


def project_template_contour(s4: PointSet3, raster_pad: int = 2, point_spacing: float = 2.0) -> ContourSet:
    """
    Orthographic projection contour of the deformed template.

    z is dropped, the (x, y) points are rasterized, the gaps between them
    (point_spacing pixels apart at most) closed and the boundary extracted.
    Each contour point keeps the index of the nearest S4 point in the
    projection plane.
    """
    if len(s4) == 0:
        raise InvalidInputError("deformed template is empty")
    xy = s4.points[:, :2]
    raster, (ox, oy) = rasterize_closed(xy, raster_pad, point_spacing)
    rows, cols = np.nonzero(boundary_bits(raster.bits))
    contour_xy = np.column_stack([cols + ox, rows + oy]).astype(float)
    _, source_idx = cKDTree(xy, balanced_tree=False, compact_nodes=False).query(contour_xy, workers=-1)
    return ContourSet(contour_xy, source_idx)
