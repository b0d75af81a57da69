"""Synthetic masks and cameras shared by the test modules."""
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from src.models.camera import CameraModel
from src.models.mask import BinaryMask
from src.models.template import Template
from src.schemas.io import CalibrationFile
from src.schemas.params import DeformParams
from src.utils.contour import rasterize_closed
from src.utils.template import deform_points


def paste(bits: np.ndarray, origin: Tuple[int, int], width: int, height: int) -> BinaryMask:
    """Put a crop whose pixel (0, 0) sits at centered label `origin` into a width x height image."""
    assert width % 2 == 0 and height % 2 == 0
    canvas = np.zeros((height, width), dtype=bool)
    c0 = origin[0] + width // 2
    r0 = origin[1] + height // 2
    assert c0 >= 0 and r0 >= 0
    assert c0 + bits.shape[1] <= width and r0 + bits.shape[0] <= height
    canvas[r0:r0 + bits.shape[0], c0:c0 + bits.shape[1]] = bits
    return BinaryMask(canvas)


def render_orthographic(template: Template, params: DeformParams, width: int = 400, height: int = 400) -> BinaryMask:
    """The fitter's own forward model: closed orthographic raster of the deformed template."""
    s4 = deform_points(template.points0.points, params)
    raster, origin = rasterize_closed(s4[:, :2], 2, params.s * template.stride)
    return paste(raster.bits, origin, width, height)


def rect_mask(width: int, height: int, canvas: Optional[Tuple[int, int]] = None) -> BinaryMask:
    if canvas is None:
        return BinaryMask(np.ones((height, width), dtype=bool))
    cw, ch = canvas
    bits = np.zeros((ch, cw), dtype=bool)
    r0, c0 = (ch - height) // 2, (cw - width) // 2
    bits[r0:r0 + height, c0:c0 + width] = True
    return BinaryMask(bits)


def rot_x_column(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def intrinsics(f: float = 1000.0, cx: float = 320.0, cy: float = 240.0) -> np.ndarray:
    return np.array([[f, 0.0, cx], [0.0, f, cy], [0.0, 0.0, 1.0]])


def make_camera(
    f: float = 1000.0,
    cx: float = 320.0,
    cy: float = 240.0,
    R: Optional[np.ndarray] = None,
    T: Sequence[float] = (0.0, 0.0, 5000.0),
    width: int = 640,
    height: int = 480,
) -> CameraModel:
    return CameraModel(
        K=intrinsics(f, cx, cy),
        R=np.eye(3) if R is None else R,
        T=np.asarray(T, dtype=float),
        image_width=width,
        image_height=height,
    )


def calibration_file(camera: CameraModel) -> CalibrationFile:
    return CalibrationFile(
        K=camera.K.ravel().tolist(),
        R=camera.R.ravel().tolist(),
        T=camera.T.tolist(),
        image_width=camera.image_width,
        image_height=camera.image_height,
    )
