from dataclasses import dataclass

import numpy as np

from src.models.camera import CameraModel
from src.models.mask import BinaryMask
from src.models.template import Template
from src.schemas.params import DeformParams


@dataclass(frozen=True)
class SyntheticScene:
    """
    Синтетическая сцена с известной истиной.

    keypoints_2d are (U, V) pixels of head, center and tail; keypoints_3d are
    the same points in the camera frame, mm.
    """

    template: Template
    params: DeformParams
    camera: CameraModel
    mask: BinaryMask
    true_length_mm: float
    mm_per_px: float
    bend_ratio: float
    keypoints_2d: np.ndarray
    keypoints_3d: np.ndarray

    @property
    def true_center(self) -> np.ndarray:
        return self.keypoints_3d[1]
