import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.schemas.params import DeformParams, GridSpec

Vec2 = Tuple[float, float]
Vec3 = Tuple[float, float, float]


class CalibrationFile(BaseModel):
    """
    Калибровка камеры для опорной плоскости Z=0.

    K and R are 9 reals row-major, T is 3 reals in mm (world -> camera).
    """

    model_config = ConfigDict(extra="ignore")

    K: List[float] = Field(..., min_length=9, max_length=9)
    R: List[float] = Field(..., min_length=9, max_length=9)
    T: List[float] = Field(..., min_length=3, max_length=3)
    image_width: int = Field(..., gt=0)
    image_height: int = Field(..., gt=0)

    @field_validator("K", "R", "T")
    @classmethod
    def validate_finite(cls, v: List[float]) -> List[float]:
        if not all(math.isfinite(x) for x in v):
            raise ValueError("values must be finite")
        return v

    def to_camera(self):
        from src.models.camera import CameraModel

        return CameraModel(
            K=np.array(self.K).reshape(3, 3),
            R=np.array(self.R).reshape(3, 3),
            T=np.array(self.T),
            image_width=self.image_width,
            image_height=self.image_height,
        )


class SceneSpec(BaseModel):
    """
    Synthetic scene: ground-truth deformation, camera and the metric scale.

    The fish center sits on the reference plane at center_world. Exactly one
    of mm_per_px (template pixel size on the plane) and length_mm (true body
    length, from which mm_per_px is derived) is given. tx and ty of params
    are ignored: placement comes from center_world.
    """

    camera: CalibrationFile
    params: DeformParams = DeformParams()
    center_world: Vec2 = (0.0, 0.0)
    length_mm: Optional[float] = Field(None, gt=0)
    mm_per_px: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def validate_scale(self) -> "SceneSpec":
        if (self.length_mm is None) == (self.mm_per_px is None):
            raise ValueError("exactly one of length_mm and mm_per_px must be set")
        return self


class GroundTruth(BaseModel):
    """Sidecar written next to a synthetic mask."""

    params: DeformParams
    length_mm: float
    mm_per_px: float
    keypoints_2d: List[Vec2]
    keypoints_3d: List[Vec3]
    bend_ratio: float


class FrameResult(BaseModel):
    """Результат оценки одного кадра."""

    frame: str
    params: DeformParams
    relative_keypoints: List[Vec3]
    keypoints_2d: List[Vec2]
    H_abs: Vec3
    C_abs: Vec3
    T_abs: Vec3
    gaps: Vec2
    length_mm: float
    bend_ratio: float
    final_loss: float
    low_confidence: bool = False
    homography: List[float] = Field(default_factory=list)


class DatabaseEntry(BaseModel):
    file: str
    params: DeformParams
    origin: Tuple[int, int]
    area: int = Field(..., gt=0)


class DatabaseIndex(BaseModel):
    """index.json of a persisted projection database."""

    grid: GridSpec
    raster_pad: int
    template_points: int
    template_flat_arc: float
    skipped: int = 0
    entries: List[DatabaseEntry]
