from src.utils.errors import (
    FishPoseError,
    InvalidArgumentError,
    OverBendError,
    InvalidInputError,
    MaskFormatError,
    InvalidCalibrationError,
    InvalidSpecError,
    DegenerateGeometryError,
    DegenerateViewError,
    BehindCameraError,
)

__all__ = [
    "FishPoseError",
    "InvalidArgumentError",
    "OverBendError",
    "InvalidInputError",
    "MaskFormatError",
    "InvalidCalibrationError",
    "InvalidSpecError",
    "DegenerateGeometryError",
    "DegenerateViewError",
    "BehindCameraError",
]
