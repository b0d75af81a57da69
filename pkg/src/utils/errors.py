"""
Исключения пайплайна оценки позы и длины рыбы.

Each error carries the process exit code the CLI reports for it, the way an
HTTPException carries its status code.
"""
from typing import Optional


class FishPoseError(Exception):
    """Base error of the package"""

    exit_code: int = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidArgumentError(FishPoseError, ValueError):
    """Non-finite or out-of-range scalar argument"""


class OverBendError(InvalidArgumentError):
    """Bending would wrap the template beyond a half cylinder"""


class InvalidInputError(FishPoseError, ValueError):
    """Empty, malformed or inconsistent input data"""


class MaskFormatError(InvalidInputError):
    """Malformed mask file; offset is the byte position of the problem"""

    def __init__(self, message: str, offset: Optional[int] = None, path: Optional[str] = None):
        where = f" at byte {offset}" if offset is not None else ""
        source = f"{path}: " if path else ""
        super().__init__(f"{source}{message}{where}")
        self.offset = offset
        self.path = path


class InvalidCalibrationError(InvalidInputError):
    """Camera calibration fails the intrinsics/extrinsics invariants"""


class InvalidSpecError(InvalidInputError):
    """Synthetic scene cannot be rendered"""


class DegenerateGeometryError(FishPoseError):
    """Geometric construction has no unique solution"""

    exit_code = 3


class DegenerateViewError(DegenerateGeometryError):
    """Fish axis is aligned with the viewing ray"""


class BehindCameraError(DegenerateGeometryError):
    """Reference-plane depth is not positive"""
