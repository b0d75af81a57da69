from src.models.mask import BinaryMask
from src.models.pointset import PointSet3, ContourSet
from src.models.template import Template
from src.models.camera import CameraModel
from src.models.pose import RelativePose, AbsolutePose

__all__ = [
    "BinaryMask",
    "PointSet3",
    "ContourSet",
    "Template",
    "CameraModel",
    "RelativePose",
    "AbsolutePose",
]
