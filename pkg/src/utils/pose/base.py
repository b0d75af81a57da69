"""
Общий интерфейс оценщиков относительной позы.

Interface Segregation: the chamfer optimizer and the brute-force search are
interchangeable behind PoseEstimatorInterface.
"""
from abc import ABC, abstractmethod

from src.models.mask import BinaryMask
from src.models.pose import RelativePose
from src.models.template import Template


class PoseEstimatorInterface(ABC):
    """Estimates a relative 3D pose from a target mask"""

    @abstractmethod
    def estimate(self, mask: BinaryMask, template: Template) -> RelativePose:
        """Relative pose of the fish in mask, expressed with the given template"""
        pass
