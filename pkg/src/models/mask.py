from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.utils.errors import InvalidInputError


@dataclass(frozen=True)
class BinaryMask:
    """
    Бинарная маска: bits[row, col] is True for foreground.

    Centered coordinates of pixel (row, col) are (col - width/2, row - height/2).
    """

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.shape[0] < 1 or bits.shape[1] < 1:
            raise InvalidInputError(f"mask must be a non-empty 2D array, got shape {bits.shape}")
        bits = bits.astype(bool)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def area(self) -> int:
        return int(np.count_nonzero(self.bits))

    @property
    def center_offset(self) -> Tuple[float, float]:
        """Whole-image coordinates of the centered-frame origin."""
        return self.width / 2.0, self.height / 2.0

    def foreground_xy(self) -> np.ndarray:
        """Foreground pixels as (x, y) rows in centered coordinates, row-major order."""
        rows, cols = np.nonzero(self.bits)
        cx, cy = self.center_offset
        return np.column_stack([cols - cx, rows - cy]).astype(float)

    def centroid(self) -> np.ndarray:
        """Centroid of the foreground in centered coordinates."""
        if self.area == 0:
            raise InvalidInputError("mask has no foreground pixels")
        return self.foreground_xy().mean(axis=0)

    @classmethod
    def empty(cls, width: int, height: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))
