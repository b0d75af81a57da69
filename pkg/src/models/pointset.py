from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.utils.errors import InvalidInputError

Unit = Literal["pixels", "mm"]


@dataclass(frozen=True)
class PointSet3:
    """Ordered 3D points, one per row; the order carries the keypoint indices."""

    points: np.ndarray
    unit: Unit = "pixels"

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 3 or points.shape[0] == 0:
            raise InvalidInputError(f"point set must be a non-empty N x 3 array, got {points.shape}")
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("point set contains non-finite coordinates")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def with_points(self, points: np.ndarray) -> "PointSet3":
        return PointSet3(points, self.unit)


@dataclass(frozen=True)
class ContourSet:
    """
    Unordered 2D contour points in the centered frame.

    source_idx is present for template contours only and indexes the S4 point
    that produced each contour pixel.
    """

    points: np.ndarray
    source_idx: Optional[np.ndarray] = None

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, 2)
        if points.shape[0] == 0:
            raise InvalidInputError("contour set is empty")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        if self.source_idx is not None:
            idx = np.array(self.source_idx, dtype=np.int64).reshape(-1)
            if idx.shape[0] != points.shape[0]:
                raise InvalidInputError("source_idx must have one entry per contour point")
            idx.setflags(write=False)
            object.__setattr__(self, "source_idx", idx)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def scaled(self, k: float) -> "ContourSet":
        return ContourSet(self.points * k, self.source_idx)

    @cached_property
    def tree(self) -> cKDTree:
        """kd-tree over the points, built on first use."""
        return cKDTree(self.points, balanced_tree=False, compact_nodes=False)

    def nearest(self, query: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Distance to, and index of, the nearest contour point for every query point."""
        return self.tree.query(query, workers=-1)
