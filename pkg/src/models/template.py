from dataclasses import dataclass

import numpy as np

from src.models.pointset import PointSet3


@dataclass(frozen=True)
class Template:
    """
    Relative 3D fish template: the flat state S0 on the Z=0 plane, pixel units,
    centered at the origin, body axis along y with the head toward +y.
    """

    points0: PointSet3
    head_idx: int
    center_idx: int
    tail_idx: int
    # foreground pixel count of the source silhouette (before striding)
    area: int
    stride: int = 1

    @property
    def n_points(self) -> int:
        return len(self.points0)

    @property
    def head(self) -> np.ndarray:
        return self.points0.points[self.head_idx]

    @property
    def center(self) -> np.ndarray:
        return self.points0.points[self.center_idx]

    @property
    def tail(self) -> np.ndarray:
        return self.points0.points[self.tail_idx]

    @property
    def flat_arc(self) -> float:
        """Head-tail midline arc on the flat template (equals the chord on the sheet)."""
        return float(np.linalg.norm(self.head - self.tail))

    @property
    def max_abs_y(self) -> float:
        return float(np.max(np.abs(self.points0.points[:, 1])))
