from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.schemas.params import DeformParams


@dataclass(frozen=True)
class RelativePose:
    """
    Относительная 3D поза: keypoints in the camera-aligned centered frame, pixel units.

    keypoints_2d are (U, V) in whole-image coordinates, i.e. (x, y) of h/c/t
    plus the mask-center offset.
    """

    h: np.ndarray
    c: np.ndarray
    t: np.ndarray
    params: DeformParams
    final_loss: float
    h2d: Tuple[float, float]
    c2d: Tuple[float, float]
    t2d: Tuple[float, float]
    loss_trace: Tuple[float, ...] = ()

    @classmethod
    def from_keypoints(
        cls,
        h: np.ndarray,
        c: np.ndarray,
        t: np.ndarray,
        params: DeformParams,
        final_loss: float,
        image_size: Tuple[int, int],
        loss_trace: List[float] = (),
    ) -> "RelativePose":
        width, height = image_size
        ox, oy = width / 2.0, height / 2.0
        h, c, t = (np.asarray(p, dtype=float).reshape(3) for p in (h, c, t))
        return cls(
            h=h,
            c=c,
            t=t,
            params=params,
            final_loss=float(final_loss),
            h2d=(float(h[0] + ox), float(h[1] + oy)),
            c2d=(float(c[0] + ox), float(c[1] + oy)),
            t2d=(float(t[0] + ox), float(t[1] + oy)),
            loss_trace=tuple(float(v) for v in loss_trace),
        )

    @property
    def chord(self) -> float:
        return float(np.linalg.norm(self.h - self.t))


@dataclass(frozen=True)
class AbsolutePose:
    """Абсолютная 3D поза: H', C', T' in the camera frame, mm."""

    H_abs: np.ndarray
    C_abs: np.ndarray
    T_abs: np.ndarray
    gaps: Tuple[float, float]
    length_mm: float
    bend_ratio: float
    low_confidence: bool = False
