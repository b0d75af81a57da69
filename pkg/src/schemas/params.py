import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

PARAM_NAMES: Tuple[str, ...] = ("s", "kappa", "tx", "ty", "alpha", "beta", "gamma")


class DeformParams(BaseModel):
    """Seven deformation parameters: scale, curvature (1/pixels), translation (pixels), angles (rad)."""

    model_config = ConfigDict(frozen=True)

    s: float = 1.0
    kappa: float = 0.0
    tx: float = 0.0
    ty: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    @field_validator("*")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("parameter must be finite")
        return v

    @field_validator("s")
    @classmethod
    def validate_scale(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("scale s must be positive")
        return v

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in PARAM_NAMES], dtype=float)

    @classmethod
    def from_vector(cls, vector) -> "DeformParams":
        return cls(**{name: float(v) for name, v in zip(PARAM_NAMES, vector)})

    def normalized(self) -> "DeformParams":
        """Angles reduced to [0, 2pi)."""
        two_pi = 2.0 * math.pi
        return self.model_copy(
            update={name: getattr(self, name) % two_pi for name in ("alpha", "beta", "gamma")}
        )


class OptimizerConfig(BaseModel):
    """
    Настройки оптимизатора позы.

    Learning rates are dimensionless multipliers on the damped Gauss-Newton
    preconditioned gradient step, one per parameter group.
    """

    max_outer_iters: int = Field(60, ge=1)
    inner_steps: int = Field(5, ge=1)
    lr_shape: float = Field(1.0, gt=0)  # s, kappa
    lr_translation: float = Field(1.0, gt=0)  # tx, ty
    lr_angles: float = Field(1.0, gt=0)  # alpha, beta, gamma
    fd_step_s: float = Field(1e-3, gt=0)
    fd_step_kappa: float = Field(1e-6, gt=0)
    fd_step_translation: float = Field(0.5, gt=0)
    fd_step_angles: float = Field(1e-3, gt=0)
    damping: float = Field(1e-3, ge=0)
    # extra relative damping on alpha and beta
    tilt_damping: float = Field(0.1, ge=0)
    max_halvings: int = Field(5, ge=0)
    # None means 1e-3 * (m + n), pixel^2 per outer iteration
    convergence_tol: Optional[float] = Field(None, gt=0)
    multi_start: int = Field(2, ge=1, le=6)
    raster_pad: int = Field(2, ge=1)
    # starting bend angle at the template ends and starting tilts, rad
    init_bend_angle: float = Field(0.2, ge=0, lt=math.pi)
    init_tilt: float = Field(0.05, ge=0)
    fixed_kappa: bool = False

    def fd_steps(self) -> np.ndarray:
        return np.array(
            [
                self.fd_step_s,
                self.fd_step_kappa,
                self.fd_step_translation,
                self.fd_step_translation,
                self.fd_step_angles,
                self.fd_step_angles,
                self.fd_step_angles,
            ]
        )

    def learning_rates(self) -> np.ndarray:
        return np.array(
            [
                self.lr_shape,
                self.lr_shape,
                self.lr_translation,
                self.lr_translation,
                self.lr_angles,
                self.lr_angles,
                self.lr_angles,
            ]
        )


class ParamRange(BaseModel):
    lo: float
    hi: float
    steps: int = Field(..., ge=1)
    endpoint: bool = True

    @model_validator(mode="after")
    def validate_range(self) -> "ParamRange":
        if self.hi < self.lo:
            raise ValueError("hi must not be below lo")
        return self

    def values(self) -> List[float]:
        if self.steps == 1:
            return [float(self.lo)]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.steps, endpoint=self.endpoint)]


class GridSpec(BaseModel):
    """Deformation grid of the brute-force baseline; translation is resolved at query time."""

    s: ParamRange
    kappa: ParamRange
    alpha: ParamRange
    beta: ParamRange
    gamma: ParamRange

    @property
    def size(self) -> int:
        return self.s.steps * self.kappa.steps * self.alpha.steps * self.beta.steps * self.gamma.steps

    @classmethod
    def identity(cls) -> "GridSpec":
        single = ParamRange(lo=0.0, hi=0.0, steps=1)
        return cls(
            s=ParamRange(lo=1.0, hi=1.0, steps=1),
            kappa=single,
            alpha=single,
            beta=single,
            gamma=single,
        )

    @classmethod
    def default_for(cls, max_abs_y: float) -> "GridSpec":
        """7 scales x 9 curvatures x 5 alpha x 5 beta x 16 gamma; curvature up to a quarter-circle end bend."""
        kappa_max = (math.pi / 2.0) / max_abs_y
        return cls(
            s=ParamRange(lo=0.4, hi=1.6, steps=7),
            kappa=ParamRange(lo=-kappa_max, hi=kappa_max, steps=9),
            alpha=ParamRange(lo=-0.4, hi=0.4, steps=5),
            beta=ParamRange(lo=-0.4, hi=0.4, steps=5),
            gamma=ParamRange(lo=0.0, hi=2.0 * math.pi, steps=16, endpoint=False),
        )
