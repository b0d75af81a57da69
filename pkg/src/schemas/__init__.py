from src.schemas.params import (
    PARAM_NAMES,
    DeformParams,
    OptimizerConfig,
    ParamRange,
    GridSpec,
)
from src.schemas.io import (
    CalibrationFile,
    SceneSpec,
    GroundTruth,
    FrameResult,
    DatabaseEntry,
    DatabaseIndex,
)

__all__ = [
    "PARAM_NAMES",
    "DeformParams",
    "OptimizerConfig",
    "ParamRange",
    "GridSpec",
    "CalibrationFile",
    "SceneSpec",
    "GroundTruth",
    "FrameResult",
    "DatabaseEntry",
    "DatabaseIndex",
]
