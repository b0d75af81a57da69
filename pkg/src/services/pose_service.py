import asyncio
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.config import settings
from src.models.camera import CameraModel
from src.models.mask import BinaryMask
from src.models.pose import AbsolutePose, RelativePose
from src.models.template import Template
from src.schemas.io import FrameResult
from src.schemas.params import OptimizerConfig
from src.utils.errors import FishPoseError, InvalidInputError
from src.utils.geometry import localize
from src.utils.io import read_mask
from src.utils.metrics import ClipEstimate, aggregate_clip
from src.utils.pose import ChamferPoseOptimizer, PoseEstimatorInterface

logger = logging.getLogger(__name__)

_DIGITS = re.compile(r"(\d+)")


def natural_key(name: str) -> List[Union[int, str]]:
    """Sort key that orders frame_2 before frame_10."""
    return [int(part) if part.isdigit() else part for part in _DIGITS.split(name)]


class PoseService:
    """Frame and clip pipelines: mask -> relative pose -> absolute pose -> length."""

    @staticmethod
    def frame_result(frame: str, rel: RelativePose, pose: AbsolutePose, camera: CameraModel) -> FrameResult:
        return FrameResult(
            frame=frame,
            params=rel.params,
            relative_keypoints=[tuple(p.tolist()) for p in (rel.h, rel.c, rel.t)],
            keypoints_2d=[rel.h2d, rel.c2d, rel.t2d],
            H_abs=tuple(pose.H_abs.tolist()),
            C_abs=tuple(pose.C_abs.tolist()),
            T_abs=tuple(pose.T_abs.tolist()),
            gaps=pose.gaps,
            length_mm=pose.length_mm,
            bend_ratio=pose.bend_ratio,
            final_loss=rel.final_loss,
            low_confidence=pose.low_confidence,
            homography=camera.H.ravel().tolist(),
        )

    @staticmethod
    def estimate_frame(
        mask: BinaryMask,
        camera: CameraModel,
        template: Template,
        cfg: Optional[OptimizerConfig] = None,
        seed: int = 0,
        estimator: Optional[PoseEstimatorInterface] = None,
        frame: str = "",
        use_bend_ratio: bool = True,
    ) -> FrameResult:
        estimator = estimator or ChamferPoseOptimizer(cfg, seed)
        rel = estimator.estimate(mask, template)
        pose = localize(rel, camera, template, use_bend_ratio=use_bend_ratio)
        logger.info("Frame %s: length %.1f mm (bend ratio %.4f)", frame or "<mask>", pose.length_mm, pose.bend_ratio)
        return PoseService.frame_result(frame, rel, pose, camera)

    @staticmethod
    async def estimate_clip(
        mask_paths: Sequence[Path],
        camera: CameraModel,
        template: Template,
        cfg: Optional[OptimizerConfig] = None,
        seed: int = 0,
        max_workers: Optional[int] = None,
        use_bend_ratio: bool = True,
    ) -> List[Dict[str, Any]]:
        """
        Оценка всех кадров клипа.

        Frames run in worker threads, at most max_workers at a time. Results
        come back in natural frame-name order (frame_2 before frame_10) as
        {"success", "frame", "result" | "error"}.
        """
        semaphore = asyncio.Semaphore(max_workers or settings.MAX_WORKERS)

        async def run(path: Path) -> Dict[str, Any]:
            async with semaphore:
                try:
                    mask = await asyncio.to_thread(read_mask, path)
                    result = await asyncio.to_thread(
                        PoseService.estimate_frame,
                        mask, camera, template, cfg, seed, None, path.name, use_bend_ratio,
                    )
                    return {"success": True, "frame": path.name, "result": result}
                except FishPoseError as e:
                    logger.warning("Frame %s failed: %s", path.name, e.message)
                    return {"success": False, "frame": path.name, "error": e.message}

        ordered = sorted(mask_paths, key=lambda p: natural_key(p.name))
        return list(await asyncio.gather(*(run(p) for p in ordered)))

    @staticmethod
    def aggregate(results: Sequence[Dict[str, Any]]) -> Tuple[List[FrameResult], ClipEstimate]:
        frames = [r["result"] for r in results if r["success"]]
        if not frames:
            raise InvalidInputError("no frame of the clip produced a length")
        return frames, aggregate_clip([f.length_mm for f in frames])
