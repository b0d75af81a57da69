from src.utils.pose.base import PoseEstimatorInterface
from src.utils.pose.pose_optimizer import (
    ChamferPoseOptimizer,
    FrozenCorrespondences,
    chamfer_distance,
    chamfer_distance_brute,
    estimate_relative_pose,
    fd_gradient,
    freeze_correspondences,
    frozen_loss,
    frozen_residuals,
    principal_axis_angle,
)
from src.utils.pose.bfs_baseline import (
    BruteForcePoseSearch,
    ProjectionDatabase,
    ProjectionEntry,
    aligned_iou,
    bfs_estimate,
    build_projection_database,
    iou,
    load_database,
    render_thumbnail,
    rescaled_params,
    save_database,
    score_database,
)

__all__ = [
    "PoseEstimatorInterface",
    "ChamferPoseOptimizer",
    "FrozenCorrespondences",
    "chamfer_distance",
    "chamfer_distance_brute",
    "estimate_relative_pose",
    "fd_gradient",
    "freeze_correspondences",
    "frozen_loss",
    "frozen_residuals",
    "principal_axis_angle",
    "BruteForcePoseSearch",
    "ProjectionDatabase",
    "ProjectionEntry",
    "aligned_iou",
    "bfs_estimate",
    "build_projection_database",
    "iou",
    "load_database",
    "render_thumbnail",
    "rescaled_params",
    "save_database",
    "score_database",
]
