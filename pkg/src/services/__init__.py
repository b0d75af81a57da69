from src.services.pose_service import PoseService, natural_key

__all__ = ["PoseService", "natural_key"]
