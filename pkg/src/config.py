import os
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings"""

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Template
    TEMPLATE_PATH: str = os.getenv("TEMPLATE_PATH", "")
    TEMPLATE_STRIDE: int = int(os.getenv("TEMPLATE_STRIDE", "2"))
    RASTER_PAD: int = int(os.getenv("RASTER_PAD", "2"))

    # Localization
    GAP_TOL_FRACTION: float = float(os.getenv("GAP_TOL_FRACTION", "0.05"))

    # Histogram evaluation, mm
    HIST_LO: float = float(os.getenv("HIST_LO", "500"))
    HIST_HI: float = float(os.getenv("HIST_HI", "1000"))
    HIST_BINS: int = int(os.getenv("HIST_BINS", "20"))

    # Clip processing
    MAX_WORKERS: int = int(os.getenv("MAX_WORKERS", "4"))
    SEED: int = int(os.getenv("SEED", "0"))

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


settings = Settings()
