"""Application settings"""
from pathlib import Path
from typing import Optional
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Workbench settings, overridable through BENO_* environment variables"""

    # Reproducibility
    SEED: int = 0  # BENO_SEED

    # Solver / graph defaults
    SOLVER_TOL: float = 1e-10
    KNN_K: int = 8

    # Output
    OUTPUT_DIR: Path = Path("runs")
    PLOT_PX_PER_CELL: int = 16

    # Logging
    DEBUG: bool = False
    LOG_FILE: Optional[str] = None

    # Application
    APP_NAME: str = "BENO Workbench"
    APP_VERSION: str = "1.0.0"

    # Paths
    BASE_DIR: Path = Path(__file__).parent.parent.parent
    CONFIG_DIR: Path = Path(__file__).parent
    PRESETS_CONFIG: Path = CONFIG_DIR / "presets.yaml"
    EXPERIMENTS_DIR: Path = BASE_DIR / "config" / "experiments"

    class Config:
        env_prefix = "BENO_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True


# Global settings instance
settings = Settings()
