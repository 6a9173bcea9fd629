"""
Runtime configuration loaded from the environment and an optional .env file
"""

import os
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from .errors import ValidationError


class Settings(BaseModel):
    log_level: str = "INFO"
    log_file: Optional[str] = None
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    seed: int = 0
    drop_tol: float = Field(default=0.0, ge=0.0)
    index_width: Literal["auto", "32", "64"] = "auto"
    degeneracy_rel: float = Field(default=1e-10, ge=0.0)
    ramps_max_depth: int = Field(default=4, ge=1)
    solver_tol: float = Field(default=1e-10, gt=0.0)
    solver_max_iter: int = Field(default=500, ge=1)
    run_db_path: str = "qsd_runs.db"
    host: str = "0.0.0.0"
    port: int = 8000

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from environment variables, falling back to defaults"""
        values = {
            "log_level": os.getenv("LOG_LEVEL"),
            "log_file": os.getenv("QSD_LOG_FILE"),
            "threads": os.getenv("QSD_THREADS"),
            "seed": os.getenv("QSD_SEED"),
            "drop_tol": os.getenv("QSD_DROP_TOL"),
            "index_width": os.getenv("QSD_INDEX_WIDTH"),
            "degeneracy_rel": os.getenv("QSD_DEGENERACY_REL"),
            "ramps_max_depth": os.getenv("QSD_RAMPS_MAX_DEPTH"),
            "solver_tol": os.getenv("QSD_SOLVER_TOL"),
            "solver_max_iter": os.getenv("QSD_SOLVER_MAX_ITER"),
            "run_db_path": os.getenv("QSD_RUN_DB"),
            "host": os.getenv("HOST"),
            "port": os.getenv("PORT"),
        }
        return cls(**{key: value for key, value in values.items() if value is not None})


# Created after environment variables are loaded
settings = None


def get_settings() -> Settings:
    """Get or create the singleton settings instance"""
    global settings
    if settings is None:
        load_dotenv()
        settings = Settings.from_env()
    return settings


def reset_settings():
    """Drop the cached settings so the next access re-reads the environment"""
    global settings
    settings = None


def resolve_threads(flag: Optional[int] = None) -> int:
    """Thread count: QSD_THREADS overrides the flag, default is machine parallelism"""
    env_value = os.getenv("QSD_THREADS")
    if env_value is not None:
        try:
            threads = int(env_value)
        except ValueError:
            raise ValidationError(f"QSD_THREADS must be an integer, got {env_value!r}")
    elif flag is not None:
        threads = flag
    else:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise ValidationError(f"thread count must be >= 1, got {threads}")
    return threads
