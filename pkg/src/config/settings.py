import logging
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

load_dotenv()


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


class Settings(BaseModel):
    """Runtime knobs read from the environment (.env supported)."""

    log_level: str = "INFO"
    log_dir: str = "logs"
    max_vars: int = Field(96, ge=1, description="Variable cap per manager")
    max_states: int = Field(20000, ge=1, description="Explicit game/product state cap")
    atom_cap: int = Field(12, ge=1, description="Max atoms for DFA construction")
    oracle_max_states: int = Field(200, ge=1, description="Brute-force oracle product cap")
    oracle_max_strategies: int = Field(50000, ge=1, description="Brute-force oracle strategy cap")
    budget_factor: float = Field(1.25, gt=0, description="Auto budget multiplier")
    celery_broker_url: str = "memory://"
    celery_result_backend: str = "cache+memory://"
    tasks_eager: bool = True


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    settings = Settings(
        log_level=os.getenv("DDSYNTH_LOG_LEVEL", "INFO"),
        log_dir=os.getenv("DDSYNTH_LOG_DIR", "logs"),
        max_vars=int(os.getenv("DDSYNTH_MAX_VARS", "96")),
        max_states=int(os.getenv("DDSYNTH_MAX_STATES", "20000")),
        atom_cap=int(os.getenv("DDSYNTH_ATOM_CAP", "12")),
        oracle_max_states=int(os.getenv("DDSYNTH_ORACLE_MAX_STATES", "200")),
        oracle_max_strategies=int(os.getenv("DDSYNTH_ORACLE_MAX_STRATEGIES", "50000")),
        budget_factor=float(os.getenv("DDSYNTH_BUDGET_FACTOR", "1.25")),
        celery_broker_url=os.getenv("CELERY_BROKER_URL", "memory://"),
        celery_result_backend=os.getenv("CELERY_RESULT_BACKEND", "cache+memory://"),
        tasks_eager=_env_bool("DDSYNTH_TASKS_EAGER", True),
    )
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings
