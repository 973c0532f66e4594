"""
Toolkit configuration loaded from environment variables.
"""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application
    app_name: str = Field(default="Max-plus Leverage Scores", alias="MPLS_APP_NAME")
    app_version: str = Field(default="0.1.0", alias="MPLS_APP_VERSION")
    debug: bool = Field(default=False, alias="MPLS_DEBUG")
    port: int = Field(default=8000, alias="MPLS_PORT")
    log_level: str = Field(default="INFO", alias="MPLS_LOG_LEVEL")

    # Experiments
    default_n: int = Field(default=10_000, alias="MPLS_DEFAULT_N", ge=2)
    default_d: int = Field(default=21, alias="MPLS_DEFAULT_D", ge=2)
    full_scale_n: int = Field(default=100_000, alias="MPLS_FULL_SCALE_N", ge=2)
    full_scale_d: int = Field(default=51, alias="MPLS_FULL_SCALE_D", ge=2)
    default_seed: int = Field(default=0, alias="MPLS_DEFAULT_SEED", ge=0)
    default_trials: int = Field(default=100, alias="MPLS_DEFAULT_TRIALS", ge=1)
    default_r_grid: str = Field(default="250,500,1000,2000", alias="MPLS_DEFAULT_R_GRID")
    output_dir: Path = Field(default=Path("./runs"), alias="MPLS_OUTPUT_DIR")
    workers: int = Field(default=1, alias="MPLS_WORKERS", ge=1)

    @property
    def effective_log_level(self) -> str:
        return "DEBUG" if self.debug else self.log_level.upper()

    def r_grid(self) -> list[int]:
        """Parse the default sample-size grid."""
        return [int(r) for r in self.default_r_grid.split(",") if r.strip()]


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
