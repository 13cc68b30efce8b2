"""Configuration settings using Pydantic Settings."""

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix ``HERMLCD_``)."""

    model_config = SettingsConfigDict(
        env_prefix="HERMLCD_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Corpus root (matrices, recipes, bounds, claims, ledger)
    data_dir: str = "data"

    # Enumeration engine
    exhaustive_limit: int = 13  # (4^13 - 1)/3 ~ 22.4M projective representatives
    inner_rows: int = 8  # rows folded into the vectorised inner table (4^8 words)
    workers: int = 4  # thread pool size for partitioned enumeration
    enumerator_cache_size: int = 256  # memoised enumerators, least recently used evicted first

    # Constructions
    max_simplex_length: int = 1365  # simplex(6); simplex(7) would be 5461 columns

    # Output
    log_level: str = "WARNING"
    report_format: Literal["text", "json"] = "text"

    @property
    def data_path_resolved(self) -> Path:
        """Get the resolved corpus root.

        Relative paths are tried against the working directory first and then
        against the repository root, so the bundled corpus is found from anywhere.
        """
        path = Path(self.data_dir)
        if path.is_absolute() or path.exists():
            return path.resolve()
        repo_root = Path(__file__).resolve().parents[1]
        return (repo_root / path).resolve()


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
