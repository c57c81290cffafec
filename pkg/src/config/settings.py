"""
Configuration settings for cuspforge.

This module manages all configuration from environment variables.
"""

import os
from pathlib import Path
from typing import Literal
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings:
    """Application settings loaded from environment variables."""

    MAX_R: int = int(os.getenv("CUSPFORGE_MAX_R", "64"))
    DEFAULT_FORMAT: Literal["json", "csv", "text"] = os.getenv("CUSPFORGE_DEFAULT_FORMAT", "json")

    PROJECT_ROOT: Path = Path(__file__).parent.parent.parent
    DATA_DIR: Path = PROJECT_ROOT / "data"
    OUTPUT_DIR: Path = Path(os.getenv("CUSPFORGE_OUTPUT_DIR", str(DATA_DIR / "output")))

    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = os.getenv("LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls) -> bool:
        """
        Validate the environment-provided settings.

        Returns:
            True if valid, raises ValueError otherwise
        """
        if cls.MAX_R < 1:
            raise ValueError(f"CUSPFORGE_MAX_R must be a positive integer, got {cls.MAX_R}")
        if cls.DEFAULT_FORMAT not in ("json", "csv", "text"):
            raise ValueError(
                f"CUSPFORGE_DEFAULT_FORMAT must be json, csv or text, got {cls.DEFAULT_FORMAT!r}"
            )
        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ValueError(f"LOG_LEVEL must be DEBUG, INFO, WARNING or ERROR, got {cls.LOG_LEVEL!r}")
        return True


settings = Settings()

try:
    settings.validate()
except ValueError as e:
    import warnings
    warnings.warn(f"Configuration warning: {e}")
