"""
Bloch Verifier - Configuration Settings

Centralized configuration management for the library and the CLI.
"""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="BLOCH_VERIFIER_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)

    # Tolerances
    density_tolerance: float = Field(default=1e-10, gt=0.0)
    separability_tolerance: float = Field(default=1e-9, ge=0.0)
    tensor_tolerance: float = Field(default=1e-12, gt=0.0)

    # Quadrature
    n_theta: int = Field(default=4, ge=1)
    n_phi: int = Field(default=8, ge=1)
    node_budget: int = Field(default=100_000_000, ge=1)

    # Hidden-variable models
    simulator_resolution: int = Field(default=10_000, ge=1)

    # Scenario limits
    max_dense_parties: int = Field(default=6, ge=1)
    max_closed_form_parties: int = Field(default=8, ge=1)

    # Randomized property suites only
    seed: int = Field(default=20090101)

    # Reports
    output_dir: str = Field(default="./reports")

    def ensure_output_dir(self, output_dir: Optional[str] = None) -> Path:
        """Create the report directory on demand and return it."""
        path = Path(output_dir or self.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path


# Global settings instance
settings = Settings()
