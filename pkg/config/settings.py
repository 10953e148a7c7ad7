"""
Runtime settings for the modular entropy toolkit
"""
from typing import Any, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToolkitSettings(BaseSettings):
    """Tolerances, grid defaults and run parameters (env prefix MODULAR_)"""

    model_config = SettingsConfigDict(
        env_prefix="MODULAR_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Linear algebra
    algebraic_tol: float = Field(1e-10, gt=0)
    subspace_tol: float = Field(1e-8, gt=0)
    condition_cap: float = Field(1e12, gt=1)
    eigenvalue_one_tol: float = Field(1e-9, gt=0)
    rank_tol: float = Field(1e-10, gt=0)
    entropy_slack: float = Field(1e-9, gt=0)

    # Light ray
    convexity_tol: float = Field(1e-8, gt=0)
    spectral_p_min: float = Field(1e-4, gt=0)
    spectral_bandwidth_factor: float = Field(256.0, gt=0)
    spectral_nodes: int = Field(4096, ge=64)
    spectral_order: int = Field(8, ge=2, le=64)
    spectral_tail_tol: float = Field(1e-3, gt=0)

    # Fock space
    fock_cutoff: int = Field(60, ge=0)
    coherent_tail_tol: float = Field(1e-8, gt=0)
    thermal_tail_tol: float = Field(1e-10, gt=0)
    oracle_rel_tol: float = Field(1e-3, gt=0)

    # Geometry
    surface_band: float = Field(1e-10, gt=0)
    samples: int = Field(100_000, ge=1)
    sample_chunk: int = Field(4096, ge=1)

    # Run
    seed: int = 20240611
    workers: int = Field(4, ge=1)
    report_retries: int = Field(3, ge=1)

    def override(self, **updates: Any) -> "ToolkitSettings":
        """Return a validated copy with the non-None updates applied"""
        clean = {k: v for k, v in updates.items() if v is not None}
        if not clean:
            return self
        return ToolkitSettings.model_validate({**self.model_dump(), **clean})


# Singleton instance
_settings: Optional[ToolkitSettings] = None


def get_settings() -> ToolkitSettings:
    """Get or create the settings singleton"""
    global _settings
    if _settings is None:
        _settings = ToolkitSettings()
    return _settings


def set_settings(settings: Optional[ToolkitSettings]) -> None:
    """Replace the singleton (None resets it to the environment defaults)"""
    global _settings
    _settings = settings
