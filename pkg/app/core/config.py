"""
Core configuration module using Pydantic Settings for type-safe configuration.
Supports multiple environments and validation of environment variables.
"""

import os
from enum import Enum
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Environment(str, Enum):
    """Application environment types."""

    DEVELOPMENT = "development"
    TESTING = "testing"
    STAGING = "staging"
    PRODUCTION = "production"


class Settings(BaseSettings):
    """
    Solver settings with validation and type safety.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        validate_assignment=True,
        extra="ignore",
    )

    APP_NAME: str = "Hybrid Descent SAT"
    APP_VERSION: str = "1.0.0"
    ENVIRONMENT: Environment = Environment.DEVELOPMENT
    DEBUG: bool = False

    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "console"

    DESCENT_EPS: float = Field(
        default=1e-5, gt=0, description="Gradient-mapping tolerance"
    )
    DESCENT_MAX_ITERS: int = Field(
        default=20000, ge=1, description="Iteration cap per restart"
    )
    EPS_ZERO: float = Field(
        default=1e-9, gt=0, description="Tolerance of constancy and Hessian tests"
    )
    TAU_BOOL: float = Field(default=1e-6, description="Boundary snap tolerance")
    LINE_SEARCH: bool = True
    SADDLE_MAX_SHRINKS: int = 30
    ZERO_TEST_SAMPLES: int = 3

    ROUNDING_SAMPLES: int = Field(default=32, ge=1)
    MAX_CLAUSE_SIZE: int = 2000
    EXACT_SPECTRUM_LIMIT: int = 60
    DEFLATION_LIMIT: float = 0.9
    SPECTRUM_CACHE_SIZE: int = 4096

    DEFAULT_SEED: int = 0
    DEFAULT_THREADS: int = 1
    DEFAULT_RESTARTS: int = 200
    DEFAULT_TIME_LIMIT: float = 10.0

    ORACLE_MAX_CLAUSE_SIZE: int = 20
    ORACLE_MAX_VARIABLES: int = 24
    ORACLE_MAX_ROUNDING_VARIABLES: int = 12
    ORACLE_CHUNK_BITS: int = 16

    VERTEX_COVER_MAX_VERTICES: int = 30
    PARITY_MAX_VARIABLES: int = 24
    HYBRID_MAX_VARIABLES: int = 60
    GRAPH_RETRY_CAP: int = 1000

    @field_validator("ENVIRONMENT", mode="before")
    @classmethod
    def validate_environment(cls, v):
        """Ensure environment is valid."""
        if isinstance(v, str):
            return Environment(v.lower())
        return v

    @field_validator("TAU_BOOL")
    @classmethod
    def validate_tau_bool(cls, v):
        """Boundary tolerance must leave the open box non-empty."""
        if not 0 < v < 1:
            raise ValueError("TAU_BOOL must be in (0, 1)")
        return v

    @field_validator("DEFLATION_LIMIT")
    @classmethod
    def validate_deflation_limit(cls, v):
        """Deflation is only attempted on coordinates inside the box."""
        if not 0 < v <= 1:
            raise ValueError("DEFLATION_LIMIT must be in (0, 1]")
        return v

    @field_validator("LOG_FORMAT")
    @classmethod
    def validate_log_format(cls, v):
        if v not in ("json", "console"):
            raise ValueError("LOG_FORMAT must be 'json' or 'console'")
        return v

    @property
    def is_production(self) -> bool:
        """Check if running in production."""
        return self.ENVIRONMENT == Environment.PRODUCTION

    @property
    def is_development(self) -> bool:
        """Check if running in development."""
        return self.ENVIRONMENT == Environment.DEVELOPMENT

    @property
    def is_testing(self) -> bool:
        """Check if running in testing."""
        return self.ENVIRONMENT == Environment.TESTING


class DevelopmentSettings(Settings):
    """Development-specific settings."""

    DEBUG: bool = True


class TestingSettings(Settings):
    """Testing-specific settings."""

    ENVIRONMENT: Environment = Environment.TESTING
    SPECTRUM_CACHE_SIZE: int = 256


class ProductionSettings(Settings):
    """Production-specific settings."""

    ENVIRONMENT: Environment = Environment.PRODUCTION
    DEBUG: bool = False
    LOG_FORMAT: str = "json"
    DEFAULT_THREADS: int = 4


@lru_cache()
def get_settings() -> Settings:
    """
    Factory function to get settings based on environment.
    Uses LRU cache to avoid recreating settings objects.
    """
    environment = os.getenv("ENVIRONMENT", "development").lower()

    settings_map = {
        Environment.DEVELOPMENT: DevelopmentSettings,
        Environment.TESTING: TestingSettings,
        Environment.PRODUCTION: ProductionSettings,
    }

    settings_class = settings_map.get(Environment(environment), Settings)
    return settings_class()


settings = get_settings()
