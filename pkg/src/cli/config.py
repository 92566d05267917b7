"""
Run Configuration
Merged view of settings defaults, an optional key=value file and CLI flags.
"""

import math
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from config.settings import settings
from src.models.schemas import FidelityMode

OutputFormat = Literal["csv", "json"]


class RunConfig(BaseModel):
    """Everything a subcommand needs; precedence is flags > file > defaults."""
    command: str
    n: str = Field("10", description="Chain length, or a range such as 4..12")
    coupling: float = 1.0
    channel: str = "neel"
    h: float = 0.0
    jt: float = 0.0
    mode: FidelityMode = FidelityMode.STRICT
    format: OutputFormat = "csv"
    output: Optional[str] = None
    workers: int = Field(default_factory=lambda: settings.DEFAULT_WORKERS, ge=1)
    seed: int = 0

    jt_grid: Optional[str] = None
    h_grid: Optional[str] = None
    h_policy: str = "fixed:0.0"

    patterns: Optional[str] = None
    preset: Optional[str] = None
    reference: str = "neel"

    draws: int = Field(20, ge=1)
    tolerance: float = Field(1e-10, ge=0.0)
    oracle: bool = True

    @field_validator("coupling", "h", "jt", "tolerance")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("numeric parameters must be finite")
        return value

    @field_validator("coupling")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("coupling must be nonzero")
        return value

    def echo(self) -> Dict[str, Any]:
        """Config as recorded in JSON provenance blocks."""
        return self.model_dump(mode="json", exclude={"output", "workers"})


CONFIG_KEYS = tuple(k for k in RunConfig.model_fields if k != "command")
