"""
Study Preset Schema and Loading
"""

from pathlib import Path
from typing import Dict, List, Optional

import yaml
from pydantic import BaseModel, Field


class OrderingStudyConfig(BaseModel):
    """Preset for an excitation-ordering comparison"""
    name: str = Field(..., description="Preset name")
    n_sites: int = Field(..., ge=2, description="Chain length N")
    field: float = Field(0.0, description="Static field h")
    coupling: float = Field(1.0, description="Exchange constant J")
    patterns: List[List[int]] = Field(..., min_length=1, description="Channel site sets, 1-indexed")
    reference: str = Field("neel", description="Channel whose Tmax is used as evaluation time")
    description: Optional[str] = Field(None, description="Where the preset comes from")


class StudyRegistry(BaseModel):
    """Registry of all study presets"""
    version: str = Field("1.0", description="Configuration schema version")
    ordering: Dict[str, OrderingStudyConfig] = Field(
        default_factory=dict, description="Ordering-study presets by key"
    )

    @classmethod
    def load_from_file(cls, config_path: Path) -> "StudyRegistry":
        """Load study presets from YAML file"""
        if not config_path.exists():
            return cls()

        with open(config_path, "r") as f:
            data = yaml.safe_load(f)

        return cls(**data) if data else cls()

    def get_ordering(self, key: str) -> Optional[OrderingStudyConfig]:
        """Get an ordering preset by key"""
        return self.ordering.get(key)

