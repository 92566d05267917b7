"""
Validation utilities for run-configuration files and command-line literals.
"""

import math
import re
from pathlib import Path
from typing import Dict, Iterable, Optional

from src.models.errors import InvalidArgumentError
from src.models.schemas import FieldPolicy, Grid1D


class ConfigFileValidator:
    """Validator for key=value run-configuration files."""

    def __init__(self, allowed_keys: Iterable[str], max_file_size_kb: int = 64):
        """
        Initialize the config file validator.

        Args:
            allowed_keys: Keys a config file may set
            max_file_size_kb: Maximum file size in kilobytes
        """
        self.allowed_keys = set(allowed_keys)
        self.max_file_size_bytes = max_file_size_kb * 1024

    def load(self, path: str) -> Dict[str, str]:
        """
        Read and validate a config file.

        Args:
            path: Location of the file

        Returns:
            Mapping of keys to raw string values

        Raises:
            InvalidArgumentError: On a missing file, malformed line or unknown key
        """
        file_path = Path(path)
        if not file_path.is_file():
            raise InvalidArgumentError(
                f"config file '{path}' not found",
                field="config",
                error_code="CONFIG_NOT_FOUND",
            )
        if file_path.stat().st_size > self.max_file_size_bytes:
            raise InvalidArgumentError(
                f"config file '{path}' is too large",
                field="config",
                error_code="CONFIG_TOO_LARGE",
            )

        values: Dict[str, str] = {}
        for number, raw in enumerate(file_path.read_text(encoding="utf-8").splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            error = self.validate_line(line)
            if error:
                raise InvalidArgumentError(
                    f"line {number}: {error}",
                    field="config",
                    suggested_action="Use one key=value pair per line",
                    error_code="CONFIG_SYNTAX",
                )
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
        return values

    def validate_line(self, line: str) -> Optional[str]:
        """
        Validate one non-empty config line.

        Returns:
            Error description, or None if valid
        """
        if "=" not in line:
            return "expected key=value"
        key = line.split("=", 1)[0].strip().replace("-", "_")
        if not re.match(r"^[a-z_]+$", key):
            return f"invalid key '{key}'"
        if key not in self.allowed_keys:
            return f"unknown key '{key}'"
        return None


def parse_grid(text: str, name: str) -> Grid1D:
    """
    Parse "start:stop:step" (or a single number) into a Grid1D.

    Raises:
        InvalidArgumentError: If the literal is malformed or not finite
    """
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError as exc:
        raise InvalidArgumentError(
            f"cannot parse grid '{text}'",
            field=name,
            suggested_action="Use start:stop:step, e.g. 0:20:0.05",
        ) from exc
    if not all(math.isfinite(p) for p in parts):
        raise InvalidArgumentError(f"grid '{text}' is not finite", field=name)
    try:
        if len(parts) == 1:
            return Grid1D.single(parts[0])
        if len(parts) == 3:
            return Grid1D(start=parts[0], stop=parts[1], step=parts[2])
    except ValueError as exc:
        raise InvalidArgumentError(str(exc), field=name) from exc
    raise InvalidArgumentError(f"grid '{text}' needs 1 or 3 fields", field=name)


def parse_field_policy(text: str, grid: Grid1D) -> FieldPolicy:
    """
    Parse "fixed:<h>" or "optimal".

    Raises:
        InvalidArgumentError: If the literal is neither form
    """
    value = text.strip().lower()
    if value == "optimal":
        return FieldPolicy.optimize(grid)
    if value.startswith("fixed:"):
        try:
            field = float(value.split(":", 1)[1])
        except ValueError:
            field = math.nan
        if math.isfinite(field):
            return FieldPolicy.fixed(field)
    raise InvalidArgumentError(
        f"cannot parse field policy '{text}'",
        field="h_policy",
        suggested_action="Use fixed:<h> or optimal",
    )
