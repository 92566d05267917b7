"""
SpinXfer Utilities Module
Common utility functions and helpers.
"""

from .helpers import (
    colex_combinations,
    format_number,
    parse_comma_separated,
    parse_int_range,
)
from .logging_config import setup_logging

__all__ = [
    "colex_combinations",
    "format_number",
    "parse_comma_separated",
    "parse_int_range",
    "setup_logging",
]
