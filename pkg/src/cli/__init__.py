"""
SpinXfer CLI Module
Command-line surface for every experiment.
"""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
