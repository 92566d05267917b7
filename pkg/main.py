#!/usr/bin/env python3
"""
SpinXfer - State transfer through multi-excitation XY spin chains
Main entry point for running the command-line tools.

Usage:
    python main.py fidelity --n 10 --channel neel --jt 7.4
    python main.py sweep --n 10 --channel fm
    python main.py compare --n 4..12 --h-policy optimal
    python main.py tmax --n 4..12
    python main.py ordering --preset n6
    python main.py oracle-check --n 2..10
"""

import sys

from src.cli.main import main


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
