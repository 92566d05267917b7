"""
SpinXfer - quantum state transfer through multi-excitation XY spin chains.
Free-fermion fidelity evaluation with an exact-diagonalization oracle.
"""

__version__ = "1.0.0"
__author__ = "SpinXfer Team"
