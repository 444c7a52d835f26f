"""
stqft Package

A state-vector simulator and DSP pipeline for short-time quantum Fourier
transform filtering: windowed amplitude encoding, register and block-encoded
Fourier-domain convolution, quantum overlap-add and overlap-save
reconstruction, all checked against a classical oracle.
"""

__version__ = "0.1.0"
__author__ = "stqft Development Team"

__all__ = [
    "main",  # Command-line entry point
]
