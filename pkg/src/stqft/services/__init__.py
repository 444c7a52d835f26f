"""Quantum convolution, block encodings and reconstruction."""
