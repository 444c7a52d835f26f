"""Pytest configuration and shared fixtures for the stqft test suite."""

import os
import sys
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

# Add src to Python path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from stqft.config.logger_config import set_log_level  # noqa: E402
from stqft.core.error_handler import ErrorHandler  # noqa: E402
from stqft.models.quantum_state import QuantumState  # noqa: E402


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Keep DEBUG chatter of the simulator out of test output."""
    set_log_level("WARNING")
    yield


@pytest.fixture
def rng() -> np.random.Generator:
    """A seeded generator so every random case is reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng) -> Callable[[int], QuantumState]:
    """Factory for random complex unit states on n qubits."""

    def make(num_qubits: int) -> QuantumState:
        size = 1 << num_qubits
        vector = rng.normal(size=size) + 1j * rng.normal(size=size)
        return QuantumState.from_amplitudes(vector, normalize=True)

    return make


@pytest.fixture
def quiet_handler() -> ErrorHandler:
    """An error handler that records without logging."""
    return ErrorHandler(enable_logging=False)


@pytest.fixture
def write_csv(tmp_path) -> Callable[[str, np.ndarray], Path]:
    """Write a vector as a one-value-per-line CSV inside tmp_path."""

    def write(name: str, values) -> Path:
        path = tmp_path / name
        path.write_text(
            "".join(f"{float(value)!r}\n" for value in np.asarray(values).reshape(-1)),
            encoding="utf-8",
        )
        return path

    return write
