"""
Quantum state model for the state-vector simulator.

A QuantumState is a dense, unit-norm complex amplitude vector over 2^n basis
states. Qubit ordering is little-endian: qubit 0 is the least significant bit
of the basis index.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from stqft.core.error_handler import InvalidQubitIndexException, InvalidStateException

NORM_TOLERANCE = 1e-12

ComplexArray = npt.NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class QuantumState:
    """An n-qubit register held as a read-only amplitude vector."""

    amplitudes: ComplexArray
    num_qubits: int

    def __post_init__(self) -> None:
        """Validate length and norm, then freeze the amplitude buffer."""
        amplitudes = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amplitudes.ndim != 1:
            raise InvalidStateException(
                f"Amplitudes must be one-dimensional, got shape {amplitudes.shape}"
            )
        if self.num_qubits < 1:
            raise InvalidQubitIndexException(
                f"A state needs at least one qubit, got {self.num_qubits}"
            )
        if amplitudes.shape[0] != 1 << self.num_qubits:
            raise InvalidStateException(
                f"{self.num_qubits} qubits need {1 << self.num_qubits} amplitudes, "
                f"got {amplitudes.shape[0]}"
            )
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidStateException(f"State norm is {norm!r}, expected 1")

        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_amplitudes(
        cls, amplitudes: npt.ArrayLike, normalize: bool = False
    ) -> "QuantumState":
        """
        Build a state from a length-2^n vector.

        Args:
            amplitudes: Complex or real amplitudes
            normalize: Divide by the Euclidean norm before validating

        Returns:
            New QuantumState

        Raises:
            InvalidStateException: If the length is not a power of two, or the
                vector is zero while normalize is requested
        """
        vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        size = vector.shape[0]
        if size < 2 or size & (size - 1):
            raise InvalidStateException(
                f"Amplitude count must be a power of two >= 2, got {size}"
            )
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0.0:
                raise InvalidStateException("Cannot normalize an all-zero vector")
            vector = vector / norm
        return cls(amplitudes=vector, num_qubits=size.bit_length() - 1)

    @classmethod
    def zero_state(cls, num_qubits: int) -> "QuantumState":
        """Return |0...0> on num_qubits qubits."""
        return cls.basis_state(num_qubits, 0)

    @classmethod
    def basis_state(cls, num_qubits: int, index: int) -> "QuantumState":
        """Return the computational basis state |index>."""
        if num_qubits < 1:
            raise InvalidQubitIndexException(
                f"A state needs at least one qubit, got {num_qubits}"
            )
        if not 0 <= index < 1 << num_qubits:
            raise InvalidQubitIndexException(
                f"Basis index {index} out of range for {num_qubits} qubits"
            )
        amplitudes = np.zeros(1 << num_qubits, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes=amplitudes, num_qubits=num_qubits)

    @property
    def dimension(self) -> int:
        """Number of basis states."""
        return int(self.amplitudes.shape[0])

    def tensor(self, high: "QuantumState") -> "QuantumState":
        """
        Join two registers into one state.

        This state occupies qubits 0..n-1 and ``high`` the qubits above them.
        """
        return QuantumState(
            amplitudes=np.kron(high.amplitudes, self.amplitudes),
            num_qubits=self.num_qubits + high.num_qubits,
        )

    def probabilities(self) -> npt.NDArray[np.float64]:
        """Born-rule probabilities of every basis index."""
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        """Euclidean norm (1 within tolerance by construction)."""
        return float(np.linalg.norm(self.amplitudes))

    def allclose(self, other: "QuantumState", atol: float = 1e-12) -> bool:
        """Compare amplitudes elementwise."""
        return self.num_qubits == other.num_qubits and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-friendly dictionary."""
        return {
            "num_qubits": self.num_qubits,
            "real": self.amplitudes.real.tolist(),
            "imag": self.amplitudes.imag.tolist(),
        }

    def __repr__(self) -> str:
        """String representation of QuantumState."""
        return f"QuantumState(num_qubits={self.num_qubits})"


@dataclass(frozen=True)
class PostselectOutcome:
    """The collapsed state and probability of a postselection."""

    state: QuantumState
    probability: float

    def __post_init__(self) -> None:
        """Check that the probability is a valid, nonzero outcome."""
        if not 0.0 < self.probability <= 1.0 + NORM_TOLERANCE:
            raise InvalidStateException(
                f"Postselection probability must be in (0, 1], got {self.probability}"
            )
