"""
Block encoding model.

A BlockEncoding embeds diag(encoded_diagonal) / alpha as the top-left block of
a larger unitary. Ancilla qubits sit above the system qubits, so the top-left
block is the ancilla-all-zero subspace.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

UNITARITY_TOLERANCE = 1e-10


class EncodingKind(Enum):
    """How the filter diagonal is embedded."""

    # one ancilla, 2x2 completion per diagonal entry, alpha = 1
    DIAGONAL = "diagonal"
    # matrix-access oracle form: column register + ancilla, alpha = 2^n
    ORACLE = "oracle"


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    """Unitary completion of a scaled diagonal matrix."""

    unitary: npt.NDArray[np.complex128]
    ancilla_count: int
    subnormalization: float
    encoded_diagonal: npt.NDArray[np.complex128]
    kind: EncodingKind = EncodingKind.DIAGONAL

    def __post_init__(self) -> None:
        """Check dimensions and freeze buffers."""
        unitary = np.array(self.unitary, dtype=np.complex128, copy=True)
        diagonal = np.array(self.encoded_diagonal, dtype=np.complex128, copy=True)
        system_dim = diagonal.shape[0]
        expected = system_dim << self.ancilla_count
        if unitary.shape != (expected, expected):
            raise ValueError(
                f"Unitary must be {expected}x{expected} for {system_dim} diagonal "
                f"entries and {self.ancilla_count} ancillas, got {unitary.shape}"
            )
        if self.subnormalization < 1.0:
            raise ValueError("Subnormalization must be >= 1")
        unitary.setflags(write=False)
        diagonal.setflags(write=False)
        object.__setattr__(self, "unitary", unitary)
        object.__setattr__(self, "encoded_diagonal", diagonal)

    @property
    def system_dimension(self) -> int:
        """2^n, the size of the encoded block."""
        return int(self.encoded_diagonal.shape[0])

    @property
    def system_qubits(self) -> int:
        """n, the qubits the encoded block acts on."""
        return self.system_dimension.bit_length() - 1

    @property
    def total_qubits(self) -> int:
        """System plus ancilla qubits."""
        return self.system_qubits + self.ancilla_count

    def top_left_block(self) -> npt.NDArray[np.complex128]:
        """The ancilla-all-zero block of the unitary."""
        size = self.system_dimension
        return self.unitary[:size, :size]

    def unitarity_error(self) -> float:
        """max |U^dagger U - I|."""
        product = self.unitary.conj().T @ self.unitary
        return float(np.max(np.abs(product - np.eye(product.shape[0]))))

    def block_error(self) -> float:
        """max |top-left block - diag(encoded_diagonal) / alpha|."""
        target = np.diag(self.encoded_diagonal) / self.subnormalization
        return float(np.max(np.abs(self.top_left_block() - target)))

    def __repr__(self) -> str:
        """String representation of BlockEncoding."""
        return (
            f"BlockEncoding(kind={self.kind.value}, "
            f"system_qubits={self.system_qubits}, "
            f"ancillas={self.ancilla_count}, alpha={self.subnormalization})"
        )
