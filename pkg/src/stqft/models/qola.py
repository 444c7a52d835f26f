"""
Quantum overlap-add models: the U_PERM permutation and a pair result.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt


@dataclass(frozen=True, eq=False)
class PermutationSpec:
    """2r x 2r routing matrix that moves the later frame down by r - l places."""

    frame_length: int  # r
    overlap: int  # l
    matrix: npt.NDArray[np.float64]

    @property
    def shift(self) -> int:
        """Offset of the second frame inside the 2r register."""
        return self.frame_length - self.overlap

    def is_permutation(self) -> bool:
        """Exactly one 1 per row and per column, zeros elsewhere."""
        matrix = self.matrix
        binary = bool(np.all((matrix == 0) | (matrix == 1)))
        return (
            binary
            and bool(np.all(matrix.sum(axis=0) == 1))
            and bool(np.all(matrix.sum(axis=1) == 1))
        )


@dataclass(frozen=True, eq=False)
class QolaResult:
    """Rescaled outcome of one QOLA pair circuit."""

    sum_vector: npt.NDArray[np.float64]
    success_probability: float
    pair_norm: float
    difference_vector: npt.NDArray[np.float64]
    difference_probability: float
    shift: int

    @property
    def energy_residual(self) -> float:
        """|1/2 ||SUM||^2 + 1/2 ||DIFFERENCE||^2 - M^2|, zero up to rounding."""
        half_sum = 0.5 * float(np.dot(self.sum_vector, self.sum_vector))
        half_diff = 0.5 * float(np.dot(self.difference_vector, self.difference_vector))
        return abs(half_sum + half_diff - self.pair_norm**2)
