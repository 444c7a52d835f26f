"""
Classical reference DSP.

Ground truth for every quantum equivalence check. The implementations are
kept naive on purpose: the DFT is a dense O(M^2) matrix product and shares no
code with the simulator's FFT-based QFT.
"""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from stqft.core.error_handler import (
    BlockTooSmallException,
    DimensionMismatchException,
    EmptyInputException,
    FilterLongerThanBlockException,
)

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]


def _as_vector(values: npt.ArrayLike, name: str) -> FloatArray:
    vector = np.asarray(values, dtype=np.float64).reshape(-1)
    if vector.size == 0:
        raise EmptyInputException(f"{name} must not be empty")
    return vector


def direct_convolution(x: npt.ArrayLike, h: npt.ArrayLike) -> FloatArray:
    """
    Textbook linear convolution y[k] = sum_j x[k - j] h[j].

    Returns:
        Vector of length |x| + |h| - 1

    Raises:
        EmptyInputException: If either input is empty
    """
    signal = _as_vector(x, "Signal")
    taps = _as_vector(h, "Filter")
    output = np.zeros(signal.size + taps.size - 1)
    for j, tap in enumerate(taps):
        output[j : j + signal.size] += tap * signal
    return output


def circular_convolution(x: npt.ArrayLike, h: npt.ArrayLike, block: int) -> FloatArray:
    """
    Convolution modulo ``block``: y[k] = sum_j x[(k - j) mod M] h[j].

    Raises:
        BlockTooSmallException: If either input is longer than the block
    """
    signal = _as_vector(x, "Signal")
    taps = _as_vector(h, "Filter")
    if signal.size > block or taps.size > block:
        raise BlockTooSmallException(
            f"Block of {block} cannot hold inputs of length {signal.size} "
            f"and {taps.size}"
        )
    output = np.zeros(block)
    linear = direct_convolution(signal, taps)
    for k, value in enumerate(linear):
        output[k % block] += value
    return output


def classical_ola(frames: Sequence[npt.ArrayLike], hop: int) -> FloatArray:
    """
    Overlap-add equal-length frames placed at offsets k * hop.

    Raises:
        EmptyInputException: If there are no frames
        DimensionMismatchException: For ragged frames or a non-positive hop
    """
    if len(frames) == 0:
        raise EmptyInputException("Overlap-add needs at least one frame")
    if hop < 1:
        raise DimensionMismatchException(f"Hop must be >= 1, got {hop}")
    vectors = [np.asarray(frame, dtype=np.float64).reshape(-1) for frame in frames]
    length = vectors[0].size
    if any(vector.size != length for vector in vectors):
        raise DimensionMismatchException("Overlap-add frames must share one length")

    output = np.zeros((len(vectors) - 1) * hop + length)
    for k, vector in enumerate(vectors):
        output[k * hop : k * hop + length] += vector
    return output


def classical_ols(signal: npt.ArrayLike, h: npt.ArrayLike, block: int) -> FloatArray:
    """
    Overlap-save filtering with circular convolutions of length ``block``.

    Each block overlaps the previous one by f_l - 1 samples; the first f_l - 1
    outputs of every circular convolution are wrapped and discarded. The
    result has the full linear-convolution length |x| + f_l - 1.

    Raises:
        FilterLongerThanBlockException: If f_l >= block
    """
    samples = _as_vector(signal, "Signal")
    taps = _as_vector(h, "Filter")
    overlap = taps.size - 1
    if taps.size >= block:
        raise FilterLongerThanBlockException(
            f"Filter of {taps.size} taps needs a block longer than {block}"
        )
    step = block - overlap
    total = samples.size + overlap
    padded = np.concatenate(
        [np.zeros(overlap), samples, np.zeros(step + overlap)]
    )

    pieces = []
    for start in range(0, total, step):
        circular = circular_convolution(padded[start : start + block], taps, block)
        pieces.append(circular[overlap:])
    return np.concatenate(pieces)[:total]


def classical_filter(signal: npt.ArrayLike, taps: npt.ArrayLike) -> FloatArray:
    """Full linear convolution of a whole signal; the --verify reference."""
    return direct_convolution(signal, taps)


def dft_matrix(size: int) -> ComplexArray:
    """Dense unitary DFT matrix F[k][j] = exp(-2 pi i j k / M) / sqrt(M)."""
    if size < 1:
        raise DimensionMismatchException(f"DFT size must be >= 1, got {size}")
    index = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(index, index) / size) / np.sqrt(size)


def unitary_dft(x: npt.ArrayLike) -> ComplexArray:
    """Unitary DFT by dense matrix-vector product."""
    vector = np.asarray(x, dtype=np.complex128).reshape(-1)
    return dft_matrix(vector.size) @ vector


def unitary_idft(x: npt.ArrayLike) -> ComplexArray:
    """Inverse of unitary_dft (conjugate transpose of the DFT matrix)."""
    vector = np.asarray(x, dtype=np.complex128).reshape(-1)
    return dft_matrix(vector.size).conj().T @ vector
