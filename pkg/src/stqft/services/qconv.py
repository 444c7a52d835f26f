"""
Quantum Fourier-domain convolution.

Two ways of multiplying a frame's spectrum by a filter's spectrum:
- Register method: the filter is a second register; after a QFT on both
  registers a transversal CNOT and postselection of the filter register on
  |0...0> leave the elementwise product on the frame register.
- Block method: the filter spectrum is the diagonal of a block-encoded
  unitary applied to the frame register and postselected on its ancillas.

Both end in an IQFT whose readout, rescaled by the ledger, is the linear
convolution of the window with the taps.
"""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy.linalg import hadamard

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import (
    AllZeroFilterException,
    BlockTooSmallException,
    DimensionMismatchException,
    EntryMagnitudeExceedsOneException,
    ZeroProbabilityOutcomeException,
)
from stqft.dsp.framing import next_power_of_two
from stqft.dsp.framing import padded_length as frame_padded_length
from stqft.models.block_encoding import BlockEncoding, EncodingKind
from stqft.models.filter_spec import FilterSpec
from stqft.models.frame import EncodedFrame
from stqft.models.gate_list import GateList
from stqft.models.quantum_state import QuantumState
from stqft.models.scale_ledger import ScaleLedger
from stqft.services.readout import ExactReadout, ReadoutStrategy
from stqft.simulator.statevector import (
    SWAP,
    apply_gates,
    apply_iqft,
    apply_matrix,
    apply_qft,
    apply_transversal_cnot,
    apply_unitary,
    postselect,
)

logger = get_logger(__name__)

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

MAGNITUDE_TOLERANCE = 1e-12

_EXACT = ExactReadout()


def make_filter(
    taps: npt.ArrayLike, window_length: int, *, padded_length: int | None = None
) -> FilterSpec:
    """
    Pad, normalize and Fourier-transform filter taps.

    Args:
        taps: Time-domain filter taps
        window_length: w_l of the frames the filter will meet
        padded_length: Force the register size (overlap-save blocks); by
            default the smallest power of two >= w_l + f_l - 1

    Raises:
        AllZeroFilterException: If every tap is zero
        BlockTooSmallException: If the forced size cannot hold the taps
    """
    values = np.asarray(taps, dtype=np.float64).reshape(-1)
    if values.size == 0 or not np.any(values):
        raise AllZeroFilterException("Filter taps are all zero")

    if padded_length is None:
        size = frame_padded_length(window_length, values.size)
    else:
        size = padded_length
        if size != next_power_of_two(size):
            raise BlockTooSmallException(f"Register size {size} is not a power of two")
        if size < values.size:
            raise BlockTooSmallException(
                f"Register of {size} cannot hold {values.size} taps"
            )

    padded = np.zeros(size)
    padded[: values.size] = values
    norm = float(np.linalg.norm(padded))
    state = QuantumState.from_amplitudes(padded / norm)
    spectrum = apply_qft(state, range(state.num_qubits))

    logger.debug(f"Filter of {values.size} taps padded to {size} (norm {norm:.6g})")
    return FilterSpec(
        taps=values,
        padded_length=size,
        fourier_coeffs=spectrum.amplitudes,
        filter_norm=norm,
    )


def _filter_state(filter_spec: FilterSpec) -> QuantumState:
    padded = np.zeros(filter_spec.padded_length)
    padded[: filter_spec.filter_length] = filter_spec.taps
    return QuantumState.from_amplitudes(padded / filter_spec.filter_norm)


def _check_sizes(frame: EncodedFrame, size: int) -> None:
    if frame.padded_length != size:
        raise DimensionMismatchException(
            f"Frame padded to {frame.padded_length} but filter to {size}",
            context={"frame_index": frame.index},
        )


def _postselect(
    state: QuantumState, qubits: Sequence[int], frame_index: int
) -> tuple[QuantumState, float]:
    try:
        outcome = postselect(state, qubits, [0] * len(qubits))
    except ZeroProbabilityOutcomeException as e:
        raise ZeroProbabilityOutcomeException(
            "Filter annihilates the frame spectrum",
            context={"frame_index": frame_index},
        ) from e
    return outcome.state, outcome.probability


def conv_register_method(
    frame: EncodedFrame,
    filter_spec: FilterSpec,
    readout: ReadoutStrategy | None = None,
) -> tuple[FloatArray, ScaleLedger]:
    """
    Convolve with the filter held in a second register.

    The frame register is qubits 0..n-1 and the filter register n..2n-1.

    Returns:
        (classical output of length 2^n, ledger with P recorded)

    Raises:
        ZeroProbabilityOutcomeException: If the spectra do not overlap
        DimensionMismatchException: If the padded lengths differ
    """
    readout = readout or _EXACT
    _check_sizes(frame, filter_spec.padded_length)
    n = frame.num_qubits
    frame_qubits = list(range(n))
    filter_qubits = list(range(n, 2 * n))

    joint = frame.state.tensor(_filter_state(filter_spec))
    joint = apply_qft(joint, frame_qubits)
    joint = apply_qft(joint, filter_qubits)
    joint = apply_transversal_cnot(joint, frame_qubits, filter_qubits)
    product, probability = _postselect(joint, filter_qubits, frame.index)
    result = apply_iqft(product, frame_qubits)

    ledger = frame.ledger.with_filter(filter_spec.filter_norm, n).with_probability(
        probability
    )
    output = readout.read(result, (frame.index, 0)) * ledger.rescale_factor()
    logger.debug(f"Frame {frame.index}: register method, P = {probability:.6g}")
    return output, ledger


def _completion(values: npt.ArrayLike) -> ComplexArray:
    """[[D, S], [S, -D*]]: V(d) on a high ancilla, selected by the low index."""
    entries = np.asarray(values, dtype=np.complex128).reshape(-1)
    complement = np.sqrt(np.clip(1.0 - np.abs(entries) ** 2, 0.0, None))
    diagonal = np.diag(entries)
    off = np.diag(complement).astype(np.complex128)
    return np.block([[diagonal, off], [off, -diagonal.conj()]])


def _diagonal_entries(source: FilterSpec | npt.ArrayLike) -> ComplexArray:
    if isinstance(source, FilterSpec):
        entries = np.array(source.fourier_coeffs, dtype=np.complex128)
    else:
        entries = np.asarray(source, dtype=np.complex128).reshape(-1)
    size = entries.size
    if size < 2 or size != next_power_of_two(size):
        raise DimensionMismatchException(
            f"Diagonal length must be a power of two >= 2, got {size}"
        )
    largest = float(np.max(np.abs(entries)))
    if largest > 1.0 + MAGNITUDE_TOLERANCE:
        raise EntryMagnitudeExceedsOneException(
            f"Diagonal entry of magnitude {largest:.6g} cannot be block-encoded"
        )
    return entries


def build_diagonal_block_encoding(source: FilterSpec | npt.ArrayLike) -> BlockEncoding:
    """
    One-ancilla unitary completion of diag(d).

    Accepts a FilterSpec (its Fourier coefficients) or a raw diagonal. The
    ancilla is the highest qubit, so the 2x2 block of entry d sits on indices
    (i, 2^n + i).

    Raises:
        EntryMagnitudeExceedsOneException: If some |d| > 1
    """
    entries = _diagonal_entries(source)
    block = BlockEncoding(
        unitary=_completion(entries),
        ancilla_count=1,
        subnormalization=1.0,
        encoded_diagonal=entries,
        kind=EncodingKind.DIAGONAL,
    )
    logger.debug(f"Built {block!r}")
    return block


def build_oracle_block_encoding(source: FilterSpec | npt.ArrayLike) -> BlockEncoding:
    """
    Matrix-access oracle encoding of diag(d) with alpha = 2^n.

    System S = qubits 0..n-1, column register R = n..2n-1, ancilla = 2n.
    U = H_R . SWAP(R, S) . O_A . H_R where O_A rotates the ancilla so that
    its |0> amplitude is A[r][s] for register values (r, s).

    Raises:
        EntryMagnitudeExceedsOneException: If some |d| > 1
    """
    entries = _diagonal_entries(source)
    size = entries.size
    n = size.bit_length() - 1
    total = 2 * n + 1
    column = list(range(n, 2 * n))
    walsh = hadamard(size).astype(np.complex128) / np.sqrt(size)

    matrix = apply_matrix(np.eye(1 << total, dtype=np.complex128), total, walsh, column)
    matrix = _completion(np.diag(entries).reshape(-1)) @ matrix
    for r, s in zip(column, range(n), strict=True):
        matrix = apply_matrix(matrix, total, SWAP, [r, s])
    matrix = apply_matrix(matrix, total, walsh, column)

    block = BlockEncoding(
        unitary=matrix,
        ancilla_count=n + 1,
        subnormalization=float(size),
        encoded_diagonal=entries,
        kind=EncodingKind.ORACLE,
    )
    logger.debug(f"Built {block!r}")
    return block


def build_block_encoding(
    filter_spec: FilterSpec, kind: EncodingKind = EncodingKind.DIAGONAL
) -> BlockEncoding:
    """Build the requested encoding kind for a filter."""
    if kind == EncodingKind.ORACLE:
        return build_oracle_block_encoding(filter_spec)
    return build_diagonal_block_encoding(filter_spec)


def _encoding_shape(encoding: BlockEncoding | GateList, n: int) -> tuple[int, float]:
    """(ancilla count, subnormalization) of a dense or gate-level encoding."""
    if isinstance(encoding, BlockEncoding):
        return encoding.ancilla_count, encoding.subnormalization
    if encoding.num_qubits == n + 1:
        return 1, 1.0
    if encoding.num_qubits == 2 * n + 1:
        return n + 1, float(1 << n)
    raise DimensionMismatchException(
        f"Circuit on {encoding.num_qubits} qubits does not encode a {n}-qubit filter"
    )


def conv_block_method(
    frame: EncodedFrame,
    filter_spec: FilterSpec,
    encoding: BlockEncoding | GateList | None = None,
    readout: ReadoutStrategy | None = None,
) -> tuple[FloatArray, ScaleLedger]:
    """
    Convolve by applying a block-encoded filter diagonal.

    Args:
        frame: Encoded frame
        filter_spec: Filter at the frame's padded length
        encoding: Dense BlockEncoding, or a GateList simulated gate by gate;
            built as a diagonal encoding when omitted
        readout: Readout strategy (exact by default)

    Returns:
        (classical output of length 2^n, ledger with q and alpha recorded)

    Raises:
        ZeroProbabilityOutcomeException: If the filter annihilates the frame
        DimensionMismatchException: If sizes do not match
    """
    readout = readout or _EXACT
    _check_sizes(frame, filter_spec.padded_length)
    if encoding is None:
        encoding = build_diagonal_block_encoding(filter_spec)
    n = frame.num_qubits
    frame_qubits = list(range(n))
    ancillas, alpha = _encoding_shape(encoding, n)
    ancilla_qubits = list(range(n, n + ancillas))
    if isinstance(encoding, BlockEncoding) and encoding.system_qubits != n:
        raise DimensionMismatchException(
            f"Encoding acts on {encoding.system_qubits} qubits, frame on {n}",
            context={"frame_index": frame.index},
        )

    spectrum = apply_qft(frame.state, frame_qubits)
    extended = spectrum.tensor(QuantumState.zero_state(ancillas))
    if isinstance(encoding, GateList):
        extended = apply_gates(extended, encoding)
    else:
        extended = apply_unitary(extended, encoding.unitary, range(n + ancillas))
    product, probability = _postselect(extended, ancilla_qubits, frame.index)
    result = apply_iqft(product, frame_qubits)

    ledger = (
        frame.ledger.with_filter(filter_spec.filter_norm, n)
        .with_probability(probability)
        .with_subnormalization(alpha)
    )
    output = readout.read(result, (frame.index, 0)) * ledger.rescale_factor()
    logger.debug(
        f"Frame {frame.index}: block method, q = {probability:.6g}, alpha = {alpha}"
    )
    return output, ledger
