"""
Reconstruction of a continuous signal from per-frame convolution outputs.

Quantum overlap-add (QOLA) encodes two classical frames into one register
[a; b], routes b to its overlap position with a controlled permutation and
adds the halves with a Hadamard on the ancilla. The |0> branch of the ancilla
holds SUM = a + shift(b), the |1> branch DIFFERENCE = a - shift(b).

Overlap-save instead convolves overlapping blocks circularly and drops the
wrapped head of each block.
"""

from collections.abc import Callable, Sequence

import numpy as np
import numpy.typing as npt

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import (
    AllZeroPairException,
    DimensionMismatchException,
    EmptyInputException,
    FilterLongerThanBlockException,
    InvalidOverlapException,
    OverlapTooLargeException,
    ZeroProbabilityOutcomeException,
)
from stqft.dsp.framing import next_power_of_two, pad_and_encode
from stqft.models.filter_spec import FilterSpec
from stqft.models.frame import EncodedFrame, Frame
from stqft.models.qola import PermutationSpec, QolaResult
from stqft.models.quantum_state import QuantumState
from stqft.models.scale_ledger import ScaleLedger
from stqft.services.qconv import conv_register_method, make_filter
from stqft.services.readout import ExactReadout, ReadoutStrategy
from stqft.simulator.statevector import (
    apply_cnot,
    apply_controlled_unitary,
    apply_hadamard,
    postselect,
)

logger = get_logger(__name__)

FloatArray = npt.NDArray[np.float64]
ConvolveFn = Callable[[EncodedFrame, FilterSpec], tuple[FloatArray, ScaleLedger]]

_EXACT = ExactReadout()


def build_uperm(frame_length: int, overlap: int) -> PermutationSpec:
    """
    Routing matrix for a pair of frames of length r overlapping by l.

    y[0:r-l] = x[0:r-l], y[r-l:2r-l] = x[r:2r], y[2r-l:2r] = x[r-l:r], so
    the later frame (held in x[r:2r]) lands r - l places after the earlier.

    Raises:
        InvalidOverlapException: Unless 0 <= l < r
    """
    r = frame_length
    if not 0 <= overlap < r:
        raise InvalidOverlapException(
            f"Overlap must satisfy 0 <= l < r={r}, got {overlap}"
        )
    shift = r - overlap
    source = np.concatenate(
        [np.arange(0, shift), np.arange(r, 2 * r), np.arange(shift, r)]
    )
    matrix = np.zeros((2 * r, 2 * r))
    matrix[np.arange(2 * r), source] = 1.0
    return PermutationSpec(frame_length=r, overlap=overlap, matrix=matrix)


def _branch(
    state: QuantumState, bit: int, readout: ReadoutStrategy, key: Sequence[int]
) -> tuple[FloatArray, float]:
    """Read one ancilla branch; amplitudes are still unit-normalized."""
    ancilla = state.num_qubits - 1
    outcome = postselect(state, [ancilla], [bit])
    return readout.read(outcome.state, key), outcome.probability


def qola_pair(
    frame_a: npt.ArrayLike,
    frame_b: npt.ArrayLike,
    overlap: int,
    readout: ReadoutStrategy | None = None,
    key: Sequence[int] = (),
) -> QolaResult:
    """
    Overlap-add two frames of length r with a QOLA circuit.

    Frames of non power-of-two length are zero-padded and the overlap grows
    by the padding, so the classical result is unchanged.

    Args:
        frame_a: Earlier frame
        frame_b: Later frame, shifted right by r - l
        overlap: l, number of overlapping samples
        readout: Readout of the SUM branch (exact by default)
        key: Run identifier for sampled readouts

    Returns:
        QolaResult with SUM and DIFFERENCE trimmed to 2r samples

    Raises:
        AllZeroPairException: If both frames are zero
        ZeroProbabilityOutcomeException: If SUM cancels to zero
        InvalidOverlapException: Unless 0 <= l < r
    """
    readout = readout or _EXACT
    a = np.asarray(frame_a, dtype=np.float64).reshape(-1)
    b = np.asarray(frame_b, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise DimensionMismatchException(
            f"QOLA frames differ in length: {a.size} and {b.size}"
        )
    r = a.size
    if r == 0:
        raise EmptyInputException("QOLA frames must not be empty")
    if not 0 <= overlap < r:
        raise InvalidOverlapException(
            f"Overlap must satisfy 0 <= l < r={r}, got {overlap}"
        )
    if not np.any(a) and not np.any(b):
        raise AllZeroPairException("Both QOLA frames are zero")

    size = next_power_of_two(r)
    padded_overlap = overlap + (size - r)
    joint = np.zeros(2 * size)
    joint[:r] = a
    joint[size : size + r] = b
    pair_norm = float(np.linalg.norm(joint))

    m = (2 * size).bit_length() - 1
    ancilla = m
    state = QuantumState.from_amplitudes(joint / pair_norm).tensor(
        QuantumState.zero_state(1)
    )
    state = apply_cnot(state, m - 1, ancilla)
    permutation = build_uperm(size, padded_overlap)
    state = apply_controlled_unitary(state, ancilla, permutation.matrix)
    state = apply_hadamard(state, ancilla)

    try:
        sum_amplitudes, probability = _branch(state, 0, readout, key)
    except ZeroProbabilityOutcomeException as e:
        raise ZeroProbabilityOutcomeException(
            "QOLA frames cancel exactly", context={"shift": r - overlap}
        ) from e
    sum_vector = sum_amplitudes * np.sqrt(2.0 * probability) * pair_norm

    # the DIFFERENCE branch is diagnostic only and always read exactly
    try:
        difference_amplitudes, difference_probability = _branch(state, 1, _EXACT, key)
        difference = difference_amplitudes * np.sqrt(2.0 * difference_probability)
        difference = difference * pair_norm
    except ZeroProbabilityOutcomeException:
        difference, difference_probability = np.zeros(2 * size), 0.0

    logger.debug(
        f"QOLA pair r={r}, l={overlap}: P(SUM) = {probability:.6g}, "
        f"P(DIFFERENCE) = {difference_probability:.6g}"
    )
    return QolaResult(
        sum_vector=sum_vector[: 2 * r],
        success_probability=probability,
        pair_norm=pair_norm,
        difference_vector=difference[: 2 * r],
        difference_probability=difference_probability,
        shift=r - overlap,
    )


def qola_stream(
    frames: Sequence[npt.ArrayLike],
    hop: int,
    window_length: int,
    readout: ReadoutStrategy | None = None,
    on_pair: Callable[[int, QolaResult], None] | None = None,
) -> FloatArray:
    """
    Overlap-add a sequence of equal-length convolution outputs.

    A running window of r samples starting at frame k's offset is merged with
    frame k+1 by one QOLA pair (l = r - hop). The first hop samples of the
    sum are final; the next r samples become the new window. Pairs in which
    either side is zero are added classically.

    Args:
        frames: Convolution outputs of length r, in frame order
        hop: Offset between consecutive frames
        window_length: w_l of the analysis windows (hop <= w_l <= r)
        readout: Readout of every QOLA pair (exact by default)
        on_pair: Called with (index of the later frame, result) per quantum pair

    Returns:
        Vector of length (K - 1) * hop + r

    Raises:
        OverlapTooLargeException: If l = r - hop exceeds hop
    """
    if len(frames) == 0:
        raise EmptyInputException("Overlap-add needs at least one frame")
    vectors = [np.asarray(frame, dtype=np.float64).reshape(-1) for frame in frames]
    r = vectors[0].size
    if any(vector.size != r for vector in vectors):
        raise DimensionMismatchException("QOLA frames must share one length")
    if not 1 <= hop <= window_length <= r:
        raise DimensionMismatchException(
            f"Need 1 <= hop <= w_l <= r, got hop={hop}, w_l={window_length}, r={r}"
        )
    overlap = r - hop
    if overlap > hop:
        raise OverlapTooLargeException(
            f"Overlap {overlap} exceeds hop {hop}: frame tails would reach past "
            "the next frame"
        )

    emitted: list[FloatArray] = []
    window = vectors[0]
    for k in range(1, len(vectors)):
        incoming = vectors[k]
        if np.any(window) and np.any(incoming):
            try:
                result = qola_pair(window, incoming, overlap, readout, key=(k, 1))
                merged = result.sum_vector
                if on_pair is not None:
                    on_pair(k, result)
            except ZeroProbabilityOutcomeException:
                logger.warning(f"Frames {k - 1} and {k} cancel; emitting zeros")
                merged = np.zeros(2 * r)
        else:
            merged = np.zeros(2 * r)
            merged[:r] += window
            merged[hop : hop + r] += incoming
        emitted.append(merged[:hop])
        window = merged[hop : hop + r]
    emitted.append(window)

    output = np.concatenate(emitted)
    logger.info(f"Overlap-added {len(vectors)} frames into {output.size} samples")
    return output


def overlap_save_stream(
    signal: npt.ArrayLike,
    taps: npt.ArrayLike,
    window_length: int,
    convolve: ConvolveFn | None = None,
    on_block: Callable[[int, ScaleLedger | None], None] | None = None,
) -> FloatArray:
    """
    Filter a signal by overlap-save over circular quantum convolutions.

    Blocks have B = 2^n >= w_l samples and overlap by f_l - 1; each is
    encoded without linear-expansion padding, so its convolution wraps, and
    the first f_l - 1 outputs are dropped.

    Args:
        signal: Samples to filter
        taps: Filter taps
        window_length: w_l, rounded up to the block length B
        convolve: Frame convolution (register method with exact readout by
            default)
        on_block: Called with (block index, ledger or None for zero blocks)

    Returns:
        Full linear convolution, length |signal| + f_l - 1

    Raises:
        FilterLongerThanBlockException: If f_l >= B
    """
    samples = np.asarray(signal, dtype=np.float64).reshape(-1)
    filter_taps = np.asarray(taps, dtype=np.float64).reshape(-1)
    if samples.size == 0 or filter_taps.size == 0:
        raise EmptyInputException("Overlap-save needs a signal and filter taps")
    block = next_power_of_two(window_length)
    if filter_taps.size >= block:
        raise FilterLongerThanBlockException(
            f"Filter of {filter_taps.size} taps needs a block longer than {block}"
        )
    convolve = convolve or conv_register_method
    filter_spec = make_filter(filter_taps, block, padded_length=block)

    overlap = filter_taps.size - 1
    step = block - overlap
    total = samples.size + overlap
    padded = np.concatenate([np.zeros(overlap), samples, np.zeros(step + overlap)])

    pieces: list[FloatArray] = []
    for index, start in enumerate(range(0, total, step)):
        frame = Frame(
            samples=padded[start : start + block], index=index, window_length=block
        )
        if frame.is_zero:
            pieces.append(np.zeros(step))
            if on_block is not None:
                on_block(index, None)
            continue
        encoded = pad_and_encode(frame, 1)
        output, ledger = convolve(encoded, filter_spec)
        pieces.append(output[overlap:])
        if on_block is not None:
            on_block(index, ledger)

    result = np.concatenate(pieces)[:total]
    logger.info(
        f"Overlap-save filtered {samples.size} samples in {len(pieces)} blocks "
        f"of {block}"
    )
    return result
