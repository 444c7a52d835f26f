"""
Dense state-vector simulation of the gates STQFT circuits need.

Qubit ordering is little-endian (qubit 0 is the least significant bit of the
basis index). Within a qubit subset passed to an operation, the first listed
qubit is the least significant bit of the subset index. Every operation
returns a new QuantumState; inputs are never modified.

The QFT uses the unitary DFT sign convention
F[k][j] = exp(-2*pi*i*j*k/M) / sqrt(M).
"""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import (
    DimensionMismatchException,
    IndexOverlapException,
    InvalidQubitIndexException,
    InvalidShotsException,
    NotUnitaryException,
    ZeroProbabilityOutcomeException,
)
from stqft.models.gate_list import Gate, GateKind, GateList
from stqft.models.quantum_state import PostselectOutcome, QuantumState

logger = get_logger(__name__)

UNITARY_TOLERANCE = 1e-10

# probabilities at or below this are treated as an empty branch
ZERO_PROBABILITY = 1e-30

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)
# qubits (control, target), control is the low bit of the 2-qubit index
CNOT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
)

ComplexArray = npt.NDArray[np.complex128]


def ry_matrix(angle: float) -> ComplexArray:
    """Rotation about Y: [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]]."""
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz_matrix(angle: float) -> ComplexArray:
    """Rotation about Z: diag(exp(-i a/2), exp(i a/2))."""
    return np.array(
        [[np.exp(-0.5j * angle), 0.0], [0.0, np.exp(0.5j * angle)]],
        dtype=np.complex128,
    )


def _check_qubits(num_qubits: int, qubits: Sequence[int]) -> list[int]:
    """Validate a qubit subset: in range and distinct."""
    checked = [int(q) for q in qubits]
    for qubit in checked:
        if not 0 <= qubit < num_qubits:
            raise InvalidQubitIndexException(
                f"Qubit {qubit} out of range for {num_qubits} qubits"
            )
    if len(set(checked)) != len(checked):
        raise InvalidQubitIndexException(f"Qubit indices repeat: {checked}")
    return checked


def _axes_for(num_qubits: int, qubits: Sequence[int]) -> list[int]:
    """
    Tensor axes holding the given qubits, most significant subset bit first.

    A C-ordered reshape to (2,)*n puts the most significant qubit on axis 0,
    so qubit q lives on axis n-1-q.
    """
    return [num_qubits - 1 - q for q in reversed(qubits)]


def apply_matrix(
    amplitudes: ComplexArray,
    num_qubits: int,
    matrix: ComplexArray,
    qubits: Sequence[int],
) -> ComplexArray:
    """
    Apply a 2^k x 2^k matrix to k qubits of a raw amplitude array.

    ``amplitudes`` may carry trailing batch dimensions (e.g. the columns of a
    matrix being composed); they are left untouched.

    Returns:
        A new amplitude array of the same shape
    """
    k = len(qubits)
    if k == 0:
        return np.array(amplitudes, dtype=np.complex128, copy=True)

    batch_shape = amplitudes.shape[1:]
    tensor = np.asarray(amplitudes, dtype=np.complex128).reshape(
        (2,) * num_qubits + batch_shape
    )
    axes = _axes_for(num_qubits, qubits)
    moved = np.moveaxis(tensor, axes, list(range(k)))
    moved_shape = moved.shape
    updated = (matrix @ moved.reshape(1 << k, -1)).reshape(moved_shape)
    restored = np.moveaxis(updated, list(range(k)), axes)
    return np.ascontiguousarray(restored).reshape(amplitudes.shape)


def _is_unitary(matrix: ComplexArray) -> bool:
    """max |U^dagger U - I| <= tolerance."""
    product = matrix.conj().T @ matrix
    return bool(
        np.max(np.abs(product - np.eye(matrix.shape[0]))) <= UNITARY_TOLERANCE
    )


def _check_unitary(matrix: npt.ArrayLike, dimension: int) -> ComplexArray:
    """Validate shape and unitarity of a gate matrix."""
    unitary = np.asarray(matrix, dtype=np.complex128)
    if unitary.shape != (dimension, dimension):
        raise DimensionMismatchException(
            f"Expected a {dimension}x{dimension} matrix, got {unitary.shape}"
        )
    if not _is_unitary(unitary):
        raise NotUnitaryException("Matrix is not unitary within tolerance")
    return unitary


def _fourier(
    state: QuantumState, qubit_subset: Sequence[int], inverse: bool
) -> QuantumState:
    """Unitary DFT (or its inverse) on a qubit subset, via numpy's FFT."""
    qubits = _check_qubits(state.num_qubits, qubit_subset)
    if not qubits:
        return state

    n, k = state.num_qubits, len(qubits)
    tensor = state.amplitudes.reshape((2,) * n)
    axes = _axes_for(n, qubits)
    last = list(range(n - k, n))
    moved = np.moveaxis(tensor, axes, last)
    moved_shape = moved.shape
    flat = moved.reshape(-1, 1 << k)
    if inverse:
        transformed = np.fft.ifft(flat, axis=-1, norm="ortho")
    else:
        transformed = np.fft.fft(flat, axis=-1, norm="ortho")
    restored = np.moveaxis(transformed.reshape(moved_shape), last, axes)
    return QuantumState(amplitudes=restored.reshape(-1), num_qubits=n)


def apply_qft(state: QuantumState, qubit_subset: Sequence[int]) -> QuantumState:
    """
    Quantum Fourier transform on an ordered qubit subset.

    Args:
        state: Input state
        qubit_subset: Qubits forming the transformed register, LSB first

    Returns:
        New state with the subset amplitudes DFT-transformed

    Raises:
        InvalidQubitIndexException: If a qubit is out of range or repeated
    """
    return _fourier(state, qubit_subset, inverse=False)


def apply_iqft(state: QuantumState, qubit_subset: Sequence[int]) -> QuantumState:
    """Inverse of apply_qft on the same subset."""
    return _fourier(state, qubit_subset, inverse=True)


def apply_unitary(
    state: QuantumState, unitary: npt.ArrayLike, qubit_subset: Sequence[int]
) -> QuantumState:
    """
    Apply an arbitrary unitary to a qubit subset.

    Raises:
        InvalidQubitIndexException: For bad qubit indices
        DimensionMismatchException: If the matrix does not fit the subset
        NotUnitaryException: If the matrix is not unitary
    """
    qubits = _check_qubits(state.num_qubits, qubit_subset)
    matrix = _check_unitary(unitary, 1 << len(qubits))
    amplitudes = apply_matrix(state.amplitudes, state.num_qubits, matrix, qubits)
    return QuantumState(amplitudes=amplitudes, num_qubits=state.num_qubits)


def apply_hadamard(state: QuantumState, qubit: int) -> QuantumState:
    """Hadamard on one qubit."""
    return apply_unitary(state, HADAMARD, [qubit])


def apply_cnot(state: QuantumState, control: int, target: int) -> QuantumState:
    """Single CNOT."""
    return apply_transversal_cnot(state, [control], [target])


def apply_swap(state: QuantumState, first: int, second: int) -> QuantumState:
    """Exchange two qubits."""
    _check_qubits(state.num_qubits, [first, second])
    return apply_unitary(state, SWAP, [first, second])


def apply_transversal_cnot(
    state: QuantumState, controls: Sequence[int], targets: Sequence[int]
) -> QuantumState:
    """
    CNOT from controls[k] to targets[k] for every k.

    Maps |i>_c |j>_t to |i>_c |j xor i>_t; a pure permutation of amplitudes.

    Raises:
        DimensionMismatchException: If the lists differ in length
        IndexOverlapException: If a qubit is both control and target
        InvalidQubitIndexException: For bad qubit indices
    """
    if len(controls) != len(targets):
        raise DimensionMismatchException(
            f"{len(controls)} controls but {len(targets)} targets"
        )
    if set(controls) & set(targets):
        raise IndexOverlapException(
            f"Controls {list(controls)} and targets {list(targets)} overlap"
        )
    _check_qubits(state.num_qubits, [*controls, *targets])

    indices = np.arange(state.dimension)
    mapped = indices.copy()
    for control, target in zip(controls, targets, strict=True):
        mapped ^= ((indices >> control) & 1) << target

    amplitudes = np.empty_like(state.amplitudes)
    amplitudes[mapped] = state.amplitudes
    return QuantumState(amplitudes=amplitudes, num_qubits=state.num_qubits)


def apply_controlled_unitary(
    state: QuantumState, control: int, unitary: npt.ArrayLike
) -> QuantumState:
    """
    Apply ``unitary`` to every qubit except ``control`` when control is |1>.

    The matrix acts on the remaining qubits in ascending order, LSB first.

    Raises:
        InvalidQubitIndexException: For a bad control index
        DimensionMismatchException: If the matrix does not fit
        NotUnitaryException: If the matrix is not unitary
    """
    n = state.num_qubits
    _check_qubits(n, [control])
    if n < 2:
        raise DimensionMismatchException("A controlled gate needs a target register")
    matrix = _check_unitary(unitary, 1 << (n - 1))

    tensor = state.amplitudes.reshape((2,) * n).copy()
    axis = n - 1 - control
    selector: list[slice | int] = [slice(None)] * n
    selector[axis] = 1
    branch = tensor[tuple(selector)]
    tensor[tuple(selector)] = (matrix @ branch.reshape(-1)).reshape(branch.shape)
    return QuantumState(amplitudes=tensor.reshape(-1), num_qubits=n)


def _normalize_bits(bitstring: str | Sequence[int], width: int) -> list[int]:
    """Accept "010"-style strings or int sequences; position k is subset qubit k."""
    bits = [int(b) for b in bitstring]
    if len(bits) != width:
        raise DimensionMismatchException(
            f"Outcome has {len(bits)} bits for {width} qubits"
        )
    if any(b not in (0, 1) for b in bits):
        raise DimensionMismatchException(f"Outcome bits must be 0/1, got {bits}")
    return bits


def postselect(
    state: QuantumState,
    qubit_subset: Sequence[int],
    bitstring: str | Sequence[int],
) -> PostselectOutcome:
    """
    Condition the state on measuring ``bitstring`` on ``qubit_subset``.

    The conditional amplitudes are sliced out analytically and renormalized;
    no sampling is involved. bitstring[k] is the outcome for qubit_subset[k].

    Returns:
        The renormalized state on the remaining qubits (ascending order,
        re-indexed from 0) and the outcome probability

    Raises:
        ZeroProbabilityOutcomeException: If the outcome cannot occur
        InvalidQubitIndexException: For bad indices or when no qubit would remain
    """
    n = state.num_qubits
    qubits = _check_qubits(n, qubit_subset)
    bits = _normalize_bits(bitstring, len(qubits))
    if len(qubits) >= n:
        raise InvalidQubitIndexException(
            "Postselection must leave at least one unmeasured qubit"
        )

    tensor = state.amplitudes.reshape((2,) * n)
    selector: list[slice | int] = [slice(None)] * n
    for qubit, bit in zip(qubits, bits, strict=True):
        selector[n - 1 - qubit] = bit
    selected = tensor[tuple(selector)].reshape(-1)

    probability = float(np.sum(np.abs(selected) ** 2))
    if probability <= ZERO_PROBABILITY:
        raise ZeroProbabilityOutcomeException(
            f"Outcome {''.join(map(str, bits))} on qubits {qubits} has zero "
            "probability"
        )

    logger.debug(
        f"Postselected qubits {qubits} = {bits} with probability {probability:.6g}"
    )
    collapsed = QuantumState(
        amplitudes=selected / np.sqrt(probability),
        num_qubits=n - len(qubits),
    )
    return PostselectOutcome(state=collapsed, probability=probability)


def branch_probability(
    state: QuantumState,
    qubit_subset: Sequence[int],
    bitstring: str | Sequence[int],
) -> float:
    """Probability of an outcome without collapsing; zero is allowed."""
    try:
        return postselect(state, qubit_subset, bitstring).probability
    except ZeroProbabilityOutcomeException:
        return 0.0


def gate_matrix(gate: Gate) -> ComplexArray:
    """Matrix of a gate over its own qubits, first listed qubit as LSB."""
    if gate.kind == GateKind.RY:
        assert gate.angle is not None
        return ry_matrix(gate.angle)
    if gate.kind == GateKind.RZ:
        assert gate.angle is not None
        return rz_matrix(gate.angle)
    if gate.kind == GateKind.CNOT:
        return CNOT
    if gate.kind == GateKind.H:
        return HADAMARD
    return SWAP


def apply_gate(state: QuantumState, gate: Gate) -> QuantumState:
    """Apply one gate from a GateList."""
    if gate.kind == GateKind.CNOT:
        return apply_cnot(state, gate.qubits[0], gate.qubits[1])
    return apply_unitary(state, gate_matrix(gate), gate.qubits)


def apply_gates(state: QuantumState, gate_list: GateList) -> QuantumState:
    """
    Simulate a gate list gate by gate.

    Raises:
        DimensionMismatchException: If the circuit width differs from the state
    """
    if gate_list.num_qubits != state.num_qubits:
        raise DimensionMismatchException(
            f"Circuit acts on {gate_list.num_qubits} qubits, "
            f"state has {state.num_qubits}"
        )
    for gate in gate_list:
        state = apply_gate(state, gate)
    return state


def exact_readout(state: QuantumState) -> ComplexArray:
    """Read every amplitude directly (a simulator privilege)."""
    return np.array(state.amplitudes, copy=True)


def sample_readout(
    state: QuantumState,
    shots: int,
    rng_seed: int | Sequence[int] | None = None,
) -> npt.NDArray[np.int64]:
    """
    Measure the whole register ``shots`` times.

    Returns:
        Counts per basis index (a multinomial draw), deterministic for a
        fixed seed

    Raises:
        InvalidShotsException: If shots < 1
    """
    if shots < 1:
        raise InvalidShotsException(f"Shots must be >= 1, got {shots}")
    probabilities = state.probabilities()
    probabilities = probabilities / probabilities.sum()
    rng = np.random.default_rng(rng_seed)
    return rng.multinomial(shots, probabilities).astype(np.int64)
