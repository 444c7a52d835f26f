"""
FABLE-style gate decomposition of filter block encodings.

Every encoding this project builds is, on the ancilla, a uniformly controlled
2x2 block

    V(d) = [[d, sqrt(1 - |d|^2)], [sqrt(1 - |d|^2), -conj(d)]]

selected by a control index. With theta = 2*arccos|d| and phi = arg d,

    V(d) = Rz(-phi) Ry(theta) Ry(-pi/2) H Rz(-phi)

so one encoding becomes two multiplexed Z rotations, one multiplexed Y
rotation and two fixed single-qubit gates. A multiplexed rotation over k
controls is 2^k rotations on the target interleaved with a Gray-code CNOT
ladder; the rotation angles are the Walsh-Hadamard transform of the target
angles. Rotations below the compression threshold are dropped, and CNOTs left
adjacent by a dropped rotation are merged by parity.
"""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy.linalg import hadamard

from stqft.config.logger_config import get_logger
from stqft.models.block_encoding import BlockEncoding, EncodingKind
from stqft.models.gate_list import Gate, GateKind, GateList
from stqft.simulator.statevector import apply_matrix, gate_matrix

logger = get_logger(__name__)

ComplexArray = npt.NDArray[np.complex128]
FloatArray = npt.NDArray[np.float64]

# composition error expected from rounding alone
EXACT_TOLERANCE = 1e-8


def gray_code(index: int) -> int:
    """Reflected binary Gray code of an index."""
    return index ^ (index >> 1)


def multiplexed_angles(angles: npt.ArrayLike) -> FloatArray:
    """
    Rotation angles of a Gray-code multiplexor.

    Entry i is the angle of the i-th rotation in the circuit; composing the
    ladder applies angles[x] to the target when the controls hold x.
    """
    targets = np.asarray(angles, dtype=np.float64).reshape(-1)
    size = targets.size
    if size == 1:
        return targets.copy()
    transformed = hadamard(size).astype(np.float64) @ targets / size
    order = [gray_code(i) for i in range(size)]
    return transformed[order]


def multiplexed_rotation(
    kind: GateKind,
    angles: npt.ArrayLike,
    controls: Sequence[int],
    target: int,
    threshold: float = 0.0,
) -> list[Gate]:
    """
    Uniformly controlled rotation on ``target``.

    Args:
        kind: GateKind.RY or GateKind.RZ
        angles: 2^len(controls) target angles, indexed by the control value
            (controls[0] is the least significant bit)
        controls: Control qubits
        target: Rotated qubit
        threshold: Rotations with |angle| < threshold are dropped

    Returns:
        Gates in application order
    """
    rotation_angles = multiplexed_angles(angles)
    size = rotation_angles.size
    if size != 1 << len(controls):
        raise ValueError(
            f"{len(controls)} controls need {1 << len(controls)} angles, got {size}"
        )

    gates: list[Gate] = []
    pending = 0  # parity mask of CNOTs not yet emitted

    def flush() -> None:
        nonlocal pending
        for bit, control in enumerate(controls):
            if pending >> bit & 1:
                gates.append(Gate.cnot(control, target))
        pending = 0

    for i, angle in enumerate(rotation_angles):
        if abs(angle) >= threshold:
            flush()
            gates.append(Gate(kind, (target,), float(angle)))
        if size > 1:
            pending ^= gray_code(i) ^ gray_code((i + 1) % size)
    flush()
    return gates


def _ancilla_circuit(
    values: npt.ArrayLike,
    controls: Sequence[int],
    ancilla: int,
    threshold: float,
) -> list[Gate]:
    """Gates of the uniformly controlled V(values[x]) on the ancilla."""
    entries = np.asarray(values, dtype=np.complex128).reshape(-1)
    magnitudes = np.clip(np.abs(entries), 0.0, 1.0)
    thetas = 2.0 * np.arccos(magnitudes)
    phis = np.angle(entries)

    gates = multiplexed_rotation(GateKind.RZ, -phis, controls, ancilla, threshold)
    gates.append(Gate.h(ancilla))
    if np.pi / 2 >= threshold:
        gates.append(Gate.ry(ancilla, -np.pi / 2))
    gates.extend(
        multiplexed_rotation(GateKind.RY, thetas, controls, ancilla, threshold)
    )
    gates.extend(multiplexed_rotation(GateKind.RZ, -phis, controls, ancilla, threshold))
    return gates


def compose_gates(gate_list: GateList) -> ComplexArray:
    """Dense unitary of a gate list (the last gate is the leftmost factor)."""
    dimension = 1 << gate_list.num_qubits
    matrix = np.eye(dimension, dtype=np.complex128)
    for gate in gate_list:
        matrix = apply_matrix(
            matrix, gate_list.num_qubits, gate_matrix(gate), gate.qubits
        )
    return matrix


def _finish(gate_list: GateList, block: BlockEncoding, threshold: float) -> GateList:
    composed = compose_gates(gate_list)
    error = float(np.max(np.abs(composed - block.unitary)))
    gate_list.reconstruction_error = error
    rotations = len(gate_list.rotations())
    if error > EXACT_TOLERANCE:
        logger.warning(
            f"Compressed circuit deviates from the block encoding by {error:.3g} "
            f"(threshold {threshold}, {rotations} rotations kept)"
        )
    else:
        logger.debug(
            f"Decomposed {block!r} into {len(gate_list)} gates "
            f"({rotations} rotations), error {error:.3g}"
        )
    return gate_list


def fable_decompose_diagonal(
    block: BlockEncoding, compression_threshold: float = 0.0
) -> GateList:
    """
    Gate circuit of a one-ancilla diagonal block encoding.

    System qubits 0..n-1 control; the ancilla is qubit n.

    Args:
        block: Encoding built by build_diagonal_block_encoding
        compression_threshold: Rotations with |angle| below it are dropped

    Returns:
        GateList with reconstruction_error = max |composed - block.unitary|
    """
    if compression_threshold < 0:
        raise ValueError("Compression threshold must be >= 0")
    if block.kind != EncodingKind.DIAGONAL:
        raise ValueError(f"Expected a diagonal encoding, got {block.kind.value}")

    n = block.system_qubits
    gate_list = GateList(num_qubits=n + 1)
    gate_list.extend(
        _ancilla_circuit(
            block.encoded_diagonal, list(range(n)), n, compression_threshold
        )
    )
    return _finish(gate_list, block, compression_threshold)


def fable_decompose_oracle(
    block: BlockEncoding, compression_threshold: float = 0.0
) -> GateList:
    """
    Gate circuit of the matrix-access oracle encoding.

    H on the column register, the entry oracle (a multiplexed rotation of the
    ancilla controlled by both registers), register swap, H again.
    """
    if compression_threshold < 0:
        raise ValueError("Compression threshold must be >= 0")
    if block.kind != EncodingKind.ORACLE:
        raise ValueError(f"Expected an oracle encoding, got {block.kind.value}")

    n = block.system_qubits
    size = block.system_dimension
    system = list(range(n))
    column = list(range(n, 2 * n))
    ancilla = 2 * n
    # entry x = r * 2^n + s of the oracle holds A[r][s]
    entries = np.diag(block.encoded_diagonal).reshape(-1)

    gate_list = GateList(num_qubits=2 * n + 1)
    gate_list.extend([Gate.h(q) for q in column])
    gate_list.extend(
        _ancilla_circuit(entries, system + column, ancilla, compression_threshold)
    )
    gate_list.extend([Gate.swap(r, s) for r, s in zip(column, system, strict=True)])
    gate_list.extend([Gate.h(q) for q in column])
    logger.debug(f"Oracle circuit over {size}x{size} entries on {2 * n + 1} qubits")
    return _finish(gate_list, block, compression_threshold)


def fable_decompose(
    block: BlockEncoding, compression_threshold: float = 0.0
) -> GateList:
    """Decompose either encoding kind."""
    if block.kind == EncodingKind.ORACLE:
        return fable_decompose_oracle(block, compression_threshold)
    return fable_decompose_diagonal(block, compression_threshold)
