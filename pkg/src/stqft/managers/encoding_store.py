"""
Block-encoding persistence and caching.

BlockEncoding files are flat little-endian binaries: an ``<u8`` unitary
dimension, an ``<u8`` ancilla count and an ``<f8`` subnormalization, followed
by the unitary as row-major ``<c16`` values. GateList files are text: a
``QUBITS n`` header, then one ``GATE qubit(s) [angle]`` line per gate.

Filters used for streaming are fixed for a whole run, so their encodings are
built once, kept in memory and optionally written to a cache directory.
"""

import hashlib
import threading
from pathlib import Path

import numpy as np

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import (
    GateListFormatException,
    MalformedFileException,
    SignalFileException,
)
from stqft.models.block_encoding import BlockEncoding, EncodingKind
from stqft.models.filter_spec import FilterSpec
from stqft.models.gate_list import Gate, GateKind, GateList
from stqft.services.fable import compose_gates, fable_decompose
from stqft.services.qconv import build_block_encoding

logger = get_logger(__name__)

HEADER_DTYPE = np.dtype([("dimension", "<u8"), ("ancillas", "<u8"), ("alpha", "<f8")])
UNITARY_DTYPE = np.dtype("<c16")


def encode_block(block: BlockEncoding) -> bytes:
    """Binary form of a block encoding."""
    header = np.array(
        [(block.unitary.shape[0], block.ancilla_count, block.subnormalization)],
        dtype=HEADER_DTYPE,
    )
    body = np.ascontiguousarray(block.unitary, dtype=UNITARY_DTYPE)
    return header.tobytes() + body.tobytes()


def decode_block(data: bytes) -> BlockEncoding:
    """
    Rebuild a block encoding from its binary form.

    The kind follows from the ancilla count (one ancilla for the diagonal
    completion, n + 1 for the oracle form); the encoded diagonal is read back
    from the top-left block.

    Raises:
        MalformedFileException: For truncated or inconsistent data
    """
    if len(data) < HEADER_DTYPE.itemsize:
        raise MalformedFileException("Block encoding header is truncated")
    header = np.frombuffer(data[: HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    dimension = int(header["dimension"])
    ancillas = int(header["ancillas"])
    alpha = float(header["alpha"])

    expected = HEADER_DTYPE.itemsize + dimension * dimension * UNITARY_DTYPE.itemsize
    if len(data) != expected:
        raise MalformedFileException(
            f"Block encoding of dimension {dimension} needs {expected} bytes, "
            f"got {len(data)}"
        )
    if ancillas < 1 or dimension >> ancillas < 2:
        raise MalformedFileException(
            f"Dimension {dimension} with {ancillas} ancillas leaves no system register"
        )
    unitary = np.frombuffer(data[HEADER_DTYPE.itemsize :], dtype=UNITARY_DTYPE)
    unitary = unitary.reshape(dimension, dimension).astype(np.complex128)

    system = dimension >> ancillas
    diagonal = np.diag(unitary[:system, :system]) * alpha
    kind = EncodingKind.DIAGONAL if ancillas == 1 else EncodingKind.ORACLE
    return BlockEncoding(
        unitary=unitary,
        ancilla_count=ancillas,
        subnormalization=alpha,
        encoded_diagonal=diagonal,
        kind=kind,
    )


def save_block_encoding(block: BlockEncoding, path: str | Path) -> None:
    """Write a block encoding file."""
    try:
        Path(path).write_bytes(encode_block(block))
    except OSError as e:
        raise SignalFileException(f"Cannot write {path}: {e}") from e
    logger.debug(f"Saved {block!r} to {path}")


def load_block_encoding(path: str | Path) -> BlockEncoding:
    """Read a block encoding file."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise SignalFileException(f"Cannot read {path}: {e}") from e
    return decode_block(data)


def format_gate_list(gate_list: GateList) -> str:
    """Text form of a gate list."""
    lines = [f"QUBITS {gate_list.num_qubits}"]
    lines.extend(gate.to_line() for gate in gate_list)
    return "\n".join(lines) + "\n"


def _parse_gate(parts: list[str], line_number: int) -> Gate:
    try:
        kind = GateKind(parts[0])
    except ValueError as e:
        raise GateListFormatException(
            f"line {line_number}: unknown gate '{parts[0]}'"
        ) from e
    expected = kind.arity + (1 if kind.is_rotation else 0)
    if len(parts) - 1 != expected:
        raise GateListFormatException(
            f"line {line_number}: {kind.value} takes {expected} argument(s)"
        )
    try:
        qubits = tuple(int(token) for token in parts[1 : 1 + kind.arity])
        angle = float(parts[-1]) if kind.is_rotation else None
        return Gate(kind, qubits, angle)
    except ValueError as e:
        raise GateListFormatException(f"line {line_number}: {e}") from e


def parse_gate_list(text: str) -> GateList:
    """
    Parse the text form of a gate list.

    Blank lines and lines starting with ``#`` are ignored.

    Raises:
        GateListFormatException: For a missing header or bad gate lines
    """
    rows = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows or rows[0][1][0] != "QUBITS" or len(rows[0][1]) != 2:
        raise GateListFormatException("Gate list must start with 'QUBITS n'")
    try:
        num_qubits = int(rows[0][1][1])
    except ValueError as e:
        raise GateListFormatException(f"Bad qubit count: {rows[0][1][1]}") from e

    gate_list = GateList(num_qubits=num_qubits)
    for number, parts in rows[1:]:
        gate = _parse_gate(parts, number)
        try:
            gate_list.append(gate)
        except ValueError as e:
            raise GateListFormatException(f"line {number}: {e}") from e
    return gate_list


def save_gate_list(gate_list: GateList, path: str | Path) -> None:
    """Write a gate list file."""
    try:
        Path(path).write_text(format_gate_list(gate_list), encoding="utf-8")
    except OSError as e:
        raise SignalFileException(f"Cannot write {path}: {e}") from e


def load_gate_list(path: str | Path) -> GateList:
    """Read a gate list file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SignalFileException(f"Cannot read {path}: {e}") from e
    return parse_gate_list(text)


class BlockEncodingCache:
    """
    Builds each filter's block encoding (and gate list) once.

    Entries are keyed by the filter's padded length and taps plus the
    encoding kind. With a cache directory, encodings and gate lists are also
    read from and written to disk.
    """

    def __init__(self, cache_dir: str | Path | None = None):
        """
        Initialize the cache.

        Args:
            cache_dir: Optional directory for persisted encodings
        """
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self._blocks: dict[tuple[object, ...], BlockEncoding] = {}
        self._circuits: dict[tuple[object, ...], GateList] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

        self.logger = get_logger(__name__)

    def _stem(self, filter_spec: FilterSpec, kind: EncodingKind) -> str:
        digest = hashlib.sha256(filter_spec.taps.tobytes()).hexdigest()[:16]
        return f"{kind.value}_{filter_spec.padded_length}_{digest}"

    def get_block(
        self, filter_spec: FilterSpec, kind: EncodingKind = EncodingKind.DIAGONAL
    ) -> BlockEncoding:
        """The filter's block encoding, built or loaded on first use."""
        key = (*filter_spec.cache_key(), kind)
        with self._lock:
            if key in self._blocks:
                self.hits += 1
                return self._blocks[key]
            self.misses += 1
            block = self._load_or_build(filter_spec, kind)
            self._blocks[key] = block
            return block

    def _load_or_build(
        self, filter_spec: FilterSpec, kind: EncodingKind
    ) -> BlockEncoding:
        path = None
        if self.cache_dir is not None:
            path = self.cache_dir / f"{self._stem(filter_spec, kind)}.bin"
            if path.exists():
                self.logger.info(f"Loaded block encoding from {path}")
                return load_block_encoding(path)
        block = build_block_encoding(filter_spec, kind)
        if path is not None:
            save_block_encoding(block, path)
        return block

    def get_gate_list(
        self,
        filter_spec: FilterSpec,
        kind: EncodingKind = EncodingKind.DIAGONAL,
        threshold: float = 0.0,
    ) -> GateList:
        """The FABLE circuit of the filter's encoding at a threshold."""
        block = self.get_block(filter_spec, kind)
        key = (*filter_spec.cache_key(), kind, threshold)
        with self._lock:
            if key in self._circuits:
                self.hits += 1
                return self._circuits[key]
            self.misses += 1
            gate_list = self._load_or_decompose(filter_spec, block, threshold)
            self._circuits[key] = gate_list
            return gate_list

    def _load_or_decompose(
        self, filter_spec: FilterSpec, block: BlockEncoding, threshold: float
    ) -> GateList:
        path = None
        if self.cache_dir is not None:
            stem = self._stem(filter_spec, block.kind)
            path = self.cache_dir / f"{stem}_{threshold!r}.gates"
            if path.exists():
                gate_list = load_gate_list(path)
                if gate_list.num_qubits == block.total_qubits:
                    error = np.max(np.abs(compose_gates(gate_list) - block.unitary))
                    gate_list.reconstruction_error = float(error)
                    self.logger.info(f"Loaded gate list from {path}")
                    return gate_list
                self.logger.warning(
                    f"Ignoring {path}: {gate_list.num_qubits} qubits, "
                    f"expected {block.total_qubits}"
                )
        gate_list = fable_decompose(block, threshold)
        if path is not None:
            save_gate_list(gate_list, path)
        return gate_list

    def clear(self) -> None:
        """Drop in-memory entries (files stay)."""
        with self._lock:
            self._blocks.clear()
            self._circuits.clear()
