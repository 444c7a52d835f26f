"""
Gate list model.

An ordered circuit over the small gate set the FABLE decomposition emits:
Y and Z rotations, CNOT, Hadamard and SWAP.
"""

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum


class GateKind(Enum):
    """Supported gate types (values are the serialized mnemonics)."""

    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    H = "H"
    SWAP = "SWAP"

    @property
    def is_rotation(self) -> bool:
        """True for the parameterized rotations."""
        return self in (GateKind.RY, GateKind.RZ)

    @property
    def arity(self) -> int:
        """Number of qubits the gate touches."""
        return 2 if self in (GateKind.CNOT, GateKind.SWAP) else 1


@dataclass(frozen=True)
class Gate:
    """A single gate; for CNOT the qubits are (control, target)."""

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        """Validate arity and angle presence."""
        if len(self.qubits) != self.kind.arity:
            raise ValueError(
                f"{self.kind.value} takes {self.kind.arity} qubit(s), "
                f"got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} qubits must differ: {self.qubits}")
        if self.kind.is_rotation and self.angle is None:
            raise ValueError(f"{self.kind.value} needs an angle")
        if not self.kind.is_rotation and self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")

    @classmethod
    def ry(cls, qubit: int, angle: float) -> "Gate":
        """Y rotation."""
        return cls(GateKind.RY, (qubit,), float(angle))

    @classmethod
    def rz(cls, qubit: int, angle: float) -> "Gate":
        """Z rotation."""
        return cls(GateKind.RZ, (qubit,), float(angle))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        """Controlled X."""
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def h(cls, qubit: int) -> "Gate":
        """Hadamard."""
        return cls(GateKind.H, (qubit,))

    @classmethod
    def swap(cls, first: int, second: int) -> "Gate":
        """Exchange two qubits."""
        return cls(GateKind.SWAP, (first, second))

    def to_line(self) -> str:
        """Serialize as ``GATE qubit(s) [angle]``."""
        parts = [self.kind.value, *(str(q) for q in self.qubits)]
        if self.angle is not None:
            parts.append(repr(self.angle))
        return " ".join(parts)


@dataclass
class GateList:
    """An ordered circuit on ``num_qubits`` qubits."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    # max |composed - source unitary|, filled in by the decomposition
    reconstruction_error: float | None = None

    def append(self, gate: Gate) -> None:
        """Add a gate, checking its qubits are in range."""
        for qubit in gate.qubits:
            if not 0 <= qubit < self.num_qubits:
                raise ValueError(
                    f"Qubit {qubit} out of range for {self.num_qubits} qubits"
                )
        self.gates.append(gate)

    def extend(self, gates: list[Gate]) -> None:
        """Add several gates in order."""
        for gate in gates:
            self.append(gate)

    def rotations(self) -> list[Gate]:
        """All rotation gates."""
        return [gate for gate in self.gates if gate.kind.is_rotation]

    def count(self, kind: GateKind) -> int:
        """Number of gates of one kind."""
        return sum(1 for gate in self.gates if gate.kind == kind)

    def __iter__(self) -> Iterator[Gate]:
        """Iterate gates in application order."""
        return iter(self.gates)

    def __len__(self) -> int:
        """Number of gates."""
        return len(self.gates)
