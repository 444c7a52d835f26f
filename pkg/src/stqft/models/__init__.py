"""Value types shared by the simulator, the DSP layer and the pipeline."""

from stqft.models.block_encoding import BlockEncoding, EncodingKind
from stqft.models.filter_spec import FilterSpec
from stqft.models.frame import EncodedFrame, Frame, FrameStream
from stqft.models.gate_list import Gate, GateKind, GateList
from stqft.models.qola import PermutationSpec, QolaResult
from stqft.models.quantum_state import PostselectOutcome, QuantumState
from stqft.models.run_report import FrameRecord, RunReport
from stqft.models.scale_ledger import ScaleLedger
from stqft.models.signal import Signal

__all__ = [
    "BlockEncoding",
    "EncodedFrame",
    "EncodingKind",
    "FilterSpec",
    "Frame",
    "FrameRecord",
    "FrameStream",
    "Gate",
    "GateKind",
    "GateList",
    "PermutationSpec",
    "PostselectOutcome",
    "QolaResult",
    "QuantumState",
    "RunReport",
    "ScaleLedger",
    "Signal",
]
