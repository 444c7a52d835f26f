"""
Pipeline Manager for stqft

This manager drives a complete filtering run: it reads the signal and the
filter, frames and encodes the signal, convolves every frame through the
simulator, reconstructs the output, removes the DC offset, optionally checks
the result against the classical oracle, and writes the output signal and the
JSON-lines report.
"""

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from stqft.config.logger_config import get_logger, set_log_level
from stqft.config.pipeline_config import (
    ConvolutionMethod,
    PipelineConfig,
    Reconstruction,
)
from stqft.core.error_handler import (
    EXIT_OK,
    ConfigurationException,
    ErrorHandler,
    ZeroProbabilityOutcomeException,
    get_error_handler,
)
from stqft.dsp.framing import (
    apply_dc_offset,
    dc_correction,
    exclusive_frames,
    frame_signal,
    pad_and_encode,
)
from stqft.dsp.oracle import classical_filter, classical_ola
from stqft.managers.encoding_store import BlockEncodingCache
from stqft.managers.report_manager import write_report
from stqft.managers.signal_io import read_filter, read_signal, write_signal
from stqft.models.filter_spec import FilterSpec
from stqft.models.frame import EncodedFrame, Frame
from stqft.models.qola import QolaResult
from stqft.models.run_report import FrameRecord, RunReport
from stqft.models.scale_ledger import ScaleLedger
from stqft.services import reconstruct
from stqft.services.qconv import conv_block_method, conv_register_method, make_filter
from stqft.services.readout import ReadoutStrategy, create_readout

FloatArray = npt.NDArray[np.float64]

ANNIHILATED = "spectral_annihilation"


@dataclass
class _FrameOutcome:
    """Result of one frame task, produced on a worker thread."""

    frame_index: int
    is_zero: bool
    output: FloatArray
    ledger: ScaleLedger | None = None
    num_qubits: int | None = None
    failure: ZeroProbabilityOutcomeException | None = None


def _recover_annihilated_frame(exception: BaseException) -> bool:
    """A filter that zeroes a frame's whole spectrum yields a zero output frame."""
    return isinstance(exception, ZeroProbabilityOutcomeException)


class PipelineManager:
    """
    Runs one configured filtering job.

    This manager handles:
    - Signal and filter I/O
    - Per-frame quantum convolution on a worker pool
    - QOLA, overlap-save or classical reconstruction
    - DC-offset removal, oracle verification and the run report
    """

    def __init__(
        self,
        config: PipelineConfig,
        error_handler: ErrorHandler | None = None,
        cache: BlockEncodingCache | None = None,
    ) -> None:
        """
        Initialize the PipelineManager.

        Args:
            config: Validated run configuration
            error_handler: Handler for recoverable frame errors
            cache: Block-encoding cache (one per run by default)
        """
        self.config = config
        self.error_handler = error_handler or get_error_handler()
        self.cache = cache or BlockEncodingCache(config.cache_dir)
        self.readout: ReadoutStrategy = create_readout(
            config.readout.value, shots=config.shots, seed=config.rng_seed
        )
        self.fable_error: float | None = None

        # Create logger
        self.logger = get_logger(__name__)

    def run(self) -> RunReport:
        """Read inputs, process them and write output plus report."""
        config = self.config
        assert config.input_path and config.filter_path and config.output_path
        signal = read_signal(config.input_path)
        taps = read_filter(config.filter_path)

        output, report = self.process(signal.samples, taps)

        write_signal(config.output_path, output, signal.sample_rate)
        if config.report_path:
            write_report(report, config.report_path)
        return report

    def process(
        self, samples: npt.ArrayLike, taps: npt.ArrayLike
    ) -> tuple[FloatArray, RunReport]:
        """
        Filter a signal in memory.

        Returns:
            (filtered signal of length |signal| + f_l - 1, run report)

        Raises:
            ConfigurationException: If sampled readout meets signed data
        """
        config = self.config
        signal = np.asarray(samples, dtype=np.float64).reshape(-1)
        filter_taps = np.asarray(taps, dtype=np.float64).reshape(-1)
        self._check_readout_inputs(signal, filter_taps)

        working = signal
        if config.dc_offset is not None:
            working = apply_dc_offset(signal, config.dc_offset)

        self.logger.info(
            f"Filtering {signal.size} samples with {filter_taps.size} taps "
            f"({config.method.value} method, {config.reconstruction.value} "
            f"reconstruction, {config.readout.value} readout)"
        )
        with self.error_handler.recovering(
            ZeroProbabilityOutcomeException, _recover_annihilated_frame
        ):
            if config.reconstruction == Reconstruction.OLS:
                output, records = self._overlap_save(working, filter_taps)
            else:
                output, records = self._framewise(working, filter_taps)

        if config.dc_offset:
            output = output - dc_correction(config.dc_offset, signal.size, filter_taps)

        report = RunReport(
            config=config.to_dict(),
            frames=records,
            fable_reconstruction_error=self.fable_error,
            output_length=int(output.size),
        )
        if config.verify:
            reference = classical_filter(signal, filter_taps)
            report.max_abs_error = float(np.max(np.abs(output - reference)))
            self.logger.info(f"Max abs error vs oracle: {report.max_abs_error:.3g}")
        return output, report

    def _check_readout_inputs(self, signal: FloatArray, taps: FloatArray) -> None:
        if self.readout.signed:
            return
        if np.any(taps < 0):
            raise ConfigurationException(
                "Sampled readout needs non-negative filter taps"
            )
        if self.config.dc_offset is None and np.any(signal < 0):
            raise ConfigurationException(
                "Sampled readout needs a non-negative signal or a DC offset"
            )

    def _convolver(
        self,
    ) -> Callable[[EncodedFrame, FilterSpec], tuple[FloatArray, ScaleLedger]]:
        """The configured frame convolution."""
        config = self.config
        readout = self.readout
        offset = config.dc_offset or 0.0

        def convolve(
            frame: EncodedFrame, spec: FilterSpec
        ) -> tuple[FloatArray, ScaleLedger]:
            if config.method == ConvolutionMethod.REGISTER:
                output, ledger = conv_register_method(frame, spec, readout)
            elif config.fable:
                circuit = self.cache.get_gate_list(
                    spec, config.encoding, config.fable_threshold
                )
                self.fable_error = circuit.reconstruction_error
                output, ledger = conv_block_method(frame, spec, circuit, readout)
            else:
                block = self.cache.get_block(spec, config.encoding)
                output, ledger = conv_block_method(frame, spec, block, readout)
            return output, ledger.with_dc_offset(offset)

        return convolve

    def _record(
        self, outcome: _FrameOutcome, records: list[FrameRecord]
    ) -> FloatArray:
        """Turn a frame outcome into a report record, recovering failures."""
        recovered = None
        if outcome.failure is not None:
            if not self.error_handler.handle_error(
                outcome.failure, {"frame_index": outcome.frame_index}
            ):
                raise outcome.failure
            recovered = ANNIHILATED
        ledger = outcome.ledger
        records.append(
            FrameRecord(
                frame_index=outcome.frame_index,
                is_zero=outcome.is_zero,
                num_qubits=outcome.num_qubits,
                conv_probability=ledger.success_probs[0]
                if ledger is not None and ledger.success_probs
                else None,
                ledger=ledger.to_dict() if ledger is not None else {},
                recovered=recovered,
            )
        )
        return outcome.output

    def _framewise(
        self, working: FloatArray, taps: FloatArray
    ) -> tuple[FloatArray, list[FrameRecord]]:
        """Frame, convolve on the worker pool and reconstruct (OLA or classical)."""
        config = self.config
        stream = exclusive_frames(
            frame_signal(working, config.window_length, config.hop)
        )
        filter_spec = make_filter(taps, config.window_length)
        size = filter_spec.padded_length
        convolve = self._convolver()

        def task(frame: Frame) -> _FrameOutcome:
            if frame.is_zero:
                return _FrameOutcome(frame.index, True, np.zeros(size))
            encoded = pad_and_encode(frame, taps.size)
            try:
                output, ledger = convolve(encoded, filter_spec)
            except ZeroProbabilityOutcomeException as e:
                return _FrameOutcome(
                    frame_index=frame.index,
                    is_zero=False,
                    output=np.zeros(size),
                    num_qubits=encoded.num_qubits,
                    failure=e,
                )
            return _FrameOutcome(
                frame_index=frame.index,
                is_zero=False,
                output=output,
                ledger=ledger,
                num_qubits=encoded.num_qubits,
            )

        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(task, stream.frames))

        if stream.zero_count:
            self.logger.warning(
                f"{stream.zero_count} all-zero frame(s) bypassed the quantum path"
            )
        records: list[FrameRecord] = []
        outputs = [self._record(outcome, records) for outcome in outcomes]
        total = stream.output_length(taps.size)

        if config.reconstruction == Reconstruction.NONE:
            return classical_ola(outputs, config.hop)[:total], records

        def on_pair(frame_index: int, result: QolaResult) -> None:
            records[frame_index].qola_probabilities.append(result.success_probability)
            self.logger.debug(
                f"Frame {frame_index}: QOLA energy residual "
                f"{result.energy_residual:.3g}"
            )

        output = reconstruct.qola_stream(
            outputs, config.hop, config.window_length, self.readout, on_pair
        )
        return output[:total], records

    def _overlap_save(
        self, working: FloatArray, taps: FloatArray
    ) -> tuple[FloatArray, list[FrameRecord]]:
        """Overlap-save over circular quantum convolutions."""
        convolve = self._convolver()
        records: list[FrameRecord] = []

        def recovering(
            frame: EncodedFrame, spec: FilterSpec
        ) -> tuple[FloatArray, ScaleLedger]:
            try:
                output, ledger = convolve(frame, spec)
            except ZeroProbabilityOutcomeException as e:
                self._record(
                    _FrameOutcome(
                        frame_index=frame.index,
                        is_zero=False,
                        output=np.zeros(spec.padded_length),
                        num_qubits=frame.num_qubits,
                        failure=e,
                    ),
                    records,
                )
                return np.zeros(spec.padded_length), frame.ledger
            records.append(
                FrameRecord(
                    frame_index=frame.index,
                    is_zero=False,
                    num_qubits=frame.num_qubits,
                    conv_probability=ledger.success_probs[0],
                    ledger=ledger.to_dict(),
                )
            )
            return output, ledger

        def on_block(index: int, ledger: ScaleLedger | None) -> None:
            if ledger is None:
                records.append(FrameRecord(frame_index=index, is_zero=True))

        output = reconstruct.overlap_save_stream(
            working, taps, self.config.window_length, recovering, on_block
        )
        return output, records


def run_pipeline(
    config: PipelineConfig, error_handler: ErrorHandler | None = None
) -> int:
    """
    Run a configured job end to end.

    Returns:
        0 on success, otherwise the exit code of the failure category
        (1 configuration, 2 file I/O, 3 pipeline or numerical)
    """
    handler = error_handler or get_error_handler()
    set_log_level(config.log_level)
    try:
        issues = config.validate()
        if issues:
            raise ConfigurationException("; ".join(issues))
        PipelineManager(config, handler).run()
    except Exception as e:
        handler.handle_error(e)
        return handler.exit_code_for(e)
    return EXIT_OK
