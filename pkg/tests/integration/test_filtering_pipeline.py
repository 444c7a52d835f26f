"""
Integration tests for complete filtering runs.

This module drives PipelineManager over long random signals and checks the
output against the classical convolution.
"""

import numpy as np
import pytest

from stqft.config.pipeline_config import PipelineConfig
from stqft.core.error_handler import (
    InsufficientOffsetException,
    ZeroProbabilityOutcomeException,
)
from stqft.dsp.framing import frame_signal, pad_and_encode
from stqft.dsp.oracle import classical_filter
from stqft.managers.pipeline_manager import ANNIHILATED, PipelineManager
from stqft.services.qconv import conv_register_method, make_filter
from stqft.services.reconstruct import qola_stream

pytestmark = pytest.mark.integration


class TestLongSignals:
    """Full-length runs against the oracle."""

    @pytest.mark.slow
    @pytest.mark.parametrize("method", ["register", "block"])
    @pytest.mark.parametrize("reconstruction", ["ola", "ols"])
    def test_4096_samples(self, rng, quiet_handler, method, reconstruction):
        """4096 samples, 16-sample windows and 8 taps stay within 1e-8."""
        signal, taps = rng.normal(size=4096), rng.normal(size=8)
        config = PipelineConfig(
            window_length=16,
            hop=16,
            method=method,
            reconstruction=reconstruction,
            verify=True,
        )

        output, report = PipelineManager(config, quiet_handler).process(signal, taps)

        assert output.size == 4096 + 7
        assert np.max(np.abs(output - classical_filter(signal, taps))) <= 1e-8
        assert report.max_abs_error <= 1e-8

    @pytest.mark.parametrize("method", ["register", "block"])
    def test_1024_samples(self, rng, quiet_handler, method):
        """Both methods agree with the oracle on a 1024-sample signal."""
        signal, taps = rng.normal(size=1024), rng.normal(size=8)
        config = PipelineConfig(window_length=16, hop=16, method=method)

        output, _ = PipelineManager(config, quiet_handler).process(signal, taps)

        assert np.max(np.abs(output - classical_filter(signal, taps))) <= 1e-8

    @pytest.mark.parametrize("reconstruction", ["none", "ola"])
    def test_overlapping_windows(self, rng, quiet_handler, reconstruction):
        """Windows overlapping by w_l - hop still filter each sample once."""
        signal, taps = rng.normal(size=200), rng.normal(size=5)
        config = PipelineConfig(
            window_length=12, hop=10, reconstruction=reconstruction, verify=True
        )

        output, report = PipelineManager(config, quiet_handler).process(signal, taps)

        assert output.size == 204
        assert np.max(np.abs(output - classical_filter(signal, taps))) <= 1e-10
        assert report.max_abs_error <= 1e-10

    def test_overlap_samples_are_not_doubled(self, quiet_handler):
        """A delta filter over overlapping windows returns the signal itself."""
        signal = np.arange(1.0, 13.0)
        config = PipelineConfig(window_length=4, hop=3)

        output, report = PipelineManager(config, quiet_handler).process(signal, [1.0])

        assert np.allclose(output, signal, atol=1e-12)
        assert report.total_frames == 4

    def test_qola_energy_on_pipeline_frames(self, rng):
        """Every QOLA pair over real convolution outputs conserves energy."""
        signal, taps = rng.normal(size=256), rng.normal(size=8)
        spec = make_filter(taps, 16)
        outputs = [
            conv_register_method(pad_and_encode(frame, taps.size), spec)[0]
            for frame in frame_signal(signal, 16, 16)
        ]
        residuals = []

        qola_stream(
            outputs,
            16,
            16,
            on_pair=lambda _, result: residuals.append(
                result.energy_residual / result.pair_norm**2
            ),
        )

        assert len(residuals) == len(outputs) - 1
        assert max(residuals) <= 1e-12

    def test_workers_do_not_change_output(self, rng, quiet_handler):
        """Frames processed on four threads give the single-thread result."""
        signal, taps = rng.normal(size=300), rng.normal(size=4)
        single, _ = PipelineManager(
            PipelineConfig(window_length=8, hop=8), quiet_handler
        ).process(signal, taps)
        pooled, report = PipelineManager(
            PipelineConfig(window_length=8, hop=8, workers=4), quiet_handler
        ).process(signal, taps)

        assert np.array_equal(single, pooled)
        assert [record.frame_index for record in report.frames] == list(
            range(report.total_frames)
        )


class TestRecovery:
    """Frames whose spectrum the filter removes entirely."""

    def test_annihilated_blocks_are_recovered(self, quiet_handler):
        """A constant block against a zero-DC filter becomes a zero block."""
        signal, taps = np.ones(12), np.array([1.0, -1.0])
        config = PipelineConfig(window_length=4, hop=4, reconstruction="ols")

        output, report = PipelineManager(config, quiet_handler).process(signal, taps)

        assert np.allclose(output, classical_filter(signal, taps), atol=1e-10)
        recovered = [r.frame_index for r in report.frames if r.recovered == ANNIHILATED]
        assert recovered == [1, 2, 3]
        assert quiet_handler.error_stats["recovered_errors"] == 3

    def test_recovery_ends_with_the_run(self, quiet_handler):
        """Outside a run an empty postselection branch is an ordinary error."""
        config = PipelineConfig(window_length=4, hop=4, reconstruction="ols")
        manager = PipelineManager(config, quiet_handler)
        manager.process(np.ones(12), [1.0, -1.0])

        assert quiet_handler.recovery_handlers == {}
        assert not quiet_handler.handle_error(
            ZeroProbabilityOutcomeException("empty branch")
        )


class TestDcOffset:
    """Signed signals through the offset path."""

    @pytest.mark.parametrize("reconstruction", ["ola", "ols"])
    def test_offset_is_removed_exactly(self, rng, quiet_handler, reconstruction):
        """An offset changes nothing in exact mode and is kept in every ledger."""
        signal, taps = rng.uniform(-1.0, 1.0, size=96), rng.uniform(0.1, 1.0, size=4)
        config = PipelineConfig(
            window_length=8, hop=8, reconstruction=reconstruction, dc_offset=1.5
        )

        output, report = PipelineManager(config, quiet_handler).process(signal, taps)

        assert np.max(np.abs(output - classical_filter(signal, taps))) <= 1e-10
        assert report.config["dc_offset"] == 1.5
        assert {record.ledger["dc_offset"] for record in report.frames} == {1.5}

    def test_ledger_offset_is_zero_without_offset(self, rng, quiet_handler):
        signal, taps = rng.uniform(-1.0, 1.0, size=32), rng.uniform(0.1, 1.0, size=4)
        config = PipelineConfig(window_length=8, hop=8)

        _, report = PipelineManager(config, quiet_handler).process(signal, taps)

        assert {record.ledger["dc_offset"] for record in report.frames} == {0.0}

    def test_too_small_offset_rejected(self, quiet_handler):
        """An offset that leaves negative samples is refused."""
        config = PipelineConfig(window_length=4, hop=4, dc_offset=0.5)
        with pytest.raises(InsufficientOffsetException):
            PipelineManager(config, quiet_handler).process([-1.0, 1.0, 0.5], [1.0])
