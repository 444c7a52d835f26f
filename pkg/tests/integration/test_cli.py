"""
Integration tests for the stqft command line.

This module runs main() against files on disk and checks output signals,
reports and exit codes.
"""

import numpy as np
import pytest

from stqft.dsp.oracle import classical_filter
from stqft.main import main
from stqft.managers.report_manager import read_report
from stqft.managers.signal_io import read_signal, write_signal

pytestmark = pytest.mark.integration


@pytest.fixture
def job(tmp_path, rng, write_csv):
    """A random signal and filter on disk plus the CLI arguments to filter them."""
    signal = rng.normal(size=100)
    taps = rng.normal(size=4)
    args = [
        "--input",
        str(write_csv("signal.csv", signal)),
        "--filter",
        str(write_csv("taps.csv", taps)),
        "--output",
        str(tmp_path / "out.csv"),
        "--report",
        str(tmp_path / "report.jsonl"),
        "--window",
        "8",
        "--hop",
        "8",
    ]
    return signal, taps, args


class TestSuccessfulRuns:
    """Runs that exit 0."""

    @pytest.mark.parametrize("method", ["register", "block"])
    @pytest.mark.parametrize("recon", ["ola", "ols", "none"])
    def test_output_matches_oracle(self, job, tmp_path, method, recon):
        """Each method and reconstruction writes the filtered signal."""
        signal, taps, args = job
        assert main([*args, "--method", method, "--recon", recon]) == 0

        output = read_signal(tmp_path / "out.csv").samples
        assert np.max(np.abs(output - classical_filter(signal, taps))) <= 1e-10

    def test_report_layout(self, job, tmp_path):
        """The report holds config, one entry per frame and an aggregate."""
        _, _, args = job
        assert main([*args, "--verify"]) == 0

        records = read_report(tmp_path / "report.jsonl")
        assert records[0]["type"] == "config"
        assert records[0]["window_length"] == 8
        frames = [record for record in records if record["type"] == "frame"]
        assert [frame["frame_index"] for frame in frames] == list(range(13))
        aggregate = records[-1]
        assert aggregate["type"] == "aggregate"
        assert aggregate["total_frames"] == 13
        assert aggregate["output_length"] == 103
        assert aggregate["max_abs_error"] <= 1e-8

    def test_qola_probabilities_recorded(self, job, tmp_path):
        """Every frame after the first records its QOLA success probability."""
        _, _, args = job
        assert main(args) == 0

        records = read_report(tmp_path / "report.jsonl")
        frames = [record for record in records if record["type"] == "frame"]
        assert frames[0]["qola_probabilities"] == []
        assert all(len(frame["qola_probabilities"]) == 1 for frame in frames[1:])
        assert all(0.0 < frame["conv_probability"] <= 1.0 for frame in frames)

    def test_delta_filter_through_block_method(self, tmp_path, rng, write_csv):
        """A delta filter returns the signal."""
        signal = rng.normal(size=40)
        args = [
            "--input",
            str(write_csv("signal.csv", signal)),
            "--filter",
            str(write_csv("taps.csv", [1.0])),
            "--output",
            str(tmp_path / "out.csv"),
            "--method",
            "block",
            "--recon",
            "ola",
            "--verify",
            "--window",
            "16",
            "--hop",
            "16",
        ]
        assert main(args) == 0
        output = read_signal(tmp_path / "out.csv").samples
        assert np.allclose(output, signal, atol=1e-8)

    def test_fable_oracle_encoding(self, job, tmp_path):
        """The oracle encoding simulated as a FABLE circuit still filters exactly."""
        signal, taps, args = job
        cache = tmp_path / "cache"
        cache.mkdir()
        code = main(
            [
                *args,
                "--method",
                "block",
                "--encoding",
                "oracle",
                "--fable",
                "--window",
                "4",
                "--hop",
                "4",
                "--cache-dir",
                str(cache),
            ]
        )
        assert code == 0

        output = read_signal(tmp_path / "out.csv").samples
        assert np.max(np.abs(output - classical_filter(signal, taps))) <= 1e-8
        aggregate = read_report(tmp_path / "report.jsonl")[-1]
        assert aggregate["fable_reconstruction_error"] <= 1e-8
        assert list(cache.glob("*.gates"))

    def test_preset(self, job, tmp_path):
        """A preset supplies defaults that explicit flags override."""
        signal, taps, args = job
        assert main([*args, "--preset", "overlap_save"]) == 0

        config = read_report(tmp_path / "report.jsonl")[0]
        assert config["reconstruction"] == "ols"
        assert config["window_length"] == 8

    def test_wav_in_and_out(self, tmp_path, rng, write_csv):
        """WAV input is filtered and written back as 16-bit PCM."""
        samples = np.round(rng.uniform(-0.2, 0.2, size=64) * 32768) / 32768
        write_signal(tmp_path / "in.wav", samples, sample_rate=16000)
        args = [
            "--input",
            str(tmp_path / "in.wav"),
            "--filter",
            str(write_csv("taps.csv", [0.5, 0.25])),
            "--output",
            str(tmp_path / "out.wav"),
            "--window",
            "16",
            "--hop",
            "16",
        ]
        assert main(args) == 0

        written = read_signal(tmp_path / "out.wav")
        assert written.sample_rate == 16000
        expected = classical_filter(samples, [0.5, 0.25])
        assert np.max(np.abs(written.samples - expected)) <= 1 / 32768


class TestExitCodes:
    """Failures map to exit codes 1 (configuration), 2 (files) and 3 (other)."""

    def test_hop_longer_than_window(self, job):
        _, _, args = job
        assert main([*args, "--hop", "16"]) == 1

    def test_unknown_method(self, job):
        _, _, args = job
        assert main([*args, "--method", "tensor"]) == 1

    def test_missing_input_flag(self, tmp_path, write_csv):
        args = ["--filter", str(write_csv("taps.csv", [1.0]))]
        assert main([*args, "--output", str(tmp_path / "out.csv")]) == 1

    def test_fable_without_block_method(self, job):
        _, _, args = job
        assert main([*args, "--fable"]) == 1

    def test_sampled_readout_with_signed_taps(self, job):
        _, _, args = job
        assert main([*args, "--readout", "sampled"]) == 1

    def test_missing_input_file(self, job, tmp_path):
        _, _, args = job
        args[1] = str(tmp_path / "absent.csv")
        assert main(args) == 2

    def test_unsupported_input_format(self, job, tmp_path):
        _, _, args = job
        text = tmp_path / "signal.txt"
        text.write_text("1.0\n2.0\n", encoding="utf-8")
        args[1] = str(text)
        assert main(args) == 2

    def test_malformed_filter(self, job, tmp_path):
        _, _, args = job
        bad = tmp_path / "bad.csv"
        bad.write_text("0.5\nnot-a-number\n", encoding="utf-8")
        args[3] = str(bad)
        assert main(args) == 2

    def test_all_zero_filter(self, job, write_csv):
        _, _, args = job
        args[3] = str(write_csv("zeros.csv", [0.0, 0.0]))
        assert main(args) == 3
