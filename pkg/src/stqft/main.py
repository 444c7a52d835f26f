"""
Command-line entry point for stqft.

Reads a signal and a filter, runs the configured STQFT filtering pipeline
through the state-vector simulator and writes the filtered signal plus a
JSON-lines report.

Exit codes: 0 success, 1 configuration error, 2 file I/O error, 3 pipeline or
numerical error.
"""

import argparse
from collections.abc import Sequence
from typing import Any, NoReturn

from stqft.config.logger_config import get_logger, set_log_level
from stqft.config.pipeline_config import (
    CONFIG_PRESETS,
    LOG_LEVELS,
    ConvolutionMethod,
    PipelineConfig,
    ReadoutMode,
    Reconstruction,
    create_config_from_preset,
)
from stqft.core.error_handler import ConfigurationException, get_error_handler
from stqft.managers.pipeline_manager import run_pipeline
from stqft.models.block_encoding import EncodingKind

# Create logger for this module
logger = get_logger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports bad arguments as configuration errors (exit code 1)."""

    def error(self, message: str) -> NoReturn:
        raise ConfigurationException(message)


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = _ArgumentParser(
        prog="stqft",
        description="Short-time quantum Fourier transform filtering on a "
        "state-vector simulator",
    )
    parser.add_argument("--input", help="Input signal (.csv or 16-bit mono .wav)")
    parser.add_argument("--filter", help="Filter taps (.csv)")
    parser.add_argument("--output", help="Output signal (.csv or .wav)")
    parser.add_argument("--report", help="JSON-lines run report")
    parser.add_argument("--window", type=int, help="Window length w_l in samples")
    parser.add_argument("--hop", type=int, help="Hop between windows in samples")
    parser.add_argument(
        "--method",
        choices=[m.value for m in ConvolutionMethod],
        help="Filter as a second register or as a block-encoded diagonal",
    )
    parser.add_argument(
        "--encoding",
        choices=[k.value for k in EncodingKind],
        help="Block-encoding form for the block method",
    )
    parser.add_argument(
        "--recon",
        choices=[r.value for r in Reconstruction],
        help="Quantum overlap-add, overlap-save, or classical overlap-add",
    )
    parser.add_argument(
        "--readout",
        choices=[r.value for r in ReadoutMode],
        help="Exact amplitudes or finite-shot sampling",
    )
    parser.add_argument("--shots", type=int, help="Shots per circuit (sampled)")
    parser.add_argument("--seed", type=int, help="Base random seed (sampled)")
    parser.add_argument(
        "--dc-offset", type=float, help="Constant added before encoding"
    )
    parser.add_argument(
        "--fable",
        action="store_true",
        default=None,
        help="Simulate the block encoding as a FABLE gate circuit",
    )
    parser.add_argument(
        "--fable-threshold", type=float, help="Drop rotations below this angle"
    )
    parser.add_argument(
        "--verify",
        action="store_true",
        default=None,
        help="Compare the output with the classical convolution",
    )
    parser.add_argument("--workers", type=int, help="Frame worker threads")
    parser.add_argument("--cache-dir", help="Directory for cached block encodings")
    parser.add_argument(
        "--preset",
        choices=sorted(CONFIG_PRESETS),
        help="Start from a named parameter bundle",
    )
    parser.add_argument(
        "--log-level", choices=LOG_LEVELS, help="Logging level (default WARNING)"
    )
    return parser


# argparse destination -> PipelineConfig field
_FIELDS = {
    "input": "input_path",
    "filter": "filter_path",
    "output": "output_path",
    "report": "report_path",
    "window": "window_length",
    "hop": "hop",
    "method": "method",
    "encoding": "encoding",
    "recon": "reconstruction",
    "readout": "readout",
    "shots": "shots",
    "seed": "rng_seed",
    "dc_offset": "dc_offset",
    "fable": "fable",
    "fable_threshold": "fable_threshold",
    "verify": "verify",
    "workers": "workers",
    "cache_dir": "cache_dir",
    "log_level": "log_level",
}


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    """Build a PipelineConfig from parsed arguments (explicit flags win)."""
    overrides: dict[str, Any] = {
        field_name: getattr(args, dest)
        for dest, field_name in _FIELDS.items()
        if getattr(args, dest) is not None
    }
    if args.preset:
        return create_config_from_preset(args.preset, **overrides)
    return PipelineConfig(**overrides)


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point."""
    handler = get_error_handler()
    try:
        args = build_parser().parse_args(argv)
        config = config_from_args(args)
    except ConfigurationException as e:
        handler.handle_error(e)
        return handler.exit_code_for(e)

    set_log_level(config.log_level)
    logger.info(f"Starting run with {config.to_dict()}")
    return run_pipeline(config, handler)


if __name__ == "__main__":
    raise SystemExit(main())
