"""
Pipeline configuration module for stqft.

This module contains all configurable options of a filtering run:
- Input, filter, output and report paths
- Framing (window length and hop)
- Convolution method, block-encoding kind and reconstruction scheme
- Readout mode, shots and seed
- FABLE decomposition and verification switches
- Worker pool and block-encoding cache
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

from stqft.core.error_handler import ConfigurationException
from stqft.models.block_encoding import EncodingKind


class ConvolutionMethod(Enum):
    """How the filter is applied in the Fourier domain."""

    REGISTER = "register"
    BLOCK = "block"


class Reconstruction(Enum):
    """How per-frame outputs are stitched back together."""

    OLA = "ola"
    OLS = "ols"
    NONE = "none"


class ReadoutMode(Enum):
    """How amplitudes leave the simulator."""

    EXACT = "exact"
    SAMPLED = "sampled"


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _enum_value(enum_type: type[Enum], value: Any, field_name: str) -> Any:
    if isinstance(value, enum_type):
        return value
    try:
        return enum_type(value)
    except ValueError as e:
        choices = ", ".join(member.value for member in enum_type)
        raise ConfigurationException(
            f"Invalid {field_name} '{value}' (choose from {choices})"
        ) from e


@dataclass
class PipelineConfig:
    """Complete run configuration."""

    # Files
    input_path: str | None = None
    filter_path: str | None = None
    output_path: str | None = None
    report_path: str | None = None

    # Framing
    window_length: int = 16
    hop: int = 16

    # Processing
    method: ConvolutionMethod = ConvolutionMethod.REGISTER
    encoding: EncodingKind = EncodingKind.DIAGONAL
    reconstruction: Reconstruction = Reconstruction.OLA

    # Readout
    readout: ReadoutMode = ReadoutMode.EXACT
    shots: int = 1_000_000
    rng_seed: int = 0
    dc_offset: float | None = None

    # Block-encoding circuit
    fable: bool = False
    fable_threshold: float = 0.0

    # Run settings
    verify: bool = False
    workers: int = 1
    cache_dir: str | None = None
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        """Coerce enum fields and validate ranges."""
        self.method = _enum_value(ConvolutionMethod, self.method, "method")
        self.encoding = _enum_value(EncodingKind, self.encoding, "encoding")
        self.reconstruction = _enum_value(
            Reconstruction, self.reconstruction, "reconstruction"
        )
        self.readout = _enum_value(ReadoutMode, self.readout, "readout")
        self.log_level = str(self.log_level).upper()

        if self.window_length < 1:
            raise ConfigurationException(
                f"Window length must be >= 1, got {self.window_length}"
            )
        if not 1 <= self.hop <= self.window_length:
            raise ConfigurationException(
                f"Hop must be between 1 and the window length {self.window_length}, "
                f"got {self.hop}"
            )
        if self.readout == ReadoutMode.SAMPLED and self.shots < 1:
            raise ConfigurationException(
                f"Sampled readout needs at least one shot, got {self.shots}"
            )
        if self.rng_seed < 0:
            raise ConfigurationException(f"Seed must be >= 0, got {self.rng_seed}")
        if self.dc_offset is not None and self.dc_offset < 0:
            raise ConfigurationException(
                f"DC offset must be >= 0, got {self.dc_offset}"
            )
        if self.fable_threshold < 0:
            raise ConfigurationException(
                f"FABLE threshold must be >= 0, got {self.fable_threshold}"
            )
        if self.workers < 1:
            raise ConfigurationException(f"Workers must be >= 1, got {self.workers}")
        if self.log_level not in LOG_LEVELS:
            raise ConfigurationException(f"Unknown log level: {self.log_level}")

    @property
    def log_level_number(self) -> int:
        """The logging module's numeric level."""
        return int(getattr(logging, self.log_level))

    def validate(self) -> list[str]:
        """
        Validate the configuration for a full run and return a list of issues.

        Returns:
            List of validation error messages (empty if valid).
        """
        errors = []

        if not self.input_path:
            errors.append("No input signal given")
        if not self.filter_path:
            errors.append("No filter given")
        if not self.output_path:
            errors.append("No output path given")

        if self.fable and self.method != ConvolutionMethod.BLOCK:
            errors.append("FABLE decomposition needs the block method")
        if (
            self.encoding != EncodingKind.DIAGONAL
            and self.method != ConvolutionMethod.BLOCK
        ):
            errors.append("An encoding kind only applies to the block method")

        return errors

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "input_path": self.input_path,
            "filter_path": self.filter_path,
            "output_path": self.output_path,
            "report_path": self.report_path,
            "window_length": self.window_length,
            "hop": self.hop,
            "method": self.method.value,
            "encoding": self.encoding.value,
            "reconstruction": self.reconstruction.value,
            "readout": self.readout.value,
            "shots": self.shots,
            "rng_seed": self.rng_seed,
            "dc_offset": self.dc_offset,
            "fable": self.fable,
            "fable_threshold": self.fable_threshold,
            "verify": self.verify,
            "workers": self.workers,
            "cache_dir": self.cache_dir,
            "log_level": self.log_level,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        """Create configuration from dictionary."""
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationException(f"Unknown configuration keys: {unknown}")
        return cls(**data)


# Pre-defined configuration presets
CONFIG_PRESETS = {
    "reference": PipelineConfig(
        window_length=16,
        hop=16,
        method=ConvolutionMethod.REGISTER,
        reconstruction=Reconstruction.OLA,
    ),
    "block": PipelineConfig(
        window_length=16,
        hop=16,
        method=ConvolutionMethod.BLOCK,
        reconstruction=Reconstruction.OLA,
    ),
    "overlap_save": PipelineConfig(
        window_length=16,
        hop=16,
        method=ConvolutionMethod.REGISTER,
        reconstruction=Reconstruction.OLS,
    ),
    "sampled": PipelineConfig(
        window_length=16,
        hop=16,
        readout=ReadoutMode.SAMPLED,
        shots=1_000_000,
    ),
}


def create_config_from_preset(preset_name: str, **overrides: Any) -> PipelineConfig:
    """Create a configuration from a preset, with optional field overrides."""
    if preset_name not in CONFIG_PRESETS:
        raise ConfigurationException(
            f"Unknown preset: {preset_name}. "
            f"Available presets: {list(CONFIG_PRESETS.keys())}"
        )
    return replace(CONFIG_PRESETS[preset_name], **overrides)
