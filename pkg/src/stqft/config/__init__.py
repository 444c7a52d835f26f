"""Configuration: logging and pipeline parameters."""
