"""Classical signal processing: framing and reference oracles."""
